#include <fnt/codec.hpp>

#include <algorithm>
#include <cstring>
#include <map>
#include <stdexcept>

#include <fnt/errors.hpp>
#include <fnt/linalg.hpp>
#include <fnt/transform.hpp>

namespace fnt {

namespace {

// Row p of the generator matrix restricted to the k live columns:
// (w^(p*i))_{i<k}. Matches coefficient_vector at the last step; used there
// instead of the recursion so large decodes stay O(k) per row.
CoefficientRow last_step_row(const FftGraph& g, std::uint32_t position) {
    const Gf wp = pow(root_of_order(g.size()), position);
    CoefficientRow row(g.live_sources());
    Gf acc = Gf::from_raw(1);
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        row[i] = acc;
        acc *= wp;
    }
    return row;
}

CoefficientRow coefficient_row(const FftGraph& g, NodeCoord coord) {
    if (coord.step == g.log2_size()) return last_step_row(g, coord.position);
    return g.coefficient_vector(coord);
}

}  // namespace

SourceObject split(std::span<const std::byte> payload, std::uint32_t k) {
    if (k == 0) throw std::domain_error("fnt: block count must be positive");
    if (payload.empty()) throw std::domain_error("fnt: payload must be nonempty");
    if (k > 65536) throw std::domain_error("fnt: block count exceeds field transform limit");

    const std::uint64_t symbols = (payload.size() + 1) / 2;
    const std::uint64_t length = (symbols + k - 1) / k;

    SourceObject src;
    src.original_length = payload.size();
    src.block_count = k;
    src.block_length = static_cast<std::uint32_t>(length);
    src.blocks = SymbolMatrix::Zero(k, static_cast<Eigen::Index>(length));
    for (std::uint64_t t = 0; t < symbols; ++t) {
        std::uint32_t v = std::to_integer<std::uint32_t>(payload[2 * t]);
        if (2 * t + 1 < payload.size()) v |= std::to_integer<std::uint32_t>(payload[2 * t + 1]) << 8;
        src.blocks(static_cast<Eigen::Index>(t / length), static_cast<Eigen::Index>(t % length)) =
            Gf::from_raw(v);
    }
    return src;
}

std::vector<std::byte> merge(const SymbolMatrix& blocks, std::uint64_t original_length) {
    const auto length = static_cast<std::uint64_t>(blocks.cols());
    if (static_cast<std::uint64_t>(blocks.rows()) * length * 2 < original_length)
        throw std::domain_error("fnt: blocks too short for the original length");

    std::vector<std::byte> out(original_length);
    const std::uint64_t symbols = (original_length + 1) / 2;
    for (std::uint64_t t = 0; t < symbols; ++t) {
        const Gf sym = blocks(static_cast<Eigen::Index>(t / length),
                              static_cast<Eigen::Index>(t % length));
        if (sym.value() > 65535)
            throw IntegrityError("fnt: decoded source symbol exceeds 16 bits");
        out[2 * t] = static_cast<std::byte>(sym.value() & 0xFF);
        if (2 * t + 1 < original_length) out[2 * t + 1] = static_cast<std::byte>(sym.value() >> 8);
    }
    return out;
}

CodedBlock encode_block(const SourceObject& src, const FftGraph& g, NodeCoord coord) {
    if (g.live_sources() != src.block_count)
        throw std::domain_error("fnt: graph and source block counts differ");
    if (g.is_void(coord)) throw std::domain_error("fnt: cannot encode a void position");
    CodedBlock block;
    block.coord = coord;
    block.symbols = g.evaluate_node(src.blocks, coord);
    block.coefficients = g.coefficient_vector(coord);
    return block;
}

std::vector<CodedBlock> encode_last_step(const SourceObject& src, const FftGraph& g) {
    if (g.live_sources() != src.block_count)
        throw std::domain_error("fnt: graph and source block counts differ");
    const auto n = static_cast<Eigen::Index>(g.size());
    SymbolMatrix out = SymbolMatrix::Zero(n, src.blocks.cols());
    out.topRows(src.blocks.rows()) = src.blocks;
    for (Eigen::Index col = 0; col < out.cols(); ++col) fnt_forward_inplace(out.col(col));

    std::vector<CodedBlock> blocks(static_cast<std::size_t>(n));
    for (Eigen::Index p = 0; p < n; ++p) {
        blocks[static_cast<std::size_t>(p)].coord = {g.log2_size(), static_cast<std::uint32_t>(p)};
        blocks[static_cast<std::size_t>(p)].symbols = out.row(p).transpose();
    }
    return blocks;
}

SymbolMatrix decode(const FftGraph& g, const std::vector<CodedBlock>& blocks,
                    std::uint32_t block_length) {
    const auto k = static_cast<Eigen::Index>(g.live_sources());
    const auto len = static_cast<Eigen::Index>(block_length);

    std::vector<const CodedBlock*> ordered;
    ordered.reserve(blocks.size());
    for (const CodedBlock& b : blocks) {
        if (!g.contains(b.coord)) throw std::domain_error("fnt: block coordinate out of range");
        if (b.symbols.size() != len) throw std::domain_error("fnt: block length mismatch");
        ordered.push_back(&b);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const CodedBlock* a, const CodedBlock* b) { return a->coord < b->coord; });

    GaussianBasis basis(k, len);
    const CodedBlock* prev = nullptr;
    for (const CodedBlock* b : ordered) {
        if (prev && prev->coord == b->coord) {
            if (!exact_equal(prev->symbols, b->symbols))
                throw IntegrityError("fnt: duplicate blocks disagree at " + std::to_string(b->coord.step) +
                                     "," + std::to_string(b->coord.position));
            continue;
        }
        prev = b;
        const CoefficientRow row = coefficient_row(g, b->coord);
        if (b->coefficients && !exact_equal(*b->coefficients, row))
            throw IntegrityError("fnt: explicit coefficients inconsistent with coordinate");
        if (basis.rank() == k) continue;  // later blocks still get integrity checks
        CoefficientRow augmented(k + len);
        augmented.head(k) = row;
        augmented.tail(len) = b->symbols.transpose();
        basis.insert(std::move(augmented));
    }

    if (basis.rank() < k)
        throw InsufficientRankError(static_cast<std::size_t>(basis.rank()),
                                    static_cast<std::size_t>(k));
    return basis.solve();
}

SymbolMatrix decode_full_last_step(const FftGraph& g, const std::vector<CodedBlock>& blocks) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const std::uint32_t u = g.log2_size();

    std::map<std::uint32_t, const CodedBlock*> by_position;
    Eigen::Index len = -1;
    for (const CodedBlock& b : blocks) {
        if (b.coord.step != u || b.coord.position >= g.size())
            throw std::domain_error("fnt: decode_full_last_step expects last-step blocks");
        if (len < 0) len = b.symbols.size();
        if (b.symbols.size() != len) throw std::domain_error("fnt: block length mismatch");
        auto [it, inserted] = by_position.emplace(b.coord.position, &b);
        if (!inserted && !exact_equal(it->second->symbols, b.symbols))
            throw IntegrityError("fnt: duplicate blocks disagree at position " +
                                 std::to_string(b.coord.position));
    }
    if (static_cast<Eigen::Index>(by_position.size()) != n)
        throw std::domain_error("fnt: decode_full_last_step requires all n last-step blocks");

    SymbolMatrix m(n, len);
    for (const auto& [position, block] : by_position)
        m.row(static_cast<Eigen::Index>(position)) = block->symbols.transpose();
    for (Eigen::Index col = 0; col < m.cols(); ++col) fnt_inverse_inplace(m.col(col));
    return m.topRows(static_cast<Eigen::Index>(g.live_sources()));
}

namespace {

void put_u16(std::vector<std::byte>& out, std::uint32_t v) {
    out.push_back(static_cast<std::byte>(v & 0xFF));
    out.push_back(static_cast<std::byte>((v >> 8) & 0xFF));
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

class ByteReader {
public:
    explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    std::uint64_t take(std::size_t width) {
        if (bytes_.size() - pos_ < width) throw FormatError("fnt: share container truncated");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i)
            v |= std::uint64_t(std::to_integer<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        pos_ += width;
        return v;
    }

    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::byte> pack_share(const Share& share) {
    const std::uint32_t n = std::uint32_t(1) << share.log2_size;
    if (share.log2_size < 1 || share.log2_size > 16)
        throw std::domain_error("fnt: share log2 size out of range");
    if (share.block_count < 1 || share.block_count > n)
        throw std::domain_error("fnt: share block count out of range");
    if (share.block.coord.step > share.log2_size || share.block.coord.position >= n)
        throw std::domain_error("fnt: share coordinate out of range");
    if (share.block.symbols.size() != static_cast<Eigen::Index>(share.block_length))
        throw std::domain_error("fnt: share symbol count mismatch");

    std::vector<std::uint32_t> exceptions;
    for (Eigen::Index i = 0; i < share.block.symbols.size(); ++i)
        if (share.block.symbols[i].value() == 65536)
            exceptions.push_back(static_cast<std::uint32_t>(i));

    std::vector<std::byte> out;
    out.reserve(27 + 4 * exceptions.size() + 2 * share.block_length);
    for (char c : {'F', 'N', 'T', 'C'}) out.push_back(static_cast<std::byte>(c));
    out.push_back(static_cast<std::byte>(kShareVersion));
    out.push_back(static_cast<std::byte>(share.log2_size));
    put_u16(out, share.block_count);
    out.push_back(static_cast<std::byte>(share.block.coord.step));
    put_u16(out, share.block.coord.position);
    put_u32(out, share.block_length);
    put_u64(out, share.original_length);
    put_u32(out, static_cast<std::uint32_t>(exceptions.size()));
    for (std::uint32_t e : exceptions) put_u32(out, e);
    for (Eigen::Index i = 0; i < share.block.symbols.size(); ++i) {
        const std::uint32_t v = share.block.symbols[i].value();
        put_u16(out, v == 65536 ? 0 : v);
    }
    return out;
}

Share parse_share(std::span<const std::byte> bytes) {
    ByteReader in(bytes);
    if (in.take(1) != 'F' || in.take(1) != 'N' || in.take(1) != 'T' || in.take(1) != 'C')
        throw FormatError("fnt: bad share magic");
    if (in.take(1) != kShareVersion) throw FormatError("fnt: unsupported share version");

    Share share;
    share.log2_size = static_cast<unsigned>(in.take(1));
    if (share.log2_size < 1 || share.log2_size > 16)
        throw FormatError("fnt: share log2 size out of range");
    const std::uint32_t n = std::uint32_t(1) << share.log2_size;
    share.block_count = static_cast<std::uint32_t>(in.take(2));
    if (share.block_count < 1 || share.block_count > n)
        throw FormatError("fnt: share block count out of range");
    share.block.coord.step = static_cast<std::uint32_t>(in.take(1));
    share.block.coord.position = static_cast<std::uint32_t>(in.take(2));
    if (share.block.coord.step > share.log2_size || share.block.coord.position >= n)
        throw FormatError("fnt: share coordinate out of range");
    share.block_length = static_cast<std::uint32_t>(in.take(4));
    share.original_length = in.take(8);

    const auto exception_count = static_cast<std::uint32_t>(in.take(4));
    if (exception_count > share.block_length) throw FormatError("fnt: too many exceptions");
    std::vector<std::uint32_t> exceptions(exception_count);
    for (std::uint32_t i = 0; i < exception_count; ++i) {
        exceptions[i] = static_cast<std::uint32_t>(in.take(4));
        if (exceptions[i] >= share.block_length)
            throw FormatError("fnt: exception position out of range");
        if (i > 0 && exceptions[i] <= exceptions[i - 1])
            throw FormatError("fnt: exception positions must be strictly ascending");
    }

    share.block.symbols.resize(static_cast<Eigen::Index>(share.block_length));
    for (std::uint32_t i = 0; i < share.block_length; ++i)
        share.block.symbols[static_cast<Eigen::Index>(i)] =
            Gf::from_raw(static_cast<std::uint32_t>(in.take(2)));
    for (std::uint32_t e : exceptions) {
        auto& sym = share.block.symbols[static_cast<Eigen::Index>(e)];
        if (!sym.is_zero()) throw FormatError("fnt: exception position stores a nonzero symbol");
        sym = Gf::from_raw(65536);
    }
    if (!in.exhausted()) throw FormatError("fnt: trailing bytes in share container");
    return share;
}

}  // namespace fnt
