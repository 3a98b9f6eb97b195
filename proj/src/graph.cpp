#include <fnt/graph.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

#include <fnt/linalg.hpp>
#include <fnt/transform.hpp>

namespace fnt {

FftGraph::FftGraph(unsigned log2_size, std::uint32_t live_sources) : u_(log2_size) {
    if (u_ < 1 || u_ > 16) throw std::domain_error("fnt: graph log2 size must be in [1, 16]");
    n_ = std::uint32_t(1) << u_;
    k_ = live_sources;
    if (k_ < 1 || k_ > n_) throw std::domain_error("fnt: live source count must be in [1, n]");

    live_prefixes_.resize(u_ + 1);
    for (unsigned s = 0; s <= u_; ++s) {
        auto& pref = live_prefixes_[s];
        pref.reserve(k_);
        for (std::uint32_t i = 0; i < k_; ++i) pref.push_back(bit_reverse(i, u_) >> s);
        std::sort(pref.begin(), pref.end());
        pref.erase(std::unique(pref.begin(), pref.end()), pref.end());
    }
}

void FftGraph::check(NodeCoord c) const {
    if (!contains(c)) throw std::domain_error("fnt: node coordinate out of range");
}

bool FftGraph::is_void(NodeCoord c) const {
    check(c);
    const auto& pref = live_prefixes_[c.step];
    return !std::binary_search(pref.begin(), pref.end(), c.position >> c.step);
}

std::uint32_t FftGraph::source_position(std::uint32_t index) const {
    if (index >= k_) throw std::domain_error("fnt: source index out of range");
    return bit_reverse(index, u_);
}

std::optional<std::uint32_t> FftGraph::source_index_at(std::uint32_t position) const {
    check({0, position});
    const std::uint32_t index = bit_reverse(position, u_);
    if (index < k_) return index;
    return std::nullopt;
}

ButterflyParents FftGraph::parents(NodeCoord c) const {
    check(c);
    if (c.step == 0) throw std::domain_error("fnt: source nodes have no parents");
    const std::uint32_t half = std::uint32_t(1) << (c.step - 1);
    const std::uint32_t alpha = c.position & ~half;
    const std::uint32_t e = (c.position << (u_ - c.step)) & (n_ - 1);
    return {{c.step - 1, alpha}, {c.step - 1, alpha | half}, e};
}

std::vector<NodeCoord> FftGraph::children(NodeCoord c) const {
    check(c);
    if (c.step == u_ || is_void(c)) return {};
    const std::uint32_t mask = std::uint32_t(1) << c.step;
    NodeCoord a{c.step + 1, c.position & ~mask};
    NodeCoord b{c.step + 1, c.position | mask};
    return {a, b};
}

SymbolVector FftGraph::evaluate_node(const SymbolMatrix& sources, NodeCoord c) const {
    check(c);
    if (static_cast<std::uint32_t>(sources.rows()) != k_)
        throw std::domain_error("fnt: source block count must equal k");
    const Eigen::Index len = sources.cols();

    std::map<NodeCoord, SymbolVector> memo;
    auto eval = [&](auto&& self, NodeCoord node) -> const SymbolVector& {
        auto it = memo.find(node);
        if (it != memo.end()) return it->second;
        SymbolVector value;
        if (node.step == 0) {
            if (auto idx = source_index_at(node.position))
                value = sources.row(static_cast<Eigen::Index>(*idx)).transpose();
            else
                value = SymbolVector::Zero(len);
        } else {
            const ButterflyParents bp = parents(node);
            const Gf twiddle = pow(root_of_order(n_), bp.twiddle_exponent);
            value = self(self, bp.first) + twiddle * self(self, bp.second);
        }
        return memo.emplace(node, std::move(value)).first->second;
    };
    return eval(eval, c);
}

CoefficientRow FftGraph::coefficient_vector(NodeCoord c) const {
    check(c);
    std::map<NodeCoord, CoefficientRow> memo;
    auto eval = [&](auto&& self, NodeCoord node) -> const CoefficientRow& {
        auto it = memo.find(node);
        if (it != memo.end()) return it->second;
        CoefficientRow row = CoefficientRow::Zero(k_);
        if (node.step == 0) {
            if (auto idx = source_index_at(node.position))
                row[static_cast<Eigen::Index>(*idx)] = Gf::from_raw(1);
        } else {
            const ButterflyParents bp = parents(node);
            const Gf twiddle = pow(root_of_order(n_), bp.twiddle_exponent);
            row = self(self, bp.first) + twiddle * self(self, bp.second);
        }
        return memo.emplace(node, std::move(row)).first->second;
    };
    return eval(eval, c);
}

std::vector<std::uint32_t> FftGraph::support_set(NodeCoord c) const {
    check(c);
    std::map<NodeCoord, std::vector<std::uint32_t>> memo;
    auto eval = [&](auto&& self, NodeCoord node) -> const std::vector<std::uint32_t>& {
        auto it = memo.find(node);
        if (it != memo.end()) return it->second;
        std::vector<std::uint32_t> support;
        if (node.step == 0) {
            if (auto idx = source_index_at(node.position)) support.push_back(*idx);
        } else {
            const ButterflyParents bp = parents(node);
            const auto& a = self(self, bp.first);
            const auto& b = self(self, bp.second);
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(support));
        }
        return memo.emplace(node, std::move(support)).first->second;
    };
    return eval(eval, c);
}

void FftGraph::dump(std::ostream& os) const {
    for (std::uint32_t s = 1; s <= u_; ++s) {
        for (std::uint32_t p = 0; p < n_; ++p) {
            const NodeCoord c{s, p};
            const ButterflyParents bp = parents(c);
            os << c << " <- " << bp.first << " " << bp.second << " e=" << bp.twiddle_exponent
               << " support={";
            const auto support = support_set(c);
            for (std::size_t i = 0; i < support.size(); ++i) {
                if (i) os << ",";
                os << support[i];
            }
            os << "}\n";
        }
    }
}

bool is_innovative(const SymbolMatrix& held, const CoefficientRow& candidate) {
    GaussianBasis basis(candidate.size());
    for (Eigen::Index r = 0; r < held.rows(); ++r) basis.insert(held.row(r));
    return basis.insert(candidate);
}

bool decodable(const SymbolMatrix& held, std::uint32_t k) {
    if (held.rows() == 0) return k == 0;
    return field_rank(held) == static_cast<Eigen::Index>(k);
}

}  // namespace fnt
