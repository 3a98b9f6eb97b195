#include <fnt/transform.hpp>

#include <bit>
#include <stdexcept>
#include <utility>

namespace fnt {

namespace {

unsigned checked_log2_size(Eigen::Index n) {
    if (n < 2 || n > 65536 || (n & (n - 1)) != 0)
        throw std::domain_error("fnt: transform size must be a power of two in [2, 65536]");
    return static_cast<unsigned>(std::countr_zero(static_cast<std::uint32_t>(n)));
}

// Shared butterfly cascade; `root` has order n. Input must already be in
// bit-reversed order; output is in natural order.
void cascade(Eigen::Ref<SymbolVector> a, Gf root) {
    const Eigen::Index n = a.size();
    for (Eigen::Index len = 2; len <= n; len <<= 1) {
        const Gf step = pow(root, static_cast<std::uint64_t>(n / len));
        for (Eigen::Index block = 0; block < n; block += len) {
            Gf w = Gf::from_raw(1);
            for (Eigen::Index j = 0; j < len / 2; ++j) {
                Gf lo = a[block + j];
                Gf hi = w * a[block + j + len / 2];
                a[block + j] = lo + hi;
                a[block + j + len / 2] = lo - hi;
                w *= step;
            }
        }
    }
}

void scramble(Eigen::Ref<SymbolVector> a, unsigned bits) {
    const Eigen::Index n = a.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        auto j = static_cast<Eigen::Index>(bit_reverse(static_cast<std::uint32_t>(i), bits));
        if (j > i) std::swap(a[i], a[j]);
    }
}

}  // namespace

std::uint32_t bit_reverse(std::uint32_t i, unsigned bits) {
    if (bits > 16 || (bits < 32 && i >= (std::uint32_t(1) << bits)))
        throw std::domain_error("fnt: bit_reverse index out of range");
    std::uint32_t r = 0;
    for (unsigned b = 0; b < bits; ++b) {
        r = (r << 1) | (i & 1);
        i >>= 1;
    }
    return r;
}

SymbolVector dft_direct(const SymbolVector& a) {
    const Eigen::Index n = a.size();
    checked_log2_size(n);
    const Gf w = root_of_order(static_cast<std::uint32_t>(n));
    SymbolVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Gf wi = pow(w, static_cast<std::uint64_t>(i));
        Gf acc = Gf::from_raw(0);
        Gf wij = Gf::from_raw(1);  // w^(i*j), stepped by w^i
        for (Eigen::Index j = 0; j < n; ++j) {
            acc += a[j] * wij;
            wij *= wi;
        }
        out[i] = acc;
    }
    return out;
}

void fnt_forward_inplace(Eigen::Ref<SymbolVector> a) {
    const unsigned u = checked_log2_size(a.size());
    scramble(a, u);
    cascade(a, root_of_order(static_cast<std::uint32_t>(a.size())));
}

void fnt_inverse_inplace(Eigen::Ref<SymbolVector> a) {
    const unsigned u = checked_log2_size(a.size());
    const auto n = static_cast<std::uint32_t>(a.size());
    scramble(a, u);
    cascade(a, inv(root_of_order(n)));
    const Gf scale = inv(Gf(n));
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] *= scale;
}

SymbolVector fnt_forward(SymbolVector a) {
    fnt_forward_inplace(a);
    return a;
}

SymbolVector fnt_inverse(SymbolVector a) {
    fnt_inverse_inplace(a);
    return a;
}

}  // namespace fnt
