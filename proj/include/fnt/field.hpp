#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>

#include <Eigen/Core>

namespace fnt {

inline constexpr std::uint32_t kFieldModulus = 65537;  // F4 = 2^16 + 1, prime
inline constexpr std::uint32_t kFieldGenerator = 3;    // fixed primitive root, order 2^16

/// Element of GF(65537), canonical residue in [0, 65536].
///
/// The top residue 65536 does not fit in 16 bits, so elements are held in
/// 32 bits. All operations return canonical residues; reduction uses the
/// Fermat-prime identity 2^16 = -1 (mod 65537).
class Gf {
public:
    constexpr Gf() = default;
    constexpr explicit Gf(std::uint64_t value) : v_(static_cast<std::uint32_t>(value % kFieldModulus)) {}

    constexpr std::uint32_t value() const { return v_; }
    constexpr bool is_zero() const { return v_ == 0; }

    friend constexpr Gf operator+(Gf a, Gf b) {
        std::uint32_t r = a.v_ + b.v_;
        return from_raw(r >= kFieldModulus ? r - kFieldModulus : r);
    }
    friend constexpr Gf operator-(Gf a, Gf b) {
        return from_raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + kFieldModulus - b.v_);
    }
    friend constexpr Gf operator*(Gf a, Gf b) {
        return from_raw(reduce_product(std::uint64_t(a.v_) * std::uint64_t(b.v_)));
    }
    constexpr Gf operator-() const { return from_raw(v_ == 0 ? 0 : kFieldModulus - v_); }

    constexpr Gf& operator+=(Gf o) { return *this = *this + o; }
    constexpr Gf& operator-=(Gf o) { return *this = *this - o; }
    constexpr Gf& operator*=(Gf o) { return *this = *this * o; }

    friend constexpr bool operator==(Gf a, Gf b) = default;

    /// Wraps an already-canonical residue without reduction.
    static constexpr Gf from_raw(std::uint32_t canonical) {
        Gf g;
        g.v_ = canonical;
        return g;
    }

    /// Reduces t <= 2^32 using 2^16 = -1: t0 + t1*2^16 + t2*2^32 = t0 - t1 + t2.
    static constexpr std::uint32_t reduce_product(std::uint64_t t) {
        std::uint32_t t0 = static_cast<std::uint32_t>(t & 0xFFFFu);
        std::uint32_t t1 = static_cast<std::uint32_t>((t >> 16) & 0xFFFFu);
        std::uint32_t t2 = static_cast<std::uint32_t>(t >> 32);
        std::uint32_t r = t0 + t2;
        return r >= t1 ? r - t1 : r + kFieldModulus - t1;
    }

private:
    std::uint32_t v_ = 0;
};

constexpr Gf pow(Gf base, std::uint64_t exponent) {
    Gf acc = Gf::from_raw(1);
    while (exponent != 0) {
        if (exponent & 1) acc *= base;
        base *= base;
        exponent >>= 1;
    }
    return acc;
}

constexpr Gf inv(Gf a) {
    if (a.is_zero()) throw std::domain_error("fnt: inverse of zero");
    return pow(a, kFieldModulus - 2);
}

constexpr Gf operator/(Gf a, Gf b) { return a * inv(b); }

/// Root of unity of exact multiplicative order `order`, for order = 2^u,
/// 1 <= u <= 16, derived from the fixed generator 3.
constexpr Gf root_of_order(std::uint32_t order) {
    if (order < 2 || order > 65536 || (order & (order - 1)) != 0)
        throw std::domain_error("fnt: root order must be a power of two in [2, 65536]");
    return pow(Gf::from_raw(kFieldGenerator), (kFieldModulus - 1) / order);
}

inline std::ostream& operator<<(std::ostream& os, Gf a) { return os << a.value(); }

using SymbolVector = Eigen::Matrix<Gf, Eigen::Dynamic, 1>;
using SymbolMatrix = Eigen::Matrix<Gf, Eigen::Dynamic, Eigen::Dynamic>;
using CoefficientRow = Eigen::Matrix<Gf, 1, Eigen::Dynamic>;

/// Exact element-wise equality (shape mismatch compares unequal).
template <typename A, typename B>
bool exact_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!(a(i, j) == b(i, j))) return false;
    return true;
}

}  // namespace fnt

namespace Eigen {

template <>
struct NumTraits<fnt::Gf> {
    using Self = fnt::Gf;
    using Real = fnt::Gf;
    using NonInteger = fnt::Gf;
    using Literal = fnt::Gf;
    using Nested = fnt::Gf;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 4
    };
    static constexpr Self epsilon() { return Self(); }
    static constexpr Self dummy_precision() { return Self(); }
    static constexpr Self highest() { return fnt::Gf::from_raw(fnt::kFieldModulus - 1); }
    static constexpr Self lowest() { return Self(); }
    static constexpr int digits10() { return 5; }
};

}  // namespace Eigen
