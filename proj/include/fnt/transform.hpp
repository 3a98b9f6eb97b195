#pragma once

#include <cstdint>

#include <fnt/field.hpp>

namespace fnt {

/// Reverses the low `bits` bits of i (0 <= i < 2^bits, bits <= 16).
/// Involutive: bit_reverse(bit_reverse(i, b), b) == i.
std::uint32_t bit_reverse(std::uint32_t i, unsigned bits);

/// Direct O(n^2) evaluation A_i = sum_j a_j w^(ij) with w = root_of_order(n).
/// Reference implementation; the fast transforms must agree with it exactly.
SymbolVector dft_direct(const SymbolVector& a);

/// Radix-2 decimation-in-time transform, O(n log n). Natural index order on
/// both sides; the bit-reversal permutation is internal.
SymbolVector fnt_forward(SymbolVector a);

/// Inverse transform: fnt_inverse(fnt_forward(a)) == a exactly. Uses the
/// inverse root and a final 1/n scale.
SymbolVector fnt_inverse(SymbolVector a);

/// In-place variants used by the codec hot paths.
void fnt_forward_inplace(Eigen::Ref<SymbolVector> a);
void fnt_inverse_inplace(Eigen::Ref<SymbolVector> a);

}  // namespace fnt
