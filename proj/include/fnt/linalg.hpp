#pragma once

#include <cstdint>
#include <vector>

#include <fnt/field.hpp>

namespace fnt {

/// Incremental exact row echelon basis over GF(65537).
///
/// Rows are `pivot_width + augmented_width` wide; pivots are searched in the
/// first `pivot_width` columns only, so an augmented right-hand side can ride
/// along through the elimination. Insertion order is preserved: each stored
/// row is reduced against all earlier rows and normalized to a unit pivot,
/// which makes the basis deterministic for a given insertion sequence.
class GaussianBasis {
public:
    explicit GaussianBasis(Eigen::Index pivot_width, Eigen::Index augmented_width = 0);

    /// Reduces `row` against the basis and stores it if a nonzero pivot
    /// remains. Returns true when the rank grew (the row was innovative).
    bool insert(CoefficientRow row);

    Eigen::Index rank() const { return static_cast<Eigen::Index>(rows_.size()); }
    Eigen::Index pivot_width() const { return width_; }

    /// Back-substitutes the augmented part once rank() == pivot_width():
    /// returns the pivot_width x augmented_width solution of B x = rhs.
    SymbolMatrix solve() const;

private:
    Eigen::Index width_;
    Eigen::Index aug_;
    std::vector<Eigen::Index> pivots_;
    std::vector<CoefficientRow> rows_;
};

/// Rank of the row set over GF(65537).
Eigen::Index field_rank(const SymbolMatrix& rows);

}  // namespace fnt
