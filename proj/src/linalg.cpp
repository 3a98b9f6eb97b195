#include <fnt/linalg.hpp>

#include <stdexcept>

namespace fnt {

GaussianBasis::GaussianBasis(Eigen::Index pivot_width, Eigen::Index augmented_width)
    : width_(pivot_width), aug_(augmented_width) {
    if (pivot_width < 1 || augmented_width < 0)
        throw std::domain_error("fnt: bad basis dimensions");
}

bool GaussianBasis::insert(CoefficientRow row) {
    if (row.size() != width_ + aug_) throw std::domain_error("fnt: row width mismatch");
    const auto r = static_cast<Eigen::Index>(rows_.size());
    const Eigen::Index w = width_ + aug_;

    // Progressive elimination factors at the pivot columns. f[j] is the
    // residual of `row` at pivot column c_j after subtracting rows 0..j-1.
    std::vector<std::uint32_t> f(static_cast<std::size_t>(r));
    for (Eigen::Index j = 0; j < r; ++j) {
        std::uint64_t acc = 0;
        const Eigen::Index cj = pivots_[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < j; ++i)
            acc += std::uint64_t(f[static_cast<std::size_t>(i)]) *
                   rows_[static_cast<std::size_t>(i)][cj].value();
        const Gf sub = Gf(acc);
        f[static_cast<std::size_t>(j)] = (row[cj] - sub).value();
    }

    // Bulk subtraction row -= sum_j f_j * rows_[j], accumulated wide and
    // folded once per column. Accumulator stays below 2^44 for any rank.
    if (r > 0) {
        std::vector<std::uint64_t> acc(static_cast<std::size_t>(w), 0);
        for (Eigen::Index j = 0; j < r; ++j) {
            const std::uint64_t fj = f[static_cast<std::size_t>(j)];
            if (fj == 0) continue;
            const Gf* src = rows_[static_cast<std::size_t>(j)].data();
            std::uint64_t* dst = acc.data();
            for (Eigen::Index c = 0; c < w; ++c) dst[c] += fj * src[c].value();
        }
        for (Eigen::Index c = 0; c < w; ++c) row[c] -= Gf(acc[static_cast<std::size_t>(c)]);
    }

    Eigen::Index pivot = -1;
    for (Eigen::Index c = 0; c < width_; ++c) {
        if (!row[c].is_zero()) {
            pivot = c;
            break;
        }
    }
    if (pivot < 0) return false;

    row *= inv(row[pivot]);
    pivots_.push_back(pivot);
    rows_.push_back(std::move(row));
    return true;
}

SymbolMatrix GaussianBasis::solve() const {
    if (rank() != width_) throw std::domain_error("fnt: basis is not full rank");
    SymbolMatrix x = SymbolMatrix::Zero(width_, aug_);
    // Stored rows are upper triangular under the pivot-column permutation:
    // rows_[j] vanishes at pivots c_0..c_{j-1} and is 1 at c_j.
    for (Eigen::Index j = width_ - 1; j >= 0; --j) {
        const CoefficientRow& b = rows_[static_cast<std::size_t>(j)];
        CoefficientRow rhs = b.tail(aug_);
        for (Eigen::Index i = j + 1; i < width_; ++i) {
            const Gf c = b[pivots_[static_cast<std::size_t>(i)]];
            if (!c.is_zero()) rhs -= c * x.row(pivots_[static_cast<std::size_t>(i)]);
        }
        x.row(pivots_[static_cast<std::size_t>(j)]) = rhs;
    }
    return x;
}

Eigen::Index field_rank(const SymbolMatrix& rows) {
    if (rows.rows() == 0) return 0;
    GaussianBasis basis(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        basis.insert(rows.row(r));
        if (basis.rank() == rows.cols()) break;
    }
    return basis.rank();
}

}  // namespace fnt
