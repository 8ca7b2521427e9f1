#ifndef RBP_LINALG_HPP
#define RBP_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rbp/matrix.hpp"
#include "rbp/orthonormal_basis.hpp"

namespace rbp {

/// Numerical rank: the number of columns that extend an orthonormal tracker.
inline std::size_t rank(const DenseMatrix& M, double tol = kDefaultTolerance) {
    OrthonormalBasisTracker tracker(M.rows(), tol);
    for (std::size_t j = 0; j < M.cols() && tracker.size() < M.rows(); ++j)
        tracker.try_extend(M.column(j));
    return tracker.size();
}

/// Rank of the column subset `cols` of M. Stops early once `stop_at` is reached.
inline std::size_t column_subset_rank(const DenseMatrix& M, std::span<const std::size_t> cols,
                                      double tol = kDefaultTolerance,
                                      std::size_t stop_at = static_cast<std::size_t>(-1)) {
    OrthonormalBasisTracker tracker(M.rows(), tol);
    for (std::size_t j : cols) {
        if (tracker.size() >= stop_at || tracker.size() == M.rows())
            break;
        tracker.try_extend(M.column(j));
    }
    return tracker.size();
}

struct RowSelection {
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return indices.size(); }
    friend bool operator==(const RowSelection&, const RowSelection&) = default;
};

/// First r rows (scanning upward from row 0) that are linearly independent.
inline RowSelection find_independent_rows(const DenseMatrix& M, std::size_t r,
                                          double tol = kDefaultTolerance) {
    RowSelection sel;
    if (r == 0)
        return sel;
    if (r > M.cols())
        throw rank_deficient_error("find_independent_rows: r exceeds the column count");
    OrthonormalBasisTracker tracker(M.cols(), tol);
    for (std::size_t i = 0; i < M.rows() && sel.size() < r; ++i)
        if (tracker.try_extend(M.row(i)) == SpanTest::Extended)
            sel.indices.push_back(i);
    if (sel.size() < r)
        throw rank_deficient_error("find_independent_rows: found " + std::to_string(sel.size()) +
                                   " independent rows, needed " + std::to_string(r));
    return sel;
}

//
// LU factorization with partial pivoting, PB = LU. Factor once and solve
// for as many right-hand sides as needed.
//
class LuFactorization {
  public:
    explicit LuFactorization(const DenseMatrix& B, double tol = kDefaultTolerance)
        : n_(B.rows()), lu_(B), perm_(B.rows()) {
        if (B.rows() != B.cols())
            throw dimension_error("LuFactorization: matrix is not square");
        for (std::size_t i = 0; i < n_; ++i)
            perm_[i] = i;
        const double scale = B.max_abs();
        if (scale == 0.0)
            throw singular_matrix_error("LuFactorization: zero matrix");

        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n_; ++i)
                if (std::abs(lu_(i, k)) > std::abs(lu_(p, k)))
                    p = i;
            if (std::abs(lu_(p, k)) <= tol * scale)
                throw singular_matrix_error("LuFactorization: pivot below tolerance at column " +
                                            std::to_string(k));
            if (p != k) {
                for (std::size_t j = 0; j < n_; ++j)
                    std::swap(lu_(p, j), lu_(k, j));
                std::swap(perm_[p], perm_[k]);
            }
            for (std::size_t i = k + 1; i < n_; ++i) {
                const double f = lu_(i, k) / lu_(k, k);
                lu_(i, k) = f;
                if (f == 0.0)
                    continue;
                for (std::size_t j = k + 1; j < n_; ++j)
                    lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    std::size_t size() const noexcept { return n_; }

    std::vector<double> solve(std::span<const double> y) const {
        if (y.size() != n_)
            throw dimension_error("LuFactorization::solve: length mismatch");
        std::vector<double> x(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = y[perm_[i]];
            for (std::size_t j = 0; j < i; ++j)
                s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        for (std::size_t i = n_; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n_; ++j)
                s -= lu_(i, j) * x[j];
            x[i] = s / lu_(i, i);
        }
        return x;
    }

  private:
    std::size_t n_;
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

inline std::vector<double> solve_square(const DenseMatrix& B, std::span<const double> y,
                                        double tol = kDefaultTolerance) {
    return LuFactorization(B, tol).solve(y);
}

/// Orthonormal basis (as columns) of the column space of M; may have zero columns.
inline OrthonormalBasisTracker column_space(const DenseMatrix& M, double tol = kDefaultTolerance) {
    OrthonormalBasisTracker tracker(M.rows(), tol);
    for (std::size_t j = 0; j < M.cols() && tracker.size() < M.rows(); ++j)
        tracker.try_extend(M.column(j));
    return tracker;
}

} // namespace rbp

#endif // RBP_LINALG_HPP
