#ifndef RBP_ORTHONORMAL_BASIS_HPP
#define RBP_ORTHONORMAL_BASIS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "rbp/matrix.hpp"

namespace rbp {

enum class SpanTest { InSpan, Extended };

//
// Incrementally grown orthonormal set w_1..w_i in R^m. A candidate v is
// in the span when ||v - P(v)||_2 <= tol * max(1, ||v||_2), where P is
// the orthogonal projector onto the current span. New directions are
// classical Gram-Schmidt residuals orthogonalized a second time before
// normalization.
//
class OrthonormalBasisTracker {
  public:
    explicit OrthonormalBasisTracker(std::size_t ambient_dim, double tol = kDefaultTolerance)
        : dim_(ambient_dim), tol_(tol) {
        if (ambient_dim == 0)
            throw dimension_error("OrthonormalBasisTracker: ambient dimension must be positive");
    }

    std::size_t ambient_dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    double tolerance() const noexcept { return tol_; }

    std::span<const double> basis_vector(std::size_t l) const {
        return std::span<const double>(basis_).subspan(l * dim_, dim_);
    }

    /// Orthogonal projection of v onto the current span (zero when the basis is empty).
    std::vector<double> project(std::span<const double> v) const {
        check_length(v);
        std::vector<double> p(dim_, 0.0);
        for (std::size_t l = 0; l < count_; ++l) {
            const auto w = basis_vector(l);
            const double c = dot(w, v);
            for (std::size_t t = 0; t < dim_; ++t)
                p[t] += c * w[t];
        }
        return p;
    }

    SpanTest try_extend(std::span<const double> v) {
        check_length(v);
        std::vector<double> residual(v.begin(), v.end());
        subtract_projection(residual);
        const double threshold = tol_ * std::max(1.0, norm2(v));
        if (norm2(residual) <= threshold)
            return SpanTest::InSpan;

        subtract_projection(residual);
        const double len = norm2(residual);
        if (len <= threshold)
            return SpanTest::InSpan;
        if (count_ == dim_)
            throw tolerance_error("OrthonormalBasisTracker: basis already spans the ambient space");

        for (double& x : residual)
            x /= len;
        basis_.insert(basis_.end(), residual.begin(), residual.end());
        ++count_;
        return SpanTest::Extended;
    }

    /// The basis as an ambient_dim x size() matrix (requires a non-empty basis).
    DenseMatrix as_matrix() const {
        DenseMatrix W(dim_, count_);
        for (std::size_t l = 0; l < count_; ++l)
            for (std::size_t t = 0; t < dim_; ++t)
                W(t, l) = basis_[l * dim_ + t];
        return W;
    }

  private:
    void check_length(std::span<const double> v) const {
        if (v.size() != dim_)
            throw dimension_error("OrthonormalBasisTracker: vector length differs from ambient dimension");
    }

    // r <- r - sum_l (w_l . r) w_l, with all coefficients taken from the input r.
    void subtract_projection(std::vector<double>& r) const {
        std::vector<double> coeff(count_);
        for (std::size_t l = 0; l < count_; ++l)
            coeff[l] = dot(basis_vector(l), r);
        for (std::size_t l = 0; l < count_; ++l) {
            const auto w = basis_vector(l);
            for (std::size_t t = 0; t < dim_; ++t)
                r[t] -= coeff[l] * w[t];
        }
    }

    std::size_t dim_;
    double tol_;
    std::size_t count_ = 0;
    std::vector<double> basis_;
};

} // namespace rbp

#endif // RBP_ORTHONORMAL_BASIS_HPP
