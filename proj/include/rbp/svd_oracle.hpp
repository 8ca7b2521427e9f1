#ifndef RBP_SVD_ORACLE_HPP
#define RBP_SVD_ORACLE_HPP

//
// One-sided (Hestenes) Jacobi SVD. Used only for verification and
// analysis; the reconstruction algorithms never call it.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rbp/matrix.hpp"

namespace rbp {

struct SvdResult {
    std::vector<double> singular_values; ///< nonincreasing, length min(m, n)
    DenseMatrix left;                    ///< m x min(m, n)
    DenseMatrix right;                   ///< n x min(m, n)
};

class svd_convergence_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Requires M.rows() >= M.cols().
inline SvdResult jacobi_tall(const DenseMatrix& M, double tol, int max_sweeps) {
    const std::size_t m = M.rows(), n = M.cols();
    DenseMatrix U = M;
    DenseMatrix V = DenseMatrix::identity(n);

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += U(i, p) * U(i, p);
                    beta += U(i, q) * U(i, q);
                    gamma += U(i, p) * U(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta))
                    continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double up = U(i, p), uq = U(i, q);
                    U(i, p) = c * up - s * uq;
                    U(i, q) = s * up + c * uq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = V(i, p), vq = V(i, q);
                    V(i, p) = c * vp - s * vq;
                    V(i, q) = s * vp + c * vq;
                }
            }
    }
    if (!converged)
        throw svd_convergence_error("svd_oracle: Jacobi sweeps did not converge");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            s += U(i, j) * U(i, j);
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SvdResult out{std::vector<double>(n), DenseMatrix(m, n), DenseMatrix(n, n)};
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t j = order[c];
        out.singular_values[c] = sigma[j];
        for (std::size_t i = 0; i < m; ++i)
            out.left(i, c) = sigma[j] > 0.0 ? U(i, j) / sigma[j] : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            out.right(i, c) = V(i, j);
    }
    return out;
}

} // namespace detail

inline SvdResult svd_oracle(const DenseMatrix& M, double tol = 1e-12, int max_sweeps = 60) {
    if (M.rows() >= M.cols())
        return detail::jacobi_tall(M, tol, max_sweeps);
    auto t = detail::jacobi_tall(M.transpose(), tol, max_sweeps);
    return {std::move(t.singular_values), std::move(t.right), std::move(t.left)};
}

/// U diag(sigma) V^T.
inline DenseMatrix svd_compose(const SvdResult& s) {
    DenseMatrix US = s.left;
    for (std::size_t i = 0; i < US.rows(); ++i)
        for (std::size_t c = 0; c < US.cols(); ++c)
            US(i, c) *= s.singular_values[c];
    return US * s.right.transpose();
}

} // namespace rbp

#endif // RBP_SVD_ORACLE_HPP
