#ifndef RBP_RANK_FREE_HPP
#define RBP_RANK_FREE_HPP

//
// Rank-free basis pursuit: the column-sampling loop of rbp_reconstruct,
// but instead of stopping at a known rank it stops after Lambda
// consecutive draws land in the current span. The miss counter resets
// whenever a basis column is found.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "rbp/basis_pursuit.hpp"
#include "rbp/matrix.hpp"
#include "rbp/oracle.hpp"

namespace rbp {

struct RfRbpConfig {
    std::size_t lambda = 1;
    std::uint64_t seed = 0;
    double tol = kDefaultTolerance;
};

/// True when k0 + 1 = n, where the threshold formula degenerates (log 0) and
/// compute_lambda returns 1 by convention.
inline bool lambda_is_limit_convention(std::size_t n, std::size_t k0) { return k0 + 1 == n; }

/// ceil( log(delta / min(m,n)) / log(1 - (k0+1)/n) ).
inline std::size_t compute_lambda(std::size_t m, std::size_t n, std::size_t k0, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("compute_lambda: need 0 < delta < 1");
    if (n == 0 || k0 > n - 1)
        throw std::invalid_argument("compute_lambda: need 0 <= k0 <= n - 1");
    if (lambda_is_limit_convention(n, k0))
        return 1;
    const double numer = std::log(delta / static_cast<double>(std::min(m, n)));
    const double denom = std::log(1.0 - static_cast<double>(k0 + 1) / static_cast<double>(n));
    const double lambda = std::ceil(numer / denom);
    return lambda < 1.0 ? 1 : static_cast<std::size_t>(lambda);
}

/// prod_{i=1..r} [1 - (1 - (k+1)/(n-i+1))^Lambda]: lower bound on the probability
/// that all r basis columns are found before the miss threshold is hit.
inline double success_probability_lower_bound(std::size_t n, std::size_t k, std::size_t r, std::size_t lambda) {
    if (k + r > n)
        throw std::invalid_argument("success_probability_lower_bound: need k + r <= n");
    if (lambda < 1)
        throw std::invalid_argument("success_probability_lower_bound: need lambda >= 1");
    double q = 1.0;
    for (std::size_t i = 1; i <= r; ++i) {
        const double p = static_cast<double>(k + 1) / static_cast<double>(n - i + 1);
        q *= 1.0 - std::pow(1.0 - p, static_cast<double>(lambda));
    }
    return q;
}

/// The algorithm never sees a rank. When it stops early the reconstruction
/// is wrong on uninspected entries; basis_count() tells the caller how many
/// basis columns were found, and judging exactness is left to whoever holds
/// the ground truth.
inline ReconstructionResult rfrbp_reconstruct(EntryOracle& oracle, const RfRbpConfig& cfg) {
    if (cfg.lambda < 1)
        throw std::invalid_argument("rfrbp_reconstruct: need lambda >= 1");
    detail::Pursuit pursuit(oracle, cfg.seed, cfg.tol, false);
    for (;;) {
        if (pursuit.exhausted())
            return pursuit.finish(true);
        std::size_t misses = 0;
        bool found = false;
        while (!found) {
            found = pursuit.draw();
            if (!found && ++misses >= cfg.lambda)
                return pursuit.finish(false);
        }
    }
}

} // namespace rbp

#endif // RBP_RANK_FREE_HPP
