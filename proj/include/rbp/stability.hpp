#ifndef RBP_STABILITY_HPP
#define RBP_STABILITY_HPP

//
// k-stability and coherence.
//
// A rank-r matrix is (column) k-stable when every removal of k columns
// keeps the rank at r while some removal of k+1 columns drops it. The
// exhaustive routine is the ground-truth oracle for small n; the
// certified routine is a one-sided randomized spot check for larger n.
//

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rbp/linalg.hpp"
#include "rbp/matrix.hpp"
#include "rbp/orthonormal_basis.hpp"
#include "rbp/random.hpp"

namespace rbp {

inline constexpr std::size_t kDefaultExhaustiveCap = 16;

enum class StabilityMethod { Exhaustive, Certified };

struct StabilityReport {
    std::size_t rank = 0;
    std::size_t column_stability = 0;
    /// k+1 columns whose removal drops the rank to r-1; absent when k = n-r.
    std::optional<std::vector<std::size_t>> witness_columns;
    StabilityMethod method = StabilityMethod::Exhaustive;
};

namespace detail {

class ColumnRankProbe {
  public:
    ColumnRankProbe(const DenseMatrix& A, double tol) : rows_(A.rows()), tol_(tol) {
        columns_.reserve(A.cols());
        for (std::size_t j = 0; j < A.cols(); ++j)
            columns_.push_back(A.column(j));
    }

    /// True when the columns not flagged in `removed` still reach rank `target`.
    bool keeps_rank(const std::vector<char>& removed, std::size_t target) const {
        if (target == 0)
            return true;
        OrthonormalBasisTracker tracker(rows_, tol_);
        for (std::size_t j = 0; j < columns_.size(); ++j) {
            if (removed[j])
                continue;
            tracker.try_extend(columns_[j]);
            if (tracker.size() >= target)
                return true;
        }
        return false;
    }

  private:
    std::size_t rows_;
    double tol_;
    std::vector<std::vector<double>> columns_;
};

// Advance `c` (sorted, values < n) to the next combination in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t t = i + 1; t < k; ++t)
                c[t] = c[t - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Exact column stability by enumerating removed subsets by increasing size,
/// lexicographic within a size. The first rank-dropping subset is the witness.
inline StabilityReport stability_index_exhaustive(const DenseMatrix& A, double tol = kDefaultTolerance,
                                                  std::size_t cap = kDefaultExhaustiveCap) {
    const std::size_t n = A.cols();
    if (n > cap)
        throw std::invalid_argument("stability_index_exhaustive: n = " + std::to_string(n) +
                                    " exceeds the exhaustive cap " + std::to_string(cap) +
                                    "; use stability_index_certified");
    StabilityReport report;
    report.rank = rank(A, tol);
    report.method = StabilityMethod::Exhaustive;
    const std::size_t r = report.rank;

    detail::ColumnRankProbe probe(A, tol);
    std::vector<char> removed(n, 0);
    for (std::size_t size = 1; size <= n - r; ++size) {
        std::vector<std::size_t> subset(size);
        std::iota(subset.begin(), subset.end(), std::size_t{0});
        do {
            for (std::size_t j : subset)
                removed[j] = 1;
            const bool keeps = probe.keeps_rank(removed, r);
            for (std::size_t j : subset)
                removed[j] = 0;
            if (!keeps) {
                report.column_stability = size - 1;
                report.witness_columns = subset;
                return report;
            }
        } while (detail::next_combination(subset, n));
    }
    report.column_stability = n - r;
    return report;
}

inline StabilityReport row_stability_index_exhaustive(const DenseMatrix& A, double tol = kDefaultTolerance,
                                                      std::size_t cap = kDefaultExhaustiveCap) {
    return stability_index_exhaustive(A.transpose(), tol, cap);
}

struct Certified {
    std::size_t trials;
};

struct RefutedWithWitness {
    std::vector<std::size_t> witness;
};

using CertificationResult = std::variant<Certified, RefutedWithWitness>;

/// Removes k_claim uniformly random columns `trials` times. Refutation is a
/// proof that the stability is below k_claim; certification is only evidence.
/// A claim above n - rank is refuted by the first trial.
inline CertificationResult stability_index_certified(const DenseMatrix& A, std::size_t k_claim,
                                                     std::size_t trials, std::uint64_t seed,
                                                     double tol = kDefaultTolerance) {
    const std::size_t n = A.cols();
    const std::size_t r = rank(A, tol);
    if (k_claim > n)
        throw std::invalid_argument("stability_index_certified: k_claim exceeds the column count");

    detail::ColumnRankProbe probe(A, tol);
    Rng rng(seed);
    std::vector<std::size_t> perm(n);
    std::vector<char> removed(n, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = 0; i < k_claim; ++i)
            std::swap(perm[i], perm[i + rng.uniform_index(n - i)]);
        for (std::size_t i = 0; i < k_claim; ++i)
            removed[perm[i]] = 1;
        const bool keeps = probe.keeps_rank(removed, r);
        for (std::size_t i = 0; i < k_claim; ++i)
            removed[perm[i]] = 0;
        if (!keeps) {
            std::vector<std::size_t> witness(perm.begin(), perm.begin() + k_claim);
            std::sort(witness.begin(), witness.end());
            return RefutedWithWitness{std::move(witness)};
        }
    }
    return Certified{trials};
}

//
// Coherence mu(U) = (n/r) max_i ||P_U e_i||^2 of an r-dimensional subspace of R^n.
//

struct CoherenceValue {
    double mu = 0.0;
    std::size_t subspace_dim = 0;
    std::size_t ambient_dim = 0;
};

inline CoherenceValue coherence_of_orthonormal(const DenseMatrix& U, double tol = kDefaultTolerance) {
    const std::size_t n = U.rows();
    const std::size_t r = U.cols();
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a; b < r; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += U(i, a) * U(i, b);
            if (std::abs(s - (a == b ? 1.0 : 0.0)) > tol)
                throw std::invalid_argument("coherence_of_orthonormal: columns are not orthonormal");
        }
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        best = std::max(best, dot(U.row(i), U.row(i)));
    return {static_cast<double>(n) / static_cast<double>(r) * best, r, n};
}

/// Coherence of the column space of M, which must have full column rank.
inline CoherenceValue coherence_of_subspace(const DenseMatrix& M, double tol = kDefaultTolerance) {
    const auto basis = column_space(M, tol);
    if (basis.size() < M.cols())
        throw rank_deficient_error("coherence_of_subspace: columns are linearly dependent");
    // Gram-Schmidt output is orthonormal to ~1e-15; a looser check here
    // guards only against gross failure.
    return coherence_of_orthonormal(basis.as_matrix(), 1e-8);
}

/// Orthonormal basis (n x r) of the row space of A, i.e. the span of V in A = U S V^T.
inline DenseMatrix row_space_basis(const DenseMatrix& A, double tol = kDefaultTolerance) {
    const auto basis = column_space(A.transpose(), tol);
    if (basis.empty())
        throw rank_deficient_error("row_space_basis: zero matrix has no row space");
    return basis.as_matrix();
}

struct CoherenceStabilityCheck {
    bool applicable = false;  ///< mu(V) < n/(k r) holds
    bool bound_holds = false; ///< observed stability >= k (only meaningful when applicable)
    std::size_t rank = 0;
    std::size_t k = 0;
    double mu_v = 0.0;
    std::optional<std::size_t> observed_s;
};

/// Checks that low coherence of the right factor forces stability: if
/// mu(V) < n/(k r) then the exact stability s satisfies s >= k.
inline CoherenceStabilityCheck check_coherence_implies_stability(const DenseMatrix& A, std::size_t k,
                                                                 double tol = kDefaultTolerance,
                                                                 std::size_t cap = kDefaultExhaustiveCap) {
    CoherenceStabilityCheck out;
    out.k = k;
    out.rank = rank(A, tol);
    if (out.rank == 0)
        return out;
    const std::size_t n = A.cols();
    if (k > n - out.rank)
        throw std::invalid_argument("check_coherence_implies_stability: k exceeds n - rank");
    out.mu_v = coherence_of_subspace(row_space_basis(A, tol), tol).mu;
    out.applicable = k == 0 || out.mu_v * static_cast<double>(k * out.rank) < static_cast<double>(n);
    if (!out.applicable)
        return out;
    const auto report = stability_index_exhaustive(A, tol, cap);
    out.observed_s = report.column_stability;
    out.bound_holds = report.column_stability >= k;
    return out;
}

} // namespace rbp

#endif // RBP_STABILITY_HPP
