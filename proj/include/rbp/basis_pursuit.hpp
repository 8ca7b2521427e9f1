#ifndef RBP_BASIS_PURSUIT_HPP
#define RBP_BASIS_PURSUIT_HPP

//
// Randomized Basis Pursuit with known rank.
//
//   1. S = {}, T = {0..n-1}.
//   2. While |S| < r: draw j uniformly from T, inspect column j, and if it
//      is not in span(A_S) move j from T to S. If T empties, every column
//      has been inspected and the matrix is copied directly.
//   3. Pick r independent rows of A_S (the pivot rows).
//   4. Inspect the pivot rows and express every other column through the
//      r x r pivot block.
//
// All matrix access goes through an EntryOracle, so the inspected-entry
// accounting cannot be bypassed.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "rbp/linalg.hpp"
#include "rbp/matrix.hpp"
#include "rbp/oracle.hpp"
#include "rbp/orthonormal_basis.hpp"
#include "rbp/random.hpp"

namespace rbp {

enum class ReconstructionStatus {
    Success,
    CapExceeded,  ///< deterministic draw cap reached before r basis columns were found
    RankMismatch, ///< stated rank inconsistent with the data
};

inline std::string_view status_name(ReconstructionStatus s) {
    switch (s) {
    case ReconstructionStatus::Success: return "success";
    case ReconstructionStatus::CapExceeded: return "cap-exceeded";
    case ReconstructionStatus::RankMismatch: return "rank-mismatch";
    }
    return "unknown";
}

struct ReconstructionResult {
    DenseMatrix matrix;
    std::vector<std::size_t> basis_cols; ///< S, in discovery order
    RowSelection pivot_rows;             ///< S-bar, indices into the rows of A
    std::vector<Entry> entries_inspected; ///< distinct, row-major order
    std::size_t draws = 0;               ///< executions of the column draw step
    std::vector<std::size_t> epoch_draws; ///< draws spent while |S| == i, for each epoch i
    std::size_t distinct_columns_drawn = 0;
    std::size_t consecutive_miss_max = 0; ///< longest run of spanned draws
    bool direct = false;                  ///< every column was inspected and copied
    bool success = false;
    ReconstructionStatus status = ReconstructionStatus::Success;
    std::optional<std::size_t> spot_check_row;

    std::size_t basis_count() const noexcept { return basis_cols.size(); }
};

namespace detail {

//
// Shared state of the column-sampling loop and the row-identification /
// reconstruction tail used by both the known-rank and rank-free variants.
//
class Pursuit {
  public:
    Pursuit(EntryOracle& oracle, std::uint64_t seed, double tol, bool prune_spanned)
        : oracle_(oracle), m_(oracle.rows()), n_(oracle.cols()), tol_(tol), prune_(prune_spanned),
          rng_(seed), tracker_(oracle.rows(), tol), position_(oracle.cols()), cache_(oracle.cols()),
          spanned_(oracle.cols(), 0), inspected_(oracle.rows() * oracle.cols(), 0) {
        remaining_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            remaining_[j] = j;
            position_[j] = j;
        }
        epoch_draws_.push_back(0);
    }

    bool exhausted() const noexcept { return remaining_.empty(); }
    std::size_t basis_size() const noexcept { return basis_.size(); }
    std::size_t draws() const noexcept { return draws_; }

    /// Every column left in T is already known to lie in the span; more
    /// draws cannot find a new basis column.
    bool stalled() const noexcept { return !remaining_.empty() && spanned_in_t_ == remaining_.size(); }

    /// One execution of the draw step. Returns true when a new basis column was found.
    bool draw() {
        ++draws_;
        ++epoch_draws_.back();
        const std::size_t j = remaining_[rng_.uniform_index(remaining_.size())];
        if (!cache_[j]) {
            cache_[j] = oracle_.column(j);
            ++distinct_drawn_;
            for (std::size_t i = 0; i < m_; ++i)
                inspected_[i * n_ + j] = 1;
        } else {
            // Seen before and still in T, so it was found to be spanned; the
            // span has only grown since.
            miss();
            return false;
        }
        if (tracker_.try_extend(*cache_[j]) == SpanTest::Extended) {
            basis_.push_back(j);
            remove_from_t(j);
            epoch_draws_.push_back(0);
            run_ = 0;
            return true;
        }
        spanned_[j] = 1;
        if (prune_)
            remove_from_t(j);
        else
            ++spanned_in_t_;
        miss();
        return false;
    }

    /// Steps 3-4 (or the direct copy when every column was inspected).
    ReconstructionResult finish(bool direct) {
        ReconstructionResult res;
        res.matrix = DenseMatrix(m_, n_);
        res.basis_cols = basis_;
        res.direct = direct;
        res.success = true;
        if (!direct && !basis_.empty())
            reconstruct_from_basis(res);
        // Inspected entries are copied verbatim, never recomputed.
        for (std::size_t j = 0; j < n_; ++j)
            if (cache_[j])
                for (std::size_t i = 0; i < m_; ++i)
                    res.matrix(i, j) = (*cache_[j])[i];
        for (std::size_t t = 0; t < res.pivot_rows.size(); ++t) {
            const std::size_t i = res.pivot_rows.indices[t];
            for (std::size_t j = 0; j < n_; ++j)
                res.matrix(i, j) = pivot_values_[t][j];
        }
        fill_audit(res);
        return res;
    }

    /// Audit for a run that stopped before reconstruction.
    ReconstructionResult abort(ReconstructionStatus status) {
        ReconstructionResult res;
        res.matrix = DenseMatrix(m_, n_);
        for (std::size_t j = 0; j < n_; ++j)
            if (cache_[j])
                for (std::size_t i = 0; i < m_; ++i)
                    res.matrix(i, j) = (*cache_[j])[i];
        res.basis_cols = basis_;
        res.success = false;
        res.status = status;
        fill_audit(res);
        return res;
    }

  private:
    void miss() {
        ++run_;
        run_max_ = std::max(run_max_, run_);
    }

    void remove_from_t(std::size_t j) {
        const std::size_t p = position_[j];
        const std::size_t last = remaining_.back();
        remaining_[p] = last;
        position_[last] = p;
        remaining_.pop_back();
    }

    void reconstruct_from_basis(ReconstructionResult& res) {
        const std::size_t s = basis_.size();
        DenseMatrix basis_block(m_, s);
        for (std::size_t c = 0; c < s; ++c)
            for (std::size_t i = 0; i < m_; ++i)
                basis_block(i, c) = (*cache_[basis_[c]])[i];

        res.pivot_rows = find_independent_rows(basis_block, s, tol_);
        pivot_values_.clear();
        for (std::size_t i : res.pivot_rows.indices) {
            pivot_values_.push_back(oracle_.row(i));
            for (std::size_t j = 0; j < n_; ++j)
                inspected_[i * n_ + j] = 1;
        }

        const LuFactorization pivot_block(basis_block.select_rows(res.pivot_rows.indices), tol_);
        std::vector<char> in_basis(n_, 0);
        for (std::size_t j : basis_)
            in_basis[j] = 1;
        std::vector<double> rhs(s);
        for (std::size_t j = 0; j < n_; ++j) {
            if (in_basis[j])
                continue;
            for (std::size_t t = 0; t < s; ++t)
                rhs[t] = pivot_values_[t][j];
            const auto coeff = pivot_block.solve(rhs);
            const auto col = multiply(basis_block, coeff);
            for (std::size_t i = 0; i < m_; ++i)
                res.matrix(i, j) = col[i];
        }
    }

    void fill_audit(ReconstructionResult& res) const {
        res.draws = draws_;
        res.epoch_draws = epoch_draws_;
        res.distinct_columns_drawn = distinct_drawn_;
        res.consecutive_miss_max = run_max_;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (inspected_[i * n_ + j])
                    res.entries_inspected.push_back({i, j});
    }

    EntryOracle& oracle_;
    std::size_t m_, n_;
    double tol_;
    bool prune_;
    Rng rng_;
    OrthonormalBasisTracker tracker_;
    std::vector<std::size_t> remaining_; // T
    std::vector<std::size_t> position_;  // index of each column inside remaining_
    std::vector<std::optional<std::vector<double>>> cache_;
    std::vector<char> spanned_;
    std::vector<char> inspected_;
    std::vector<std::size_t> basis_; // S
    std::vector<std::vector<double>> pivot_values_;
    std::vector<std::size_t> epoch_draws_;
    std::size_t spanned_in_t_ = 0;
    std::size_t draws_ = 0;
    std::size_t distinct_drawn_ = 0;
    std::size_t run_ = 0;
    std::size_t run_max_ = 0;
};

} // namespace detail

struct Unbounded {};

/// Stop and declare failure once the draw count would exceed
/// ceil(n r (1 + ln(1/delta)) / (k+1)).
struct DeterministicCap {
    std::size_t k;
};

using DrawCapMode = std::variant<Unbounded, DeterministicCap>;

struct RbpConfig {
    std::size_t rank = 0;
    double delta = 0.01;
    DrawCapMode draw_cap = Unbounded{};
    std::uint64_t seed = 0;
    double tol = kDefaultTolerance;
    /// Drop columns found to be spanned from T (faster; not the analyzed variant).
    bool prune_spanned = false;
    /// After reconstruction, compare one non-pivot row against the oracle's
    /// verification channel to catch a wrong rank.
    bool spot_check = true;
    double spot_check_tol = 1e-8;
};

/// nr + mnr(1 + ln(1/delta))/(k+1): entries inspected with probability >= 1 - r delta.
inline double rbp_sampling_bound(std::size_t m, std::size_t n, std::size_t r, std::size_t k, double delta) {
    if (r > n || k > n - r)
        throw std::invalid_argument("rbp_sampling_bound: need 0 <= k <= n - r");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("rbp_sampling_bound: need 0 < delta < 1");
    const double nd = static_cast<double>(n), md = static_cast<double>(m), rd = static_cast<double>(r);
    return nd * rd + md * nd * rd * (1.0 + std::log(1.0 / delta)) / static_cast<double>(k + 1);
}

/// ceil(n r (1 + ln(1/delta)) / (k+1)), the deterministic draw budget.
inline std::size_t rbp_draw_cap(std::size_t n, std::size_t r, std::size_t k, double delta) {
    if (r > n || k > n - r)
        throw std::invalid_argument("rbp_draw_cap: need 0 <= k <= n - r");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("rbp_draw_cap: need 0 < delta < 1");
    const double cap = static_cast<double>(n) * static_cast<double>(r) * (1.0 + std::log(1.0 / delta)) /
                       static_cast<double>(k + 1);
    return static_cast<std::size_t>(std::ceil(cap));
}

/// Pr(X > (1+delta)/p) <= e^{-delta} for X geometric with success probability p.
inline double geometric_tail(double p, double delta) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("geometric_tail: need 0 < p < 1");
    if (!(delta > 0.0))
        throw std::invalid_argument("geometric_tail: need delta > 0");
    return std::exp(-delta);
}

/// Empirical Pr(X > (1+delta)/p) from `draws` simulated Bernoulli(p) runs.
inline double geometric_tail_empirical(double p, double delta, std::size_t draws, std::uint64_t seed) {
    geometric_tail(p, delta);
    Rng rng(seed);
    const double threshold = (1.0 + delta) / p;
    std::size_t exceed = 0;
    for (std::size_t t = 0; t < draws; ++t) {
        std::size_t x = 1;
        while (!rng.bernoulli(p))
            ++x;
        if (static_cast<double>(x) > threshold)
            ++exceed;
    }
    return static_cast<double>(exceed) / static_cast<double>(draws);
}

inline ReconstructionResult rbp_reconstruct(EntryOracle& oracle, const RbpConfig& cfg) {
    const std::size_t m = oracle.rows(), n = oracle.cols(), r = cfg.rank;
    if (r > std::min(m, n))
        throw std::invalid_argument("rbp_reconstruct: rank exceeds min(m, n)");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        throw std::invalid_argument("rbp_reconstruct: need 0 < delta < 1");
    std::optional<std::size_t> cap;
    if (const auto* c = std::get_if<DeterministicCap>(&cfg.draw_cap))
        cap = rbp_draw_cap(n, r, c->k, cfg.delta);

    detail::Pursuit pursuit(oracle, cfg.seed, cfg.tol, cfg.prune_spanned);
    while (pursuit.basis_size() < r) {
        if (pursuit.exhausted() || pursuit.stalled()) {
            // Every column has been inspected; the copy is exact, but fewer
            // than r independent columns exist.
            auto res = pursuit.finish(true);
            res.success = false;
            res.status = ReconstructionStatus::RankMismatch;
            return res;
        }
        if (cap && pursuit.draws() >= *cap)
            return pursuit.abort(ReconstructionStatus::CapExceeded);
        pursuit.draw();
    }

    auto res = pursuit.finish(false);
    if (cfg.spot_check && !res.direct) {
        std::vector<char> pivot(m, 0);
        for (std::size_t i : res.pivot_rows.indices)
            pivot[i] = 1;
        for (std::size_t i = 0; i < m; ++i) {
            if (pivot[i])
                continue;
            res.spot_check_row = i;
            double scale = 0.0, worst = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double truth = oracle.verify_entry(i, j);
                scale = std::max(scale, std::abs(truth));
                worst = std::max(worst, std::abs(truth - res.matrix(i, j)));
            }
            if (worst > cfg.spot_check_tol * std::max(1.0, scale)) {
                res.success = false;
                res.status = ReconstructionStatus::RankMismatch;
            }
            break;
        }
    }
    return res;
}

} // namespace rbp

#endif // RBP_BASIS_PURSUIT_HPP
