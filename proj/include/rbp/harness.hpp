#ifndef RBP_HARNESS_HPP
#define RBP_HARNESS_HPP

//
// Experiment harness: information-theoretic floor, the entry-wise uniform
// sampling counterexample, and seeded Monte Carlo runs of the two
// reconstruction algorithms against generated hidden matrices.
//

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rbp/basis_pursuit.hpp"
#include "rbp/generators.hpp"
#include "rbp/matrix.hpp"
#include "rbp/oracle.hpp"
#include "rbp/random.hpp"
#include "rbp/rank_free.hpp"

namespace rbp {

/// r(m + n - r): parameters of a rank-r m x n matrix.
inline std::size_t degrees_of_freedom(std::size_t m, std::size_t n, std::size_t r) {
    if (r > std::min(m, n))
        throw std::invalid_argument("degrees_of_freedom: need 0 <= r <= min(m, n)");
    return r * (m + n - r);
}

//
// Entry-wise uniform sampling on the first-row matrix: a reconstruction is
// only possible when all n first-row positions are among the l sampled.
//

struct UniformSamplingDemo {
    double empirical_success_rate = 0.0;
    double upper_bound = 0.0; ///< (l / mn)^n
    std::string note;
};

inline UniformSamplingDemo uniform_sampling_failure_demo(std::size_t m, std::size_t n, std::size_t l,
                                                         std::size_t trials, std::uint64_t seed) {
    const std::size_t total = m * n;
    if (l > total || trials == 0)
        throw std::invalid_argument("uniform_sampling_failure_demo: need l <= mn and trials >= 1");
    UniformSamplingDemo out;
    out.upper_bound = std::pow(static_cast<double>(l) / static_cast<double>(total), static_cast<double>(n));
    if (l < n) {
        out.note = "l < n: the first row can never be covered";
        return out;
    }
    Rng rng(seed);
    std::vector<std::size_t> cells(total);
    std::size_t covered = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::iota(cells.begin(), cells.end(), std::size_t{0});
        std::size_t first_row_hits = 0;
        for (std::size_t i = 0; i < l; ++i) {
            std::swap(cells[i], cells[i + rng.uniform_index(total - i)]);
            if (cells[i] < n) // row-major: positions 0..n-1 are the first row
                ++first_row_hits;
        }
        if (first_row_hits == n)
            ++covered;
    }
    out.empirical_success_rate = static_cast<double>(covered) / static_cast<double>(trials);
    return out;
}

/// l(l-1)...(l-n+1) / (mn(mn-1)...(mn-n+1)): exact probability that l
/// uniformly chosen distinct positions cover the first row.
inline double first_row_coverage_probability(std::size_t m, std::size_t n, std::size_t l) {
    if (l > m * n)
        throw std::invalid_argument("first_row_coverage_probability: need l <= mn");
    if (l < n)
        return 0.0;
    double p = 1.0;
    for (std::size_t t = 0; t < n; ++t)
        p *= static_cast<double>(l - t) / static_cast<double>(m * n - t);
    return p;
}

struct CoverageCount {
    std::uint64_t covering = 0;
    std::uint64_t total = 0;
};

/// Enumerates every l-subset of the mn positions and counts those covering
/// the first row. Exponential; intended for tiny matrices.
inline CoverageCount first_row_coverage_enumerated(std::size_t m, std::size_t n, std::size_t l) {
    const std::size_t cells = m * n;
    if (cells > 30 || l > cells)
        throw std::invalid_argument("first_row_coverage_enumerated: need mn <= 30 and l <= mn");
    CoverageCount out;
    const std::uint64_t first_row = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != l)
            continue;
        ++out.total;
        if ((mask & first_row) == first_row)
            ++out.covering;
    }
    return out;
}

//
// Monte Carlo experiments.
//

enum class Algorithm { Rbp, RfRbp };

inline std::string_view algorithm_name(Algorithm a) { return a == Algorithm::Rbp ? "rbp" : "rfrbp"; }

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::Rbp;
    double delta = 0.01;
    /// Stability assumed for the bound, the draw cap, and Lambda; defaults to the family's.
    std::optional<std::size_t> k;
    bool cap = false;
    bool prune_spanned = false;
    /// Explicit RF-RBP threshold; otherwise computed from (m, n, k, delta).
    std::optional<std::size_t> lambda;
    double tol = kDefaultTolerance;
    double verify_tol = 1e-8;
    std::size_t threads = 0; ///< 0 = hardware concurrency
};

struct TrialRecord {
    std::uint64_t seed = 0;
    std::size_t entries_inspected = 0;
    std::size_t draws = 0;
    bool success = false;
    double wall_time = 0.0; ///< seconds
    std::size_t basis_count = 0;
    double relative_error = 0.0;
    bool inspected_exact = false;   ///< every inspected position reproduced bit-exactly
    bool oracle_consistent = false; ///< audit trail matches the oracle's own log
    std::string error;
};

struct ExperimentAggregate {
    double success_rate = 0.0;
    double mean_entries = 0.0;
    double p95_entries = 0.0;
    double bound_value = 0.0;
    double bound_violation_rate = 0.0;
};

struct ExperimentStats {
    std::string algorithm;
    std::string family;
    std::size_t m = 0, n = 0, r = 0, k = 0;
    double delta = 0.0;
    std::optional<std::size_t> lambda;
    std::uint64_t master_seed = 0;
    std::string rng_algorithm;
    std::size_t trials = 0;
    std::vector<TrialRecord> per_trial;
    ExperimentAggregate aggregate;
};

/// Stability used for bounds: the configured value or the family's own.
inline std::size_t experiment_k(const GeneratorSpec& spec, const ExperimentConfig& cfg) {
    return cfg.k.value_or(nominal_stability(spec));
}

inline std::size_t experiment_lambda(const GeneratorSpec& spec, const ExperimentConfig& cfg) {
    return cfg.lambda.value_or(compute_lambda(spec.m, spec.n, experiment_k(spec, cfg), cfg.delta));
}

/// The sampling bound each trial is judged against.
inline double experiment_bound(const GeneratorSpec& spec, const ExperimentConfig& cfg) {
    const std::size_t r = nominal_rank(spec);
    if (cfg.algorithm == Algorithm::Rbp)
        return rbp_sampling_bound(spec.m, spec.n, r, experiment_k(spec, cfg), cfg.delta);
    const double lambda = static_cast<double>(experiment_lambda(spec, cfg));
    return static_cast<double>(spec.n * r) + static_cast<double>(spec.m * (r + 1)) * lambda;
}

/// One replayable trial: the hidden matrix comes from stream 0 of the seed,
/// the algorithm's draws from stream 1.
inline TrialRecord run_trial(const GeneratorSpec& spec, const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    TrialRecord rec;
    rec.seed = trial_seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        GeneratorSpec s = spec;
        s.seed = derive_seed(trial_seed, 0);
        const DenseMatrix hidden = generate(s);
        EntryOracle oracle(hidden);
        const std::uint64_t algo_seed = derive_seed(trial_seed, 1);

        ReconstructionResult res;
        if (cfg.algorithm == Algorithm::Rbp) {
            RbpConfig rc;
            rc.rank = nominal_rank(spec);
            rc.delta = cfg.delta;
            rc.seed = algo_seed;
            rc.tol = cfg.tol;
            rc.prune_spanned = cfg.prune_spanned;
            if (cfg.cap)
                rc.draw_cap = DeterministicCap{experiment_k(spec, cfg)};
            res = rbp_reconstruct(oracle, rc);
        } else {
            RfRbpConfig rc;
            rc.lambda = experiment_lambda(spec, cfg);
            rc.seed = algo_seed;
            rc.tol = cfg.tol;
            res = rfrbp_reconstruct(oracle, rc);
        }

        rec.entries_inspected = res.entries_inspected.size();
        rec.draws = res.draws;
        rec.basis_count = res.basis_count();
        rec.relative_error = relative_frobenius_error(res.matrix, hidden);
        rec.inspected_exact = std::all_of(res.entries_inspected.begin(), res.entries_inspected.end(),
                                          [&](const Entry& e) { return res.matrix(e.row, e.col) == hidden(e.row, e.col); });
        rec.oracle_consistent = oracle.inspected_entries() == res.entries_inspected;
        rec.success = res.success && rec.relative_error <= cfg.verify_tol && rec.inspected_exact &&
                      rec.oracle_consistent;
    } catch (const std::exception& e) {
        rec.success = false;
        rec.error = e.what();
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

inline ExperimentStats run_experiment(const GeneratorSpec& spec, const ExperimentConfig& cfg, std::size_t trials,
                                      std::uint64_t master_seed) {
    if (trials == 0)
        throw std::invalid_argument("run_experiment: need trials >= 1");
    ExperimentStats stats;
    stats.algorithm = std::string(algorithm_name(cfg.algorithm));
    stats.family = std::string(family_name(spec.family));
    stats.m = spec.m;
    stats.n = spec.n;
    stats.r = nominal_rank(spec);
    stats.k = experiment_k(spec, cfg);
    stats.delta = cfg.delta;
    if (cfg.algorithm == Algorithm::RfRbp)
        stats.lambda = experiment_lambda(spec, cfg);
    stats.master_seed = master_seed;
    stats.rng_algorithm = std::string(kRngAlgorithm);
    stats.trials = trials;
    stats.per_trial.resize(trials);

    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, trials);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t = next++; t < trials; t = next++)
            stats.per_trial[t] = run_trial(spec, cfg, derive_seed(master_seed, t));
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(work);
        work();
    }

    auto& agg = stats.aggregate;
    agg.bound_value = experiment_bound(spec, cfg);
    std::size_t successes = 0, violations = 0;
    double total_entries = 0.0;
    std::vector<std::size_t> entries;
    entries.reserve(trials);
    for (const auto& rec : stats.per_trial) {
        successes += rec.success;
        violations += static_cast<double>(rec.entries_inspected) > agg.bound_value;
        total_entries += static_cast<double>(rec.entries_inspected);
        entries.push_back(rec.entries_inspected);
    }
    std::sort(entries.begin(), entries.end());
    const auto n_trials = static_cast<double>(trials);
    agg.success_rate = static_cast<double>(successes) / n_trials;
    agg.mean_entries = total_entries / n_trials;
    agg.p95_entries = static_cast<double>(entries[static_cast<std::size_t>(std::ceil(0.95 * n_trials)) - 1]);
    agg.bound_violation_rate = static_cast<double>(violations) / n_trials;
    return stats;
}

/// Standard deviation of a binomial frequency with rate p over `trials` draws.
inline double binomial_sigma(double p, std::size_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

struct GuaranteeCheck {
    bool passed = false;
    double max_violation_rate = 0.0;
    double min_success_rate = 0.0;
};

/// Compares an experiment against its guarantee with 3-sigma binomial slack:
/// known rank, failure and bound violations at most r delta each; rank free,
/// success at least 1 - delta and no trial above nr + m(r+1)Lambda.
inline GuaranteeCheck check_guarantee(const ExperimentStats& stats) {
    GuaranteeCheck out;
    if (stats.algorithm == "rbp") {
        const double p = std::min(1.0, static_cast<double>(stats.r) * stats.delta);
        out.max_violation_rate = p + 3.0 * binomial_sigma(p, stats.trials);
        out.min_success_rate = 1.0 - out.max_violation_rate;
    } else {
        const double p = stats.delta;
        out.max_violation_rate = 0.0;
        out.min_success_rate = 1.0 - p - 3.0 * binomial_sigma(p, stats.trials);
    }
    out.passed = stats.aggregate.bound_violation_rate <= out.max_violation_rate &&
                 stats.aggregate.success_rate >= out.min_success_rate;
    return out;
}

} // namespace rbp

#endif // RBP_HARNESS_HPP
