#ifndef RBP_SERIALIZATION_HPP
#define RBP_SERIALIZATION_HPP

// JSON views of reports, audits and experiment statistics.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "rbp/basis_pursuit.hpp"
#include "rbp/harness.hpp"
#include "rbp/stability.hpp"

namespace rbp {

inline nlohmann::json to_json(const StabilityReport& r) {
    nlohmann::json j;
    j["rank"] = r.rank;
    j["k"] = r.column_stability;
    j["method"] = r.method == StabilityMethod::Exhaustive ? "exhaustive" : "certified";
    j["witness"] = r.witness_columns ? nlohmann::json(*r.witness_columns) : nlohmann::json(nullptr);
    return j;
}

/// Audit record of a reconstruction run.
inline nlohmann::json audit_json(const ReconstructionResult& res) {
    nlohmann::json j;
    j["draws"] = res.draws;
    j["entries_inspected_count"] = res.entries_inspected.size();
    j["basis_cols"] = res.basis_cols;
    j["pivot_rows"] = res.pivot_rows.indices;
    j["success"] = res.success;
    j["status"] = status_name(res.status);
    j["direct"] = res.direct;
    j["distinct_columns_drawn"] = res.distinct_columns_drawn;
    j["epoch_draws"] = res.epoch_draws;
    j["basis_count"] = res.basis_count();
    j["consecutive_miss_max"] = res.consecutive_miss_max;
    j["spot_check_row"] = res.spot_check_row ? nlohmann::json(*res.spot_check_row) : nlohmann::json(nullptr);
    return j;
}

inline void to_json(nlohmann::json& j, const TrialRecord& t) {
    j = nlohmann::json{{"seed", t.seed},
                       {"entries_inspected", t.entries_inspected},
                       {"draws", t.draws},
                       {"success", t.success},
                       {"wall_time", t.wall_time},
                       {"basis_count", t.basis_count},
                       {"relative_error", t.relative_error},
                       {"inspected_exact", t.inspected_exact},
                       {"oracle_consistent", t.oracle_consistent},
                       {"error", t.error}};
}

inline void from_json(const nlohmann::json& j, TrialRecord& t) {
    j.at("seed").get_to(t.seed);
    j.at("entries_inspected").get_to(t.entries_inspected);
    j.at("draws").get_to(t.draws);
    j.at("success").get_to(t.success);
    j.at("wall_time").get_to(t.wall_time);
    j.at("basis_count").get_to(t.basis_count);
    j.at("relative_error").get_to(t.relative_error);
    j.at("inspected_exact").get_to(t.inspected_exact);
    j.at("oracle_consistent").get_to(t.oracle_consistent);
    j.at("error").get_to(t.error);
}

inline void to_json(nlohmann::json& j, const ExperimentAggregate& a) {
    j = nlohmann::json{{"success_rate", a.success_rate},
                       {"mean_entries", a.mean_entries},
                       {"p95_entries", a.p95_entries},
                       {"bound_value", a.bound_value},
                       {"bound_violation_rate", a.bound_violation_rate}};
}

inline void from_json(const nlohmann::json& j, ExperimentAggregate& a) {
    j.at("success_rate").get_to(a.success_rate);
    j.at("mean_entries").get_to(a.mean_entries);
    j.at("p95_entries").get_to(a.p95_entries);
    j.at("bound_value").get_to(a.bound_value);
    j.at("bound_violation_rate").get_to(a.bound_violation_rate);
}

inline void to_json(nlohmann::json& j, const ExperimentStats& s) {
    j = nlohmann::json{{"algorithm", s.algorithm},
                       {"family", s.family},
                       {"m", s.m},
                       {"n", s.n},
                       {"r", s.r},
                       {"k", s.k},
                       {"delta", s.delta},
                       {"lambda", s.lambda ? nlohmann::json(*s.lambda) : nlohmann::json(nullptr)},
                       {"master_seed", s.master_seed},
                       {"rng_algorithm", s.rng_algorithm},
                       {"trials", s.trials},
                       {"per_trial", s.per_trial},
                       {"aggregate", s.aggregate}};
}

inline void from_json(const nlohmann::json& j, ExperimentStats& s) {
    j.at("algorithm").get_to(s.algorithm);
    j.at("family").get_to(s.family);
    j.at("m").get_to(s.m);
    j.at("n").get_to(s.n);
    j.at("r").get_to(s.r);
    j.at("k").get_to(s.k);
    j.at("delta").get_to(s.delta);
    if (j.at("lambda").is_null())
        s.lambda.reset();
    else
        s.lambda = j.at("lambda").get<std::size_t>();
    j.at("master_seed").get_to(s.master_seed);
    j.at("rng_algorithm").get_to(s.rng_algorithm);
    j.at("trials").get_to(s.trials);
    j.at("per_trial").get_to(s.per_trial);
    j.at("aggregate").get_to(s.aggregate);
}

} // namespace rbp

#endif // RBP_SERIALIZATION_HPP
