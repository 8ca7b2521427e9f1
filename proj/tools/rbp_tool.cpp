// rbp: command line front end for generation, stability analysis,
// reconstruction and Monte Carlo experiments.
//
// Exit codes: 0 ok, 1 failed verification or guarantee check, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rbp/rbp.hpp"
#include "rbp/serialization.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

constexpr double kVerifyTol = 1e-8;

struct Globals {
    std::uint64_t seed = 0;
    double tol = rbp::kDefaultTolerance;
    std::string json_out;
};

void emit(const json& j, const Globals& g) {
    std::cout << j.dump(2) << '\n';
    if (!g.json_out.empty()) {
        std::ofstream out(g.json_out);
        if (!out)
            throw std::runtime_error("cannot write " + g.json_out);
        out << j.dump(2) << '\n';
    }
}

std::vector<std::string> family_names() {
    std::vector<std::string> out;
    for (auto f : {rbp::Family::FirstRow, rbp::Family::RankTwoOdd, rbp::Family::Cauchy, rbp::Family::Generic,
                   rbp::Family::RandomOrthogonal, rbp::Family::StableCoherent})
        out.emplace_back(rbp::family_name(f));
    return out;
}

struct SpecArgs {
    std::string family;
    std::size_t m = 0, n = 0, r = 1;
    std::vector<double> params;

    rbp::GeneratorSpec spec(std::uint64_t seed) const {
        return {*rbp::parse_family(family), m, n, r, params, seed};
    }
};

void add_spec_options(CLI::App* cmd, SpecArgs& a) {
    cmd->add_option("--family", a.family, "Matrix family")->required()->check(CLI::IsMember(family_names()));
    cmd->add_option("--m", a.m, "Rows")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--n", a.n, "Columns")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--r", a.r, "Rank (generic, random-orthogonal)")->check(CLI::PositiveNumber);
    cmd->add_option("--params", a.params, "Family parameters");
}

//
// generate
//

struct GenerateArgs {
    SpecArgs spec;
    std::string out;
};

int run_generate(const GenerateArgs& a, const Globals& g) {
    const auto spec = a.spec.spec(g.seed);
    const auto M = rbp::generate(spec);
    rbp::save_matrix(a.out, M);
    emit({{"family", a.spec.family},
          {"m", spec.m},
          {"n", spec.n},
          {"rank", rbp::nominal_rank(spec)},
          {"k", rbp::nominal_stability(spec)},
          {"seed", g.seed},
          {"output", a.out}},
         g);
    return kExitOk;
}

//
// stability
//

struct StabilityArgs {
    std::string file;
    bool exhaustive = false;
    std::optional<std::size_t> certify;
    std::size_t trials = 100;
    std::size_t cap = rbp::kDefaultExhaustiveCap;
    bool rows = false;
};

int run_stability(const StabilityArgs& a, const Globals& g) {
    auto A = rbp::load_matrix(a.file);
    if (a.rows)
        A = A.transpose();
    if (!a.certify) {
        auto j = rbp::to_json(rbp::stability_index_exhaustive(A, g.tol, a.cap));
        j["orientation"] = a.rows ? "rows" : "columns";
        emit(j, g);
        return kExitOk;
    }
    const auto res = rbp::stability_index_certified(A, *a.certify, a.trials, g.seed, g.tol);
    json j{{"rank", rbp::rank(A, g.tol)},
           {"k", *a.certify},
           {"method", "certified"},
           {"orientation", a.rows ? "rows" : "columns"},
           {"trials", a.trials}};
    if (const auto* w = std::get_if<rbp::RefutedWithWitness>(&res)) {
        j["result"] = "refuted";
        j["witness"] = w->witness;
    } else {
        j["result"] = "certified";
        j["witness"] = nullptr;
    }
    emit(j, g);
    return std::holds_alternative<rbp::Certified>(res) ? kExitOk : kExitFailed;
}

//
// reconstruct
//

struct ReconstructArgs {
    std::string file;
    std::string algo;
    std::optional<std::size_t> rank;
    double delta = 0.01;
    std::optional<std::size_t> cap;
    bool prune = false;
    bool no_spot_check = false;
    std::optional<std::size_t> lambda;
    std::optional<std::size_t> k0;
    std::string out;
};

int run_reconstruct(const ReconstructArgs& a, const Globals& g) {
    const auto hidden = rbp::load_matrix(a.file);
    rbp::EntryOracle oracle(hidden);
    rbp::ReconstructionResult res;
    json extra = json::object();
    if (a.algo == "rbp") {
        if (!a.rank)
            throw CLI::ValidationError("--rank", "required with --algo rbp");
        rbp::RbpConfig cfg;
        cfg.rank = *a.rank;
        cfg.delta = a.delta;
        cfg.seed = g.seed;
        cfg.tol = g.tol;
        cfg.prune_spanned = a.prune;
        cfg.spot_check = !a.no_spot_check;
        if (a.cap)
            cfg.draw_cap = rbp::DeterministicCap{*a.cap};
        res = rbp::rbp_reconstruct(oracle, cfg);
    } else {
        if (a.lambda.has_value() == a.k0.has_value())
            throw CLI::ValidationError("--lambda/--k0", "give exactly one with --algo rfrbp");
        rbp::RfRbpConfig cfg;
        cfg.lambda = a.lambda ? *a.lambda : rbp::compute_lambda(hidden.rows(), hidden.cols(), *a.k0, a.delta);
        cfg.seed = g.seed;
        cfg.tol = g.tol;
        res = rbp::rfrbp_reconstruct(oracle, cfg);
        extra["lambda"] = cfg.lambda;
        extra["lambda_convention"] = a.k0 && rbp::lambda_is_limit_convention(hidden.cols(), *a.k0);
    }
    if (!a.out.empty())
        rbp::save_matrix(a.out, res.matrix);

    auto j = rbp::audit_json(res);
    j.update(extra);
    j["algorithm"] = a.algo;
    j["seed"] = g.seed;
    const double err = rbp::relative_frobenius_error(res.matrix, hidden);
    j["relative_error"] = err;
    j["verified"] = res.success && err <= kVerifyTol;
    emit(j, g);
    return j["verified"].get<bool>() ? kExitOk : kExitFailed;
}

//
// experiment
//

struct ExperimentArgs {
    SpecArgs spec;
    std::string algo = "rbp";
    std::size_t trials = 100;
    double delta = 0.01;
    std::optional<std::size_t> k;
    bool cap = false;
    bool prune = false;
    std::optional<std::size_t> lambda;
    std::size_t threads = 0;
};

int run_experiment_cmd(const ExperimentArgs& a, const Globals& g) {
    rbp::ExperimentConfig cfg;
    cfg.algorithm = a.algo == "rbp" ? rbp::Algorithm::Rbp : rbp::Algorithm::RfRbp;
    cfg.delta = a.delta;
    cfg.k = a.k;
    cfg.cap = a.cap;
    cfg.prune_spanned = a.prune;
    cfg.lambda = a.lambda;
    cfg.tol = g.tol;
    cfg.threads = a.threads;
    const auto stats = rbp::run_experiment(a.spec.spec(0), cfg, a.trials, g.seed);
    const auto check = rbp::check_guarantee(stats);

    json summary{{"algorithm", stats.algorithm},
                 {"family", stats.family},
                 {"m", stats.m},
                 {"n", stats.n},
                 {"r", stats.r},
                 {"k", stats.k},
                 {"delta", stats.delta},
                 {"lambda", stats.lambda ? json(*stats.lambda) : json(nullptr)},
                 {"trials", stats.trials},
                 {"master_seed", stats.master_seed},
                 {"aggregate", stats.aggregate},
                 {"check",
                  {{"passed", check.passed},
                   {"max_violation_rate", check.max_violation_rate},
                   {"min_success_rate", check.min_success_rate}}}};
    std::cout << summary.dump(2) << '\n';
    if (!g.json_out.empty()) {
        std::ofstream out(g.json_out);
        if (!out)
            throw std::runtime_error("cannot write " + g.json_out);
        out << json(stats).dump(2) << '\n';
    }
    return check.passed ? kExitOk : kExitFailed;
}

//
// dof, demo-uniform-sampling
//

struct DofArgs {
    std::size_t m = 0, n = 0, r = 0;
};

struct DemoArgs {
    std::size_t m = 4, n = 4, l = 12, trials = 100000;
};

int run_demo(const DemoArgs& a, const Globals& g) {
    const auto demo = rbp::uniform_sampling_failure_demo(a.m, a.n, a.l, a.trials, g.seed);
    const double exact = rbp::first_row_coverage_probability(a.m, a.n, a.l);
    const double limit = demo.upper_bound + 3.0 * rbp::binomial_sigma(demo.upper_bound, a.trials);
    json j{{"m", a.m},
           {"n", a.n},
           {"l", a.l},
           {"trials", a.trials},
           {"empirical_success_rate", demo.empirical_success_rate},
           {"exact_success_probability", exact},
           {"upper_bound", demo.upper_bound},
           {"within_bound", demo.empirical_success_rate <= limit}};
    if (!demo.note.empty())
        j["note"] = demo.note;
    emit(j, g);
    return demo.empirical_success_rate <= limit ? kExitOk : kExitFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Column-sampling reconstruction of low-rank matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--tol", g.tol, "Span and rank tolerance")->check(CLI::PositiveNumber);
    app.add_option("--json-out", g.json_out, "Also write the JSON result to this path");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a matrix from one of the families");
    add_spec_options(generate, gen.spec);
    generate->add_option("-o,--output", gen.out, "Matrix file to write")->required();

    StabilityArgs st;
    auto* stability = app.add_subcommand("stability", "Column (or row) stability of a matrix file");
    stability->add_option("matrix", st.file, "Matrix file")->required()->check(CLI::ExistingFile);
    auto* exh = stability->add_flag("--exhaustive", st.exhaustive, "Exact enumeration (default)");
    stability->add_option("--certify", st.certify, "Randomized check of a claimed stability")->excludes(exh);
    stability->add_option("--trials", st.trials, "Random removals for --certify");
    stability->add_option("--cap", st.cap, "Largest n for exhaustive enumeration");
    stability->add_flag("--rows", st.rows, "Row stability instead of column stability");

    ReconstructArgs rc;
    auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct a matrix file through an entry oracle");
    reconstruct->add_option("matrix", rc.file, "Matrix file")->required()->check(CLI::ExistingFile);
    reconstruct->add_option("--algo", rc.algo, "rbp or rfrbp")->required()->check(CLI::IsMember({"rbp", "rfrbp"}));
    reconstruct->add_option("--rank", rc.rank, "Known rank (rbp)");
    reconstruct->add_option("--delta", rc.delta, "Failure probability parameter");
    reconstruct->add_option("--cap", rc.cap, "Assumed stability k; enables the deterministic draw cap (rbp)");
    reconstruct->add_flag("--prune-spanned", rc.prune, "Drop spanned columns from the draw pool (rbp)");
    reconstruct->add_flag("--no-spot-check", rc.no_spot_check, "Skip the post-hoc row check (rbp)");
    reconstruct->add_option("--lambda", rc.lambda, "Consecutive-miss threshold (rfrbp)")->check(CLI::PositiveNumber);
    reconstruct->add_option("--k0", rc.k0, "Assumed stability for computing lambda (rfrbp)");
    reconstruct->add_option("-o,--output", rc.out, "Matrix file for the reconstruction");

    ExperimentArgs ex;
    auto* experiment = app.add_subcommand("experiment", "Seeded Monte Carlo trials with a guarantee check");
    add_spec_options(experiment, ex.spec);
    experiment->add_option("--algo", ex.algo, "rbp or rfrbp")->check(CLI::IsMember({"rbp", "rfrbp"}));
    experiment->add_option("--trials", ex.trials, "Number of trials")->check(CLI::PositiveNumber);
    experiment->add_option("--delta", ex.delta, "Failure probability parameter");
    experiment->add_option("--k", ex.k, "Stability assumed for bounds (default: the family's)");
    experiment->add_flag("--cap", ex.cap, "Use the deterministic draw cap (rbp)");
    experiment->add_flag("--prune-spanned", ex.prune, "Drop spanned columns from the draw pool (rbp)");
    experiment->add_option("--lambda", ex.lambda, "Explicit threshold (rfrbp)")->check(CLI::PositiveNumber);
    experiment->add_option("--threads", ex.threads, "Worker threads (0 = all cores)");

    DofArgs dof;
    auto* dof_cmd = app.add_subcommand("dof", "Degrees of freedom r(m+n-r)");
    dof_cmd->add_option("--m", dof.m)->required();
    dof_cmd->add_option("--n", dof.n)->required();
    dof_cmd->add_option("--r", dof.r)->required();

    DemoArgs demo;
    auto* demo_cmd =
        app.add_subcommand("demo-uniform-sampling", "Entry-wise uniform sampling on the first-row matrix");
    demo_cmd->add_option("--m", demo.m)->check(CLI::PositiveNumber);
    demo_cmd->add_option("--n", demo.n)->check(CLI::PositiveNumber);
    demo_cmd->add_option("--l", demo.l, "Entries sampled");
    demo_cmd->add_option("--trials", demo.trials)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*generate)
            return run_generate(gen, g);
        if (*stability)
            return run_stability(st, g);
        if (*reconstruct)
            return run_reconstruct(rc, g);
        if (*experiment)
            return run_experiment_cmd(ex, g);
        if (*dof_cmd) {
            emit({{"m", dof.m}, {"n", dof.n}, {"r", dof.r}, {"dof", rbp::degrees_of_freedom(dof.m, dof.n, dof.r)}},
                 g);
            return kExitOk;
        }
        if (*demo_cmd)
            return run_demo(demo, g);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitUsage;
}
