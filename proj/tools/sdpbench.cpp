#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sdp/experiment.hpp"
#include "sdp/refsets.hpp"
#include "sdp/suite.hpp"

namespace {

const char* describe(sdp::ProblemId id)
{
    using sdp::ProblemId;
    switch (id) {
    case ProblemId::SDP1: return "product front, randomly walking PS";
    case ProblemId::SDP2: return "reciprocal-sum front, stretching range, linked variables";
    case ProblemId::SDP3: return "knee front, time-varying multimodality";
    case ProblemId::SDP4: return "mixed convex/concave front";
    case ProblemId::SDP5: return "spherical front that shrinks and expands";
    case ProblemId::SDP6: return "partly undetectable changes";
    case ProblemId::SDP7: return "deceptive multi-basin landscape";
    case ProblemId::SDP8: return "front with a changing number of holes";
    case ProblemId::SDP9: return "changing number of disconnected segments";
    case ProblemId::SDP10: return "disconnected front of changing shape";
    case ProblemId::SDP11: return "barrier around the optimum";
    case ProblemId::SDP12: return "changing number of variables";
    case ProblemId::SDP13: return "changing number of objectives";
    case ProblemId::SDP14: return "linear front with changing degeneration";
    case ProblemId::SDP15: return "spherical front with changing degeneration";
    case ProblemId::FDA1: return "classic FDA1 contrast problem";
    case ProblemId::DMOP2: return "classic dMOP2 contrast problem";
    }
    return "";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dynamic multiobjective benchmark runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir, cache_dir;
    std::size_t threads = 1;
    std::uint64_t seed = 0;

    auto* run_cmd = app.add_subcommand("run", "Run an experiment matrix from a JSON config");
    run_cmd->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    run_cmd->add_option("--cache-dir", cache_dir, "Reference-set cache directory");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Base seed (overrides base_seed)");

    std::string problem_name = "SDP5";
    int M = 2, n = 10, severity = 10;
    double t = 0.0;
    std::size_t count = 1000;
    std::uint64_t pf_seed = 0;
    int n_l = 0, n_u = 0, M_l = 0, M_u = 0;
    bool diversity = false;
    std::string pf_out;
    auto* pf_cmd = app.add_subcommand("sample-pf", "Write a reference front as CSV");
    pf_cmd->add_option("--problem", problem_name, "Problem id, e.g. SDP5")->required();
    pf_cmd->add_option("-M", M, "Objective count");
    pf_cmd->add_option("-n", n, "Variable count");
    pf_cmd->add_option("--t", t, "Time")->required();
    pf_cmd->add_option("--count", count, "Target number of points");
    pf_cmd->add_option("--severity", severity, "Changes per unit time");
    pf_cmd->add_option("--seed", pf_seed, "Landscape seed");
    pf_cmd->add_option("--n-l", n_l, "Lower variable count (SDP12)");
    pf_cmd->add_option("--n-u", n_u, "Upper variable count (SDP12)");
    pf_cmd->add_option("--m-l", M_l, "Lower objective count (SDP13)");
    pf_cmd->add_option("--m-u", M_u, "Upper objective count (SDP13)");
    pf_cmd->add_flag("--diversity", diversity, "Enable the diversity variant");
    pf_cmd->add_option("--out", pf_out, "Output CSV file")->required();
    pf_cmd->add_option("--cache-dir", cache_dir, "Reference-set cache directory");

    std::string table_dir, table_kind = "migd";
    auto* table_cmd = app.add_subcommand("table", "Rebuild a table from a results directory");
    table_cmd->add_option("--out", table_dir, "Results directory")->required()->check(CLI::ExistingDirectory);
    table_cmd->add_option("--kind", table_kind, "migd, mhvd, mdt or rank");

    app.add_subcommand("list-problems", "List the available problems");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto config = sdp::load_experiment(config_path);
            if (!out_dir.empty()) {
                config.output_dir = out_dir;
            }
            if (*seed_opt) {
                config.base_seed = seed;
            }
            sdp::RunOptions options;
            options.threads = threads;
            options.cache_dir = cache_dir;
            options.log = &std::cerr;
            auto result = sdp::run_experiment(config, options);
            std::cout << "wrote " << (config.output_dir / "metrics.csv").string() << "\n";
            if (result.failures() > 0) {
                std::cerr << result.failures() << " run(s) failed; see " << (config.output_dir / "failures.txt").string()
                          << "\n";
                return 2;
            }
            return 0;
        }
        if (*pf_cmd) {
            sdp::ProblemSpec spec;
            spec.id = sdp::parse_problem_id(problem_name);
            spec.M = M;
            spec.n = n;
            spec.severity = severity;
            spec.seed = pf_seed;
            spec.diversity_variant = diversity;
            spec.ranges = {n_l, n_u, M_l, M_u};
            if (!(t >= 0.0)) {
                throw std::invalid_argument("t must be non-negative");
            }
            sdp::Problem problem(spec);
            std::filesystem::path out(pf_out);
            auto parent = out.has_parent_path() ? out.parent_path() : std::filesystem::path(".");
            sdp::RefsetCache cache(sdp::resolve_cache_dir(cache_dir, parent));
            auto set = cache.get_or_create(problem, t, count);
            sdp::write_csv(set, out);
            std::cout << set.points.size() << " points written to " << out.string() << "\n";
            return 0;
        }
        if (*table_cmd) {
            auto path = sdp::cli_table(table_dir, sdp::parse_table_kind(table_kind));
            std::cout << "wrote " << path.string() << "\n";
            return 0;
        }
        for (auto id : sdp::all_problem_ids()) {
            std::cout << sdp::to_string(id) << "\t" << describe(id) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
