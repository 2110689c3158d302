#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdp/experiment.hpp"

using namespace sdp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

nlohmann::json small_config(const fs::path& out)
{
    return {
        {"problems",
         {{{"id", "SDP5"}, {"M", 2}, {"n", 6}, {"severity", 10}, {"frequency", 5}, {"warmup", 10}},
          {{"id", "SDP12"}, {"M", 2}, {"n", 6}, {"severity", 10}, {"frequency", 5}, {"warmup", 10},
           {"ranges", {{"n_l", 4}, {"n_u", 8}}}}}},
        {"algorithms",
         {{{"name", "dnsga2-a"}, {"population", 16}}, {{"name", "restart"}, {"population", 16}, {"label", "rs"}}}},
        {"runs", 2},
        {"changes", 3},
        {"refset_count", 200},
        {"output_dir", out.string()},
    };
}

MetricRow row(const std::string& run_id, double t, double igd, std::optional<double> dt = {})
{
    MetricRow r;
    r.run_id = run_id;
    r.problem = run_id.substr(run_id.find('/') + 1, run_id.find("-M") - run_id.find('/') - 1);
    r.M = 2;
    r.t = t;
    r.igd = igd;
    r.dt = dt;
    return r;
}

} // namespace

TEST_CASE("scientific number format")
{
    CHECK(format_sci(0.093261) == "9.3261E-2");
    CHECK(format_sci(0.015004) == "1.5004E-2");
    CHECK(format_sci(0.62156) == "6.2156E-1");
    CHECK(format_sci(1.0) == "1.0000E+0");
    CHECK(format_sci(12345.0) == "1.2345E+4");
    CHECK(format_sci(-2.5e-10) == "-2.5000E-10");
    CHECK(format_sci(0.0) == "0.0000E+0");
    CHECK(format_sci(std::nan("")) == "NaN");
    CHECK(format_number(std::nullopt) == "NA");
    CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("config parsing")
{
    auto doc = small_config("out");
    auto c = experiment_from_json(doc);
    REQUIRE(c.problems.size() == 2);
    CHECK(c.problems[1].ranges.n_u == 8);
    REQUIRE(c.algorithms.size() == 2);
    CHECK(c.algorithms[0].label == "dnsga2-a");
    CHECK(c.algorithms[1].label == "rs");
    CHECK(c.algorithms[1].config.reaction == Reaction::restart);
    CHECK(c.algorithms[1].config.population == 16);
    CHECK(c.runs == 2);
    CHECK(c.changes == 3);
    CHECK(c.base_seed == 1);
    CHECK(c.metrics.hvd);
    CHECK(experiment_from_json(to_json(c)).algorithms[1].label == "rs");
    CHECK(to_json(experiment_from_json(to_json(c))) == to_json(c));

    auto names = doc;
    names["algorithms"] = {"nsga2", "dnsga2-b"};
    CHECK(experiment_from_json(names).algorithms[1].config.reaction == Reaction::hypermutate);
}

TEST_CASE("config rejection")
{
    auto base = small_config("out");
    auto expect_throw = [](nlohmann::json doc) { CHECK_THROWS_AS(experiment_from_json(doc), std::invalid_argument); };
    for (const char* key : {"problems", "algorithms", "runs"}) {
        auto d = base;
        d.erase(key);
        expect_throw(d);
    }
    auto d = base;
    d["colour"] = "red";
    expect_throw(d);
    d = base;
    d["runs"] = 0;
    expect_throw(d);
    d = base;
    d["runs"] = -3;
    expect_throw(d);
    d = base;
    d["runs"] = 2.5;
    expect_throw(d);
    d = base;
    d["metrics"] = {{"igd", true}, {"spread", true}};
    expect_throw(d);
    d = base;
    d["metrics"] = {{"igd", 1}};
    expect_throw(d);
    d = base;
    d["algorithms"] = {"moead"};
    expect_throw(d);
    d = base;
    d["algorithms"] = {"nsga2", "nsga2"};
    expect_throw(d);
    d = base;
    d["algorithms"] = {{{"name", "nsga2"}, {"label", "a/b"}}};
    expect_throw(d);
    d = base;
    d["algorithms"] = {{{"name", "nsga2"}, {"mutation", 0.1}}};
    expect_throw(d);
    d = base;
    d["problems"][1] = d["problems"][0];
    expect_throw(d);
    d = base;
    d["problems"][0].erase("frequency");
    expect_throw(d);
    d = base;
    d["problems"] = nlohmann::json::array();
    expect_throw(d);
    d = base;
    d["refset_count"] = 0;
    expect_throw(d);
    CHECK_THROWS_AS(experiment_from_json(nlohmann::json::array()), std::invalid_argument);

    auto dir = scratch("sdp_exp_badjson");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(load_experiment(dir / "bad.json"), std::invalid_argument);
    CHECK_THROWS(load_experiment(dir / "missing.json"));
    fs::remove_all(dir);
}

TEST_CASE("cache directory precedence")
{
    ::unsetenv("SDP_CACHE_DIR");
    CHECK(resolve_cache_dir("", "res") == fs::path("res") / "refsets");
    ::setenv("SDP_CACHE_DIR", "/tmp/env_cache", 1);
    CHECK(resolve_cache_dir("", "res") == fs::path("/tmp/env_cache"));
    CHECK(resolve_cache_dir("explicit", "res") == fs::path("explicit"));
    ::unsetenv("SDP_CACHE_DIR");
}

TEST_CASE("metrics csv round-trip")
{
    auto dir = scratch("sdp_exp_roundtrip");
    std::vector<MetricRow> rows{row("a/SDP5-M2/0", 0.0, 0.125), row("a/SDP5-M2/0", 0.1, 1.0 / 3.0, 0.25)};
    rows[1].hvd = -1e-300;
    write_metrics_csv(rows, dir / "metrics.csv");
    auto back = read_metrics_csv(dir / "metrics.csv");
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].run_id == rows[i].run_id);
        CHECK(back[i].problem == rows[i].problem);
        CHECK(back[i].M == rows[i].M);
        CHECK(back[i].t == rows[i].t);
        CHECK(back[i].igd == rows[i].igd);
        CHECK(back[i].hvd == rows[i].hvd);
        CHECK(back[i].dt == rows[i].dt);
    }
    CHECK(back[1].algorithm() == "a");
    CHECK(back[1].label() == "SDP5-M2");

    // golden schema
    auto text = lines_of(slurp(dir / "metrics.csv"));
    REQUIRE(text.size() == 4);
    CHECK(text[0] == "# schema sdp-metrics/1");
    CHECK(text[1] == "run_id,problem,M,t,igd,hvd,dt");
    CHECK(text[2] == "a/SDP5-M2/0,SDP5,2,0,0.125,NA,NA");

    std::ofstream(dir / "bad.csv") << "wrong,header\n";
    CHECK_THROWS_AS(read_metrics_csv(dir / "bad.csv"), std::invalid_argument);
    std::ofstream(dir / "short.csv") << "run_id,problem,M,t,igd,hvd,dt\na,b,2\n";
    CHECK_THROWS_AS(read_metrics_csv(dir / "short.csv"), std::invalid_argument);
    fs::remove_all(dir);
}

TEST_CASE("tables from synthetic records")
{
    std::vector<MetricRow> rows;
    // alg a: per-run MIGD 1, 2, 3, 4, 5; alg b: 11..15 (two states per run, mean of 0.5k and 1.5k)
    for (int k = 0; k < 5; ++k) {
        for (const char* alg : {"a", "b"}) {
            double base = (alg[0] == 'a' ? 1.0 : 11.0) + k;
            std::string id = std::string(alg) + "/SDP5-M2/" + std::to_string(k);
            rows.push_back(row(id, 0.0, base - 0.5));
            rows.push_back(row(id, 0.1, base + 0.5, 0.2));
        }
    }
    auto table = lines_of(build_table(rows, TableKind::migd, true));
    REQUIRE(table.size() == 2);
    CHECK(table[0] == "problem,M,a,b,best");
    std::string a_cell = format_sci(3.0) + "(" + format_sci(std::sqrt(2.5)) + ")";
    std::string b_cell = format_sci(13.0) + "(" + format_sci(std::sqrt(2.5)) + ")";
    CHECK(table[1] == "SDP5,2," + a_cell + "," + b_cell + ",a");

    // without the initial state only the second row of each run counts
    auto later = lines_of(build_table(rows, TableKind::migd, false));
    CHECK(later[1] == "SDP5,2," + format_sci(3.5) + "(" + format_sci(std::sqrt(2.5)) + ")," + format_sci(13.5) + "(" +
                          format_sci(std::sqrt(2.5)) + "),a");

    auto mdt = lines_of(build_table(rows, TableKind::mdt, true));
    CHECK(mdt[1] == "SDP5,2," + format_sci(0.2) + "(" + format_sci(0.0) + ")," + format_sci(0.2) + "(" +
                        format_sci(0.0) + "),a");
    auto hvd = lines_of(build_table(rows, TableKind::mhvd, true));
    CHECK(hvd[1] == "SDP5,2,NA,NA,NA");

    auto rank = lines_of(build_table(rows, TableKind::rank, true));
    REQUIRE(rank.size() == 3);
    CHECK(rank[0] == "algorithm,SDP5,rank_sum,avg_rank");
    CHECK(rank[1] == "a,1,1,1");
    CHECK(rank[2] == "b,2,2,2");

    auto summary = lines_of(build_summary(rows, true));
    CHECK(summary[0] == "# schema sdp-summary/1");
    CHECK(summary[1] == "problem,M,algorithm,runs,migd_mean,migd_std,mhvd_mean,mhvd_std,mdt_mean,mdt_std");
    CHECK(summary[2] == "SDP5,2,a,5,3," + format_number(std::sqrt(2.5)) + ",NA,NA,0.20000000000000001,0");
}

TEST_CASE("rank table ties and single algorithms")
{
    std::vector<MetricRow> single, twins;
    for (int k = 0; k < 6; ++k) {
        single.push_back(row("x/SDP1-M2/" + std::to_string(k), 0.0, 0.1 * k));
        single.push_back(row("x/SDP2-M2/" + std::to_string(k), 0.0, 0.2 * k));
        for (const char* alg : {"p", "q"}) {
            twins.push_back(row(std::string(alg) + "/SDP1-M2/" + std::to_string(k), 0.0, 0.1 * k));
        }
    }
    auto one = lines_of(build_table(single, TableKind::rank, true));
    CHECK(one[1] == "x,1,1,2,1");
    auto tie = lines_of(build_table(twins, TableKind::rank, true));
    CHECK(tie[1] == "p,1,1,1");
    CHECK(tie[2] == "q,1,1,2");

    std::vector<MetricRow> few(twins.begin(), twins.begin() + 6);
    CHECK_THROWS_AS(build_table(few, TableKind::rank, true), std::invalid_argument);
    CHECK(parse_table_kind("mdt") == TableKind::mdt);
    CHECK_THROWS_AS(parse_table_kind("igd"), std::invalid_argument);
}

TEST_CASE("experiment outputs are identical across thread counts")
{
    auto root = scratch("sdp_exp_threads");
    auto cache = root / "cache";
    std::map<std::size_t, ExperimentResult> results;
    for (std::size_t threads : {1u, 3u}) {
        auto cfg = experiment_from_json(small_config(root / ("out" + std::to_string(threads))));
        RunOptions opt;
        opt.threads = threads;
        opt.cache_dir = cache;
        results[threads] = run_experiment(cfg, opt);
        CHECK(results[threads].failures() == 0);
        CHECK(results[threads].runs.size() == 8);
    }
    for (const char* name : {"metrics.csv", "summary.csv", "table_migd.csv", "table_mhvd.csv", "table_mdt.csv"}) {
        CAPTURE(name);
        CHECK(slurp(root / "out1" / name) == slurp(root / "out3" / name));
    }
    CHECK_FALSE(fs::exists(root / "out1" / "rank_migd.csv"));
    auto run_dir = root / "out1" / "runs" / "SDP12-M2" / "rs" / "run1";
    CHECK(slurp(run_dir / "events.csv") == slurp(root / "out3" / "runs" / "SDP12-M2" / "rs" / "run1" / "events.csv"));
    CHECK(fs::exists(run_dir / "meta.json"));
    for (int k = 0; k <= 3; ++k) {
        CHECK(fs::exists(run_dir / "snapshots" / ("t" + std::to_string(k) + ".csv")));
    }
    auto meta = nlohmann::json::parse(slurp(run_dir / "meta.json"));
    CHECK(meta.at("seed") == 2);
    CHECK(meta.at("spec").at("id") == "SDP12");

    auto rows = read_metrics_csv(root / "out1" / "metrics.csv");
    // two problems, two algorithms, two runs, four states
    CHECK(rows.size() == 32);

    // summary means recomputed from the raw rows
    std::map<std::string, std::pair<double, int>> per_run;
    for (const auto& r : rows) {
        auto& [s, n] = per_run[r.run_id];
        s += *r.igd;
        ++n;
    }
    double mean_a = 0.0;
    for (int k = 0; k < 2; ++k) {
        auto [s, n] = per_run["dnsga2-a/SDP5-M2/" + std::to_string(k)];
        mean_a += s / n / 2.0;
    }
    auto summary = lines_of(slurp(root / "out1" / "summary.csv"));
    REQUIRE(summary.size() == 6);
    auto comma = summary[2].find(',', summary[2].find("dnsga2-a,2,") + 11);
    auto start = summary[2].find("dnsga2-a,2,") + 11;
    double reported = std::stod(summary[2].substr(start, comma - start));
    CHECK(std::abs(reported - mean_a) <= 1e-12);

    // same seed, fresh output directory: identical bytes
    auto again = experiment_from_json(small_config(root / "again"));
    RunOptions opt;
    opt.cache_dir = cache;
    run_experiment(again, opt);
    CHECK(slurp(root / "again" / "metrics.csv") == slurp(root / "out1" / "metrics.csv"));

    // a different base seed changes the trajectories
    auto other = small_config(root / "seed9");
    other["base_seed"] = 9;
    run_experiment(experiment_from_json(other), opt);
    CHECK(slurp(root / "seed9" / "metrics.csv") != slurp(root / "out1" / "metrics.csv"));

    // tables regenerate from the records alone
    auto migd = slurp(root / "out1" / "table_migd.csv");
    fs::remove(root / "out1" / "table_migd.csv");
    CHECK(cli_table(root / "out1", TableKind::migd) == root / "out1" / "table_migd.csv");
    CHECK(slurp(root / "out1" / "table_migd.csv") == migd);
    CHECK_THROWS(cli_table(root / "nowhere", TableKind::migd));
    fs::remove_all(root);
}

TEST_CASE("curves and the rank table are written on request")
{
    auto root = scratch("sdp_exp_curves");
    auto doc = small_config(root / "out");
    doc["problems"] = {doc["problems"][0]};
    doc["runs"] = 5;
    doc["changes"] = 1;
    doc["metrics"] = {{"hvd", false}, {"igd_curve", true}};
    RunOptions opt;
    opt.cache_dir = root / "cache";
    auto result = run_experiment(experiment_from_json(doc), opt);
    CHECK(result.failures() == 0);
    CHECK(fs::exists(root / "out" / "rank_migd.csv"));
    CHECK_FALSE(fs::exists(root / "out" / "table_mhvd.csv"));
    auto curve = lines_of(slurp(root / "out" / "curves" / "igd_SDP5-M2_rs.csv"));
    CHECK(curve[0] == "generation,t,mean_igd,std_igd");
    // warmup + two windows of five generations
    CHECK(curve.size() == 1 + 20);
    CHECK(curve.back().rfind("19,0.10000000000000001,", 0) == 0);
    fs::remove_all(root);
}
