#include "sdp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sdp/refsets.hpp"

namespace sdp {

namespace {

constexpr const char* metrics_schema = "# schema sdp-metrics/1";
constexpr const char* summary_schema = "# schema sdp-summary/1";
constexpr const char* metrics_header = "run_id,problem,M,t,igd,hvd,dt";

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known, const std::string& where)
{
    for (const auto& item : obj.items()) {
        bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return item.key() == k; });
        if (!ok) {
            throw std::invalid_argument(where + ": unknown field '" + item.key() + "'");
        }
    }
}

std::size_t as_count(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw std::invalid_argument("config: '" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

bool as_bool(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_boolean()) {
        throw std::invalid_argument("config: '" + key + "' must be a boolean");
    }
    return v.get<bool>();
}

double as_real(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number()) {
        throw std::invalid_argument("config: '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::optional<double> parse_optional(const std::string& s)
{
    if (s == "NA" || s.empty()) {
        return std::nullopt;
    }
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("metrics.csv: malformed number '" + s + "'");
    }
    return v;
}

template <class T>
std::vector<T> first_seen(const std::vector<T>& items)
{
    std::vector<T> out;
    for (const auto& v : items) {
        if (std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
        }
    }
    return out;
}

std::pair<std::string, std::string> split_label(const std::string& label)
{
    auto pos = label.rfind("-M");
    if (pos == std::string::npos) {
        return {label, ""};
    }
    return {label.substr(0, pos), label.substr(pos + 2)};
}

// Per-run aggregate of a single metric; empty when no value is available.
struct RunAggregate {
    std::string algorithm;
    std::string label;
    std::string run_id;
    std::optional<double> migd, mhvd, mdt;
};

std::vector<RunAggregate> aggregate_runs(const std::vector<MetricRow>& rows, bool include_initial)
{
    std::vector<RunAggregate> out;
    std::map<std::string, std::size_t> index;
    struct Acc {
        double igd = 0, hvd = 0, dt = 0;
        std::size_t n_igd = 0, n_hvd = 0, n_dt = 0;
    };
    std::vector<Acc> acc;
    for (const auto& r : rows) {
        auto it = index.find(r.run_id);
        if (it == index.end()) {
            it = index.emplace(r.run_id, out.size()).first;
            out.push_back({r.algorithm(), r.label(), r.run_id, {}, {}, {}});
            acc.emplace_back();
        }
        auto& a = acc[it->second];
        bool initial = !r.dt.has_value() && r.t == 0.0;
        if (include_initial || !initial) {
            if (r.igd) {
                a.igd += *r.igd;
                ++a.n_igd;
            }
            if (r.hvd) {
                a.hvd += *r.hvd;
                ++a.n_hvd;
            }
        }
        if (r.dt) {
            a.dt += *r.dt;
            ++a.n_dt;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (acc[i].n_igd) {
            out[i].migd = acc[i].igd / static_cast<double>(acc[i].n_igd);
        }
        if (acc[i].n_hvd) {
            out[i].mhvd = acc[i].hvd / static_cast<double>(acc[i].n_hvd);
        }
        if (acc[i].n_dt) {
            out[i].mdt = acc[i].dt / static_cast<double>(acc[i].n_dt);
        }
    }
    return out;
}

std::vector<double> collect(const std::vector<RunAggregate>& aggs, const std::string& alg, const std::string& label,
                            std::optional<double> RunAggregate::*field)
{
    std::vector<double> v;
    for (const auto& a : aggs) {
        if (a.algorithm == alg && a.label == label && (a.*field)) {
            v.push_back(*(a.*field));
        }
    }
    return v;
}

std::string csv_points(const std::vector<ObjectiveVector>& points)
{
    std::string text;
    std::size_t m = points.empty() ? 0 : points.front().size();
    for (std::size_t j = 0; j < m; ++j) {
        text += (j ? ",f" : "f") + std::to_string(j + 1);
    }
    text += '\n';
    for (const auto& p : points) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j) {
                text += ',';
            }
            text += format_number(p[j]);
        }
        text += '\n';
    }
    return text;
}

nlohmann::json algorithm_json(const AlgorithmEntry& a)
{
    return {
        {"name", a.config.name},
        {"label", a.label},
        {"population", a.config.population},
        {"detector_fraction", a.config.detector_fraction},
        {"zeta", a.config.zeta},
    };
}

// Reference sets and their hypervolumes, shared by every run of a problem.
class ReferenceStore {
public:
    struct Entry {
        std::once_flag once;
        ReferenceSet set;
        std::vector<double> refpoint;
        double volume = 0.0;
    };

    ReferenceStore(RefsetCache& cache, std::size_t count, bool need_hv) : cache_(cache), count_(count), need_hv_(need_hv) {}

    const Entry& get(const Problem& problem, std::size_t problem_index, std::size_t time_index, double t)
    {
        Entry* e = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto& slot = entries_[{problem_index, time_index}];
            if (!slot) {
                slot = std::make_unique<Entry>();
            }
            e = slot.get();
        }
        std::call_once(e->once, [&] {
            e->set = cache_.get_or_create(problem, t, count_);
            if (need_hv_) {
                e->refpoint = hv_refpoint(e->set.points);
                e->volume = hv(e->set.points, e->refpoint);
            }
        });
        return *e;
    }

private:
    RefsetCache& cache_;
    std::size_t count_;
    bool need_hv_;
    std::mutex mutex_;
    std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Entry>> entries_;
};

void validate_config(const ExperimentConfig& c)
{
    if (c.runs < 1) {
        throw std::invalid_argument("config: runs must be at least 1");
    }
    if (c.problems.empty()) {
        throw std::invalid_argument("config: no problems listed");
    }
    if (c.algorithms.empty()) {
        throw std::invalid_argument("config: no algorithms listed");
    }
    if (c.refset_count < 1) {
        throw std::invalid_argument("config: refset_count must be positive");
    }
    std::vector<std::string> labels;
    for (const auto& p : c.problems) {
        validate(p);
        labels.push_back(p.label());
    }
    if (first_seen(labels).size() != labels.size()) {
        throw std::invalid_argument("config: two problems share the same id and M");
    }
    std::vector<std::string> algs;
    for (const auto& a : c.algorithms) {
        if (a.label.empty() || a.label.find_first_of("/,") != std::string::npos) {
            throw std::invalid_argument("config: algorithm label '" + a.label + "' must be non-empty without '/' or ','");
        }
        algs.push_back(a.label);
    }
    if (first_seen(algs).size() != algs.size()) {
        throw std::invalid_argument("config: duplicate algorithm label");
    }
}

} // namespace

std::string MetricRow::algorithm() const
{
    return run_id.substr(0, run_id.find('/'));
}

std::string MetricRow::label() const
{
    auto a = run_id.find('/');
    auto b = run_id.rfind('/');
    return run_id.substr(a + 1, b - a - 1);
}

std::size_t ExperimentResult::failures() const
{
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunOutcome& r) { return !r.error.empty(); }));
}

ExperimentConfig experiment_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw std::invalid_argument("config: top level must be a JSON object");
    }
    reject_unknown(doc,
                   {"problems", "algorithms", "runs", "base_seed", "changes", "output_dir", "metrics", "refset_count",
                    "include_initial_state"},
                   "config");
    for (const char* key : {"problems", "algorithms", "runs"}) {
        if (!doc.contains(key)) {
            throw std::invalid_argument(std::string("config: missing field '") + key + "'");
        }
    }
    ExperimentConfig c;
    if (!doc.at("problems").is_array()) {
        throw std::invalid_argument("config: 'problems' must be an array");
    }
    for (const auto& p : doc.at("problems")) {
        c.problems.push_back(problem_spec_from_json(p));
    }
    if (!doc.at("algorithms").is_array()) {
        throw std::invalid_argument("config: 'algorithms' must be an array");
    }
    for (const auto& a : doc.at("algorithms")) {
        AlgorithmEntry entry;
        if (a.is_string()) {
            entry.config = algorithm_by_name(a.get<std::string>());
        } else if (a.is_object()) {
            reject_unknown(a, {"name", "label", "population", "detector_fraction", "zeta"}, "config.algorithms");
            if (!a.contains("name") || !a.at("name").is_string()) {
                throw std::invalid_argument("config.algorithms: each entry needs a string 'name'");
            }
            entry.config = algorithm_by_name(a.at("name").get<std::string>());
            if (a.contains("population")) {
                entry.config.population = as_count(a.at("population"), "population");
            }
            if (a.contains("detector_fraction")) {
                entry.config.detector_fraction = as_real(a.at("detector_fraction"), "detector_fraction");
            }
            if (a.contains("zeta")) {
                entry.config.zeta = as_real(a.at("zeta"), "zeta");
            }
            if (a.contains("label")) {
                if (!a.at("label").is_string()) {
                    throw std::invalid_argument("config.algorithms: 'label' must be a string");
                }
                entry.label = a.at("label").get<std::string>();
            }
        } else {
            throw std::invalid_argument("config.algorithms: entries must be names or objects");
        }
        if (entry.label.empty()) {
            entry.label = entry.config.name;
        }
        c.algorithms.push_back(std::move(entry));
    }
    c.runs = as_count(doc.at("runs"), "runs");
    if (doc.contains("base_seed")) {
        c.base_seed = as_count(doc.at("base_seed"), "base_seed");
    }
    if (doc.contains("changes")) {
        c.changes = as_count(doc.at("changes"), "changes");
    }
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) {
            throw std::invalid_argument("config: 'output_dir' must be a string");
        }
        c.output_dir = doc.at("output_dir").get<std::string>();
    }
    if (doc.contains("metrics")) {
        const auto& m = doc.at("metrics");
        if (!m.is_object()) {
            throw std::invalid_argument("config: 'metrics' must be an object");
        }
        reject_unknown(m, {"igd", "hvd", "mdt", "igd_curve"}, "config.metrics");
        if (m.contains("igd")) {
            c.metrics.igd = as_bool(m.at("igd"), "metrics.igd");
        }
        if (m.contains("hvd")) {
            c.metrics.hvd = as_bool(m.at("hvd"), "metrics.hvd");
        }
        if (m.contains("mdt")) {
            c.metrics.mdt = as_bool(m.at("mdt"), "metrics.mdt");
        }
        if (m.contains("igd_curve")) {
            c.metrics.igd_curve = as_bool(m.at("igd_curve"), "metrics.igd_curve");
        }
    }
    if (doc.contains("refset_count")) {
        c.refset_count = as_count(doc.at("refset_count"), "refset_count");
    }
    if (doc.contains("include_initial_state")) {
        c.include_initial_state = as_bool(doc.at("include_initial_state"), "include_initial_state");
    }
    validate_config(c);
    return c;
}

nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json problems = nlohmann::json::array();
    for (const auto& p : c.problems) {
        problems.push_back(to_json(p));
    }
    nlohmann::json algorithms = nlohmann::json::array();
    for (const auto& a : c.algorithms) {
        algorithms.push_back(algorithm_json(a));
    }
    return {
        {"problems", problems},
        {"algorithms", algorithms},
        {"runs", c.runs},
        {"base_seed", c.base_seed},
        {"changes", c.changes},
        {"output_dir", c.output_dir.string()},
        {"metrics", {{"igd", c.metrics.igd}, {"hvd", c.metrics.hvd}, {"mdt", c.metrics.mdt}, {"igd_curve", c.metrics.igd_curve}}},
        {"refset_count", c.refset_count},
        {"include_initial_state", c.include_initial_state},
    };
}

ExperimentConfig load_experiment(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    return experiment_from_json(doc);
}

std::filesystem::path resolve_cache_dir(const std::filesystem::path& option, const std::filesystem::path& output_dir)
{
    if (!option.empty()) {
        return option;
    }
    if (const char* env = std::getenv("SDP_CACHE_DIR"); env && *env) {
        return env;
    }
    return output_dir / "refsets";
}

std::string format_sci(double v)
{
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "NaN" : (v > 0 ? "Inf" : "-Inf");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4E", v);
    std::string s(buf);
    auto e = s.find('E');
    std::string mantissa = s.substr(0, e);
    int exponent = std::stoi(s.substr(e + 1));
    return mantissa + "E" + (exponent >= 0 ? "+" : "-") + std::to_string(std::abs(exponent));
}

std::string format_number(std::optional<double> v)
{
    if (!v) {
        return "NA";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", *v);
    return buf;
}

void write_metrics_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path)
{
    std::string text = std::string(metrics_schema) + "\n" + metrics_header + "\n";
    for (const auto& r : rows) {
        text += r.run_id + "," + r.problem + "," + std::to_string(r.M) + "," + format_number(r.t) + "," +
                format_number(r.igd) + "," + format_number(r.hvd) + "," + format_number(r.dt) + "\n";
    }
    write_file_atomic(path, text);
}

std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::vector<MetricRow> rows;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            if (line != metrics_header) {
                throw std::invalid_argument(path.string() + ": unexpected header '" + line + "'");
            }
            header = true;
            continue;
        }
        auto cells = split(line, ',');
        if (cells.size() != 7) {
            throw std::invalid_argument(path.string() + ": expected 7 columns in '" + line + "'");
        }
        MetricRow r;
        r.run_id = cells[0];
        r.problem = cells[1];
        r.M = std::stoi(cells[2]);
        r.t = std::stod(cells[3]);
        r.igd = parse_optional(cells[4]);
        r.hvd = parse_optional(cells[5]);
        r.dt = parse_optional(cells[6]);
        rows.push_back(std::move(r));
    }
    if (!header) {
        throw std::invalid_argument(path.string() + ": missing header");
    }
    return rows;
}

TableKind parse_table_kind(const std::string& name)
{
    if (name == "migd") {
        return TableKind::migd;
    }
    if (name == "mhvd") {
        return TableKind::mhvd;
    }
    if (name == "mdt") {
        return TableKind::mdt;
    }
    if (name == "rank") {
        return TableKind::rank;
    }
    throw std::invalid_argument("unknown table kind '" + name + "' (expected migd, mhvd, mdt or rank)");
}

std::string build_summary(const std::vector<MetricRow>& rows, bool include_initial_state)
{
    auto aggs = aggregate_runs(rows, include_initial_state);
    std::vector<std::string> labels, algs;
    for (const auto& a : aggs) {
        labels.push_back(a.label);
        algs.push_back(a.algorithm);
    }
    labels = first_seen(labels);
    algs = first_seen(algs);
    std::string text = std::string(summary_schema) +
                       "\nproblem,M,algorithm,runs,migd_mean,migd_std,mhvd_mean,mhvd_std,mdt_mean,mdt_std\n";
    auto stat = [](const std::vector<double>& v) -> std::string {
        if (v.empty()) {
            return "NA,NA";
        }
        return format_number(mean(v)) + "," + format_number(stddev(v));
    };
    for (const auto& label : labels) {
        auto [problem, M] = split_label(label);
        for (const auto& alg : algs) {
            std::size_t n = static_cast<std::size_t>(std::count_if(
                aggs.begin(), aggs.end(), [&](const RunAggregate& a) { return a.algorithm == alg && a.label == label; }));
            if (n == 0) {
                continue;
            }
            text += problem + "," + M + "," + alg + "," + std::to_string(n) + "," +
                    stat(collect(aggs, alg, label, &RunAggregate::migd)) + "," +
                    stat(collect(aggs, alg, label, &RunAggregate::mhvd)) + "," +
                    stat(collect(aggs, alg, label, &RunAggregate::mdt)) + "\n";
        }
    }
    return text;
}

std::string build_table(const std::vector<MetricRow>& rows, TableKind kind, bool include_initial_state)
{
    auto aggs = aggregate_runs(rows, include_initial_state);
    std::vector<std::string> labels, algs;
    for (const auto& a : aggs) {
        labels.push_back(a.label);
        algs.push_back(a.algorithm);
    }
    labels = first_seen(labels);
    algs = first_seen(algs);

    if (kind == TableKind::rank) {
        std::vector<std::string> problems;
        for (const auto& l : labels) {
            problems.push_back(split_label(l).first);
        }
        problems = first_seen(problems);
        std::vector<std::vector<int>> ranks(algs.size(), std::vector<int>(problems.size(), 1));
        std::vector<int> sums(algs.size(), 0);
        for (std::size_t p = 0; p < problems.size(); ++p) {
            std::vector<int> wins(algs.size(), 0);
            for (const auto& label : labels) {
                if (split_label(label).first != problems[p]) {
                    continue;
                }
                std::vector<std::vector<double>> samples;
                for (const auto& alg : algs) {
                    samples.push_back(collect(aggs, alg, label, &RunAggregate::migd));
                    if (samples.back().size() < 5) {
                        throw std::invalid_argument("rank table needs at least 5 MIGD values per algorithm (" + alg +
                                                    " on " + label + ")");
                    }
                }
                auto w = count_wins(samples);
                for (std::size_t k = 0; k < algs.size(); ++k) {
                    wins[k] += w[k];
                }
            }
            auto r = competition_rank(wins);
            for (std::size_t k = 0; k < algs.size(); ++k) {
                ranks[k][p] = r[k];
                sums[k] += r[k];
            }
        }
        auto avg = average_rank(sums);
        std::string text = "algorithm";
        for (const auto& p : problems) {
            text += "," + p;
        }
        text += ",rank_sum,avg_rank\n";
        for (std::size_t k = 0; k < algs.size(); ++k) {
            text += algs[k];
            for (int r : ranks[k]) {
                text += "," + std::to_string(r);
            }
            text += "," + std::to_string(sums[k]) + "," + std::to_string(avg[k]) + "\n";
        }
        return text;
    }

    auto field = kind == TableKind::migd ? &RunAggregate::migd
                 : kind == TableKind::mhvd ? &RunAggregate::mhvd
                                           : &RunAggregate::mdt;
    std::string text = "problem,M";
    for (const auto& alg : algs) {
        text += "," + alg;
    }
    text += ",best\n";
    for (const auto& label : labels) {
        auto [problem, M] = split_label(label);
        text += problem + "," + M;
        std::string best;
        double best_mean = 0.0;
        for (const auto& alg : algs) {
            auto v = collect(aggs, alg, label, field);
            if (v.empty()) {
                text += ",NA";
                continue;
            }
            double m = mean(v);
            text += "," + format_sci(m) + "(" + format_sci(stddev(v)) + ")";
            if (best.empty() || m < best_mean) {
                best = alg;
                best_mean = m;
            }
        }
        text += "," + (best.empty() ? std::string("NA") : best) + "\n";
    }
    return text;
}

std::filesystem::path cli_table(const std::filesystem::path& results_dir, TableKind kind)
{
    auto metrics_path = results_dir / "metrics.csv";
    if (!std::filesystem::exists(metrics_path)) {
        throw std::runtime_error("missing records: " + metrics_path.string());
    }
    bool include_initial = true;
    auto echo = results_dir / "experiment.json";
    if (std::filesystem::exists(echo)) {
        std::ifstream in(echo);
        auto doc = nlohmann::json::parse(in);
        if (doc.contains("include_initial_state")) {
            include_initial = doc.at("include_initial_state").get<bool>();
        }
    }
    auto rows = read_metrics_csv(metrics_path);
    static const char* names[] = {"table_migd.csv", "table_mhvd.csv", "table_mdt.csv", "rank_migd.csv"};
    auto out = results_dir / names[static_cast<int>(kind)];
    write_file_atomic(out, build_table(rows, kind, include_initial));
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
    validate_config(config);
    const auto out = config.output_dir;
    RefsetCache cache(resolve_cache_dir(options.cache_dir, out));
    ReferenceStore store(cache, config.refset_count, config.metrics.hvd);
    const bool need_refs = config.metrics.igd || config.metrics.hvd || config.metrics.igd_curve;

    std::vector<Problem> problems;
    problems.reserve(config.problems.size());
    for (const auto& spec : config.problems) {
        problems.emplace_back(spec);
    }

    struct Job {
        std::size_t problem, algorithm, run;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < problems.size(); ++p) {
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            for (std::size_t k = 0; k < config.runs; ++k) {
                jobs.push_back({p, a, k});
            }
        }
    }

    ExperimentResult result;
    result.runs.resize(jobs.size());
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0}, done{0};

    auto execute = [&](std::size_t j) {
        const auto& job = jobs[j];
        const Problem& problem = problems[job.problem];
        const auto& alg = config.algorithms[job.algorithm];
        RunOutcome& outcome = result.runs[j];
        outcome.algorithm = alg.label;
        outcome.label = problem.spec().label();
        outcome.run = job.run;
        try {
            Observer observer;
            if (config.metrics.igd_curve) {
                observer = [&](std::size_t, double t, const Population& pop) {
                    std::vector<ObjectiveVector> truth;
                    for (const auto& ind : pop) {
                        truth.push_back(problem.evaluate(ind.x, t));
                    }
                    std::vector<ObjectiveVector> front;
                    auto fronts = nondominated_sort(truth);
                    for (auto i : fronts.front()) {
                        front.push_back(truth[i]);
                    }
                    auto idx = time_index_for(t, problem.spec().severity);
                    const auto& ref = store.get(problem, job.problem, idx, t);
                    outcome.curve.push_back(igd(ref.set.points, front));
                };
            }
            RunRecord rec = run(alg.config, problem, config.base_seed + job.run, Protocol{config.changes}, observer);
            std::string run_id = alg.label + "/" + outcome.label + "/" + std::to_string(job.run);
            for (const auto& snap : rec.snapshots) {
                MetricRow row;
                row.run_id = run_id;
                row.problem = problem.name();
                row.M = problem.active_dims(snap.t).objectives;
                row.t = snap.t;
                if (need_refs && (config.metrics.igd || config.metrics.hvd)) {
                    const auto& ref = store.get(problem, job.problem, snap.time_index, snap.t);
                    if (config.metrics.igd) {
                        row.igd = igd(ref.set.points, snap.front);
                    }
                    if (config.metrics.hvd) {
                        row.hvd = ref.volume - hv(snap.front, ref.refpoint);
                    }
                }
                if (config.metrics.mdt && snap.time_index > 0) {
                    for (const auto& ev : rec.events) {
                        if (ev.change == snap.time_index) {
                            row.dt = detection_time(ev, rec.detectors, static_cast<std::size_t>(problem.spec().frequency));
                        }
                    }
                }
                outcome.rows.push_back(std::move(row));
            }
            outcome.record = std::move(rec);
        } catch (const std::exception& e) {
            outcome.error = e.what();
            outcome.rows.clear();
        }
        std::size_t finished = ++done;
        if (options.log) {
            std::lock_guard<std::mutex> lock(log_mutex);
            *options.log << "[" << finished << "/" << jobs.size() << "] " << outcome.algorithm << " " << outcome.label
                         << " run " << outcome.run << (outcome.error.empty() ? " ok" : " FAILED: " + outcome.error)
                         << "\n";
        }
    };

    std::size_t threads = std::max<std::size_t>(1, options.threads);
    if (threads == 1) {
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            execute(j);
        }
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < jobs.size(); j = next++) {
                    execute(j);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    // outputs, written in job order
    std::vector<MetricRow> all_rows;
    std::string failures;
    for (const auto& r : result.runs) {
        if (!r.error.empty()) {
            failures += r.algorithm + "/" + r.label + "/" + std::to_string(r.run) + ": " + r.error + "\n";
            continue;
        }
        all_rows.insert(all_rows.end(), r.rows.begin(), r.rows.end());
        auto dir = out / "runs" / r.label / r.algorithm / ("run" + std::to_string(r.run));
        const auto& rec = *r.record;
        nlohmann::json meta = {
            {"spec", to_json(rec.spec)},
            {"algorithm", algorithm_json(config.algorithms[jobs[&r - result.runs.data()].algorithm])},
            {"seed", rec.seed},
            {"generations", rec.generations},
            {"changes", config.changes},
            {"detectors", rec.detectors},
            {"evaluations", rec.evaluations},
        };
        write_file_atomic(dir / "meta.json", meta.dump(2) + "\n");
        for (const auto& snap : rec.snapshots) {
            write_file_atomic(dir / "snapshots" / ("t" + std::to_string(snap.time_index) + ".csv"), csv_points(snap.front));
        }
        std::string events = "change,t,detected,evals,dt\n";
        for (const auto& ev : rec.events) {
            double t = static_cast<double>(ev.change) / rec.spec.severity;
            events += std::to_string(ev.change) + "," + format_number(t) + "," + (ev.detected ? "1" : "0") + "," +
                      std::to_string(ev.evals) + "," +
                      format_number(detection_time(ev, rec.detectors, static_cast<std::size_t>(rec.spec.frequency))) +
                      "\n";
        }
        write_file_atomic(dir / "events.csv", events);
    }

    write_file_atomic(out / "experiment.json", to_json(config).dump(2) + "\n");
    write_metrics_csv(all_rows, out / "metrics.csv");
    if (!all_rows.empty()) {
        write_file_atomic(out / "summary.csv", build_summary(all_rows, config.include_initial_state));
        if (config.metrics.igd) {
            write_file_atomic(out / "table_migd.csv", build_table(all_rows, TableKind::migd, config.include_initial_state));
        }
        if (config.metrics.hvd) {
            write_file_atomic(out / "table_mhvd.csv", build_table(all_rows, TableKind::mhvd, config.include_initial_state));
        }
        if (config.metrics.mdt) {
            write_file_atomic(out / "table_mdt.csv", build_table(all_rows, TableKind::mdt, config.include_initial_state));
        }
        if (config.metrics.igd && config.runs >= 5 && result.failures() == 0) {
            write_file_atomic(out / "rank_migd.csv", build_table(all_rows, TableKind::rank, config.include_initial_state));
        }
    }
    if (config.metrics.igd_curve) {
        for (std::size_t p = 0; p < problems.size(); ++p) {
            for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
                std::vector<const RunOutcome*> members;
                for (const auto& r : result.runs) {
                    if (r.error.empty() && r.label == problems[p].spec().label() &&
                        r.algorithm == config.algorithms[a].label) {
                        members.push_back(&r);
                    }
                }
                if (members.empty()) {
                    continue;
                }
                const auto ctx = problems[p].spec().time_context();
                std::string text = "generation,t,mean_igd,std_igd\n";
                for (std::size_t g = 0; g < members.front()->curve.size(); ++g) {
                    std::vector<double> v;
                    for (const auto* m : members) {
                        v.push_back(m->curve[g]);
                    }
                    text += std::to_string(g) + "," + format_number(ctx.time_of(g)) + "," + format_number(mean(v)) +
                            "," + format_number(stddev(v)) + "\n";
                }
                write_file_atomic(out / "curves" /
                                      ("igd_" + problems[p].spec().label() + "_" + config.algorithms[a].label + ".csv"),
                                  text);
            }
        }
    }
    if (!failures.empty()) {
        write_file_atomic(out / "failures.txt", failures);
    } else if (std::filesystem::exists(out / "failures.txt")) {
        std::filesystem::remove(out / "failures.txt");
    }
    return result;
}

} // namespace sdp
