#ifndef SDP_SUITE_HPP
#define SDP_SUITE_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdp/core.hpp"

namespace sdp {

enum class ProblemId : std::uint32_t {
    SDP1 = 1, SDP2, SDP3, SDP4, SDP5, SDP6, SDP7, SDP8,
    SDP9, SDP10, SDP11, SDP12, SDP13, SDP14, SDP15,
    FDA1, DMOP2,
};

std::string to_string(ProblemId id);
/// Accepts "SDP1".."SDP15", "FDA1", "dMOP2" (case-insensitive).
ProblemId parse_problem_id(const std::string& name);
std::vector<ProblemId> all_problem_ids();

struct ProblemSpec {
    struct Ranges {
        int n_l = 0;
        int n_u = 0;
        int M_l = 0;
        int M_u = 0;
    };

    ProblemId id = ProblemId::SDP1;
    int M = 2;
    int n = 10;
    int severity = 10;
    int frequency = 10;
    int warmup = 50;
    std::uint64_t seed = 0;
    bool diversity_variant = false;
    Ranges ranges;

    TimeContext time_context() const { return {severity, frequency, warmup}; }
    /// e.g. "SDP1-M2"; unique per (id, M) within an experiment.
    std::string label() const;
};

/// Throws std::invalid_argument naming the violated constraint.
void validate(const ProblemSpec& spec);

nlohmann::json to_json(const ProblemSpec& spec);
/// Strict parser: id, M, n, severity and frequency are required; warmup,
/// seed, diversity_variant and ranges are optional. Unknown fields throw.
ProblemSpec problem_spec_from_json(const nlohmann::json& doc);
/// Hash of every field that shapes the landscape (frequency and warmup excluded).
std::uint64_t landscape_hash(const ProblemSpec& spec);

struct Dims {
    int objectives = 0;
    int variables = 0;
};

/// Randomised and time-stepped quantities of one environment.
struct DynamicState {
    std::size_t time_index = 0;
    double t = 0.0;
    std::vector<double> walk; ///< optimum of each distance variable (SDP1), length n
    double mix_w = 0.0;       ///< SDP4 knee parameter
    int global_basin = 1;     ///< SDP7
    int var_count = 0;        ///< SDP12
    int obj_count = 0;        ///< SDP13
    int degeneration = 1;     ///< SDP14, SDP15
    int rotation = 1;         ///< SDP15
};

class Problem {
public:
    explicit Problem(ProblemSpec spec);

    const ProblemSpec& spec() const noexcept { return spec_; }
    ProblemId id() const noexcept { return spec_.id; }
    std::string name() const { return to_string(spec_.id); }

    Dims active_dims(double t) const;
    Bounds bounds(double t) const;
    ObjectiveVector evaluate(std::span<const double> x, double t) const;

    DynamicState state(std::size_t time_index) const;
    DynamicState state_at(double t) const;

    /// Number of position variables the front is parametrised by.
    std::size_t position_count(double t) const;
    Bounds position_bounds(double t) const;
    /// Indices of position variables that move along the front (all but the
    /// pinned coordinates of the degenerate problems).
    std::vector<std::size_t> free_positions(double t) const;
    /// A Pareto-optimal decision vector with the given position variables.
    DecisionVector optimal_decision(std::span<const double> position, double t) const;
    /// Uniform sweep of position vectors covering the whole front.
    std::vector<DecisionVector> front_positions(double t, std::size_t per_axis) const;

private:
    const std::vector<double>& walk(std::size_t time_index) const;
    std::vector<double> apply_diversity(std::span<const double> x, std::size_t count, double t) const;

    struct WalkCache {
        std::mutex mutex;
        std::deque<std::vector<double>> steps;
    };

    ProblemSpec spec_;
    RandomStream rng_;
    std::unique_ptr<WalkCache> walk_cache_;
};

Problem make_problem(const ProblemSpec& spec);

ObjectiveVector fda1_evaluate(std::span<const double> x, double t);
ObjectiveVector dmop2_evaluate(std::span<const double> x, double t);

} // namespace sdp

#endif
