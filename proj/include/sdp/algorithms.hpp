#ifndef SDP_ALGORITHMS_HPP
#define SDP_ALGORITHMS_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sdp/core.hpp"
#include "sdp/metrics.hpp"
#include "sdp/suite.hpp"

namespace sdp {

enum class Reaction {
    none,           ///< plain NSGA-II, changes only trigger re-evaluation
    replace_random, ///< DNSGA-II-A
    hypermutate,    ///< DNSGA-II-B
    restart,        ///< reinitialise everything
};

struct AlgorithmConfig {
    std::string name = "dnsga2-a";
    Reaction reaction = Reaction::replace_random;
    std::size_t population = 100;
    double detector_fraction = 0.1;
    double zeta = 0.2;
    double eta_c = 20.0;
    double eta_m = 20.0;

    std::size_t detector_count() const;
};

/// Maps "dnsga2-a", "dnsga2-b", "restart", "nsga2" to a default configuration.
AlgorithmConfig algorithm_by_name(const std::string& name);

struct Protocol {
    std::size_t changes = 30;

    /// warmup + (changes + 1) * frequency: the run ends with the last
    /// environment having had a full window.
    std::size_t generations(const TimeContext& ctx) const;
};

struct Individual {
    DecisionVector x;
    ObjectiveVector f;
    int rank = 0;
    double crowding = 0.0;
};

using Population = std::vector<Individual>;

struct Snapshot {
    std::size_t time_index = 0;
    double t = 0.0;
    std::vector<ObjectiveVector> front;
};

struct RunRecord {
    std::string algorithm;
    ProblemSpec spec;
    std::uint64_t seed = 0;
    std::size_t generations = 0;
    std::size_t detectors = 0;
    std::size_t evaluations = 0;
    std::vector<Snapshot> snapshots;     ///< one per environment, taken at its last generation
    std::vector<DetectionEvent> events;  ///< one per change
};

using Observer = std::function<void(std::size_t tau, double t, const Population&)>;

/// std::mt19937_64 with a fixed bits-to-double mapping so that results do
/// not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
    /// k distinct indices out of n (partial Fisher-Yates).
    std::vector<std::size_t> sample(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

/// Fronts of indices, best first.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<ObjectiveVector>& f);
/// Crowding distance of every member of `front`; extremes get infinity.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& f, const std::vector<std::size_t>& front);
/// Sorts, assigns rank and crowding, and keeps the best `n`.
Population select_survivors(Population combined, std::size_t n);
void assign_rank_and_crowding(Population& pop);

/// Mirrors a value back into [lo, hi].
double reflect_into(double v, double lo, double hi) noexcept;
void sbx_crossover(DecisionVector& a, DecisionVector& b, const Bounds& bounds, double eta, Rng& rng);
void polynomial_mutation(DecisionVector& x, const Bounds& bounds, double rate, double eta, Rng& rng);
DecisionVector random_decision(const Bounds& bounds, Rng& rng);

RunRecord run(const AlgorithmConfig& config, const Problem& problem, std::uint64_t seed,
              const Protocol& protocol = {}, const Observer& observer = {});

} // namespace sdp

#endif
