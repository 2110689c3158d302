#ifndef SDP_REFSETS_HPP
#define SDP_REFSETS_HPP

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sdp/core.hpp"
#include "sdp/suite.hpp"

namespace sdp {

/// True-front sample for one (problem, time) pair.
struct ReferenceSet {
    ProblemId problem = ProblemId::SDP1;
    double t = 0.0;
    int M = 2;
    std::vector<ObjectiveVector> points;
    std::size_t per_axis = 0;  ///< sweep resolution finally used
    std::size_t raw_count = 0; ///< points before filtering and thinning
};

/// Per-objective maxima of the set (z_j).
std::vector<double> objective_maxima(const std::vector<ObjectiveVector>& points);

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept;
bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept;

/// Indices (ascending) of the nondominated points. Of a group of identical
/// points only the first is kept.
std::vector<std::size_t> nd_filter_indices(const std::vector<ObjectiveVector>& points);
std::vector<ObjectiveVector> nd_filter(const std::vector<ObjectiveVector>& points);

/// Greedy max-min subsample of `target` points, seeded with the minimiser of
/// every objective. Returns ascending indices; everything is kept when the
/// input is not larger than `target`.
std::vector<std::size_t> farthest_point_indices(const std::vector<ObjectiveVector>& points, std::size_t target);

/// Sweeps the position variables at g = 0, keeps the nondominated part and
/// thins it to `target` points.
ReferenceSet sample_pf(const Problem& problem, double t, std::size_t target = 1000);

void write_csv(const ReferenceSet& set, const std::filesystem::path& path);

/// On-disk store laid out as <root>/<problem>/<key>/t<milli-t>.bin with a
/// .csv twin for plotting.
class RefsetCache {
public:
    explicit RefsetCache(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::filesystem::path path_for(const ProblemSpec& spec, double t, std::size_t target) const;

    /// Empty on a miss; a corrupt entry is reported on stderr and treated as a miss.
    std::optional<ReferenceSet> get(const ProblemSpec& spec, double t, std::size_t target) const;
    void put(const ProblemSpec& spec, std::size_t target, const ReferenceSet& set) const;
    ReferenceSet get_or_create(const Problem& problem, double t, std::size_t target);

    static std::uint64_t key(const ProblemSpec& spec, std::size_t target);

private:
    std::filesystem::path root_;
    std::mutex mutex_;
};

} // namespace sdp

#endif
