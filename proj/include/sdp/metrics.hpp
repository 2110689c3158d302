#ifndef SDP_METRICS_HPP
#define SDP_METRICS_HPP

#include <cstddef>
#include <vector>

#include "sdp/core.hpp"

namespace sdp {

using PointSet = std::vector<ObjectiveVector>;

/// Mean distance from each reference point to its nearest approximation point.
double igd(const PointSet& reference, const PointSet& approx);

/// Exact hypervolume dominated by `points` and bounded by `refpoint`.
/// Points not strictly better than the reference point in every objective
/// contribute nothing.
double hv(const PointSet& points, const std::vector<double>& refpoint);

/// z_j + 0.5 where z_j is the largest j-th objective value in `reference`.
std::vector<double> hv_refpoint(const PointSet& reference);

/// hv(reference) - hv(approx); negative values are returned unchanged.
double hvd(const PointSet& reference, const PointSet& approx, const std::vector<double>& refpoint);

struct DetectionEvent {
    std::size_t change = 0;  ///< time index of the new environment
    bool detected = false;
    std::size_t evals = 0;   ///< detector re-evaluations up to and including the first differing one
};

/// (Eval - 1) / (n_d * tau - 1) for a detected change, 1 otherwise.
double detection_time(const DetectionEvent& event, std::size_t detectors, std::size_t frequency);
double mdt(const std::vector<DetectionEvent>& events, std::size_t detectors, std::size_t frequency);

struct MetricSeries {
    std::vector<double> t;
    std::vector<double> values;

    void push(double time, double value)
    {
        t.push_back(time);
        values.push_back(value);
    }
    /// Arithmetic mean; throws on an empty series.
    double mean() const;
};

inline double migd(const MetricSeries& s) { return s.mean(); }
inline double mhvd(const MetricSeries& s) { return s.mean(); }

struct RankSumResult {
    bool significant = false;
    int direction = 0; ///< -1 when the first sample is better (lower), +1 when the second is
    double u = 0.0;    ///< Mann-Whitney U of the first sample
    double z = 0.0;
    double p = 1.0;
};

/// Two-sided Wilcoxon rank-sum test, normal approximation with tie correction.
/// Each sample needs at least 5 values.
RankSumResult ranksum_test(const std::vector<double>& a, const std::vector<double>& b, double alpha);

/// Pairwise wins for one (problem, M) cell. `samples[k]` holds the per-run
/// metric values of algorithm k; alpha is divided by K - 1.
std::vector<int> count_wins(const std::vector<std::vector<double>>& samples, double alpha = 0.05);

/// Competition ranking (1, 1, 3, ...): more wins is better.
std::vector<int> competition_rank(const std::vector<int>& wins);

/// Unique positions 1..K after sorting the rank sums ascending; ties keep input order.
std::vector<int> average_rank(const std::vector<int>& rank_sums);

double mean(const std::vector<double>& v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(const std::vector<double>& v);
double median(std::vector<double> v);

} // namespace sdp

#endif
