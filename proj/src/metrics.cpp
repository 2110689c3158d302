#include "sdp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sdp/refsets.hpp"

namespace sdp {

namespace {

void require_dims(const PointSet& points, std::size_t m, const char* who)
{
    for (const auto& p : points) {
        if (p.size() != m) {
            throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(m) +
                                        " objectives, got " + std::to_string(p.size()));
        }
    }
}

double hv2(PointSet pts, const std::vector<double>& r)
{
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    double area = 0.0;
    double ceiling = r[1];
    for (const auto& p : pts) {
        if (p[1] < ceiling) {
            area += (r[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    return area;
}

double inclusive(const ObjectiveVector& p, const std::vector<double>& r, std::size_t d)
{
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        v *= r[j] - p[j];
    }
    return v;
}

// pts hold exactly d objectives, are mutually nondominated and inside r.
double wfg(PointSet pts, const std::vector<double>& r, std::size_t d)
{
    if (pts.empty()) {
        return 0.0;
    }
    if (pts.size() == 1) {
        return inclusive(pts[0], r, d);
    }
    if (d == 2) {
        return hv2(std::move(pts), r);
    }
    std::sort(pts.begin(), pts.end(), [d](const auto& a, const auto& b) { return a[d - 1] > b[d - 1]; });
    double total = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto& p = pts[k];
        double depth = r[d - 1] - p[d - 1];
        if (depth <= 0.0) {
            continue;
        }
        PointSet limit;
        limit.reserve(pts.size() - k - 1);
        for (std::size_t j = k + 1; j < pts.size(); ++j) {
            ObjectiveVector w(d - 1);
            for (std::size_t i = 0; i + 1 < d; ++i) {
                w[i] = std::max(p[i], pts[j][i]);
            }
            limit.push_back(std::move(w));
        }
        double slice = inclusive(p, r, d - 1) - wfg(nd_filter(limit), r, d - 1);
        total += depth * slice;
    }
    return total;
}

} // namespace

double igd(const PointSet& reference, const PointSet& approx)
{
    if (reference.empty()) {
        throw std::invalid_argument("igd: empty reference set");
    }
    if (approx.empty()) {
        throw std::invalid_argument("igd: empty approximation set");
    }
    const std::size_t m = reference.front().size();
    require_dims(reference, m, "igd");
    require_dims(approx, m, "igd");
    double sum = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : approx) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                double d = r[j] - a[j];
                s += d * d;
            }
            best = std::min(best, s);
        }
        sum += std::sqrt(best);
    }
    return sum / static_cast<double>(reference.size());
}

double hv(const PointSet& points, const std::vector<double>& refpoint)
{
    const std::size_t d = refpoint.size();
    if (d < 1) {
        throw std::invalid_argument("hv: empty reference point");
    }
    require_dims(points, d, "hv");
    PointSet inside;
    for (const auto& p : points) {
        bool ok = true;
        for (std::size_t j = 0; j < d; ++j) {
            if (!(p[j] < refpoint[j])) {
                ok = false;
                break;
            }
        }
        if (ok) {
            inside.push_back(p);
        }
    }
    if (inside.empty()) {
        return 0.0;
    }
    if (d == 1) {
        double best = inside.front()[0];
        for (const auto& p : inside) {
            best = std::min(best, p[0]);
        }
        return refpoint[0] - best;
    }
    return wfg(nd_filter(inside), refpoint, d);
}

std::vector<double> hv_refpoint(const PointSet& reference)
{
    auto z = objective_maxima(reference);
    for (auto& v : z) {
        v += 0.5;
    }
    return z;
}

double hvd(const PointSet& reference, const PointSet& approx, const std::vector<double>& refpoint)
{
    return hv(reference, refpoint) - hv(approx, refpoint);
}

double detection_time(const DetectionEvent& event, std::size_t detectors, std::size_t frequency)
{
    std::size_t budget = detectors * frequency;
    if (budget <= 1) {
        throw std::invalid_argument("mdt: detector budget n_d * frequency must exceed 1");
    }
    if (!event.detected) {
        return 1.0;
    }
    if (event.evals < 1 || event.evals > budget) {
        throw std::invalid_argument("mdt: detection count " + std::to_string(event.evals) + " outside [1, " +
                                    std::to_string(budget) + "]");
    }
    return static_cast<double>(event.evals - 1) / static_cast<double>(budget - 1);
}

double mdt(const std::vector<DetectionEvent>& events, std::size_t detectors, std::size_t frequency)
{
    if (events.empty()) {
        throw std::invalid_argument("mdt: no change events");
    }
    double sum = 0.0;
    for (const auto& e : events) {
        sum += detection_time(e, detectors, frequency);
    }
    return sum / static_cast<double>(events.size());
}

double MetricSeries::mean() const
{
    if (values.empty()) {
        throw std::invalid_argument("metric series is empty");
    }
    return sdp::mean(values);
}

double mean(const std::vector<double>& v)
{
    if (v.empty()) {
        throw std::invalid_argument("mean of an empty sample");
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v)
{
    if (v.size() < 2) {
        return 0.0;
    }
    double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v)
{
    if (v.empty()) {
        throw std::invalid_argument("median of an empty sample");
    }
    std::sort(v.begin(), v.end());
    std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

RankSumResult ranksum_test(const std::vector<double>& a, const std::vector<double>& b, double alpha)
{
    if (a.size() < 5 || b.size() < 5) {
        throw std::invalid_argument("ranksum_test: each sample needs at least 5 values");
    }
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n);
    for (double v : a) {
        pooled.emplace_back(v, 0);
    }
    for (double v : b) {
        pooled.emplace_back(v, 1);
    }
    std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    double rank_a = 0.0, tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) {
            ++j;
        }
        double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second == 0) {
                rank_a += avg;
            }
        }
        double tcount = static_cast<double>(j - i);
        tie_term += tcount * tcount * tcount - tcount;
        i = j;
    }

    RankSumResult res;
    double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2), dn = static_cast<double>(n);
    res.u = rank_a - dn1 * (dn1 + 1.0) / 2.0;
    double mu = dn1 * dn2 / 2.0;
    double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (var <= 0.0) {
        return res;
    }
    res.z = (res.u - mu) / std::sqrt(var);
    res.p = std::erfc(std::abs(res.z) / std::sqrt(2.0));
    res.significant = res.p < alpha;

    double ma = median(a), mb = median(b);
    if (ma < mb) {
        res.direction = -1;
    } else if (ma > mb) {
        res.direction = 1;
    } else {
        double mean_rank_a = rank_a / dn1;
        double mean_rank_b = (dn * (dn + 1.0) / 2.0 - rank_a) / dn2;
        res.direction = mean_rank_a < mean_rank_b ? -1 : (mean_rank_a > mean_rank_b ? 1 : 0);
    }
    if (res.direction == 0) {
        res.significant = false;
    }
    return res;
}

std::vector<int> count_wins(const std::vector<std::vector<double>>& samples, double alpha)
{
    const std::size_t K = samples.size();
    std::vector<int> wins(K, 0);
    if (K < 2) {
        return wins;
    }
    double level = alpha / static_cast<double>(K - 1);
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i + 1; j < K; ++j) {
            auto r = ranksum_test(samples[i], samples[j], level);
            if (!r.significant) {
                continue;
            }
            ++wins[r.direction < 0 ? i : j];
        }
    }
    return wins;
}

std::vector<int> competition_rank(const std::vector<int>& wins)
{
    std::vector<int> rank(wins.size(), 1);
    for (std::size_t i = 0; i < wins.size(); ++i) {
        for (std::size_t j = 0; j < wins.size(); ++j) {
            if (wins[j] > wins[i]) {
                ++rank[i];
            }
        }
    }
    return rank;
}

std::vector<int> average_rank(const std::vector<int>& rank_sums)
{
    std::vector<std::size_t> order(rank_sums.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rank_sums[a] < rank_sums[b]; });
    std::vector<int> pos(rank_sums.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        pos[order[k]] = static_cast<int>(k + 1);
    }
    return pos;
}

} // namespace sdp
