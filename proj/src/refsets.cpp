#include "sdp/refsets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sdp {

namespace {

constexpr char magic[8] = {'S', 'D', 'P', 'R', 'E', 'F', 0, 0};
constexpr std::uint32_t format_version = 1;
constexpr std::size_t prethin_limit = 20000;
constexpr int max_refinements = 3;

double squared_distance(const ObjectiveVector& a, const ObjectiveVector& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t axis_count(std::size_t target, std::size_t dims)
{
    double root = std::pow(static_cast<double>(target), 1.0 / static_cast<double>(dims));
    double nearest = std::round(root);
    double base = std::abs(root - nearest) < 1e-9 ? nearest : std::ceil(root);
    return static_cast<std::size_t>(base) * 3;
}

long milli(double t)
{
    return std::lround(t * 1000.0);
}

std::uint64_t content_hash(const std::vector<ObjectiveVector>& points)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& p : points) {
        h = fnv1a(p.data(), p.size() * sizeof(double), h);
    }
    return h;
}

template <class T>
void put_raw(std::ostream& out, const T& v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get_raw(std::istream& in, T& v)
{
    return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

std::string csv_text(const ReferenceSet& set)
{
    std::string text;
    for (int j = 0; j < set.M; ++j) {
        text += (j ? ",f" : "f") + std::to_string(j + 1);
    }
    text += '\n';
    char buf[32];
    for (const auto& p : set.points) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", p[j]);
            if (j) {
                text += ',';
            }
            text += buf;
        }
        text += '\n';
    }
    return text;
}

} // namespace

std::vector<double> objective_maxima(const std::vector<ObjectiveVector>& points)
{
    if (points.empty()) {
        throw std::invalid_argument("objective_maxima: empty point set");
    }
    std::vector<double> z = points.front();
    for (const auto& p : points) {
        for (std::size_t j = 0; j < z.size(); ++j) {
            z[j] = std::max(z[j], p[j]);
        }
    }
    return z;
}

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept
{
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        if (a[i] < b[i]) {
            strict = true;
        }
    }
    return strict;
}

std::vector<std::size_t> nd_filter_indices(const std::vector<ObjectiveVector>& points)
{
    if (points.empty()) {
        return {};
    }
    const std::size_t m = points.front().size();
    for (const auto& p : points) {
        if (p.size() != m) {
            throw std::invalid_argument("nd_filter: inconsistent objective counts");
        }
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

    // After the lexicographic sort a point can only be weakly dominated by
    // one that precedes it.
    std::vector<std::size_t> kept;
    if (m == 2) {
        double best = std::numeric_limits<double>::infinity();
        for (auto i : order) {
            if (points[i][1] < best) {
                best = points[i][1];
                kept.push_back(i);
            }
        }
    } else {
        for (auto i : order) {
            bool dominated = false;
            for (auto k : kept) {
                if (weakly_dominates(points[k], points[i])) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                kept.push_back(i);
            }
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<ObjectiveVector> nd_filter(const std::vector<ObjectiveVector>& points)
{
    std::vector<ObjectiveVector> out;
    for (auto i : nd_filter_indices(points)) {
        out.push_back(points[i]);
    }
    return out;
}

std::vector<std::size_t> farthest_point_indices(const std::vector<ObjectiveVector>& points, std::size_t target)
{
    std::vector<std::size_t> all(points.size());
    std::iota(all.begin(), all.end(), 0);
    if (points.size() <= target) {
        return all;
    }
    if (target == 0) {
        return {};
    }
    const std::size_t m = points.front().size();
    std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
    std::vector<char> chosen(points.size(), 0);
    std::vector<std::size_t> picked;
    auto take = [&](std::size_t idx) {
        chosen[idx] = 1;
        picked.push_back(idx);
        for (std::size_t i = 0; i < points.size(); ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(points[i], points[idx]));
        }
    };
    for (std::size_t j = 0; j < m && picked.size() < target; ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (points[i][j] < points[best][j]) {
                best = i;
            }
        }
        if (!chosen[best]) {
            take(best);
        }
    }
    while (picked.size() < target) {
        std::size_t best = points.size();
        double far = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!chosen[i] && nearest[i] > far) {
                far = nearest[i];
                best = i;
            }
        }
        take(best);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

ReferenceSet sample_pf(const Problem& problem, double t, std::size_t target)
{
    if (target == 0) {
        throw std::invalid_argument("sample_pf: target count must be positive");
    }
    auto dims = problem.active_dims(t);
    std::size_t free = problem.free_positions(t).size();
    if (problem.id() == ProblemId::SDP1) {
        free = problem.position_count(t) - 1;
    }
    std::size_t per_axis = axis_count(target, std::max<std::size_t>(free, 1));

    ReferenceSet set;
    set.problem = problem.id();
    set.t = t;
    set.M = dims.objectives;
    const std::size_t enough = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(target)));
    for (int attempt = 0;; ++attempt) {
        std::vector<ObjectiveVector> raw;
        for (const auto& pos : problem.front_positions(t, per_axis)) {
            raw.push_back(problem.evaluate(problem.optimal_decision(pos, t), t));
        }
        set.raw_count = raw.size();
        if (raw.size() > prethin_limit) {
            // evenly strided subsample keeps the filter quadratic cost bounded
            std::size_t stride = (raw.size() + prethin_limit - 1) / prethin_limit;
            std::vector<ObjectiveVector> kept;
            for (std::size_t i = 0; i < raw.size(); i += stride) {
                kept.push_back(std::move(raw[i]));
            }
            raw = std::move(kept);
        }
        auto front = nd_filter(raw);
        if (front.empty()) {
            throw std::logic_error("sample_pf: empty front for " + problem.name() + " at t=" + std::to_string(t));
        }
        if (front.size() >= enough || attempt == max_refinements) {
            set.per_axis = per_axis;
            for (auto i : farthest_point_indices(front, target)) {
                set.points.push_back(std::move(front[i]));
            }
            return set;
        }
        per_axis *= 2;
    }
}

void write_csv(const ReferenceSet& set, const std::filesystem::path& path)
{
    write_file_atomic(path, csv_text(set));
}

RefsetCache::RefsetCache(std::filesystem::path root) : root_(std::move(root)) {}

std::uint64_t RefsetCache::key(const ProblemSpec& spec, std::size_t target)
{
    std::uint64_t h = landscape_hash(spec);
    std::uint64_t count = target;
    return fnv1a(&count, sizeof(count), h);
}

std::filesystem::path RefsetCache::path_for(const ProblemSpec& spec, double t, std::size_t target) const
{
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(key(spec, target)));
    return root_ / to_string(spec.id) / hex / ("t" + std::to_string(milli(t)) + ".bin");
}

std::optional<ReferenceSet> RefsetCache::get(const ProblemSpec& spec, double t, std::size_t target) const
{
    auto path = path_for(spec, t, target);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    auto corrupt = [&](const char* why) -> std::optional<ReferenceSet> {
        std::cerr << "warning: discarding corrupt reference set " << path.string() << " (" << why << ")\n";
        return std::nullopt;
    };
    char head[8];
    if (!in.read(head, sizeof(head)) || std::memcmp(head, magic, sizeof(magic)) != 0) {
        return corrupt("bad magic");
    }
    std::uint32_t version = 0;
    std::uint64_t stored_key = 0, count = 0, per_axis = 0, raw_count = 0, hash = 0;
    double stored_t = 0.0;
    std::uint32_t M = 0;
    if (!get_raw(in, version) || !get_raw(in, stored_key) || !get_raw(in, stored_t) || !get_raw(in, M) ||
        !get_raw(in, count) || !get_raw(in, per_axis) || !get_raw(in, raw_count) || !get_raw(in, hash)) {
        return corrupt("truncated header");
    }
    if (version != format_version) {
        return corrupt("unsupported version");
    }
    if (stored_key != key(spec, target) || milli(stored_t) != milli(t)) {
        return std::nullopt;
    }
    if (M < 2 || count > (1u << 26)) {
        return corrupt("implausible header");
    }
    ReferenceSet set;
    set.problem = spec.id;
    set.t = stored_t;
    set.M = static_cast<int>(M);
    set.per_axis = per_axis;
    set.raw_count = raw_count;
    set.points.assign(count, ObjectiveVector(M));
    for (auto& p : set.points) {
        if (!in.read(reinterpret_cast<char*>(p.data()), static_cast<std::streamsize>(M * sizeof(double)))) {
            return corrupt("truncated payload");
        }
    }
    if (content_hash(set.points) != hash) {
        return corrupt("content hash mismatch");
    }
    return set;
}

void RefsetCache::put(const ProblemSpec& spec, std::size_t target, const ReferenceSet& set) const
{
    std::ostringstream out(std::ios::binary);
    out.write(magic, sizeof(magic));
    put_raw(out, format_version);
    put_raw(out, key(spec, target));
    put_raw(out, set.t);
    put_raw(out, static_cast<std::uint32_t>(set.M));
    put_raw(out, static_cast<std::uint64_t>(set.points.size()));
    put_raw(out, static_cast<std::uint64_t>(set.per_axis));
    put_raw(out, static_cast<std::uint64_t>(set.raw_count));
    put_raw(out, content_hash(set.points));
    for (const auto& p : set.points) {
        out.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
    }
    auto path = path_for(spec, set.t, target);
    write_file_atomic(path, out.str());
    auto csv = path;
    csv.replace_extension(".csv");
    write_file_atomic(csv, csv_text(set));
}

ReferenceSet RefsetCache::get_or_create(const Problem& problem, double t, std::size_t target)
{
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto hit = get(problem.spec(), t, target)) {
        return std::move(*hit);
    }
    auto set = sample_pf(problem, t, target);
    put(problem.spec(), target, set);
    return set;
}

} // namespace sdp
