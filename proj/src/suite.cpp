#include "sdp/suite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sdp/components.hpp"

namespace sdp {

namespace cmp = components;
using components::Vec;

namespace {

constexpr double pi = std::numbers::pi;

struct NameEntry {
    ProblemId id;
    const char* name;
};

constexpr NameEntry names[] = {
    {ProblemId::SDP1, "SDP1"},   {ProblemId::SDP2, "SDP2"},   {ProblemId::SDP3, "SDP3"},
    {ProblemId::SDP4, "SDP4"},   {ProblemId::SDP5, "SDP5"},   {ProblemId::SDP6, "SDP6"},
    {ProblemId::SDP7, "SDP7"},   {ProblemId::SDP8, "SDP8"},   {ProblemId::SDP9, "SDP9"},
    {ProblemId::SDP10, "SDP10"}, {ProblemId::SDP11, "SDP11"}, {ProblemId::SDP12, "SDP12"},
    {ProblemId::SDP13, "SDP13"}, {ProblemId::SDP14, "SDP14"}, {ProblemId::SDP15, "SDP15"},
    {ProblemId::FDA1, "FDA1"},   {ProblemId::DMOP2, "dMOP2"},
};

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string spec_error(const ProblemSpec& spec, const std::string& what)
{
    return to_string(spec.id) + ": " + what;
}

double half_sin(double t)
{
    return std::sin(0.5 * pi * t);
}

// |arctan(cot(3 pi t^2))| / pi, written without the cot singularity.
double sdp9_target(double t)
{
    double u = 3.0 * t * t;
    return std::abs(0.5 - (u - std::floor(u)));
}

int draw_count(const RandomStream& rng, std::uint32_t pid, StreamTag tag, std::size_t idx, int lo, int hi)
{
    double r = rng.uniform({pid, tag, idx, 0});
    return lo + static_cast<int>(std::floor(r * (hi - lo)));
}

bool uses_wide_positions(ProblemId id)
{
    return id == ProblemId::SDP1 || id == ProblemId::SDP2;
}

} // namespace

std::string to_string(ProblemId id)
{
    for (const auto& e : names) {
        if (e.id == id) {
            return e.name;
        }
    }
    throw std::invalid_argument("unknown problem id " + std::to_string(static_cast<std::uint32_t>(id)));
}

ProblemId parse_problem_id(const std::string& name)
{
    auto key = lower(name);
    for (const auto& e : names) {
        if (lower(e.name) == key) {
            return e.id;
        }
    }
    throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<ProblemId> all_problem_ids()
{
    std::vector<ProblemId> ids;
    for (const auto& e : names) {
        ids.push_back(e.id);
    }
    return ids;
}

std::string ProblemSpec::label() const
{
    return to_string(id) + "-M" + std::to_string(M);
}

void validate(const ProblemSpec& spec)
{
    TimeContext check(spec.severity, spec.frequency, spec.warmup);
    (void)check;
    if (spec.M < 2) {
        throw std::invalid_argument(spec_error(spec, "M must be at least 2, got " + std::to_string(spec.M)));
    }
    if (spec.n < spec.M) {
        throw std::invalid_argument(spec_error(spec, "n must be at least M (n=" + std::to_string(spec.n) +
                                                         ", M=" + std::to_string(spec.M) + ")"));
    }
    switch (spec.id) {
    case ProblemId::SDP12:
        if (!(spec.M <= spec.ranges.n_l && spec.ranges.n_l <= spec.ranges.n_u)) {
            throw std::invalid_argument(spec_error(spec, "variable range needs M <= n_l <= n_u (n_l=" +
                                                             std::to_string(spec.ranges.n_l) + ", n_u=" +
                                                             std::to_string(spec.ranges.n_u) + ")"));
        }
        break;
    case ProblemId::SDP13:
        if (!(2 <= spec.ranges.M_l && spec.ranges.M_l <= spec.ranges.M_u)) {
            throw std::invalid_argument(spec_error(spec, "objective range needs 2 <= M_l <= M_u (M_l=" +
                                                             std::to_string(spec.ranges.M_l) + ", M_u=" +
                                                             std::to_string(spec.ranges.M_u) + ")"));
        }
        if (spec.n < spec.ranges.M_u) {
            throw std::invalid_argument(spec_error(spec, "n must be at least M_u"));
        }
        break;
    case ProblemId::FDA1:
    case ProblemId::DMOP2:
        if (spec.M != 2) {
            throw std::invalid_argument(spec_error(spec, "defined for M = 2 only"));
        }
        break;
    default:
        break;
    }
    if (spec.diversity_variant && uses_wide_positions(spec.id)) {
        throw std::invalid_argument(spec_error(spec, "diversity variant needs position variables in [0, 1]"));
    }
}

nlohmann::json to_json(const ProblemSpec& spec)
{
    nlohmann::json doc = {
        {"id", to_string(spec.id)},
        {"M", spec.M},
        {"n", spec.n},
        {"severity", spec.severity},
        {"frequency", spec.frequency},
        {"warmup", spec.warmup},
        {"seed", spec.seed},
        {"diversity_variant", spec.diversity_variant},
    };
    if (spec.id == ProblemId::SDP12) {
        doc["ranges"] = {{"n_l", spec.ranges.n_l}, {"n_u", spec.ranges.n_u}};
    } else if (spec.id == ProblemId::SDP13) {
        doc["ranges"] = {{"M_l", spec.ranges.M_l}, {"M_u", spec.ranges.M_u}};
    }
    return doc;
}

ProblemSpec problem_spec_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw std::invalid_argument("problem spec must be a JSON object");
    }
    static const char* known[] = {"id", "M", "n", "severity", "frequency", "warmup", "seed", "diversity_variant", "ranges"};
    for (const auto& item : doc.items()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return item.key() == k; }) ==
            std::end(known)) {
            throw std::invalid_argument("problem spec: unknown field '" + item.key() + "'");
        }
    }
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) {
            throw std::invalid_argument(std::string("problem spec: missing field '") + key + "'");
        }
        return doc.at(key);
    };
    auto as_int = [](const nlohmann::json& v, const char* key) {
        if (!v.is_number_integer()) {
            throw std::invalid_argument(std::string("problem spec: '") + key + "' must be an integer");
        }
        return v.get<int>();
    };

    ProblemSpec spec;
    const auto& id = require("id");
    if (!id.is_string()) {
        throw std::invalid_argument("problem spec: 'id' must be a string");
    }
    spec.id = parse_problem_id(id.get<std::string>());
    spec.M = as_int(require("M"), "M");
    spec.n = as_int(require("n"), "n");
    spec.severity = as_int(require("severity"), "severity");
    spec.frequency = as_int(require("frequency"), "frequency");
    if (doc.contains("warmup")) {
        spec.warmup = as_int(doc.at("warmup"), "warmup");
    }
    if (doc.contains("seed")) {
        const auto& s = doc.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw std::invalid_argument("problem spec: 'seed' must be a non-negative integer");
        }
        spec.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("diversity_variant")) {
        if (!doc.at("diversity_variant").is_boolean()) {
            throw std::invalid_argument("problem spec: 'diversity_variant' must be a boolean");
        }
        spec.diversity_variant = doc.at("diversity_variant").get<bool>();
    }
    if (doc.contains("ranges")) {
        const auto& r = doc.at("ranges");
        if (!r.is_object()) {
            throw std::invalid_argument("problem spec: 'ranges' must be an object");
        }
        for (const auto& item : r.items()) {
            const auto& k = item.key();
            if (k == "n_l") {
                spec.ranges.n_l = as_int(item.value(), "ranges.n_l");
            } else if (k == "n_u") {
                spec.ranges.n_u = as_int(item.value(), "ranges.n_u");
            } else if (k == "M_l") {
                spec.ranges.M_l = as_int(item.value(), "ranges.M_l");
            } else if (k == "M_u") {
                spec.ranges.M_u = as_int(item.value(), "ranges.M_u");
            } else {
                throw std::invalid_argument("problem spec: unknown field 'ranges." + k + "'");
            }
        }
    } else if (spec.id == ProblemId::SDP12 || spec.id == ProblemId::SDP13) {
        throw std::invalid_argument("problem spec: " + to_string(spec.id) + " requires 'ranges'");
    }
    validate(spec);
    return spec;
}

std::uint64_t landscape_hash(const ProblemSpec& spec)
{
    std::int64_t fields[] = {
        static_cast<std::int64_t>(spec.id), spec.M, spec.n, spec.severity,
        static_cast<std::int64_t>(spec.seed), spec.diversity_variant ? 1 : 0,
        spec.ranges.n_l, spec.ranges.n_u, spec.ranges.M_l, spec.ranges.M_u,
    };
    return fnv1a(fields, sizeof(fields));
}

Problem::Problem(ProblemSpec spec)
    : spec_(spec), rng_(spec.seed), walk_cache_(std::make_unique<WalkCache>())
{
    validate(spec_);
    if (spec_.id == ProblemId::SDP1) {
        walk(0);
    }
}

Problem make_problem(const ProblemSpec& spec)
{
    return Problem(spec);
}

const std::vector<double>& Problem::walk(std::size_t time_index) const
{
    std::lock_guard<std::mutex> lock(walk_cache_->mutex);
    auto& steps = walk_cache_->steps;
    auto n = static_cast<std::size_t>(spec_.n);
    auto M = static_cast<std::size_t>(spec_.M);
    auto pid = static_cast<std::uint32_t>(spec_.id);
    if (steps.empty()) {
        std::vector<double> initial(n, 0.0);
        for (std::size_t i = M; i < n; ++i) {
            initial[i] = static_cast<double>(i + 1) / static_cast<double>(n);
        }
        steps.push_back(std::move(initial));
    }
    while (steps.size() <= time_index) {
        std::size_t k = steps.size();
        double tk = static_cast<double>(k) / spec_.severity;
        std::vector<double> next = steps.back();
        for (std::size_t i = M; i < n; ++i) {
            double step = rng_.uniform({pid, StreamTag::walk_step, k, i});
            double fallback = rng_.uniform({pid, StreamTag::walk_fallback, k, i});
            next[i] = cmp::ps_walk_step(next[i], step, fallback, tk);
        }
        steps.push_back(std::move(next));
    }
    // deque never relocates existing elements on push_back
    return steps[time_index];
}

DynamicState Problem::state(std::size_t time_index) const
{
    DynamicState s;
    s.time_index = time_index;
    s.t = static_cast<double>(time_index) / spec_.severity;
    s.var_count = spec_.n;
    s.obj_count = spec_.M;
    s.degeneration = spec_.M - 1;
    s.rotation = 1;
    auto pid = static_cast<std::uint32_t>(spec_.id);
    switch (spec_.id) {
    case ProblemId::SDP1:
        s.walk = walk(time_index);
        break;
    case ProblemId::SDP4: {
        double r = rng_.uniform({pid, StreamTag::mix_sign, time_index, 0});
        double sign = (r > 0.5) ? 1.0 : (r < 0.5 ? -1.0 : 0.0);
        s.mix_w = sign * std::floor(6.0 * std::abs(half_sin(s.t)));
        break;
    }
    case ProblemId::SDP7: {
        double r = rng_.uniform({pid, StreamTag::global_basin, time_index, 0});
        s.global_basin = std::max(1, static_cast<int>(std::ceil(5.0 * r)));
        break;
    }
    case ProblemId::SDP12:
        s.var_count = draw_count(rng_, pid, StreamTag::variable_count, time_index, spec_.ranges.n_l, spec_.ranges.n_u);
        break;
    case ProblemId::SDP13:
        s.obj_count = draw_count(rng_, pid, StreamTag::objective_count, time_index, spec_.ranges.M_l, spec_.ranges.M_u);
        break;
    case ProblemId::SDP14:
        s.degeneration = 1 + static_cast<int>(std::floor(std::abs((spec_.M - 2) * std::cos(0.5 * pi * s.t))));
        break;
    case ProblemId::SDP15:
        s.degeneration = static_cast<int>(rng_.randint({pid, StreamTag::degeneration_level, time_index, 0}, 1, spec_.M - 1));
        s.rotation = static_cast<int>(rng_.randint({pid, StreamTag::degeneration_rotation, time_index, 0}, 1, spec_.M - 1));
        break;
    default:
        break;
    }
    return s;
}

DynamicState Problem::state_at(double t) const
{
    DynamicState s = state(time_index_for(t, spec_.severity));
    s.t = t;
    if (spec_.id == ProblemId::SDP14) {
        s.degeneration = 1 + static_cast<int>(std::floor(std::abs((spec_.M - 2) * std::cos(0.5 * pi * t))));
    }
    if (spec_.id == ProblemId::SDP4) {
        double r = rng_.uniform({static_cast<std::uint32_t>(spec_.id), StreamTag::mix_sign, s.time_index, 0});
        double sign = (r > 0.5) ? 1.0 : (r < 0.5 ? -1.0 : 0.0);
        s.mix_w = sign * std::floor(6.0 * std::abs(half_sin(t)));
    }
    return s;
}

Dims Problem::active_dims(double t) const
{
    switch (spec_.id) {
    case ProblemId::SDP12:
        return {spec_.M, state_at(t).var_count};
    case ProblemId::SDP13:
        return {state_at(t).obj_count, spec_.n};
    default:
        return {spec_.M, spec_.n};
    }
}

Bounds Problem::bounds(double t) const
{
    auto dims = active_dims(t);
    auto n = static_cast<std::size_t>(dims.variables);
    auto M = static_cast<std::size_t>(spec_.M);
    Bounds b{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
    auto fill = [&](std::size_t from, std::size_t to, double lo, double hi) {
        for (std::size_t i = from; i < std::min(to, n); ++i) {
            b.lower[i] = lo;
            b.upper[i] = hi;
        }
    };
    switch (spec_.id) {
    case ProblemId::SDP1:
        fill(0, M, 1.0, 4.0);
        break;
    case ProblemId::SDP2:
        fill(0, M - 1, 1.0, 4.0);
        fill(M - 1, n, -1.0, 1.0);
        break;
    case ProblemId::SDP3:
    case ProblemId::SDP4:
    case ProblemId::SDP8:
    case ProblemId::SDP10:
    case ProblemId::SDP12:
    case ProblemId::FDA1:
    case ProblemId::DMOP2:
        fill(M - 1, n, -1.0, 1.0);
        break;
    default:
        break;
    }
    return b;
}

std::size_t Problem::position_count(double t) const
{
    switch (spec_.id) {
    case ProblemId::SDP1:
        return static_cast<std::size_t>(spec_.M);
    case ProblemId::SDP13:
        return static_cast<std::size_t>(state_at(t).obj_count - 1);
    default:
        return static_cast<std::size_t>(spec_.M - 1);
    }
}

Bounds Problem::position_bounds(double t) const
{
    Bounds full = bounds(t);
    auto k = position_count(t);
    return {std::vector<double>(full.lower.begin(), full.lower.begin() + k),
            std::vector<double>(full.upper.begin(), full.upper.begin() + k)};
}

std::vector<std::size_t> Problem::free_positions(double t) const
{
    auto k = position_count(t);
    std::vector<std::size_t> free;
    if (spec_.id == ProblemId::SDP14) {
        auto s = state_at(t);
        for (int i = 0; i < s.degeneration; ++i) {
            free.push_back(static_cast<std::size_t>(i));
        }
        return free;
    }
    if (spec_.id == ProblemId::SDP15) {
        auto s = state_at(t);
        for (int i = 1; i <= s.degeneration; ++i) {
            free.push_back(static_cast<std::size_t>((s.rotation + i - 1) % (spec_.M - 1)));
        }
        std::sort(free.begin(), free.end());
        return free;
    }
    for (std::size_t i = 0; i < k; ++i) {
        free.push_back(i);
    }
    return free;
}

std::vector<double> Problem::apply_diversity(std::span<const double> x, std::size_t count, double t) const
{
    std::vector<double> v(x.begin(), x.end());
    if (spec_.diversity_variant) {
        auto head = cmp::diversity_transform(std::span<const double>(v.data(), count), t);
        std::copy(head.begin(), head.end(), v.begin());
    }
    return v;
}

ObjectiveVector Problem::evaluate(std::span<const double> x, double t) const
{
    auto dims = active_dims(t);
    if (x.size() != static_cast<std::size_t>(dims.variables)) {
        throw std::invalid_argument(name() + ": expected " + std::to_string(dims.variables) +
                                    " decision variables at t=" + std::to_string(t) + ", got " +
                                    std::to_string(x.size()));
    }
    Bounds b = bounds(t);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= b.lower[i] && x[i] <= b.upper[i])) {
            throw std::out_of_range(name() + ": variable " + std::to_string(i) + " = " + std::to_string(x[i]) +
                                    " outside [" + std::to_string(b.lower[i]) + ", " +
                                    std::to_string(b.upper[i]) + "]");
        }
    }

    const int M = spec_.M;
    const auto Mu = static_cast<std::size_t>(M);
    const std::size_t n = x.size();
    auto v = apply_diversity(x, position_count(t), t);
    std::span<const double> xs(v);
    auto head = xs.subspan(0, Mu - 1);
    auto scaled = [](Vec mu, double factor) {
        for (auto& m : mu) {
            m *= factor;
        }
        return mu;
    };
    auto reversed = [](Vec mu, double factor) {
        std::reverse(mu.begin(), mu.end());
        for (auto& m : mu) {
            m *= factor;
        }
        return mu;
    };

    switch (spec_.id) {
    case ProblemId::SDP1: {
        const auto& w = walk(time_index_for(t, spec_.severity));
        double g = 0.0;
        for (std::size_t i = Mu; i < n; ++i) {
            double d = v[i] - w[i];
            g += d * d;
        }
        return scaled(cmp::mu_product(xs.subspan(0, Mu), M), 1.0 + g);
    }
    case ProblemId::SDP2: {
        double target = std::cos(t + 2.0 * v[0]);
        double sum = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - target;
            sum += d * d;
        }
        double g = std::sin(pi / 8.0 * v[0]) * sum;
        return scaled(cmp::mu_recip(head, M, t), 1.0 + g);
    }
    case ProblemId::SDP3: {
        double k = std::floor(5.0 * std::abs(std::sin(pi * t)));
        double c = std::cos(t);
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double y = v[i] - c;
            g += 4.0 * y * y - std::cos(2.0 * k * pi * y) + 1.0;
        }
        return scaled(cmp::mu_knee(head, M, k), 1.0 + g);
    }
    case ProblemId::SDP4: {
        double w = state_at(t).mix_w;
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - std::cos(t + v[0] + v[i - 1]);
            g += d * d;
        }
        auto f = cmp::mu_mix(head, M, w);
        f[Mu - 1] *= 1.0 + g;
        return f;
    }
    case ProblemId::SDP5: {
        double G = std::abs(half_sin(t));
        double g = G;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - 0.5 * G * v[0];
            g += d * d;
        }
        return reversed(cmp::sphere_from_angles(cmp::y_shrink(head, t), M), 1.0 + g);
    }
    case ProblemId::SDP6: {
        double alpha = 0.5 * std::abs(std::sin(pi * t));
        double k = 10.0 * std::cos(2.5 * pi * t);
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - 0.5;
            g += d * d * (1.0 + std::abs(std::cos(8.0 * pi * v[i])));
        }
        return reversed(cmp::mu_detect(head, M, alpha, k), 1.0 + g);
    }
    case ProblemId::SDP7: {
        int k = state_at(t).global_basin;
        double g = cmp::g_multi(xs.subspan(Mu - 1), k);
        return scaled(cmp::mu_linear(head, M), 0.5 + g);
    }
    case ProblemId::SDP8: {
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - std::sin(t * v[0]);
            g += d * d;
        }
        g += cmp::g_nsc(head, M, t);
        return reversed(cmp::mu_sphere(head, M), 1.0 + g);
    }
    case ProblemId::SDP9: {
        double G = std::abs(half_sin(t));
        double k = std::floor(6.0 * half_sin(t));
        double target = sdp9_target(t);
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - target;
            g += d * d;
        }
        auto f = cmp::mu_disc1(head, M, k);
        f[Mu - 1] *= 1.0 + g;
        for (auto& fi : f) {
            fi += G;
        }
        return f;
    }
    case ProblemId::SDP10: {
        double r = std::floor(10.0 * std::abs(half_sin(t)));
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - std::sin(v[0] + 0.5 * pi * t);
            g += d * d;
        }
        auto f = cmp::mu_disc2(head, M, r);
        f[Mu - 1] *= 1.0 + g;
        return f;
    }
    case ProblemId::SDP11: {
        double g = cmp::g_favour(xs, t, M);
        return scaled(cmp::mu_sphere(head, M), 1.0 + g);
    }
    case ProblemId::SDP12: {
        double nt = static_cast<double>(n);
        double amp = std::sin(nt * t) * std::sin(2.0 * pi * v[0]);
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double d = v[i] - amp;
            g += d * d;
        }
        return scaled(cmp::mu_linear(head, M), 1.0 + g);
    }
    case ProblemId::SDP13: {
        int Mt = dims.objectives;
        auto Mtu = static_cast<std::size_t>(Mt);
        double g = 0.0;
        for (std::size_t i = Mtu; i < n; ++i) {
            double idx = static_cast<double>(i + 1);
            double d = v[i] - idx * t / (Mt + idx * t);
            g += d * d;
        }
        return scaled(cmp::mu_dobj(xs.subspan(0, Mtu - 1), Mt), 1.0 + g);
    }
    case ProblemId::SDP14: {
        int d = state_at(t).degeneration;
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double e = v[i] - 0.5;
            g += e * e;
        }
        return scaled(cmp::mu_ldeg(head, M, d, t, g), 1.0 + g);
    }
    case ProblemId::SDP15: {
        auto s = state_at(t);
        double target = static_cast<double>(s.degeneration) / (M - 1);
        double g = 0.0;
        for (std::size_t i = Mu - 1; i < n; ++i) {
            double e = v[i] - target;
            g += e * e;
        }
        auto f = cmp::mu_sdeg(head, M, s.degeneration, s.rotation, t, g);
        double factor = 1.0;
        for (auto& fi : f) {
            factor *= 1.0 + g;
            fi *= factor;
        }
        return f;
    }
    case ProblemId::FDA1:
        return fda1_evaluate(xs, t);
    case ProblemId::DMOP2:
        return dmop2_evaluate(xs, t);
    }
    throw std::logic_error("unhandled problem id");
}

DecisionVector Problem::optimal_decision(std::span<const double> position, double t) const
{
    auto k = position_count(t);
    if (position.size() != k) {
        throw std::invalid_argument(name() + ": expected " + std::to_string(k) + " position variables, got " +
                                    std::to_string(position.size()));
    }
    auto dims = active_dims(t);
    auto n = static_cast<std::size_t>(dims.variables);
    auto Mu = static_cast<std::size_t>(spec_.M);
    std::vector<double> raw(position.begin(), position.end());
    auto p = apply_diversity(raw, k, t);
    DecisionVector x(n, 0.0);
    std::copy(position.begin(), position.end(), x.begin());

    auto fill = [&](std::size_t from, double value) {
        for (std::size_t i = from; i < n; ++i) {
            x[i] = value;
        }
    };
    switch (spec_.id) {
    case ProblemId::SDP1: {
        const auto& w = walk(time_index_for(t, spec_.severity));
        for (std::size_t i = Mu; i < n; ++i) {
            x[i] = w[i];
        }
        break;
    }
    case ProblemId::SDP2:
        fill(Mu - 1, std::cos(t + 2.0 * p[0]));
        break;
    case ProblemId::SDP3:
        fill(Mu - 1, std::cos(t));
        break;
    case ProblemId::SDP4: {
        // g reads the transformed predecessor, so the recursion runs on p
        double prev = p[Mu - 2];
        for (std::size_t i = Mu - 1; i < n; ++i) {
            x[i] = std::cos(t + p[0] + prev);
            prev = x[i];
        }
        break;
    }
    case ProblemId::SDP5:
        fill(Mu - 1, 0.5 * std::abs(half_sin(t)) * p[0]);
        break;
    case ProblemId::SDP6:
    case ProblemId::SDP14:
        fill(Mu - 1, 0.5);
        break;
    case ProblemId::SDP7:
        fill(Mu - 1, 2.0 * (state_at(t).global_basin - 1) / 10.0);
        break;
    case ProblemId::SDP8:
        fill(Mu - 1, std::sin(t * p[0]));
        break;
    case ProblemId::SDP9:
        fill(Mu - 1, sdp9_target(t));
        break;
    case ProblemId::SDP10:
        fill(Mu - 1, std::sin(p[0] + 0.5 * pi * t));
        break;
    case ProblemId::SDP11:
        fill(Mu - 1, std::abs(half_sin(t)));
        break;
    case ProblemId::SDP12:
        fill(Mu - 1, std::sin(static_cast<double>(n) * t) * std::sin(2.0 * pi * p[0]));
        break;
    case ProblemId::SDP13: {
        auto Mt = static_cast<std::size_t>(dims.objectives);
        x[Mt - 1] = 0.0;
        for (std::size_t i = Mt; i < n; ++i) {
            double idx = static_cast<double>(i + 1);
            x[i] = idx * t / (static_cast<double>(Mt) + idx * t);
        }
        break;
    }
    case ProblemId::SDP15:
        fill(Mu - 1, static_cast<double>(state_at(t).degeneration) / (spec_.M - 1));
        break;
    case ProblemId::FDA1:
    case ProblemId::DMOP2:
        fill(1, half_sin(t));
        break;
    }
    return x;
}

std::vector<DecisionVector> Problem::front_positions(double t, std::size_t per_axis) const
{
    if (per_axis < 2) {
        throw std::invalid_argument("front_positions: need at least 2 samples per axis");
    }
    auto k = position_count(t);
    Bounds pb = position_bounds(t);
    double K = spec_.diversity_variant ? std::exp(10.0 * half_sin(t)) : 1.0;
    auto axis_value = [&](std::size_t var, std::size_t step) {
        double z = static_cast<double>(step) / static_cast<double>(per_axis - 1);
        if (spec_.diversity_variant) {
            // uniform in the transformed coordinate, so the front is covered evenly
            return std::pow(z, 1.0 / K);
        }
        return pb.lower[var] + (pb.upper[var] - pb.lower[var]) * z;
    };

    // Each entry: which coordinates are swept, and the base vector for the rest.
    struct Sweep {
        std::vector<std::size_t> axes;
        DecisionVector base;
    };
    std::vector<Sweep> sweeps;
    if (spec_.id == ProblemId::SDP1) {
        // the product front is scale-invariant, so the faces x_j = 1 cover it
        for (std::size_t face = 0; face < k; ++face) {
            Sweep s{{}, DecisionVector(k, 1.0)};
            for (std::size_t j = 0; j < k; ++j) {
                if (j != face) {
                    s.axes.push_back(j);
                }
            }
            sweeps.push_back(std::move(s));
        }
    } else {
        Sweep s{free_positions(t), DecisionVector(k, 0.5)};
        sweeps.push_back(std::move(s));
    }

    std::vector<DecisionVector> out;
    for (const auto& s : sweeps) {
        std::size_t total = 1;
        for (std::size_t a = 0; a < s.axes.size(); ++a) {
            total *= per_axis;
        }
        for (std::size_t code = 0; code < total; ++code) {
            DecisionVector pos = s.base;
            std::size_t rest = code;
            for (auto axis : s.axes) {
                pos[axis] = axis_value(axis, rest % per_axis);
                rest /= per_axis;
            }
            out.push_back(std::move(pos));
        }
    }
    return out;
}

ObjectiveVector fda1_evaluate(std::span<const double> x, double t)
{
    if (x.size() < 2) {
        throw std::invalid_argument("FDA1: need at least 2 decision variables, got " + std::to_string(x.size()));
    }
    double G = half_sin(t);
    double g = 1.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        double d = x[i] - G;
        g += d * d;
    }
    double f1 = x[0];
    return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

ObjectiveVector dmop2_evaluate(std::span<const double> x, double t)
{
    if (x.size() < 2) {
        throw std::invalid_argument("dMOP2: need at least 2 decision variables, got " + std::to_string(x.size()));
    }
    double G = half_sin(t);
    double H = 0.75 * half_sin(t) + 1.25;
    double g = 1.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        double d = x[i] - G;
        g += d * d;
    }
    double f1 = x[0];
    return {f1, g * (1.0 - std::pow(f1 / g, H))};
}

} // namespace sdp
