#include "sdp/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sdp/refsets.hpp"

namespace sdp {

namespace {

constexpr double change_tolerance = 1e-12;

bool differs(const ObjectiveVector& a, const ObjectiveVector& b)
{
    if (a.size() != b.size()) {
        return true;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(std::abs(a[i] - b[i]) <= change_tolerance)) {
            return true;
        }
    }
    return false;
}

bool better(const Individual& a, const Individual& b)
{
    if (a.rank != b.rank) {
        return a.rank < b.rank;
    }
    return a.crowding > b.crowding;
}

} // namespace

std::size_t AlgorithmConfig::detector_count() const
{
    double raw = detector_fraction * static_cast<double>(population);
    auto n = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::clamp<std::size_t>(n, 1, population);
}

AlgorithmConfig algorithm_by_name(const std::string& name)
{
    AlgorithmConfig c;
    c.name = name;
    if (name == "dnsga2-a") {
        c.reaction = Reaction::replace_random;
    } else if (name == "dnsga2-b") {
        c.reaction = Reaction::hypermutate;
    } else if (name == "restart") {
        c.reaction = Reaction::restart;
    } else if (name == "nsga2") {
        c.reaction = Reaction::none;
    } else {
        throw std::invalid_argument("unknown algorithm '" + name + "' (expected dnsga2-a, dnsga2-b, restart or nsga2)");
    }
    return c;
}

std::size_t Protocol::generations(const TimeContext& ctx) const
{
    return static_cast<std::size_t>(ctx.warmup) + (changes + 1) * static_cast<std::size_t>(ctx.frequency);
}

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t k)
{
    if (k > n) {
        throw std::invalid_argument("Rng::sample: k exceeds n");
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + index(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<ObjectiveVector>& f)
{
    const std::size_t n = f.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(f[p], f[q])) {
                dominated_by[p].push_back(q);
                ++count[q];
            } else if (dominates(f[q], f[p])) {
                dominated_by[q].push_back(p);
                ++count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (count[p] == 0) {
            fronts[0].push_back(p);
        }
    }
    while (!fronts.back().empty()) {
        std::vector<std::size_t> next;
        for (auto p : fronts.back()) {
            for (auto q : dominated_by[p]) {
                if (--count[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& f, const std::vector<std::size_t>& front)
{
    const std::size_t k = front.size();
    std::vector<double> dist(k, 0.0);
    if (k == 0) {
        return dist;
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (k <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<std::size_t> order(k);
    for (std::size_t m = 0; m < f[front[0]].size(); ++m) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return f[front[a]][m] < f[front[b]][m]; });
        double lo = f[front[order.front()]][m];
        double hi = f[front[order.back()]][m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (hi - lo <= 0.0) {
            continue;
        }
        for (std::size_t i = 1; i + 1 < k; ++i) {
            double gap = f[front[order[i + 1]]][m] - f[front[order[i - 1]]][m];
            dist[order[i]] += gap / (hi - lo);
        }
    }
    return dist;
}

void assign_rank_and_crowding(Population& pop)
{
    std::vector<ObjectiveVector> f;
    f.reserve(pop.size());
    for (const auto& ind : pop) {
        f.push_back(ind.f);
    }
    auto fronts = nondominated_sort(f);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        auto cd = crowding_distance(f, fronts[r]);
        for (std::size_t i = 0; i < fronts[r].size(); ++i) {
            pop[fronts[r][i]].rank = static_cast<int>(r);
            pop[fronts[r][i]].crowding = cd[i];
        }
    }
}

Population select_survivors(Population combined, std::size_t n)
{
    std::vector<ObjectiveVector> f;
    f.reserve(combined.size());
    for (const auto& ind : combined) {
        f.push_back(ind.f);
    }
    auto fronts = nondominated_sort(f);
    Population next;
    next.reserve(n);
    for (std::size_t r = 0; r < fronts.size() && next.size() < n; ++r) {
        auto cd = crowding_distance(f, fronts[r]);
        std::vector<std::size_t> order(fronts[r].size());
        std::iota(order.begin(), order.end(), 0);
        if (next.size() + fronts[r].size() > n) {
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
        }
        for (auto i : order) {
            if (next.size() == n) {
                break;
            }
            Individual ind = std::move(combined[fronts[r][i]]);
            ind.rank = static_cast<int>(r);
            ind.crowding = cd[i];
            next.push_back(std::move(ind));
        }
    }
    // crowding within the truncated last front is stale; recompute for mating
    assign_rank_and_crowding(next);
    return next;
}

double reflect_into(double v, double lo, double hi) noexcept
{
    if (!(v == v)) {
        return lo;
    }
    double width = hi - lo;
    if (v < lo) {
        v = lo + std::fmod(lo - v, 2.0 * width);
        if (v > hi) {
            v = 2.0 * hi - v;
        }
    } else if (v > hi) {
        v = hi - std::fmod(v - hi, 2.0 * width);
        if (v < lo) {
            v = 2.0 * lo - v;
        }
    }
    return std::clamp(v, lo, hi);
}

void sbx_crossover(DecisionVector& a, DecisionVector& b, const Bounds& bounds, double eta, Rng& rng)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (rng.uniform() > 0.5) {
            continue;
        }
        if (std::abs(a[i] - b[i]) <= 1e-14) {
            continue;
        }
        double lo = bounds.lower[i], hi = bounds.upper[i];
        double y1 = std::min(a[i], b[i]);
        double y2 = std::max(a[i], b[i]);
        double u = rng.uniform();
        auto spread = [&](double beta) {
            double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            if (u <= 1.0 / alpha) {
                return std::pow(u * alpha, 1.0 / (eta + 1.0));
            }
            return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
        };
        double bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        double c1 = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
        double bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        double c2 = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
        c1 = reflect_into(c1, lo, hi);
        c2 = reflect_into(c2, lo, hi);
        if (rng.uniform() <= 0.5) {
            a[i] = c2;
            b[i] = c1;
        } else {
            a[i] = c1;
            b[i] = c2;
        }
    }
}

void polynomial_mutation(DecisionVector& x, const Bounds& bounds, double rate, double eta, Rng& rng)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rng.uniform() > rate) {
            continue;
        }
        double lo = bounds.lower[i], hi = bounds.upper[i];
        double y = x[i];
        double d1 = (y - lo) / (hi - lo);
        double d2 = (hi - y) / (hi - lo);
        double u = rng.uniform();
        double power = 1.0 / (eta + 1.0);
        double dq;
        if (u < 0.5) {
            double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
            dq = std::pow(val, power) - 1.0;
        } else {
            double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            dq = 1.0 - std::pow(val, power);
        }
        x[i] = reflect_into(y + dq * (hi - lo), lo, hi);
    }
}

DecisionVector random_decision(const Bounds& bounds, Rng& rng)
{
    DecisionVector x(bounds.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
    }
    return x;
}

RunRecord run(const AlgorithmConfig& config, const Problem& problem, std::uint64_t seed, const Protocol& protocol,
              const Observer& observer)
{
    if (config.population < 4) {
        throw std::invalid_argument("population must be at least 4");
    }
    if (!(config.detector_fraction > 0.0 && config.detector_fraction <= 1.0)) {
        throw std::invalid_argument("detector_fraction must lie in (0, 1]");
    }
    if (!(config.zeta >= 0.0 && config.zeta <= 1.0)) {
        throw std::invalid_argument("zeta must lie in [0, 1]");
    }
    const TimeContext ctx = problem.spec().time_context();
    const std::size_t N = config.population;
    const std::size_t G = protocol.generations(ctx);
    const std::size_t nd = config.detector_count();

    RunRecord rec;
    rec.algorithm = config.name;
    rec.spec = problem.spec();
    rec.seed = seed;
    rec.generations = G;
    rec.detectors = nd;

    Rng rng(seed);
    auto evaluate = [&](const DecisionVector& x, double t) {
        ++rec.evaluations;
        return problem.evaluate(x, t);
    };
    auto evaluate_all = [&](Population& pop, double t) {
        for (auto& ind : pop) {
            ind.f = evaluate(ind.x, t);
        }
        assign_rank_and_crowding(pop);
    };

    double t = ctx.time_of(0);
    std::size_t idx = ctx.time_index(0);
    Bounds bounds = problem.bounds(t);
    Population pop(N);
    for (auto& ind : pop) {
        ind.x = random_decision(bounds, rng);
    }
    evaluate_all(pop, t);

    bool window_open = false;
    DetectionEvent pending;
    std::size_t window_evals = 0;

    for (std::size_t tau = 0; tau < G; ++tau) {
        t = ctx.time_of(tau);
        std::size_t now = ctx.time_index(tau);
        bool resized = false;
        if (now != idx) {
            idx = now;
            bounds = problem.bounds(t);
            window_open = true;
            pending = DetectionEvent{idx, false, 0};
            window_evals = 0;
            for (auto& ind : pop) {
                if (ind.x.size() == bounds.size()) {
                    continue;
                }
                std::size_t old = ind.x.size();
                ind.x.resize(bounds.size());
                for (std::size_t i = old; i < ind.x.size(); ++i) {
                    ind.x[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
                }
                resized = true;
            }
        }

        bool detected_now = false;
        for (auto d : rng.sample(N, nd)) {
            auto fresh = evaluate(pop[d].x, t);
            if (window_open) {
                ++window_evals;
            }
            if (differs(fresh, pop[d].f) && !detected_now) {
                detected_now = true;
                if (window_open && !pending.detected) {
                    pending.detected = true;
                    pending.evals = window_evals;
                }
            }
        }
        if (detected_now) {
            if (window_open && pending.detected && (rec.events.empty() || rec.events.back().change != pending.change)) {
                rec.events.push_back(pending);
            }
            std::size_t count = 0;
            switch (config.reaction) {
            case Reaction::none:
                break;
            case Reaction::replace_random:
                count = static_cast<std::size_t>(std::ceil(config.zeta * static_cast<double>(N) - 1e-9));
                for (auto i : rng.sample(N, count)) {
                    pop[i].x = random_decision(bounds, rng);
                }
                break;
            case Reaction::hypermutate:
                count = static_cast<std::size_t>(std::ceil(config.zeta * static_cast<double>(N) - 1e-9));
                for (auto i : rng.sample(N, count)) {
                    polynomial_mutation(pop[i].x, bounds, 1.0, config.eta_m, rng);
                }
                break;
            case Reaction::restart:
                for (auto& ind : pop) {
                    ind.x = random_decision(bounds, rng);
                }
                break;
            }
            evaluate_all(pop, t);
        } else if (resized || std::any_of(pop.begin(), pop.end(), [&](const Individual& ind) {
                       return ind.f.size() != pop.front().f.size();
                   })) {
            evaluate_all(pop, t);
        }

        // variation
        Population offspring;
        offspring.reserve(N + 1);
        const double rate = 1.0 / static_cast<double>(bounds.size());
        while (offspring.size() < N) {
            auto pick = [&]() -> const Individual& {
                const auto& a = pop[rng.index(N)];
                const auto& b = pop[rng.index(N)];
                return better(b, a) ? b : a;
            };
            DecisionVector c1 = pick().x;
            DecisionVector c2 = pick().x;
            sbx_crossover(c1, c2, bounds, config.eta_c, rng);
            polynomial_mutation(c1, bounds, rate, config.eta_m, rng);
            polynomial_mutation(c2, bounds, rate, config.eta_m, rng);
            offspring.push_back({std::move(c1), {}, 0, 0.0});
            if (offspring.size() < N) {
                offspring.push_back({std::move(c2), {}, 0, 0.0});
            }
        }
        for (auto& ind : offspring) {
            ind.f = evaluate(ind.x, t);
        }
        Population combined = std::move(pop);
        for (auto& ind : offspring) {
            combined.push_back(std::move(ind));
        }
        if (std::any_of(combined.begin(), combined.end(),
                        [&](const Individual& ind) { return ind.f.size() != combined.back().f.size(); })) {
            for (auto& ind : combined) {
                ind.f = evaluate(ind.x, t);
            }
        }
        pop = select_survivors(std::move(combined), N);

        bool last_of_state = (tau + 1 == G) || ctx.time_index(tau + 1) != idx;
        if (last_of_state) {
            if (window_open && !pending.detected) {
                rec.events.push_back(pending);
            }
            window_open = false;
            std::vector<ObjectiveVector> truth;
            truth.reserve(N);
            for (const auto& ind : pop) {
                truth.push_back(problem.evaluate(ind.x, t));
            }
            Snapshot snap;
            snap.time_index = idx;
            snap.t = t;
            auto fronts = nondominated_sort(truth);
            for (auto i : fronts.front()) {
                snap.front.push_back(truth[i]);
            }
            rec.snapshots.push_back(std::move(snap));
        }
        if (observer) {
            observer(tau, t, pop);
        }
    }
    return rec;
}

} // namespace sdp
