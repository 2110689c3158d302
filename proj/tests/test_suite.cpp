#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "sdp/suite.hpp"

using namespace sdp;
using doctest::Approx;

namespace {

ProblemSpec make_spec(ProblemId id, int M, int n = 10)
{
    ProblemSpec s;
    s.id = id;
    s.M = M;
    s.n = n;
    s.seed = 11;
    if (id == ProblemId::SDP12) {
        s.ranges.n_l = std::max(M, 10);
        s.ranges.n_u = 20;
    }
    if (id == ProblemId::SDP13) {
        s.ranges.M_l = 2;
        s.ranges.M_u = 5;
    }
    return s;
}

std::vector<double> times()
{
    std::vector<double> ts;
    for (int k = 0; k <= 30; ++k) {
        ts.push_back(k / 10.0);
    }
    return ts;
}

} // namespace

TEST_CASE("problem names round-trip")
{
    for (auto id : all_problem_ids()) {
        CHECK(parse_problem_id(to_string(id)) == id);
    }
    CHECK(parse_problem_id("sdp7") == ProblemId::SDP7);
    CHECK(parse_problem_id("DMOP2") == ProblemId::DMOP2);
    CHECK_THROWS_AS(parse_problem_id("SDP16"), std::invalid_argument);
    CHECK(all_problem_ids().size() == 17);
}

TEST_CASE("decision bounds follow the problem table")
{
    Problem sdp1(make_spec(ProblemId::SDP1, 2));
    auto b = sdp1.bounds(0.0);
    for (int i = 0; i < 2; ++i) {
        CHECK(b.lower[i] == 1.0);
        CHECK(b.upper[i] == 4.0);
    }
    for (int i = 2; i < 10; ++i) {
        CHECK(b.lower[i] == 0.0);
        CHECK(b.upper[i] == 1.0);
    }

    Problem sdp10(make_spec(ProblemId::SDP10, 3));
    b = sdp10.bounds(0.0);
    for (int i = 0; i < 2; ++i) {
        CHECK(b.lower[i] == 0.0);
        CHECK(b.upper[i] == 1.0);
    }
    for (int i = 2; i < 10; ++i) {
        CHECK(b.lower[i] == -1.0);
        CHECK(b.upper[i] == 1.0);
    }

    Problem sdp2(make_spec(ProblemId::SDP2, 3));
    b = sdp2.bounds(0.0);
    CHECK(b.lower[0] == 1.0);
    CHECK(b.upper[1] == 4.0);
    CHECK(b.lower[2] == -1.0);
    CHECK(b.upper[9] == 1.0);

    Problem sdp11(make_spec(ProblemId::SDP11, 3));
    b = sdp11.bounds(0.7);
    for (int i = 0; i < 10; ++i) {
        CHECK(b.lower[i] == 0.0);
        CHECK(b.upper[i] == 1.0);
    }
}

TEST_CASE("changing dimensions")
{
    Problem sdp5(make_spec(ProblemId::SDP5, 3));
    for (double t : times()) {
        auto d = sdp5.active_dims(t);
        CHECK(d.objectives == 3);
        CHECK(d.variables == 10);
    }

    Problem sdp13(make_spec(ProblemId::SDP13, 2));
    std::set<int> seen;
    for (std::size_t k = 0; k < 200; ++k) {
        double t = k / 10.0;
        int Mt = sdp13.active_dims(t).objectives;
        CHECK(Mt == sdp13.active_dims(t).objectives);
        CHECK(Mt >= 2);
        CHECK(Mt <= 5);
        seen.insert(Mt);
        std::vector<double> pos(Mt - 1, 0.3);
        CHECK(sdp13.evaluate(sdp13.optimal_decision(pos, t), t).size() == static_cast<std::size_t>(Mt));
    }
    CHECK(seen.size() >= 3);

    Problem sdp12(make_spec(ProblemId::SDP12, 2));
    bool found = false;
    for (std::size_t k = 0; k < 200 && !found; ++k) {
        double t = k / 10.0;
        if (sdp12.active_dims(t).variables == 14) {
            found = true;
            CHECK(sdp12.bounds(t).size() == 14);
            CHECK(sdp12.optimal_decision(std::vector<double>{0.2}, t).size() == 14);
            CHECK_THROWS_AS(sdp12.evaluate(std::vector<double>(10, 0.0), t), std::invalid_argument);
        }
    }
    CHECK(found);
}

TEST_CASE("variable counts of SDP12 spread over their range")
{
    Problem p(make_spec(ProblemId::SDP12, 2));
    for (std::size_t k = 0; k < 50; ++k) {
        int n = p.state(k).var_count;
        CHECK(n >= 10);
        CHECK(n <= 20);
    }
    std::map<int, int> counts;
    const int steps = 2000;
    for (std::size_t k = 0; k < steps; ++k) {
        ++counts[p.state(k).var_count];
    }
    // values are drawn from 10..19
    CHECK(counts.size() == 10);
    for (const auto& [n, c] : counts) {
        CHECK(n >= 10);
        CHECK(n < 20);
        CHECK(c >= 160);
        CHECK(c <= 240);
    }
}

TEST_CASE("Pareto-optimal decisions give g = 0 and lie on the analytic front")
{
    std::mt19937_64 rng(99);
    for (auto id : all_problem_ids()) {
        std::vector<int> Ms{2, 3, 5};
        if (id == ProblemId::FDA1 || id == ProblemId::DMOP2) {
            Ms = {2};
        }
        for (int M : Ms) {
            Problem p(make_spec(id, M));
            CAPTURE(to_string(id));
            CAPTURE(M);
            for (double t : {0.0, 0.1, 0.5, 1.0, 1.7, 2.5, 3.0}) {
                CAPTURE(t);
                for (int k = 0; k < 20; ++k) {
                    auto pos = oracle::random_position(p, t, rng);
                    auto x = oracle::ps(p, pos, t);
                    auto lib = p.optimal_decision(pos, t);
                    REQUIRE(lib.size() == x.size());
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        REQUIRE(std::abs(lib[i] - x[i]) <= 1e-12);
                    }
                    auto f = p.evaluate(x, t);
                    REQUIRE(oracle::pf_residual(p, f, t) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("moving off the optimal set makes objectives worse")
{
    std::mt19937_64 rng(5);
    for (auto id : all_problem_ids()) {
        if (id == ProblemId::SDP7 || id == ProblemId::SDP1) {
            continue;
        }
        Problem p(make_spec(id, 2));
        double t = 0.4;
        auto pos = oracle::random_position(p, t, rng);
        auto x = oracle::ps(p, pos, t);
        auto f0 = p.evaluate(x, t);
        auto b = p.bounds(t);
        auto y = x;
        std::size_t last = y.size() - 1;
        y[last] = y[last] + 0.2 <= b.upper[last] ? y[last] + 0.2 : y[last] - 0.2;
        auto f1 = p.evaluate(y, t);
        CAPTURE(to_string(id));
        bool no_better = true, some_worse = false;
        for (std::size_t i = 0; i < f0.size(); ++i) {
            no_better = no_better && f1[i] >= f0[i] - 1e-12;
            some_worse = some_worse || f1[i] > f0[i] + 1e-12;
        }
        CHECK(no_better);
        CHECK(some_worse);
    }
}

TEST_CASE("SDP5 at t = 0 with zero distance variables")
{
    Problem p(make_spec(ProblemId::SDP5, 3));
    std::vector<double> x(10, 0.0);
    auto f = p.evaluate(x, 0.0);
    CHECK(f[0] == Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(f[1]) <= 1e-15);
    CHECK(std::abs(f[2]) <= 1e-15);
}

TEST_CASE("SDP1 at t = 0 on the initial optimum")
{
    Problem p(make_spec(ProblemId::SDP1, 2));
    std::vector<double> x(10);
    x[0] = x[1] = 2.0;
    for (int i = 3; i <= 10; ++i) {
        x[i - 1] = i / 10.0;
    }
    auto f = p.evaluate(x, 0.0);
    CHECK(f[0] == Approx(1.0).epsilon(1e-15));
    CHECK(f[1] == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("SDP1 walk: direct query equals sequential replay")
{
    auto spec = make_spec(ProblemId::SDP1, 3);
    Problem direct(spec);
    auto w5 = direct.state(5).walk;
    Problem stepped(spec);
    for (std::size_t k = 0; k <= 5; ++k) {
        (void)stepped.state(k);
    }
    CHECK(stepped.state(5).walk == w5);
    auto oracle_walk = oracle::walk(spec, 5);
    for (std::size_t i = 0; i < w5.size(); ++i) {
        CHECK(w5[i] == oracle_walk[i]);
    }
    for (std::size_t k = 0; k <= 30; ++k) {
        for (std::size_t i = 3; i < 10; ++i) {
            double v = direct.state(k).walk[i];
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK(direct.state(5).walk != direct.state(6).walk);
}

TEST_CASE("landscape determinism regardless of query order")
{
    std::mt19937_64 rng(3);
    for (auto id : {ProblemId::SDP1, ProblemId::SDP4, ProblemId::SDP7, ProblemId::SDP15}) {
        auto spec = make_spec(id, 3);
        Problem a(spec), b(spec);
        std::vector<std::pair<std::vector<double>, double>> queries;
        for (int k = 0; k < 30; ++k) {
            double t = (k % 7) / 10.0 + (k % 3);
            auto bnd = a.bounds(t);
            std::vector<double> x(bnd.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = std::uniform_real_distribution<double>(bnd.lower[i], bnd.upper[i])(rng);
            }
            queries.emplace_back(x, t);
        }
        std::vector<ObjectiveVector> fa;
        for (const auto& [x, t] : queries) {
            fa.push_back(a.evaluate(x, t));
        }
        for (std::size_t k = queries.size(); k-- > 0;) {
            CHECK(b.evaluate(queries[k].first, queries[k].second) == fa[k]);
        }
    }
}

TEST_CASE("concurrent evaluation matches sequential results")
{
    auto spec = make_spec(ProblemId::SDP1, 2);
    Problem seq(spec), shared(spec);
    std::vector<double> x(10, 0.5);
    x[0] = x[1] = 1.5;
    std::vector<ObjectiveVector> expect;
    for (int k = 0; k < 40; ++k) {
        expect.push_back(seq.evaluate(x, k / 10.0));
    }
    std::vector<std::vector<ObjectiveVector>> got(4);
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w) {
        pool.emplace_back([&, w] {
            for (int k = 39; k >= 0; --k) {
                got[w].push_back(shared.evaluate(x, ((k * (w + 1)) % 40) / 10.0));
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (int w = 0; w < 4; ++w) {
        for (int k = 39, j = 0; k >= 0; --k, ++j) {
            CHECK(got[w][j] == expect[(k * (w + 1)) % 40]);
        }
    }
}

TEST_CASE("SDP6 undetectability witness")
{
    Problem p(make_spec(ProblemId::SDP6, 3));
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    int checked = 0;
    for (int a = 0; a < 30; ++a) {
        for (int b = a + 1; b <= 30; ++b) {
            double ta = a / 10.0, tb = b / 10.0;
            double alpha = std::max(0.5 * std::abs(std::sin(oracle::pi * ta)), 0.5 * std::abs(std::sin(oracle::pi * tb)));
            std::vector<double> x(10);
            for (auto& v : x) {
                v = u(rng);
            }
            x[0] = alpha + (1.0 - alpha) * (0.01 + 0.99 * u(rng));
            REQUIRE(x[0] > alpha);
            CHECK(p.evaluate(x, ta) == p.evaluate(x, tb));
            ++checked;
        }
    }
    CHECK(checked == 465);
    // below the threshold the change is visible
    std::vector<double> x(10, 0.5);
    x[0] = 0.05;
    CHECK(p.evaluate(x, 0.5) != p.evaluate(x, 0.6));
}

TEST_CASE("SDP7 deception witness")
{
    auto spec = make_spec(ProblemId::SDP7, 2);
    Problem p(spec);
    int checked = 0;
    for (std::size_t k = 0; k + 1 < 60; ++k) {
        int ka = p.state(k).global_basin;
        int kb = p.state(k + 1).global_basin;
        REQUIRE(ka >= 1);
        REQUIRE(ka <= 5);
        for (int basin = 1; basin <= 5; ++basin) {
            if (basin == ka || basin == kb) {
                continue;
            }
            std::vector<double> x(10, 0.2 * (basin - 1));
            x[0] = 0.37;
            CHECK(p.evaluate(x, k / 10.0) == p.evaluate(x, (k + 1) / 10.0));
            ++checked;
        }
    }
    CHECK(checked > 0);

    // global basin gives f = mu_linear
    for (std::size_t k = 0; k < 10; ++k) {
        int kt = p.state(k).global_basin;
        std::vector<double> x(10, 0.2 * (kt - 1));
        x[0] = 1.0;
        auto f = p.evaluate(x, k / 10.0);
        CHECK(std::abs(f[0]) <= 1e-15);
        CHECK(f[1] == Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("SDP14 and SDP15 degenerate at some times")
{
    for (auto id : {ProblemId::SDP14, ProblemId::SDP15}) {
        Problem p(make_spec(id, 5));
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0, 1);
        bool saw_degenerate = false;
        for (double t : times()) {
            auto free = p.free_positions(t);
            auto st = p.state_at(t);
            CHECK(free.size() == static_cast<std::size_t>(st.degeneration));
            if (free.size() < 4) {
                saw_degenerate = true;
            }
            std::vector<double> pos(4);
            for (auto& v : pos) {
                v = u(rng);
            }
            auto f = p.evaluate(p.optimal_decision(pos, t), t);
            for (std::size_t i = 0; i < 4; ++i) {
                if (std::find(free.begin(), free.end(), i) != free.end()) {
                    continue;
                }
                auto moved = pos;
                moved[i] = u(rng);
                auto g = p.evaluate(p.optimal_decision(moved, t), t);
                for (std::size_t j = 0; j < f.size(); ++j) {
                    CHECK(std::abs(g[j] - f[j]) <= 1e-12);
                }
            }
        }
        CHECK(saw_degenerate);
    }
    Problem sdp14(make_spec(ProblemId::SDP14, 5));
    CHECK(sdp14.state_at(0.0).degeneration == 4);
    CHECK(sdp14.state_at(1.0).degeneration == 1);
}

TEST_CASE("diversity variant keeps the optimal set optimal")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (auto id : {ProblemId::SDP3, ProblemId::SDP5, ProblemId::SDP7, ProblemId::SDP11, ProblemId::SDP14}) {
        auto spec = make_spec(id, 3);
        spec.diversity_variant = true;
        Problem div(spec);
        spec.diversity_variant = false;
        Problem plain(spec);
        for (double t : {0.0, 0.2, 0.5}) {
            std::vector<double> pos{u(rng), u(rng)};
            auto x = div.optimal_decision(pos, t);
            auto f = div.evaluate(x, t);
            double K = std::exp(10.0 * std::sin(0.5 * oracle::pi * t));
            std::vector<double> mapped{std::pow(pos[0], K), std::pow(pos[1], K)};
            auto g = plain.evaluate(plain.optimal_decision(mapped, t), t);
            for (std::size_t i = 0; i < f.size(); ++i) {
                CHECK(f[i] == Approx(g[i]).epsilon(1e-12));
            }
        }
        CHECK(div.evaluate(std::vector<double>(10, 0.3), 0.0) == plain.evaluate(std::vector<double>(10, 0.3), 0.0));
    }
    auto bad = make_spec(ProblemId::SDP1, 2);
    bad.diversity_variant = true;
    CHECK_THROWS_AS(Problem{bad}, std::invalid_argument);
}

TEST_CASE("FDA1 and dMOP2")
{
    CHECK(fda1_evaluate(std::vector<double>(10, 0.0), 0.0) == ObjectiveVector{0.0, 1.0});
    // dMOP2: brute-force minimum of f2 over the distance variables, n = 3
    for (double t : {0.0, 0.3, 1.0}) {
        double H = 0.75 * std::sin(0.5 * oracle::pi * t) + 1.25;
        for (double x1 : {0.1, 0.5, 0.9}) {
            double best = 1e300;
            for (int a = 0; a <= 200; ++a) {
                for (int b = 0; b <= 200; ++b) {
                    std::vector<double> x{x1, -1.0 + a / 100.0, -1.0 + b / 100.0};
                    best = std::min(best, dmop2_evaluate(x, t)[1]);
                }
            }
            CHECK(best == Approx(1.0 - std::pow(x1, H)).epsilon(1e-3));
        }
    }
    CHECK_THROWS_AS(fda1_evaluate(std::vector<double>{0.5}, 0.0), std::invalid_argument);
}

TEST_CASE("evaluate rejects malformed input")
{
    Problem p(make_spec(ProblemId::SDP5, 2));
    CHECK_THROWS_AS(p.evaluate(std::vector<double>(9, 0.1), 0.0), std::invalid_argument);
    std::vector<double> x(10, 0.1);
    x[3] = 1.5;
    CHECK_THROWS_AS(p.evaluate(x, 0.0), std::out_of_range);
    x[3] = std::nan("");
    CHECK_THROWS_AS(p.evaluate(x, 0.0), std::out_of_range);
    CHECK_THROWS_AS(p.optimal_decision(std::vector<double>{0.1, 0.2}, 0.0), std::invalid_argument);
}

TEST_CASE("problem spec validation")
{
    CHECK_THROWS_AS(Problem{make_spec(ProblemId::SDP5, 1)}, std::invalid_argument);
    CHECK_THROWS_AS(Problem{make_spec(ProblemId::SDP5, 4, 3)}, std::invalid_argument);
    CHECK_THROWS_AS(Problem{make_spec(ProblemId::FDA1, 3)}, std::invalid_argument);
    auto s12 = make_spec(ProblemId::SDP12, 2);
    s12.ranges.n_l = 25;
    CHECK_THROWS_AS(Problem{s12}, std::invalid_argument);
    auto s13 = make_spec(ProblemId::SDP13, 2);
    s13.ranges.M_u = 12;
    CHECK_THROWS_AS(Problem{s13}, std::invalid_argument);
    auto sev = make_spec(ProblemId::SDP5, 2);
    sev.severity = 0;
    CHECK_THROWS_AS(Problem{sev}, std::invalid_argument);
    CHECK_NOTHROW(Problem{make_spec(ProblemId::SDP14, 2)});
}

TEST_CASE("problem spec JSON")
{
    auto spec = make_spec(ProblemId::SDP13, 3);
    spec.seed = 12345;
    spec.warmup = 20;
    auto doc = to_json(spec);
    auto back = problem_spec_from_json(doc);
    CHECK(to_json(back) == doc);
    CHECK(back.ranges.M_u == 5);
    CHECK(landscape_hash(back) == landscape_hash(spec));

    auto extra = doc;
    extra["colour"] = "red";
    CHECK_THROWS_AS(problem_spec_from_json(extra), std::invalid_argument);
    auto nested = doc;
    nested["ranges"]["x"] = 1;
    CHECK_THROWS_AS(problem_spec_from_json(nested), std::invalid_argument);
    auto missing = doc;
    missing.erase("severity");
    CHECK_THROWS_AS(problem_spec_from_json(missing), std::invalid_argument);
    auto no_ranges = doc;
    no_ranges.erase("ranges");
    CHECK_THROWS_AS(problem_spec_from_json(no_ranges), std::invalid_argument);
    auto wrong_type = doc;
    wrong_type["M"] = "three";
    CHECK_THROWS_AS(problem_spec_from_json(wrong_type), std::invalid_argument);

    auto minimal = nlohmann::json::parse(R"({"id":"SDP5","M":2,"n":10,"severity":10,"frequency":10})");
    auto m = problem_spec_from_json(minimal);
    CHECK(m.warmup == 50);
    CHECK(m.seed == 0);
    CHECK_FALSE(m.diversity_variant);

    auto other = spec;
    other.frequency = 5;
    CHECK(landscape_hash(other) == landscape_hash(spec));
    other.seed = 1;
    CHECK(landscape_hash(other) != landscape_hash(spec));
    CHECK(spec.label() == "SDP13-M3");
}
