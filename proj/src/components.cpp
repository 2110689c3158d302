#include "sdp/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdp::components {

namespace {

constexpr double pi = std::numbers::pi;

void require_objectives(int M, const char* who)
{
    if (M < 2) {
        throw std::invalid_argument(std::string(who) + ": need at least 2 objectives, got " + std::to_string(M));
    }
}

void require_length(View x, std::size_t expected, const char* who)
{
    if (x.size() != expected) {
        throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(expected) +
                                    " variables, got " + std::to_string(x.size()));
    }
}

void require_positive(View x, const char* who)
{
    for (double v : x) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string(who) + ": variables must be strictly positive");
        }
    }
}

// Shared shape of the simplex-like fronts: mu_i = head_i * prod_{j<i} tail_j.
template <class Head, class Tail>
Vec simplex_assembly(std::size_t m, Head head, Tail tail)
{
    Vec mu(m);
    double prod = 1.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        mu[i] = head(i) * prod;
        prod *= tail(i);
    }
    mu[m - 1] = prod;
    return mu;
}

} // namespace

double sin_half_pi(long m) noexcept
{
    switch (floor_mod(m, 4)) {
    case 1:
        return 1.0;
    case 3:
        return -1.0;
    default:
        return 0.0;
    }
}

long floor_mod(long a, long m) noexcept
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

Vec mu_linear(View x, int M)
{
    require_objectives(M, "mu_linear");
    require_length(x, M - 1, "mu_linear");
    return simplex_assembly(
        M, [&](std::size_t i) { return 1.0 - x[i]; }, [&](std::size_t i) { return x[i]; });
}

Vec sphere_from_angles(View angles, int M)
{
    require_objectives(M, "sphere_from_angles");
    require_length(angles, M - 1, "sphere_from_angles");
    return simplex_assembly(
        M, [&](std::size_t i) { return std::sin(angles[i]); }, [&](std::size_t i) { return std::cos(angles[i]); });
}

Vec mu_sphere(View x, int M)
{
    require_objectives(M, "mu_sphere");
    require_length(x, M - 1, "mu_sphere");
    Vec y(x.begin(), x.end());
    for (auto& v : y) {
        v *= 0.5 * pi;
    }
    return sphere_from_angles(y, M);
}

Vec mu_product(View x, int M)
{
    require_objectives(M, "mu_product");
    require_length(x, M, "mu_product");
    require_positive(x, "mu_product");
    // Work in log space: log prod_{j != i} x_j = L - log x_i.
    double log_total = 0.0;
    for (double v : x) {
        log_total += std::log(v);
    }
    Vec mu(M);
    for (int i = 0; i < M; ++i) {
        double others = log_total - std::log(x[i]);
        mu[i] = x[i] / std::exp(others / (M - 1));
    }
    return mu;
}

Vec mu_recip(View x, int M, double t)
{
    require_objectives(M, "mu_recip");
    require_length(x, M - 1, "mu_recip");
    require_positive(x, "mu_recip");
    double sum = 0.0;
    for (double v : x) {
        sum += v;
    }
    Vec mu(M);
    for (int i = 0; i + 1 < M; ++i) {
        mu[i] = (1.0 + t + (sum - x[i])) / x[i];
    }
    mu[M - 1] = sum / (1.0 + t);
    return mu;
}

Vec mu_knee(View x, int M, double w)
{
    require_objectives(M, "mu_knee");
    require_length(x, M - 1, "mu_knee");
    auto bump = [&](std::size_t i) { return 0.05 * std::sin(w * pi * x[i]); };
    return simplex_assembly(
        M, [&](std::size_t i) { return 1.0 - x[i] + bump(i); }, [&](std::size_t i) { return x[i] + bump(i); });
}

Vec mu_mix(View x, int M, double w)
{
    require_objectives(M, "mu_mix");
    require_length(x, M - 1, "mu_mix");
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    s /= (M - 1);
    Vec mu(M);
    for (int i = 0; i + 2 < M; ++i) {
        mu[i] = x[i];
    }
    double bump = 0.05 * std::sin(w * pi * s);
    mu[M - 2] = s + bump;
    mu[M - 1] = 1.0 - s + bump;
    return mu;
}

double g_nsc_k(View x, int M, long k)
{
    require_objectives(M, "g_nsc");
    require_length(x, M - 1, "g_nsc");
    if (k == 0) {
        return 1.0;
    }
    long r = 1 - floor_mod(k, 2);
    double prod = 1.0;
    for (double v : x) {
        auto m = static_cast<long>(std::floor(static_cast<double>(k) * (2.0 * v - static_cast<double>(r))));
        prod *= sin_half_pi(m);
    }
    return 1.0 + std::abs(prod);
}

double g_nsc(View x, int M, double t)
{
    auto k = static_cast<long>(std::floor(10.0 * std::sin(0.5 * pi * t)));
    return g_nsc_k(x, M, k);
}

Vec mu_disc1(View x, int M, double k)
{
    require_objectives(M, "mu_disc1");
    require_length(x, M - 1, "mu_disc1");
    Vec mu(M);
    double last = 0.0;
    for (int i = 0; i + 1 < M; ++i) {
        double c = std::cos(0.5 * pi * x[i]);
        double s = std::sin(0.5 * pi * x[i]);
        double ck = std::cos(k * pi * x[i]);
        mu[i] = c * c;
        last += s * s + s * ck * ck;
    }
    mu[M - 1] = last;
    return mu;
}

Vec mu_disc2(View x, int M, double r)
{
    require_objectives(M, "mu_disc2");
    require_length(x, M - 1, "mu_disc2");
    if (!(r >= 0.0) || r != std::floor(r)) {
        throw std::invalid_argument("mu_disc2: exponent must be a non-negative integer, got " + std::to_string(r));
    }
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    s /= (M - 1);
    Vec mu(x.begin(), x.end());
    double term = 0.0;
    if (s > 0.0) {
        double base = -std::sin(2.5 * pi * s);
        double power = 1.0;
        for (long e = 0; e < static_cast<long>(r); ++e) {
            power *= base;
        }
        term = std::sqrt(s) * power;
    }
    mu.push_back(2.0 - s - term);
    return mu;
}

double g_multi(View x_ii, int global)
{
    if (x_ii.empty()) {
        throw std::invalid_argument("g_multi: no distance variables");
    }
    if (global < 1 || global > 5) {
        throw std::invalid_argument("g_multi: global basin index must lie in 1..5, got " + std::to_string(global));
    }
    double sum = 0.0;
    for (double v : x_ii) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 5; ++k) {
            double depth = (k == global) ? 0.5 : static_cast<double>(k);
            double d = 10.0 * v - 2.0 * (k - 1);
            best = std::min(best, depth + 10.0 * d * d);
        }
        sum += best;
    }
    return sum / static_cast<double>(x_ii.size());
}

Vec mu_detect(View x, int M, double alpha, double k)
{
    if (alpha < 0.0 || alpha >= 1.0) {
        throw std::invalid_argument("mu_detect: threshold must lie in [0, 1), got " + std::to_string(alpha));
    }
    Vec mu = mu_sphere(x, M);
    if (x[0] <= alpha) {
        mu[0] = std::abs(k * (std::cos(0.5 * pi * x[0]) - std::cos(0.5 * pi * alpha)) + std::sin(0.5 * pi * alpha));
    }
    return mu;
}

double ps_walk_step(double prev, double rnd, double rnd_fallback, double t)
{
    double candidate = prev + 5.0 * (rnd - 0.5) * std::sin(0.5 * pi * t);
    if (candidate >= 0.0 && candidate <= 1.0) {
        return candidate;
    }
    return rnd_fallback;
}

Vec mu_dobj(View x, int M)
{
    require_objectives(M, "mu_dobj");
    require_length(x, M - 1, "mu_dobj");
    Vec y(x.begin(), x.end());
    for (auto& v : y) {
        v = pi * (v + 1.0) / 6.0;
    }
    Vec mu = sphere_from_angles(y, M);
    mu[M - 1] *= 0.5;
    return mu;
}

Vec mu_ldeg(View x, int M, int d, double t, double g)
{
    require_objectives(M, "mu_ldeg");
    require_length(x, M - 1, "mu_ldeg");
    if (d < 1 || d > M - 1) {
        throw std::invalid_argument("mu_ldeg: degeneration level must lie in [1, M-1], got " + std::to_string(d));
    }
    double shrink = std::abs(std::sin(0.5 * pi * t)) * g;
    Vec y(M - 1);
    for (int i = 0; i + 1 < M; ++i) {
        y[i] = (i < d) ? x[i] : 0.5 + x[i] * shrink;
    }
    return simplex_assembly(
        M, [&](std::size_t i) { return 1.0 + g - y[i]; }, [&](std::size_t i) { return y[i]; });
}

Vec mu_sdeg(View x, int M, int d, int p, double t, double g)
{
    require_objectives(M, "mu_sdeg");
    require_length(x, M - 1, "mu_sdeg");
    if (d < 1 || d > M - 1) {
        throw std::invalid_argument("mu_sdeg: degeneration level must lie in [1, M-1], got " + std::to_string(d));
    }
    if (p < 1 || p > M - 1) {
        throw std::invalid_argument("mu_sdeg: rotation must lie in [1, M-1], got " + std::to_string(p));
    }
    double shrink = std::abs(std::sin(0.5 * pi * t)) * g;
    Vec y(M - 1);
    for (int i = 1; i <= M - 1; ++i) {
        int k = (p + i - 1) % (M - 1); // 0-based form of (p + i - 1) mod (M - 1) + 1
        if (i <= d) {
            y[k] = 0.5 * pi * x[k];
        } else {
            y[k] = std::acos(0.5 * std::numbers::sqrt2 / (1.0 + x[k] * shrink));
        }
    }
    return sphere_from_angles(y, M);
}

Vec y_shrink(View x, double t)
{
    double G = std::abs(std::sin(0.5 * pi * t));
    Vec y(x.begin(), x.end());
    for (auto& v : y) {
        v = pi / 6.0 * G + (pi / 2.0 - pi / 3.0 * G) * v;
    }
    return y;
}

bool in_favour_band(View x, double t, int M)
{
    double s = 0.0;
    for (int i = 0; i + 1 < M; ++i) {
        s += x[i];
    }
    double lo = 3.0 * t - std::floor(3.0 * t);
    double hi = 3.0 * t + 0.2 - std::floor(3.0 * t + 0.2);
    if (lo <= hi) {
        return lo <= s && s <= hi;
    }
    // band wraps past an integer: [lo, 1) joined with [0, hi]
    return s >= lo || s <= hi;
}

double g_favour(View x, double t, int M)
{
    require_objectives(M, "g_favour");
    if (x.size() < static_cast<std::size_t>(M - 1)) {
        throw std::invalid_argument("g_favour: decision vector shorter than M - 1");
    }
    double shift = std::abs(std::sin(0.5 * pi * t));
    bool barrier = in_favour_band(x, t, M);
    double sum = 0.0;
    for (std::size_t i = M - 1; i < x.size(); ++i) {
        double p = x[i] - shift;
        sum += barrier ? (-0.9 * p * p + std::pow(std::abs(p), 0.6)) : p * p;
    }
    return sum;
}

Vec curvature_map(View mu, double c)
{
    if (!(c > 0.0)) {
        throw std::invalid_argument("curvature_map: exponent must be positive, got " + std::to_string(c));
    }
    Vec out(mu.begin(), mu.end());
    if (c == 1.0) {
        return out;
    }
    for (auto& v : out) {
        if (v < 0.0) {
            throw std::invalid_argument("curvature_map: entries must be non-negative");
        }
        v = std::pow(v, c);
    }
    return out;
}

Vec diversity_transform(View x, double t)
{
    double K = std::exp(10.0 * std::sin(0.5 * pi * t));
    Vec out(x.begin(), x.end());
    for (auto& v : out) {
        v = std::pow(v, K);
    }
    return out;
}

} // namespace sdp::components
