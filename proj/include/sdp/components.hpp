#ifndef SDP_COMPONENTS_HPP
#define SDP_COMPONENTS_HPP

#include <span>
#include <vector>

// PF-shaping (mu) and landscape-shaping (g) building blocks. Every function
// is pure. Inputs are 0-based spans; `x` in the mu functions holds the
// position variables only, `x_ii` in the g functions the distance variables.

namespace sdp::components {

using Vec = std::vector<double>;
using View = std::span<const double>;

/// Linear simplex: mu_i = (1 - x_i) prod_{j<i} x_j, mu_M = prod x_j. Sums to 1.
Vec mu_linear(View x, int M);

/// Sphere in the first orthant with angles 0.5*pi*x_i. Unit norm.
Vec mu_sphere(View x, int M);

/// Spherical assembly from raw angles (length M-1).
Vec sphere_from_angles(View angles, int M);

/// Product-form front: consumes M strictly positive variables; prod mu = 1.
Vec mu_product(View x, int M);

/// Sum-of-reciprocals front: sum 1/(mu_i + 1) = 1. x strictly positive.
Vec mu_recip(View x, int M, double t);

Vec mu_knee(View x, int M, double w);

Vec mu_mix(View x, int M, double w);

/// 1 + |prod sin(floor(k(2x_j - r)) pi/2)| with k = floor(10 sin(0.5 pi t)).
double g_nsc(View x, int M, double t);

/// Same as g_nsc with the hole count `k` given directly.
double g_nsc_k(View x, int M, long k);

Vec mu_disc1(View x, int M, double k);

/// `r` must be a non-negative integer value.
Vec mu_disc2(View x, int M, double r);

/// Five-basin landscape with the global basin at index `global` (1..5).
double g_multi(View x_ii, int global);

Vec mu_detect(View x, int M, double alpha, double k);

/// One step of the random PS walk.
double ps_walk_step(double prev, double rnd, double rnd_fallback, double t);

Vec mu_dobj(View x, int M);

Vec mu_ldeg(View x, int M, int d, double t, double g);

Vec mu_sdeg(View x, int M, int d, int p, double t, double g);

/// Angles that shrink the spherical front as |sin(0.5 pi t)| grows.
Vec y_shrink(View x, double t);

/// Favourability landscape; `x` is the full decision vector.
double g_favour(View x, double t, int M);

/// Membership test for the moving 0.2-wide band on sum_{i<M} x_i.
bool in_favour_band(View x, double t, int M);

Vec curvature_map(View mu, double c);

/// x_i^{K(t)} with K(t) = exp(10 sin(0.5 pi t)).
Vec diversity_transform(View x, double t);

/// sin(m * pi / 2) evaluated exactly for integer m.
double sin_half_pi(long m) noexcept;

/// Mathematical modulo, result in [0, m).
long floor_mod(long a, long m) noexcept;

} // namespace sdp::components

#endif
