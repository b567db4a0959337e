#pragma once

#include <functional>

namespace bcnet::closed_form {

double normal_cdf(double x);
double normal_pdf(double x);

// Adaptive Simpson quadrature. Also used by tests as an independent oracle,
// so it must stay free of any dependency on the functions below.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

// P[a left-right pair started eps apart has not met by time t].
// Requires eps >= 0, t > 0. Decreasing in t, increasing in eps,
// big_psi(0, t) = 0, limit 1 - exp(-2 eps) as t grows.
double big_psi(double eps, double t);

// Limit density of the branching-coalescing flow started from a full line:
// exp(-t)/sqrt(pi t) + 2 normal_cdf(sqrt(2 t)). Requires t > 0.
// Diverges like t^(-1/2) at 0+ and decreases to 2.
double small_psi(double t);

// Expected number of occupied points in [a, b] at time t: (b-a) small_psi(t).
double expected_density(double a, double b, double t);

// Integral of 2 small_psi(u)^2 over [s, t]. Requires 0 < s < t.
double left_flux_bound(double s, double t);

// Residual of d/dt big_psi = (d2/de2 + 2 d/de) big_psi at (eps, t), central
// differences with the given steps. Requires eps > d_eps, t > d_t.
double pde_residual(double eps, double t, double d_eps, double d_t);

// d/d eps big_psi(eps, t) at eps = 0 by a one-sided second-order difference
// plus one Richardson step. Equals small_psi(t) in the limit.
double big_psi_slope_at_zero(double t, double step);

// Joint density at time t of (running maximum of the negated path, endpoint)
// for standard Brownian motion: support x >= 0, y >= -x, zero outside.
double max_bm_joint_density(double x, double y, double t);

// Integral of max_bm_joint_density over the whole support (equals 1) and
// over the upper-right tail [x, inf) x [y, inf), by nested quadrature.
double max_bm_joint_mass(double t, double tol);
double max_bm_joint_tail(double x, double y, double t, double tol);

// Product form big_psi(x, t) * big_psi(y, t); zero for x <= 0 or y <= 0.
double supermartingale_F(double t, double x, double y);

// (-d/dt + dxx + 2 dx + 3 dyy + 2 dy) applied to supermartingale_F by central
// differences. Nonpositive on 0 <= x <= y up to truncation error.
// Requires x > step, t > step.
double supermartingale_drift(double t, double x, double y, double step);

}  // namespace bcnet::closed_form
