#include "bcnet/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcnet::closed_form {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(a <= b)) throw std::invalid_argument("integrate: a > b");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double big_psi(double eps, double t) {
  if (eps < 0.0) throw std::invalid_argument("big_psi: eps < 0");
  if (!(t > 0.0)) throw std::invalid_argument("big_psi: t <= 0");
  const double s = std::sqrt(2.0 * t);
  const double v = 1.0 - normal_cdf(-s - eps / s) -
                   std::exp(-2.0 * eps) * normal_cdf(s - eps / s);
  // A probability; the subtraction can undershoot zero by one ulp at eps = 0.
  return std::clamp(v, 0.0, 1.0);
}

double small_psi(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("small_psi: t <= 0");
  return std::exp(-t) / std::sqrt(kPi * t) +
         2.0 * normal_cdf(std::sqrt(2.0 * t));
}

double expected_density(double a, double b, double t) {
  if (!(a < b)) throw std::invalid_argument("expected_density: a >= b");
  return (b - a) * small_psi(t);
}

double left_flux_bound(double s, double t) {
  if (!(0.0 < s && s < t)) {
    throw std::invalid_argument("left_flux_bound: need 0 < s < t");
  }
  return integrate(
      [](double u) {
        const double p = small_psi(u);
        return 2.0 * p * p;
      },
      s, t, 1e-10);
}

double pde_residual(double eps, double t, double d_eps, double d_t) {
  if (!(eps > d_eps && t > d_t)) {
    throw std::invalid_argument("pde_residual: steps leave the domain");
  }
  const double dt =
      (big_psi(eps, t + d_t) - big_psi(eps, t - d_t)) / (2.0 * d_t);
  const double f0 = big_psi(eps, t);
  const double fp = big_psi(eps + d_eps, t);
  const double fm = big_psi(eps - d_eps, t);
  const double dee = (fp - 2.0 * f0 + fm) / (d_eps * d_eps);
  const double de = (fp - fm) / (2.0 * d_eps);
  return std::fabs(dt - (dee + 2.0 * de));
}

double big_psi_slope_at_zero(double t, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("big_psi_slope_at_zero");
  const auto one_sided = [t](double h) {
    // big_psi(0, t) = 0, so the three-point one-sided formula collapses.
    return (4.0 * big_psi(h, t) - big_psi(2.0 * h, t)) / (2.0 * h);
  };
  const double d1 = one_sided(step);
  const double d2 = one_sided(0.5 * step);
  return (4.0 * d2 - d1) / 3.0;
}

double max_bm_joint_density(double x, double y, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("max_bm_joint_density: t <= 0");
  if (x < 0.0 || y < -x) return 0.0;
  const double u = 2.0 * x + y;
  return (2.0 * u / t) * std::exp(-u * u / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

double max_bm_joint_tail(double x, double y, double t, double tol) {
  const double hi = 12.0 * std::sqrt(t) + 4.0;  // mass beyond is < 1e-12
  if (x >= hi) return 0.0;
  return integrate(
      [&](double u) {
        const double lo = std::max(y, -u);
        if (lo >= hi) return 0.0;
        return integrate([&](double v) { return max_bm_joint_density(u, v, t); },
                         lo, hi, tol / (4.0 * hi));
      },
      x, hi, tol);
}

double max_bm_joint_mass(double t, double tol) {
  return max_bm_joint_tail(0.0, -12.0 * std::sqrt(t) - 4.0, t, tol);
}

double supermartingale_F(double t, double x, double y) {
  // Zero on the absorbed set; sampled states can sit a hair below it.
  if (x <= 0.0 || y <= 0.0) return 0.0;
  return big_psi(x, t) * big_psi(y, t);
}

double supermartingale_drift(double t, double x, double y, double step) {
  if (!(x > step && t > step)) {
    throw std::invalid_argument("supermartingale_drift: steps leave the domain");
  }
  const double s = step;
  const double f0 = supermartingale_F(t, x, y);
  const double dt =
      (supermartingale_F(t + s, x, y) - supermartingale_F(t - s, x, y)) /
      (2.0 * s);
  const double fxp = supermartingale_F(t, x + s, y);
  const double fxm = supermartingale_F(t, x - s, y);
  const double fyp = supermartingale_F(t, x, y + s);
  const double fym = supermartingale_F(t, x, y - s);
  const double dxx = (fxp - 2.0 * f0 + fxm) / (s * s);
  const double dx = (fxp - fxm) / (2.0 * s);
  const double dyy = (fyp - 2.0 * f0 + fym) / (s * s);
  const double dy = (fyp - fym) / (2.0 * s);
  return -dt + dxx + 2.0 * dx + 3.0 * dyy + 2.0 * dy;
}

}  // namespace bcnet::closed_form
