#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands,
// with semi-infinite marching for super-exponentially decaying tails.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>

namespace legendre::quad {

using cplx = std::complex<double>;

struct Result {
  cplx value{0.0, 0.0};
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;
  double max_abs = 0.0;  // largest |integrand| sampled
  double l1 = 0.0;       // estimate of ∫ |integrand|
};

struct Options {
  double abs_tol = 1e-15;
  double rel_tol = 1e-12;
  int max_depth = 20;
  long max_evaluations = 2'000'000;
};

struct TailOptions {
  double panel = 1.0;           // panel length when marching outward
  double negligible = 1e-14;    // panel integrand max relative to the running max
  int consecutive = 3;          // negligible panels in a row before stopping
  double max_extent = 60.0;     // hard guard on marching distance
  bool zero_is_negligible = false;  // count identically zero panels as negligible
};

// One GK15 panel on [a, b]; error = |Kronrod - Gauss|.
template <class F>
Result gk15(F&& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Result r;
  const cplx f0 = f(c);
  cplx kron = f0 * wk[0];
  cplx gauss = f0 * wg[0];
  r.max_abs = std::abs(f0);
  double l1 = r.max_abs * wk[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const cplx fp = f(c + h * xk[i]);
    const cplx fm = f(c - h * xk[i]);
    r.max_abs = std::max({r.max_abs, std::abs(fp), std::abs(fm)});
    kron += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
  }
  r.value = kron * h;
  r.l1 = l1 * std::abs(h);
  r.error = std::abs((kron - gauss) * h);
  r.evaluations = 15;
  return r;
}

namespace detail {

template <class F>
void adapt(F& f, double a, double b, const Result& whole, double tol, int depth, const Options& opt, Result& acc) {
  if (whole.error <= tol || depth >= opt.max_depth || acc.evaluations >= opt.max_evaluations ||
      b - a <= 1e-14 * (1.0 + std::abs(a))) {
    if (whole.error > tol) acc.converged = false;
    acc.value += whole.value;
    acc.error += whole.error;
    acc.l1 += whole.l1;
    return;
  }
  const double m = 0.5 * (a + b);
  const Result left = gk15(f, a, m);
  const Result right = gk15(f, m, b);
  acc.evaluations += left.evaluations + right.evaluations;
  acc.max_abs = std::max({acc.max_abs, left.max_abs, right.max_abs});
  adapt(f, a, m, left, 0.5 * tol, depth + 1, opt, acc);
  adapt(f, m, b, right, 0.5 * tol, depth + 1, opt, acc);
}

}  // namespace detail

// Adaptive bisection on [a, b]. The tolerance is fixed from the first panel,
// relative to the larger of |∫ f| and ∫ |f|.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  Result acc;
  if (a == b) return acc;
  const Result first = gk15(f, a, b);
  acc.evaluations = first.evaluations;
  acc.max_abs = first.max_abs;
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::max(std::abs(first.value), first.l1));
  detail::adapt(f, a, b, first, tol, 0, opt, acc);
  return acc;
}

// Integral over [start, start + dir * inf), dir = +1 or -1, marching in panels
// until `consecutive` panels fall below negligible * running max (or below
// the absolute tolerance).
template <class F>
Result integrate_tail(F&& f, double start, int dir, const Options& opt = {}, const TailOptions& tail = {}) {
  Result acc;
  int quiet = 0;
  double running_max = 0.0;
  double last_panel = 0.0;
  for (double s = 0.0; s < tail.max_extent; s += tail.panel) {
    const double a = start + dir * s;
    const double b = start + dir * (s + tail.panel);
    const Result p = integrate(f, std::min(a, b), std::max(a, b), opt);
    acc.value += p.value;
    acc.error += p.error;
    acc.evaluations += p.evaluations;
    acc.l1 += p.l1;
    acc.converged = acc.converged && p.converged;
    running_max = std::max(running_max, p.max_abs);
    acc.max_abs = running_max;
    last_panel = std::abs(p.value);
    const bool tiny = opt.abs_tol > 0.0 && p.max_abs * tail.panel <= opt.abs_tol;
    const bool zero = tail.zero_is_negligible && p.max_abs == 0.0;
    if ((running_max > 0.0 && p.max_abs <= tail.negligible * running_max) || tiny || zero) {
      if (++quiet >= tail.consecutive) {
        acc.error += last_panel;
        return acc;
      }
    } else {
      quiet = 0;
    }
  }
  if (running_max == 0.0) return acc;  // identically zero integrand
  acc.converged = false;
  acc.error += last_panel;
  return acc;
}

// Integral over (-inf, upper].
template <class F>
Result integrate_to(F&& f, double upper, const Options& opt = {}, const TailOptions& tail = {}) {
  return integrate_tail(f, upper, -1, opt, tail);
}

// Integral over [lower, inf).
template <class F>
Result integrate_from(F&& f, double lower, const Options& opt = {}, const TailOptions& tail = {}) {
  return integrate_tail(f, lower, +1, opt, tail);
}

// Integral over the real line, split at `center`.
template <class F>
Result integrate_line(F&& f, double center = 0.0, const Options& opt = {}, const TailOptions& tail = {}) {
  Result l = integrate_to(f, center, opt, tail);
  const Result r = integrate_from(f, center, opt, tail);
  l.value += r.value;
  l.error += r.error;
  l.evaluations += r.evaluations;
  l.l1 += r.l1;
  l.converged = l.converged && r.converged;
  l.max_abs = std::max(l.max_abs, r.max_abs);
  return l;
}

}  // namespace legendre::quad
