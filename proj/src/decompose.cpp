#include "legendre/decompose.hpp"

#include "legendre/errors.hpp"
#include "legendre/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace legendre {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

quad::Options tight() {
  quad::Options o;
  o.abs_tol = 1e-290;
  o.rel_tol = 1e-13;
  return o;
}

// Transforms beyond their support decay monotonically outward.
quad::TailOptions outward() {
  quad::TailOptions t;
  t.zero_is_negligible = true;
  return t;
}

double abs_coefficient_sum(const CPolynomial& p) {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s += std::abs(c);
  return s;
}

// Drops trailing variables, which must not occur.
CPolynomial truncate_vars(const CPolynomial& p, std::size_t keep) {
  CPolynomial out(keep);
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = keep; i < e.size(); ++i)
      if (e[i] != 0) throw PreconditionError("decompose_forward: amplitude depends on ybar or v; reduce it first");
    out.add_term(CPolynomial::Exponents(e.begin(), e.begin() + static_cast<long>(keep)), c);
  }
  return out;
}

bool same_amplitude(const SchwartzAmplitude& a, const SchwartzAmplitude& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (ta[i].coeff != tb[i].coeff || ta[i].k != tb[i].k || ta[i].center != tb[i].center ||
        ta[i].width != tb[i].width || ta[i].frequency != tb[i].frequency)
      return false;
  return true;
}

double line_l1(const std::function<cplx(double)>& f, std::pair<double, double> support) {
  auto g = [&](double t) { return cplx(std::abs(f(t))); };
  return quad::integrate(g, support.first, support.second, tight()).value.real();
}

}  // namespace

double YbarReduction::remainder_bound(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < remainder_coefficients.size(); ++i)
    s += remainder_coefficients[i] * std::pow(std::abs(x), order + 1 + static_cast<int>(i));
  return s;
}

YbarReduction reduce_ybar_dependence(const Intersecting& d, int order) {
  d.validate();
  if (order < 0) throw DimensionError("reduce_ybar_dependence: order must be nonnegative");
  YbarReduction out;
  out.order = order;
  out.reduced = d;
  out.reduced.components.clear();
  if (d.cutoff) {
    out.cutoff_dropped = true;
    out.reduced.cutoff.reset();
    out.notes.push_back("ybar cutoff dropped; the change is rapidly decreasing where y_k < flat_until");
  }
  const std::size_t nv = d.passive_vars();
  const auto ybar = static_cast<std::size_t>(d.n);
  const auto yk = static_cast<std::size_t>(d.k);
  // ybar -> y_k - delta, delta stored in the ybar slot.
  std::vector<CPolynomial> subs;
  for (std::size_t i = 0; i < nv; ++i)
    subs.push_back(i == ybar ? CPolynomial::variable(nv, yk) - CPolynomial::variable(nv, ybar)
                             : CPolynomial::variable(nv, i));
  std::vector<double> remainder;
  for (const auto& comp : d.components) {
    const CPolynomial shifted = comp.passive.compose(subs);
    const int deg = shifted.degree_in(ybar);
    if (deg == 0) {
      out.reduced.components.push_back(comp);
      continue;
    }
    const auto* a = std::get_if<SchwartzAmplitude>(&comp.profile);
    if (!a) throw PreconditionError("reduce_ybar_dependence: only Hermite-Gaussian profiles can absorb ybar powers");
    SchwartzAmplitude deriv = *a;
    cplx factor = 1.0;
    for (int j = 0; j <= deg; ++j) {
      if (j > 0) {
        deriv = deriv.derivative();
        factor *= cplx(0.0, 1.0);
      }
      const CPolynomial q = shifted.coefficient_of(ybar, j);
      if (q.is_zero()) continue;
      CPolynomial::Exponents xj(nv, 0);
      xj[0] = j;
      const CPolynomial term = q * CPolynomial::monomial(xj, factor);
      if (j <= order) {
        out.reduced.components.push_back({term, deriv, comp.v_profile});
      } else {
        const std::size_t idx = static_cast<std::size_t>(j - order - 1);
        if (remainder.size() <= idx) remainder.resize(idx + 1, 0.0);
        const SchwartzAmplitude th = fourier_transform(deriv);
        double c = abs_coefficient_sum(q) * line_l1([&](double t) { return th(t); }, th.support());
        if (d.k == 2) c *= line_l1([&](double v) { return comp.v_profile(v); }, comp.v_profile.support());
        remainder[idx] += c;
      }
    }
  }
  out.remainder_coefficients = remainder;
  if (!remainder.empty())
    out.notes.push_back("powers of (y_k - ybar) above order " + std::to_string(order) + " dropped; see remainder bound");
  return out;
}

struct Decomposition::Part {
  CPolynomial passive;  // over (x, y)
  std::function<cplx(double)> transform;
  double lo = 0.0, hi = 0.0;  // transform support
  cplx total = 0.0;
  double zl = -1.0, zh = 2.0;
  PiecewiseChebyshev left, mid, right;  // on [zl, 0], [0, 1], [1, zh]

  double step = 0.25;
  std::vector<double> knots;
  std::vector<cplx> below_cum, above_cum;  // ∫_{-inf}^{t_i}, ∫_{t_i}^{inf}

  void build_cumulative() {
    const auto o = tight();
    const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
    step = hi > lo ? (hi - lo) / cells : 1.0;
    knots.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) knots[i] = lo + step * i;
    knots.back() = hi;
    below_cum.assign(cells + 1, 0.0);
    above_cum.assign(cells + 1, 0.0);
    below_cum[0] = quad::integrate_to(transform, lo, o, outward()).value;
    for (int i = 0; i < cells; ++i)
      below_cum[i + 1] = below_cum[i] + quad::integrate(transform, knots[i], knots[i + 1], o).value;
    above_cum[cells] = quad::integrate_from(transform, hi, o, outward()).value;
    for (int i = cells; i > 0; --i)
      above_cum[i - 1] = above_cum[i] + quad::integrate(transform, knots[i - 1], knots[i], o).value;
  }
  int cell(double Z) const {
    const int last = static_cast<int>(knots.size()) - 2;
    return std::clamp(static_cast<int>(std::floor((Z - lo) / step)), 0, last);
  }
  cplx integral_below(double Z, const quad::Options& o = tight()) const {
    if (Z <= lo) return quad::integrate_to(transform, Z, o, outward()).value;
    if (Z >= hi) return below_cum.back() + quad::integrate(transform, hi, Z, o).value;
    const int i = cell(Z);
    return below_cum[i] + quad::integrate(transform, knots[i], Z, o).value;
  }
  cplx integral_above(double Z, const quad::Options& o = tight()) const {
    if (Z >= hi) return quad::integrate_from(transform, Z, o, outward()).value;
    if (Z <= lo) return above_cum.front() + quad::integrate(transform, Z, lo, o).value;
    const int i = cell(Z) + 1;
    return above_cum[i] + quad::integrate(transform, Z, knots[i], o).value;
  }
  // ∫_{-inf}^Z a^ - total alpha(Z), written without cancellation outside (0, 1).
  cplx exact(double Z, const quad::Options& o = tight()) const {
    if (Z <= 0.0) return integral_below(Z, o);
    if (Z >= 1.0) return -integral_above(Z, o);
    return integral_below(Z, o) - total * alpha(Z);
  }
  cplx interp(double Z) const {
    if (Z < zl || Z > zh) return exact(Z);
    if (Z <= 0.0) return left(Z);
    if (Z >= 1.0) return right(Z);
    return mid(Z);
  }
};

cplx Decomposition::f_value(double x, const linalg::Vector& y) const {
  std::vector<double> pt{x};
  pt.insert(pt.end(), y.data(), y.data() + y.size());
  return f_(std::span<const double>(pt));
}

std::size_t Decomposition::components() const { return parts_.size(); }

cplx Decomposition::g_profile(std::size_t component, double Z) const { return parts_.at(component)->exact(Z); }

cplx Decomposition::transverse(double z1) const { return transverse_ ? (*transverse_)(z1) : cplx(1.0); }

namespace {

template <class Eval>
cplx g_sum(const std::vector<std::shared_ptr<const Decomposition::Part>>& parts, double x, const linalg::Vector& y,
           int k, Eval&& eval) {
  if (!(x > 0.0)) throw PreconditionError("decomposition evaluation needs x > 0");
  std::vector<double> pt{x};
  pt.insert(pt.end(), y.data(), y.data() + y.size());
  const double Z = y[k - 1] / x;
  cplx s = 0.0;
  for (const auto& p : parts) s += p->passive(std::span<const double>(pt)) * eval(*p, Z);
  return s;
}

}  // namespace

cplx Decomposition::g(double x, const linalg::Vector& y) const {
  return g_sum(parts_, x, y, k, [](const Part& p, double Z) { return p.interp(Z); });
}

cplx Decomposition::g_exact(double x, const linalg::Vector& y) const {
  return g_sum(parts_, x, y, k, [](const Part& p, double Z) { return p.exact(Z); });
}

cplx Decomposition::g_xz(double x, double Z) const {
  if (n != 2) throw DimensionError("g_xz is the n = 2 form");
  linalg::Vector y(1);
  y << x * Z;
  return g(x, y);
}

cplx Decomposition::reconstruct_stripped(double x, const linalg::Vector& y) const {
  if (y.size() != n - 1) throw DimensionError("reconstruct: y has wrong size");
  const double Z = y[k - 1] / x;
  const cplx w = k == 2 ? transverse(y[0] / x) : cplx(1.0);
  return w * (alpha(Z) * f_value(x, y) + g(x, y));
}

cplx Decomposition::reconstruct(double x, const linalg::Vector& y) const {
  return std::pow(x, exponent) * reconstruct_stripped(x, y);
}

Decomposition decompose_forward(const Intersecting& d, const DecomposeOptions& opt, const YbarReduction* reduction) {
  d.validate();
  if (d.cutoff) throw PreconditionError("decompose_forward: drop the ybar cutoff first (reduce_ybar_dependence)");
  if (d.phase && !d.phase->is_trivial()) throw PreconditionError("decompose_forward: needs the trivial model phase");
  std::optional<SchwartzAmplitude> vprof;
  if (d.k == 2) {
    for (const auto& c : d.components) {
      if (c.passive.is_zero()) continue;
      if (!vprof)
        vprof = c.v_profile;
      else if (!same_amplitude(*vprof, c.v_profile))
        throw PreconditionError("decompose_forward: components must share the v profile");
    }
  }

  Decomposition out;
  out.m = d.m;
  out.n = d.n;
  out.k = d.k;
  out.exponent = d.reduced_exponent();
  out.f_ = CPolynomial(static_cast<std::size_t>(d.n));
  if (vprof) out.transverse_ = fourier_transform(*vprof);
  auto& diag = out.diag_;
  if (reduction) {
    diag.remainder_coefficients = reduction->remainder_coefficients;
    diag.cutoff_dropped = reduction->cutoff_dropped;
    diag.notes = reduction->notes;
  }

  for (const auto& comp : d.components) {
    if (comp.passive.is_zero()) continue;
    auto part = std::make_shared<Decomposition::Part>();
    part->passive = truncate_vars(comp.passive, static_cast<std::size_t>(d.n));
    if (const auto* a = std::get_if<SchwartzAmplitude>(&comp.profile)) {
      const SchwartzAmplitude ah = fourier_transform(*a);
      part->transform = [ah](double t) { return ah(t); };
    } else {
      part->transform = [](double t) { return cplx(alpha_prime(t)); };
    }
    std::tie(part->lo, part->hi) = profile_transform_support(comp.profile);
    part->total = profile_total(comp.profile);
    part->build_cumulative();
    out.f_ += part->passive * part->total;

    const cplx numeric_total =
        quad::integrate(part->transform, part->lo, part->hi, tight()).value;
    diag.b_cancellation = std::max(diag.b_cancellation, std::abs(numeric_total - part->total));

    const double scale = std::max({1.0, std::abs(part->total), line_l1(part->transform, {part->lo, part->hi})});
    const double tol = opt.interp_tol * scale;
    part->zl = std::min(part->lo, -1.0);
    part->zh = std::max(part->hi, 2.0);
    const Decomposition::Part& p = *part;
    part->left = PiecewiseChebyshev([&](double z) { return p.exact(z); }, part->zl, 0.0, tol);
    part->mid = PiecewiseChebyshev([&](double z) { return p.exact(z); }, 0.0, 1.0, tol);
    part->right = PiecewiseChebyshev([&](double z) { return p.exact(z); }, 1.0, part->zh, tol);
    for (int i = 0; i <= 40; ++i) {
      const double z = part->zl + (part->zh - part->zl) * (i + 0.37) / 41.0;
      diag.interpolation_error = std::max(diag.interpolation_error, std::abs(p.interp(z) - p.exact(z)));
    }

    DecayWindow w;
    quad::Options loose = tight();
    loose.rel_tol = 1e-8;
    auto report = schwartz_decay_report([&](double z) { return p.exact(z, loose); }, opt.decay_order, w);
    for (const auto& e : report) diag.decay_ok = diag.decay_ok && e.pass;
    diag.decay.push_back(std::move(report));
    out.parts_.push_back(part);
  }

  // Reconstruction against the reduced evaluator on a small check grid.
  double worst = 0.0;
  double peak = 0.0;
  for (double x : {0.2, 0.05, 0.01}) {
    for (int i = 0; i <= 12; ++i) {
      const double Z = -6.0 + i;
      linalg::Vector y = linalg::Vector::Constant(d.n - 1, 0.1);
      if (d.k == 2) y[0] = 0.5 * x;
      y[d.k - 1] = Z * x;
      const cplx ref = eval_intersecting_reduced(d, x, y).value;
      const cplx rec = out.reconstruct(x, y);
      worst = std::max(worst, std::abs(ref - rec));
      peak = std::max(peak, std::abs(ref));
    }
  }
  diag.residual = peak > 0.0 ? worst / peak : worst;
  if (opt.strict && !diag.decay_ok)
    throw ConvergenceError("decompose_forward: the g part failed the Schwartz decay check");
  return out;
}

Intersecting decompose_converse(const CPolynomial& f, double m) {
  if (f.nvars() != 2) throw DimensionError("decompose_converse: f must be a polynomial in (x, y)");
  Intersecting d;
  d.m = m;
  d.n = 2;
  d.k = 1;
  d.components.push_back({f.embed(3, {0, 1}), CutoffDerivativeProfile{}, {}});
  return d;
}

Type2Roundtrip type2_roundtrip(const SchwartzAmplitude& V, double m) {
  Type2Roundtrip out;
  out.type2.m = m + 0.5;
  out.type2.n = 2;
  out.type2.k = 1;
  out.type2.components.push_back({CPolynomial::constant(1, 1.0), {V}});
  double worst = 0.0;
  double peak = 0.0;
  for (double x : {0.3, 0.1, 0.03}) {
    for (int i = 0; i <= 10; ++i) {
      linalg::Vector y(1);
      y << x * (-5.0 + i);
      const cplx ref = std::pow(x, m + 0.5) * V(-5.0 + i);
      const cplx syn = eval_type2_synthesis(out.type2, x, y).value;
      worst = std::max(worst, std::abs(syn - ref));
      peak = std::max(peak, std::abs(ref));
    }
  }
  out.residual = peak > 0.0 ? worst / peak : worst;
  return out;
}

}  // namespace legendre
