#include "legendre/distribution.hpp"

#include "legendre/errors.hpp"
#include "legendre/parallel.hpp"
#include "legendre/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace legendre {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCutoffZetaRadius = 800.0;

void require_x(double x) {
  if (!(x > 0.0)) throw PreconditionError("evaluation needs an interior point (x > 0)");
}

quad::Options options(const QuadratureSettings& s) {
  quad::Options o;
  o.abs_tol = s.abs_tol;
  o.rel_tol = s.rel_tol;
  o.max_depth = s.max_depth;
  return o;
}

// GK15 node layout on a panel: slot 0 is the centre, slots 2i-1 / 2i are +x_i / -x_i.
struct Rule {
  std::array<double, 8> x{};
  std::array<double, 8> wk{};
  std::array<double, 8> wg{};  // zero on Kronrod-only nodes
  Rule() {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    for (std::size_t i = 0; i < 8; ++i) {
      x[i] = GK::abscissa()[i];
      wk[i] = GK::weights()[i];
      wg[i] = (i % 2 == 0) ? G::weights()[i / 2] : 0.0;
    }
  }
};

const Rule& rule() {
  static const Rule r;
  return r;
}

// Uniform-panel GK15 sample layout over [-R, R] with 2^level panels per unit length.
struct PanelGrid {
  double radius = 0.0;
  double h = 1.0;
  int panels = 0;
  double center(int p) const { return -radius + (p + 0.5) * h; }
  double node(int p, int slot) const {
    const double c = center(p);
    if (slot == 0) return c;
    const int i = (slot + 1) / 2;
    const double off = 0.5 * h * rule().x[i];
    return slot % 2 ? c + off : c - off;
  }
};

PanelGrid grid_for(double radius, int level) {
  PanelGrid g;
  g.radius = radius;
  const int base = std::max(1, static_cast<int>(std::ceil(2.0 * radius)));
  g.panels = base << level;
  g.h = 2.0 * radius / g.panels;
  return g;
}

// (1/2pi) ∫_0^1 e^{-i zeta s} alpha'(s) ds on a fixed composite GK15 rule.
class CutoffProfileSampler {
 public:
  CutoffProfileSampler() {
    const int panels = 256;
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = (p + 0.5) * h;
      for (int slot = 0; slot < 15; ++slot) {
        const int i = (slot + 1) / 2;
        const double off = 0.5 * h * rule().x[i];
        const double s = slot == 0 ? c : (slot % 2 ? c + off : c - off);
        nodes_.push_back(s);
        weights_.push_back(0.5 * h * rule().wk[i] * alpha_prime(s));
      }
    }
  }
  cplx operator()(double zeta) const {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) sum += weights_[j] * std::polar(1.0, -zeta * nodes_[j]);
    return sum / kTwoPi;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

const CutoffProfileSampler& cutoff_sampler() {
  static const CutoffProfileSampler s;
  return s;
}

// Samples of the cutoff profile on the level grids, shared across evaluations.
std::shared_ptr<const std::vector<cplx>> cutoff_level_samples(int level) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const std::vector<cplx>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;
  const PanelGrid g = grid_for(kCutoffZetaRadius, level);
  auto values = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(g.panels) * 15);
  const auto& sampler = cutoff_sampler();
  for (int p = 0; p < g.panels; ++p)
    for (int slot = 0; slot < 15; ++slot) (*values)[static_cast<std::size_t>(p) * 15 + slot] = sampler(g.node(p, slot));
  cache[level] = values;
  return values;
}

// Numerical zeta transform t -> ∫ e^{i zeta t} a(zeta) d zeta on uniform GK15
// panels, refined by level until Kronrod and Gauss sums agree.
class ZetaTransformer {
 public:
  ZetaTransformer(const ZetaProfile& profile, double rel_tol, int max_level)
      : profile_(profile), max_level_(max_level) {
    radius_ = profile_zeta_radius(profile);
    levels_.resize(static_cast<std::size_t>(max_level) + 1);
    const auto& base = samples(0);
    const PanelGrid g = grid_for(radius_, 0);
    double l1 = 0.0;
    for (int p = 0; p < g.panels; ++p)
      for (int slot = 0; slot < 15; ++slot)
        l1 += 0.5 * g.h * rule().wk[(slot + 1) / 2] * std::abs(base[static_cast<std::size_t>(p) * 15 + slot]);
    tol_ = std::max(1e-300, rel_tol * l1);
  }

  double abs_tol() const { return tol_; }

  // (value, error estimate)
  std::pair<cplx, double> operator()(double t) const {
    if (radius_ == 0.0) return {0.0, 0.0};
    const double at = std::max(std::abs(t), 1.0);
    int level = 0;
    while (level < max_level_ && grid_for(radius_, level).h > 3.0 * std::numbers::pi / at) ++level;
    for (;; ++level) {
      const PanelGrid g = grid_for(radius_, level);
      const auto& vals = samples(level);
      std::array<cplx, 8> ep{}, em{};
      for (int i = 0; i < 8; ++i) {
        ep[i] = std::polar(1.0, 0.5 * g.h * rule().x[i] * t);
        em[i] = std::conj(ep[i]);
      }
      const cplx step = std::polar(1.0, g.h * t);
      cplx phase;
      cplx kron = 0.0, gauss = 0.0;
      for (int p = 0; p < g.panels; ++p) {
        if (p % 32 == 0)
          phase = std::polar(1.0, g.center(p) * t);
        else
          phase *= step;
        const cplx* v = vals.data() + static_cast<std::size_t>(p) * 15;
        cplx k = rule().wk[0] * v[0];
        cplx gs = rule().wg[0] * v[0];
        for (int i = 1; i < 8; ++i) {
          const cplx pair = v[2 * i - 1] * ep[i] + v[2 * i] * em[i];
          k += rule().wk[i] * pair;
          gs += rule().wg[i] * pair;
        }
        kron += phase * k;
        gauss += phase * gs;
      }
      const double half = 0.5 * g.h;
      const double err = std::abs(kron - gauss) * half;
      if (err <= tol_ || level >= max_level_) return {kron * half, err};
    }
  }

 private:
  const std::vector<cplx>& samples(int level) const {
    auto& slot = levels_[static_cast<std::size_t>(level)];
    if (!slot) {
      if (std::holds_alternative<CutoffDerivativeProfile>(profile_)) {
        slot = cutoff_level_samples(level);
      } else {
        const auto& a = std::get<SchwartzAmplitude>(profile_);
        const PanelGrid g = grid_for(radius_, level);
        auto values = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(g.panels) * 15);
        for (int p = 0; p < g.panels; ++p)
          for (int s = 0; s < 15; ++s) (*values)[static_cast<std::size_t>(p) * 15 + s] = a(g.node(p, s));
        slot = values;
      }
    }
    return *slot;
  }

  ZetaProfile profile_;
  int max_level_;
  double radius_ = 0.0;
  double tol_ = 0.0;
  mutable std::vector<std::shared_ptr<const std::vector<cplx>>> levels_;
};

// Closed-form transform of a profile, prepared once per evaluation.
struct ClosedTransform {
  explicit ClosedTransform(const ZetaProfile& p) {
    if (const auto* a = std::get_if<SchwartzAmplitude>(&p)) {
      transform = fourier_transform(*a);
      cutoff = false;
    }
  }
  cplx operator()(double t) const { return cutoff ? cplx(alpha_prime(t)) : transform(t); }
  SchwartzAmplitude transform;
  bool cutoff = true;
};

// Coefficients of var^d, d = 0..deg; var < 0 means no splitting.
std::vector<CPolynomial> split_by_power(const CPolynomial& p, int var) {
  if (var < 0) return {p};
  const auto v = static_cast<std::size_t>(var);
  std::vector<CPolynomial> out;
  for (int d = 0; d <= p.degree_in(v); ++d) out.push_back(p.coefficient_of(v, d));
  return out;
}

PhaseFunction intersecting_phase(const Intersecting& d) {
  const SplittingData split(d.n, d.k);
  return build_model_phase(d.phase ? *d.phase : ModelPhaseData::trivial(split));
}

// Sum over components of x^e ∫ dv e^{i phi(y,v)/x} v_profile(v) ∫_{-inf}^{Z} T(t) P(x, y, y_k - x t, v) chi dt,
// with T either the closed-form or the numerical zeta transform.
// `make` returns (transform, absolute accuracy of the transform).
template <class MakeTransform>
EvalReport intersecting_eval(const Intersecting& d, double x, const linalg::Vector& y, const QuadratureSettings& s,
                             MakeTransform&& make, EvalMethod method) {
  require_x(x);
  d.validate();
  if (y.size() != d.n - 1) throw DimensionError("intersecting evaluation: y has wrong size");
  quad::Options opt = options(s);
  const double base_abs_tol = opt.abs_tol;
  const double yk = y[d.k - 1];
  const double Z = yk / x;
  const std::size_t nv = d.passive_vars();
  const int v_slot = d.k == 2 ? d.n + 1 : -1;
  const double lower_c = d.cutoff ? (yk - d.cutoff->zero_after) / x : -kInf;
  const PhaseFunction phi = intersecting_phase(d);

  EvalReport rep;
  rep.method = method;
  for (const auto& comp : d.components) {
    if (comp.passive.is_zero()) continue;
    if (d.k == 2 && comp.v_profile.is_zero()) continue;
    const auto [transform, transform_tol] = make(comp.profile);
    double pscale = 0.0;
    for (const auto& [e, c] : comp.passive.terms()) pscale += std::abs(c);
    // Below the transform's own accuracy the outer integrand is noise.
    opt.abs_tol = std::max(base_abs_tol, 16.0 * transform_tol * pscale);
    const auto [lo, hi] = profile_transform_support(comp.profile);
    const auto pieces = split_by_power(comp.passive, v_slot);

    std::vector<cplx> g(pieces.size(), 0.0);
    double err = 0.0;
    for (std::size_t dpow = 0; dpow < pieces.size(); ++dpow) {
      const CPolynomial& P = pieces[dpow];
      if (P.is_zero()) continue;
      std::vector<double> pt(nv, 0.0);
      pt[0] = x;
      for (int i = 0; i < d.n - 1; ++i) pt[static_cast<std::size_t>(i) + 1] = y[i];
      double inner_err = 0.0;
      auto f = [&](double t) -> cplx {
        const double ybar = yk - x * t;
        const double chi = d.cutoff ? (*d.cutoff)(ybar) : 1.0;
        if (chi == 0.0) return 0.0;
        pt[static_cast<std::size_t>(d.n)] = ybar;
        const cplx pv = P(std::span<const double>(pt)) * chi;
        const auto [tv, te] = transform(t);
        inner_err = std::max(inner_err, te * std::abs(pv));
        return tv * pv;
      };
      const double upper = std::min(Z, hi);
      quad::Result r;
      double span_len = 0.0;
      if (upper <= lower_c) {
        r = quad::Result{};
      } else if (upper <= lo) {
        r = quad::integrate_to(f, upper, opt);
        span_len = 60.0;
      } else {
        const double a = std::max(lo, lower_c);
        r = quad::integrate(f, a, upper, opt);
        span_len = upper - a;
        if (lower_c < lo) {
          const quad::Result tail = quad::integrate_to(f, lo, opt);
          r.value += tail.value;
          r.error += tail.error;
          r.converged = r.converged && tail.converged;
          span_len += 60.0;
        }
      }
      g[dpow] = r.value;
      err += r.error + inner_err * span_len;
      rep.converged = rep.converged && r.converged;
    }

    if (d.k == 1) {
      const cplx phase = std::polar(1.0, phi.eval(std::span<const double>(y.data(), y.size()), {}) / x);
      rep.value += phase * g[0];
      rep.est_error += err;
      continue;
    }
    auto fv = [&](double v) -> cplx {
      const double vv[1] = {v};
      cplx poly = 0.0;
      double pw = 1.0;
      for (const auto& gd : g) {
        poly += gd * pw;
        pw *= v;
      }
      const double ph = phi.eval(std::span<const double>(y.data(), y.size()), std::span<const double>(vv, 1));
      return std::polar(1.0, ph / x) * comp.v_profile(v) * poly;
    };
    const auto [vlo, vhi] = comp.v_profile.support();
    const quad::Result rv = quad::integrate(fv, vlo, vhi, opt);
    rep.value += rv.value;
    const double vmax = std::max(std::abs(vlo), std::abs(vhi));
    const double poly_growth = std::max(1.0, std::pow(vmax, static_cast<double>(g.size() - 1)));
    rep.est_error += rv.error + err * comp.v_profile.abs_sum() * (vhi - vlo) * poly_growth;
    rep.converged = rep.converged && rv.converged;
  }
  const double pre = std::pow(x, d.reduced_exponent());
  rep.value *= pre;
  rep.est_error *= pre;
  return rep;
}

}  // namespace

std::string to_string(EvalMethod m) {
  switch (m) {
    case EvalMethod::DirectQuadrature:
      return "direct_quadrature";
    case EvalMethod::FourierReduced:
      return "fourier_reduced";
    case EvalMethod::ClosedForm:
      return "closed_form";
  }
  return {};
}

cplx profile_value(const ZetaProfile& p, double zeta) {
  if (const auto* a = std::get_if<SchwartzAmplitude>(&p)) return (*a)(zeta);
  return cutoff_sampler()(zeta);
}

cplx profile_transform(const ZetaProfile& p, double Z) {
  if (const auto* a = std::get_if<SchwartzAmplitude>(&p)) return fourier_transform(*a)(Z);
  return alpha_prime(Z);
}

cplx profile_total(const ZetaProfile& p) {
  if (const auto* a = std::get_if<SchwartzAmplitude>(&p)) return kTwoPi * (*a)(0.0);
  return 1.0;
}

double profile_zeta_radius(const ZetaProfile& p) {
  if (const auto* a = std::get_if<SchwartzAmplitude>(&p)) return a->support_radius();
  return kCutoffZetaRadius;
}

std::pair<double, double> profile_transform_support(const ZetaProfile& p) {
  if (const auto* a = std::get_if<SchwartzAmplitude>(&p)) return fourier_transform(*a).support();
  return {0.0, 1.0};
}

double YbarCutoff::operator()(double ybar) const {
  return 1.0 - alpha((ybar - flat_until) / (zero_after - flat_until));
}

void Intersecting::validate() const {
  if (n < 2 || n > 3) throw DimensionError("intersecting numerics support n = 2 or 3");
  if (k < 1 || k > n - 1) throw DimensionError("intersecting: need 1 <= k <= n-1");
  for (const auto& c : components)
    if (c.passive.nvars() != passive_vars())
      throw DimensionError("intersecting: passive polynomial must use (x, y, ybar, v)");
  if (cutoff && !(cutoff->zero_after > cutoff->flat_until)) throw DimensionError("ybar cutoff: need flat_until < zero_after");
  if (phase && (phase->split.n != n || phase->split.k != k)) throw DimensionError("intersecting: phase splitting mismatch");
}

void Fibred::validate() const {
  if (n < 2 || n > 3) throw DimensionError("fibred numerics support n = 2 or 3");
  if (k < 1 || k > n - 1) throw DimensionError("fibred: need 1 <= k <= n-1");
  if (phase_tilde.nvars() != static_cast<std::size_t>(n + k - 2))
    throw DimensionError("fibred: phase must use (w, rho, y'', v)");
  if (amplitude.nvars() != static_cast<std::size_t>(n + k - 1))
    throw DimensionError("fibred: amplitude must use (rho, w, sigma, y'', v)");
  if (static_cast<int>(v_profiles.size()) != k - 1) throw DimensionError("fibred: need k-1 v profiles");
}

EvalReport eval_type1(const Type1& d, double x, const linalg::Vector& y) {
  require_x(x);
  if (y.size() != d.n - 1 || d.phase.n_y() != d.n - 1 || d.phase.n_v() != 0)
    throw DimensionError("type1: phase must be a function of y only");
  if (d.amplitude.nvars() != static_cast<std::size_t>(d.n)) throw DimensionError("type1: amplitude must use (x, y)");
  std::vector<double> pt(static_cast<std::size_t>(d.n));
  pt[0] = x;
  for (int i = 0; i < d.n - 1; ++i) pt[static_cast<std::size_t>(i) + 1] = y[i];
  const double ph = d.phase.eval(std::span<const double>(y.data(), y.size()), {});
  EvalReport r;
  r.value = std::pow(x, d.q()) * std::polar(1.0, ph / x) * d.amplitude(std::span<const double>(pt));
  r.method = EvalMethod::ClosedForm;
  return r;
}

namespace {

void check_type2(const Type2& d, const linalg::Vector& y) {
  if (d.k < 1 || d.k > d.n - 1) throw DimensionError("type2: need 1 <= k <= n-1");
  if (y.size() != d.n - 1) throw DimensionError("type2: y has wrong size");
  for (const auto& c : d.components) {
    if (c.passive.nvars() != static_cast<std::size_t>(d.n - d.k)) throw DimensionError("type2: passive must use (x, y'')");
    if (static_cast<int>(c.factors.size()) != d.k) throw DimensionError("type2: need one factor per primed coordinate");
  }
}

std::vector<double> type2_passive_point(const Type2& d, double x, const linalg::Vector& y) {
  std::vector<double> pt(static_cast<std::size_t>(d.n - d.k));
  pt[0] = x;
  for (int i = d.k; i < d.n - 1; ++i) pt[static_cast<std::size_t>(i - d.k) + 1] = y[i];
  return pt;
}

}  // namespace

EvalReport eval_type2(const Type2& d, double x, const linalg::Vector& y) {
  require_x(x);
  check_type2(d, y);
  const auto pt = type2_passive_point(d, x, y);
  cplx sum = 0.0;
  for (const auto& c : d.components) {
    cplx term = c.passive(std::span<const double>(pt));
    for (int i = 0; i < d.k; ++i) term *= c.factors[static_cast<std::size_t>(i)](y[i] / x);
    sum += term;
  }
  EvalReport r;
  r.value = std::pow(x, d.q()) * sum;
  r.method = EvalMethod::ClosedForm;
  return r;
}

EvalReport eval_type2_synthesis(const Type2& d, double x, const linalg::Vector& y, const QuadratureSettings& s) {
  require_x(x);
  check_type2(d, y);
  const quad::Options opt = options(s);
  const auto pt = type2_passive_point(d, x, y);
  EvalReport r;
  r.method = EvalMethod::DirectQuadrature;
  for (const auto& c : d.components) {
    cplx term = c.passive(std::span<const double>(pt));
    double rel_err = 0.0;
    for (int i = 0; i < d.k; ++i) {
      const SchwartzAmplitude vhat = (1.0 / kTwoPi) * fourier_transform(c.factors[static_cast<std::size_t>(i)].reflect());
      const double z = y[i] / x;
      const auto [lo, hi] = vhat.support();
      auto f = [&](double eta) { return std::polar(1.0, z * eta) * vhat(eta); };
      const quad::Result q = quad::integrate(f, lo, hi, opt);
      term *= q.value;
      rel_err += q.error / std::max(std::abs(q.value), 1e-300);
      r.converged = r.converged && q.converged;
    }
    r.value += term;
    r.est_error += std::abs(term) * rel_err;
  }
  const double pre = std::pow(x, d.q());
  r.value *= pre;
  r.est_error *= pre;
  return r;
}

EvalReport eval_intersecting_direct(const Intersecting& d, double x, const linalg::Vector& y,
                                    const QuadratureSettings& s) {
  auto wrap = [&](const ZetaProfile& p) {
    auto t = std::make_shared<ZetaTransformer>(p, s.rel_tol * 1e-2, s.max_zeta_level);
    const double tol = t->abs_tol();
    return std::make_pair(std::function<std::pair<cplx, double>(double)>([t](double z) { return (*t)(z); }), tol);
  };
  return intersecting_eval(d, x, y, s, wrap, EvalMethod::DirectQuadrature);
}

EvalReport eval_intersecting_reduced(const Intersecting& d, double x, const linalg::Vector& y,
                                     const QuadratureSettings& s) {
  auto wrap = [](const ZetaProfile& p) {
    auto t = std::make_shared<ClosedTransform>(p);
    return std::make_pair(
        std::function<std::pair<cplx, double>(double)>([t](double z) { return std::pair<cplx, double>((*t)(z), 0.0); }),
        0.0);
  };
  return intersecting_eval(d, x, y, s, wrap, EvalMethod::FourierReduced);
}

EvalReport eval_fibred(const Fibred& d, const ChartPoint& p, const QuadratureSettings& s) {
  d.validate();
  if (p.chart.kind != ChartKind::FfProjective || p.chart.j != d.k || p.chart.n != d.n || p.chart.k != d.k)
    throw PreconditionError("fibred evaluation needs a point of the ff_projective_k chart");
  const double rho = p.coords[0];
  const double sigma = p.coords[1];
  if (!(rho > 0.0) || !(sigma > 0.0)) throw PreconditionError("fibred evaluation needs rho > 0 and sigma > 0");
  const int nw = d.k - 1;
  const int nypp = d.n - 1 - d.k;
  // phase slots: (w, rho, y'', v); amplitude slots: (rho, w, sigma, y'', v)
  std::vector<double> ph(static_cast<std::size_t>(d.n + d.k - 2));
  std::vector<double> am(static_cast<std::size_t>(d.n + d.k - 1));
  for (int i = 0; i < nw; ++i) ph[static_cast<std::size_t>(i)] = p.coords[2 + i];
  ph[static_cast<std::size_t>(nw)] = rho;
  for (int i = 0; i < nypp; ++i) ph[static_cast<std::size_t>(nw + 1 + i)] = p.coords[2 + nw + i];
  am[0] = rho;
  for (int i = 0; i < nw; ++i) am[static_cast<std::size_t>(1 + i)] = p.coords[2 + i];
  am[static_cast<std::size_t>(1 + nw)] = sigma;
  for (int i = 0; i < nypp; ++i) am[static_cast<std::size_t>(2 + nw + i)] = p.coords[2 + nw + i];

  EvalReport r;
  const double pre = std::pow(rho, d.rho_exponent()) * std::pow(sigma, d.sigma_exponent());
  if (d.k == 1) {
    r.value = pre * std::polar(1.0, d.phase_tilde(std::span<const double>(ph)) / sigma) * d.amplitude(std::span<const double>(am));
    r.method = EvalMethod::ClosedForm;
    return r;
  }
  const std::size_t vph = ph.size() - 1;
  const std::size_t vam = am.size() - 1;
  const SchwartzAmplitude& prof = d.v_profiles[0];
  if (prof.is_zero() || d.amplitude.is_zero()) {
    r.method = EvalMethod::DirectQuadrature;
    return r;
  }
  auto f = [&](double v) -> cplx {
    ph[vph] = v;
    am[vam] = v;
    return std::polar(1.0, d.phase_tilde(std::span<const double>(ph)) / sigma) * d.amplitude(std::span<const double>(am)) * prof(v);
  };
  const auto [lo, hi] = prof.support();
  const quad::Result q = quad::integrate(f, lo, hi, options(s));
  r.value = pre * q.value;
  r.est_error = pre * q.error;
  r.converged = q.converged;
  r.method = EvalMethod::DirectQuadrature;
  return r;
}

int model_n(const ModelDistribution& d) {
  return std::visit([](const auto& m) { return m.n; }, d);
}

int model_k(const ModelDistribution& d) {
  return std::visit(
      [](const auto& m) -> int {
        if constexpr (requires { m.k; })
          return m.k;
        else
          return 1;
      },
      d);
}

EvalReport evaluate(const ModelDistribution& d, double x, const linalg::Vector& y, const QuadratureSettings& s) {
  return std::visit(
      [&](const auto& m) -> EvalReport {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Type1>)
          return eval_type1(m, x, y);
        else if constexpr (std::is_same_v<T, Type2>)
          return eval_type2(m, x, y);
        else if constexpr (std::is_same_v<T, Intersecting>)
          return eval_intersecting_reduced(m, x, y, s);
        else
          return eval_fibred(m, to_chart(XPoint{x, y}, Chart::ff_projective(m.n, m.k, m.k)), s);
      },
      d);
}

std::vector<EvalReport> evaluate_grid(const ModelDistribution& d, const std::vector<XPoint>& points, unsigned threads,
                                      const QuadratureSettings& s) {
  return parallel_map(points.size(), [&](std::size_t i) { return evaluate(d, points[i].x, points[i].y, s); }, threads);
}

}  // namespace legendre
