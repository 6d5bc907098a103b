#include "legendre/phase.hpp"

#include "legendre/errors.hpp"

#include <algorithm>
#include <cmath>

namespace legendre {

PhaseFunction::PhaseFunction(int n_y, int n_v, Polynomial poly) : n_y_(n_y), n_v_(n_v), poly_(std::move(poly)) {
  if (n_y < 0 || n_v < 0) throw DimensionError("PhaseFunction: negative dimension");
  const auto total = static_cast<std::size_t>(n_y + n_v);
  if (poly_.nvars() != total) throw DimensionError("PhaseFunction: polynomial has wrong variable count");
  grad_.reserve(total);
  for (std::size_t i = 0; i < total; ++i) grad_.push_back(poly_.derivative(i));
  hess_.resize(total);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) hess_[i].push_back(grad_[i].derivative(j));
}

std::vector<double> PhaseFunction::join(std::span<const double> y, std::span<const double> v) const {
  if (static_cast<int>(y.size()) != n_y_ || static_cast<int>(v.size()) != n_v_)
    throw DimensionError("PhaseFunction evaluated with wrong argument sizes");
  std::vector<double> p(y.begin(), y.end());
  p.insert(p.end(), v.begin(), v.end());
  return p;
}

double PhaseFunction::eval(std::span<const double> y, std::span<const double> v) const {
  const auto p = join(y, v);
  return poly_(std::span<const double>(p));
}

linalg::Vector PhaseFunction::gradient(std::span<const double> y, std::span<const double> v) const {
  const auto p = join(y, v);
  linalg::Vector g(static_cast<Eigen::Index>(grad_.size()));
  for (std::size_t i = 0; i < grad_.size(); ++i) g[static_cast<Eigen::Index>(i)] = grad_[i](std::span<const double>(p));
  return g;
}

linalg::Vector PhaseFunction::grad_y(std::span<const double> y, std::span<const double> v) const {
  return gradient(y, v).head(n_y_);
}

linalg::Vector PhaseFunction::grad_v(std::span<const double> y, std::span<const double> v) const {
  return gradient(y, v).tail(n_v_);
}

linalg::Matrix PhaseFunction::hessian(std::span<const double> y, std::span<const double> v) const {
  const auto p = join(y, v);
  const auto total = static_cast<Eigen::Index>(grad_.size());
  linalg::Matrix h(total, total);
  for (Eigen::Index i = 0; i < total; ++i)
    for (Eigen::Index j = 0; j < total; ++j)
      h(i, j) = hess_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](std::span<const double>(p));
  return h;
}

linalg::Matrix PhaseFunction::hess_mixed(std::span<const double> y, std::span<const double> v) const {
  return hessian(y, v).bottomRows(n_v_);
}

double PhaseFunction::gradient_self_test(std::mt19937_64& rng, int samples, double step) const {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto total = static_cast<std::size_t>(n_y_ + n_v_);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> p(total);
    for (auto& c : p) c = u(rng);
    std::span<const double> y(p.data(), static_cast<std::size_t>(n_y_));
    std::span<const double> v(p.data() + n_y_, static_cast<std::size_t>(n_v_));
    const linalg::Vector g = gradient(y, v);
    for (std::size_t i = 0; i < total; ++i) {
      auto plus = p;
      auto minus = p;
      plus[i] += step;
      minus[i] -= step;
      const double fd = (poly_(std::span<const double>(plus)) - poly_(std::span<const double>(minus))) / (2 * step);
      const double gi = g[static_cast<Eigen::Index>(i)];
      worst = std::max(worst, std::abs(fd - gi) / std::max(1.0, std::abs(gi)));
    }
  }
  return worst;
}

IntersectingPhase::IntersectingPhase(PhaseFunction phase) : phase_(std::move(phase)) {
  if (phase_.n_v() < 1) throw DimensionError("IntersectingPhase needs the half-line parameter s");
}

PhaseFunction IntersectingPhase::boundary_phase() const {
  const auto& poly = phase_.polynomial();
  const std::size_t s_slot = poly.nvars() - 1;
  const Polynomial at_zero = poly.coefficient_of(s_slot, 0);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s_slot; ++i) keep.push_back(i);
  Polynomial reduced(s_slot);
  for (const auto& [e, c] : at_zero.terms()) reduced.add_term(Polynomial::Exponents(e.begin(), e.end() - 1), c);
  return PhaseFunction(phase_.n_y(), phase_.n_v() - 1, reduced);
}

ModelPhaseData::ModelPhaseData(SplittingData split_, Polynomial t_prime_, std::vector<Polynomial> y_tilde_)
    : split(split_), t_prime(std::move(t_prime_)), y_tilde(std::move(y_tilde_)) {
  const auto nv = local_vars();
  if (t_prime.nvars() != nv) throw DimensionError("ModelPhaseData: T' must use (y_k, y'', v)");
  if (static_cast<int>(y_tilde.size()) != split.k - 1) throw DimensionError("ModelPhaseData: Y~ needs k-1 components");
  for (const auto& c : y_tilde)
    if (c.nvars() != nv) throw DimensionError("ModelPhaseData: Y~ must use (y_k, y'', v)");
  if (!t_prime.coefficient_of(0, 0).is_zero()) throw PreconditionError("ModelPhaseData: T' must vanish at y_k = 0");
  for (const auto& c : y_tilde)
    if (!c.coefficient_of(0, 0).is_zero()) throw PreconditionError("ModelPhaseData: Y~ must vanish at y_k = 0");
}

ModelPhaseData ModelPhaseData::from_factors(SplittingData split, const Polynomial& t, const std::vector<Polynomial>& y) {
  const auto nv = static_cast<std::size_t>(split.n - 1);
  const Polynomial yk = Polynomial::variable(nv, 0);
  std::vector<Polynomial> yt;
  for (const auto& c : y) yt.push_back(yk * c);
  return ModelPhaseData(split, yk * t, std::move(yt));
}

ModelPhaseData ModelPhaseData::trivial(SplittingData split) {
  const auto nv = static_cast<std::size_t>(split.n - 1);
  return ModelPhaseData(split, Polynomial(nv), std::vector<Polynomial>(static_cast<std::size_t>(split.k - 1), Polynomial(nv)));
}

std::vector<std::size_t> ModelPhaseData::local_to_phase_slots(std::size_t) const {
  const int n = split.n;
  const int k = split.k;
  std::vector<std::size_t> map;
  map.push_back(static_cast<std::size_t>(k - 1));
  for (int j = 0; j < split.fibre_dim(); ++j) map.push_back(static_cast<std::size_t>(k + j));
  for (int i = 0; i < k - 1; ++i) map.push_back(static_cast<std::size_t>(n - 1 + i));
  return map;
}

bool ModelPhaseData::is_trivial() const {
  if (!t_prime.is_zero()) return false;
  return std::all_of(y_tilde.begin(), y_tilde.end(), [](const Polynomial& p) { return p.is_zero(); });
}

namespace {

Polynomial model_phase_polynomial(const ModelPhaseData& data, std::size_t total) {
  const auto slots = data.local_to_phase_slots();
  Polynomial phi = -data.t_prime.embed(total, slots);
  const int n = data.split.n;
  for (int i = 0; i < data.split.k - 1; ++i) {
    const Polynomial v = Polynomial::variable(total, static_cast<std::size_t>(n - 1 + i));
    const Polynomial yt = Polynomial::variable(total, static_cast<std::size_t>(i));
    phi += v * (yt - data.y_tilde[static_cast<std::size_t>(i)].embed(total, slots));
  }
  return phi;
}

}  // namespace

PhaseFunction build_model_phase(const ModelPhaseData& data) {
  const int n_y = data.split.n - 1;
  const int n_v = data.split.k - 1;
  const auto total = static_cast<std::size_t>(n_y + n_v);
  return PhaseFunction(n_y, n_v, model_phase_polynomial(data, total));
}

IntersectingPhase build_model_intersecting_phase(const ModelPhaseData& data) {
  const int n_y = data.split.n - 1;
  const int n_v = data.split.k + 1;
  const auto total = static_cast<std::size_t>(n_y + n_v);
  Polynomial psi = model_phase_polynomial(data, total);
  const Polynomial zeta = Polynomial::variable(total, total - 2);
  const Polynomial ybar = Polynomial::variable(total, total - 1);
  const Polynomial yk = Polynomial::variable(total, static_cast<std::size_t>(data.split.k - 1));
  psi += zeta * (yk - ybar);
  return IntersectingPhase(PhaseFunction(n_y, n_v, psi));
}

bool nondegeneracy_check(const PhaseFunction& phi, std::span<const double> y, std::span<const double> v, double tol) {
  const linalg::Vector g = phi.grad_v(y, v);
  if (g.size() > 0 && g.cwiseAbs().maxCoeff() > tol)
    throw PreconditionError("nondegeneracy_check: point is not on the critical set");
  if (phi.n_v() == 0) return true;
  const linalg::Matrix rows = phi.hess_mixed(y, v);
  return static_cast<int>(linalg::numerical_rank(rows, linalg::kRelativeRankTol, tol)) == phi.n_v();
}

bool intersecting_nondeg_check(const IntersectingPhase& psi, std::span<const double> y,
                               std::span<const double> params, double tol) {
  const auto& phase = psi.phase();
  const int free = psi.n_free();
  if (static_cast<int>(params.size()) != phase.n_v()) throw DimensionError("intersecting_nondeg_check: parameter size");
  if (params.back() < -tol) throw PreconditionError("intersecting_nondeg_check: s must be nonnegative");
  const linalg::Vector g = phase.grad_v(y, params);
  for (int i = 0; i < free; ++i)
    if (std::abs(g[i]) > tol) throw PreconditionError("intersecting_nondeg_check: point is not critical in v");
  const linalg::Matrix mixed = phase.hess_mixed(y, params);
  const Eigen::Index cols = mixed.cols();
  linalg::Matrix rows(free + 2, cols);
  rows.row(0) = mixed.row(free);  // d(∂psi/∂s)
  for (int i = 0; i < free; ++i) rows.row(i + 1) = mixed.row(i);
  rows.row(free + 1).setZero();
  rows(free + 1, cols - 1) = 1.0;  // ds
  return static_cast<int>(linalg::numerical_rank(rows, linalg::kRelativeRankTol, tol)) == free + 2;
}

std::optional<linalg::Vector> find_critical_point(const PhaseFunction& phi, std::span<const double> y,
                                                  std::span<const double> seed, double tol, int max_iterations) {
  const int p = phi.n_v();
  if (static_cast<int>(seed.size()) != p) throw DimensionError("find_critical_point: seed size");
  linalg::Vector v = Eigen::Map<const linalg::Vector>(seed.data(), p);
  auto residual = [&](const linalg::Vector& at) {
    return phi.grad_v(y, std::span<const double>(at.data(), static_cast<std::size_t>(p)));
  };
  linalg::Vector g = residual(v);
  for (int it = 0; it <= max_iterations; ++it) {
    const double r = g.size() ? g.norm() : 0.0;
    if (r <= tol) return v;
    if (it == max_iterations) break;
    const linalg::Matrix h =
        phi.hessian(y, std::span<const double>(v.data(), static_cast<std::size_t>(p))).bottomRightCorner(p, p);
    Eigen::FullPivLU<linalg::Matrix> lu(h);
    if (!lu.isInvertible()) return std::nullopt;
    const linalg::Vector step = lu.solve(-g);
    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 20; ++half, lambda *= 0.5) {
      const linalg::Vector trial = v + lambda * step;
      const linalg::Vector gt = residual(trial);
      if (gt.norm() < r) {
        v = trial;
        g = gt;
        improved = true;
        break;
      }
    }
    if (!improved) return std::nullopt;
  }
  return std::nullopt;
}

ContactPoint induced_point(const PhaseFunction& phi, std::span<const double> y, std::span<const double> v) {
  return ContactPoint(Eigen::Map<const linalg::Vector>(y.data(), static_cast<Eigen::Index>(y.size())),
                      -phi.eval(y, v), phi.grad_y(y, v));
}

TangentSubspace legendrian_tangent_space(const PhaseFunction& phi, std::span<const double> y,
                                         std::span<const double> v) {
  const int d = phi.n_y();
  const int p = phi.n_v();
  const linalg::Matrix h = phi.hessian(y, v);
  const linalg::Vector grad = phi.gradient(y, v);
  const linalg::Matrix kernel = p > 0 ? linalg::nullspace(h.bottomRows(p)) : linalg::Matrix::Identity(d, d);
  // Differential of (y, v) -> (y, -phi, d_y phi).
  linalg::Matrix push(2 * d + 1, d + p);
  push.setZero();
  push.topLeftCorner(d, d).setIdentity();
  push.row(d) = -grad.transpose();
  push.bottomRows(d) = h.topRows(d);
  return TangentSubspace::from_columns(induced_point(phi, y, v), push * kernel);
}

LegendrianSample induced_legendrian_sample(const PhaseFunction& phi, const std::vector<std::vector<double>>& y_grid,
                                           const std::vector<std::vector<double>>& v_seeds, double tol) {
  LegendrianSample out;
  std::vector<std::vector<double>> seeds = v_seeds;
  if (phi.n_v() == 0) seeds = {std::vector<double>{}};
  for (const auto& y : y_grid) {
    if (static_cast<int>(y.size()) != phi.n_y()) throw DimensionError("induced_legendrian_sample: grid point size");
    std::vector<linalg::Vector> found;
    for (const auto& seed : seeds) {
      auto v = find_critical_point(phi, y, seed, tol);
      if (!v) {
        ++out.skipped;
        continue;
      }
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const linalg::Vector& f) {
        return (f - *v).norm() <= 1e-9 * (1.0 + f.norm());
      });
      if (duplicate) continue;
      found.push_back(*v);
      out.points.push_back(induced_point(phi, y, std::span<const double>(v->data(), static_cast<std::size_t>(v->size()))));
      out.y.push_back(Eigen::Map<const linalg::Vector>(y.data(), static_cast<Eigen::Index>(y.size())));
      out.params.push_back(*v);
    }
  }
  if (out.skipped > 0)
    out.notes.push_back(std::to_string(out.skipped) + " seed(s) did not converge to a critical point");
  return out;
}

namespace {

void monomials(std::size_t nvars, int degree, Polynomial::Exponents& e, std::size_t var, int left,
               std::vector<Polynomial::Exponents>& out) {
  if (var == nvars) {
    out.push_back(e);
    return;
  }
  for (int p = 0; p <= left; ++p) {
    e[var] = p;
    monomials(nvars, degree, e, var + 1, left - p, out);
  }
  e[var] = 0;
}

}  // namespace

Polynomial random_polynomial(std::size_t nvars, int degree, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Polynomial::Exponents> all;
  Polynomial::Exponents e(nvars, 0);
  monomials(nvars, degree, e, 0, degree, all);
  Polynomial p(nvars);
  for (const auto& m : all) p.add_term(m, u(rng));
  return p;
}

LegendrePair random_legendre_pair(const SplittingData& split, std::mt19937_64& rng, int degree) {
  const int n_y = split.n - 1;
  const int k = split.k;
  const auto nl = static_cast<std::size_t>(n_y);
  std::vector<Polynomial> y_factors;
  for (int i = 0; i < k - 1; ++i) y_factors.push_back(random_polynomial(nl, degree, rng));
  ModelPhaseData data = ModelPhaseData::from_factors(split, random_polynomial(nl, degree, rng), y_factors);
  const IntersectingPhase psi = build_model_intersecting_phase(data);
  const PhaseFunction boundary = psi.boundary_phase();

  // Boundary point of L_1: y' = 0, random y'' and v, zeta = ybar = 0.
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> y(nl, 0.0);
  for (int i = k; i < n_y; ++i) y[static_cast<std::size_t>(i)] = u(rng);
  std::vector<double> params(static_cast<std::size_t>(psi.phase().n_v()), 0.0);
  for (int i = 0; i < k - 1; ++i) params[static_cast<std::size_t>(i)] = u(rng);
  const std::vector<double> bparams(params.begin(), params.end() - 1);

  const TangentSubspace t1 = legendrian_tangent_space(psi.phase(), y, params);
  const TangentSubspace t2 = legendrian_tangent_space(boundary, y, bparams);
  const ContactPoint q = induced_point(boundary, y, bparams);

  // B = [[A, 0], [E, D]] keeps C = {y' = 0}; the lift acts by B on dy and B^{-T} on dmu.
  linalg::Matrix B = linalg::Matrix::Identity(n_y, n_y);
  for (int r = 0; r < n_y; ++r)
    for (int c = 0; c < n_y; ++c)
      if (!(r < k && c >= k)) B(r, c) += 0.5 * u(rng);
  const linalg::Matrix BinvT = B.inverse().transpose();
  linalg::Matrix M = linalg::Matrix::Zero(2 * n_y + 1, 2 * n_y + 1);
  M.topLeftCorner(n_y, n_y) = B;
  M(n_y, n_y) = 1.0;
  M.bottomRightCorner(n_y, n_y) = BinvT;
  const ContactPoint base(B * q.y, q.tau, BinvT * q.mu);
  return {split, data, base, TangentSubspace::from_columns(base, M * t1.basis_matrix()),
          TangentSubspace::from_columns(base, M * t2.basis_matrix())};
}

}  // namespace legendre
