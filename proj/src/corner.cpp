#include "legendre/corner.hpp"

#include "legendre/errors.hpp"
#include "legendre/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace legendre {

namespace {

using linalg::CMatrix;
using linalg::Matrix;

std::vector<double> geometric(double start, double ratio, int levels) {
  std::vector<double> out;
  for (int i = 0; i < levels; ++i) out.push_back(start * std::pow(ratio, i));
  return out;
}

// Vandermonde in the scaled variable t / t0, skipping index drop.
Matrix vandermonde(const std::vector<double>& pts, double t0, int N, int drop = -1) {
  Matrix V(static_cast<long>(pts.size()) - (drop >= 0 ? 1 : 0), N + 1);
  long r = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<int>(i) == drop) continue;
    double p = 1.0;
    for (int j = 0; j <= N; ++j, p *= pts[i] / t0) V(r, j) = p;
    ++r;
  }
  return V;
}

CMatrix solve_ls(const Matrix& V, const CMatrix& rhs) {
  Eigen::ColPivHouseholderQR<Matrix> qr(V);
  CMatrix out(V.cols(), rhs.cols());
  out.real() = qr.solve(Matrix(rhs.real()));
  out.imag() = qr.solve(Matrix(rhs.imag()));
  return out;
}

// values(i, l) at (sigma_i, rho_l); returns c(j, l) in unscaled variables.
CMatrix two_stage_fit(const CMatrix& values, const std::vector<double>& sigmas, const std::vector<double>& rhos,
                      int N, double sigma0, double rho0, int drop_sigma, int drop_rho) {
  const Matrix Vs = vandermonde(sigmas, sigma0, N, drop_sigma);
  const Matrix Vr = vandermonde(rhos, rho0, N, drop_rho);
  CMatrix kept(Vs.rows(), Vr.rows());
  for (long i = 0, r = 0; i < values.rows(); ++i) {
    if (i == drop_sigma) continue;
    for (long l = 0, q = 0; l < values.cols(); ++l) {
      if (l == drop_rho) continue;
      kept(r, q++) = values(i, l);
    }
    ++r;
  }
  const CMatrix d = solve_ls(Vs, kept);                                 // (N+1) x rho points
  const CMatrix c = solve_ls(Vr, CMatrix(d.transpose())).transpose();  // (N+1) x (N+1)
  CMatrix out(N + 1, N + 1);
  for (int j = 0; j <= N; ++j)
    for (int l = 0; l <= N; ++l) out(j, l) = c(j, l) / (std::pow(sigma0, j) * std::pow(rho0, l));
  return out;
}

// Jackknife variance of leave-one-out refits.
Matrix jackknife_variance(const std::vector<CMatrix>& samples) {
  const auto M = static_cast<double>(samples.size());
  CMatrix mean = CMatrix::Zero(samples.front().rows(), samples.front().cols());
  for (const auto& s : samples) mean += s;
  mean /= M;
  Matrix var = Matrix::Zero(mean.rows(), mean.cols());
  for (const auto& s : samples) var += (s - mean).cwiseAbs2();
  return var * ((M - 1.0) / M);
}

}  // namespace

CornerPrefactor intersecting_prefactor(double m, int n, int k) {
  const double r = m + 0.5;
  return {r + n / 4.0 - k / 2.0, m + n / 4.0 - (k - 1) / 2.0};
}

bool AsymptoticTable::indeterminate(int j, int l) const {
  const double u = sigma_unc(j, l);
  return u > std::abs(c(j, l)) && u > indeterminate_floor;
}

AsymptoticTable extract_coefficients(const ChartFunction& u, const Chart& chart, int N, const CornerPrefactor& pre,
                                     const CornerGrid& grid, double m) {
  if (chart.kind != ChartKind::FfProjective || chart.j != chart.k)
    throw PreconditionError("extract_coefficients: needs the chart ff_projective_k");
  if (N < 0) throw DimensionError("extract_coefficients: N must be nonnegative");
  if (grid.sigma_levels < N + 2 || grid.rho_levels < N + 2)
    throw DimensionError("extract_coefficients: need at least N + 2 levels per direction for leave-one-out");
  if (!(grid.sigma0 > 0.0 && grid.sigma0 < 1.0))
    throw PreconditionError("extract_coefficients: sigma0 must lie in (0, 1)");
  if (!(grid.rho0 > 0.0) || !(grid.ratio > 0.0 && grid.ratio < 1.0))
    throw PreconditionError("extract_coefficients: bad rho0 or ratio");
  const int extra = chart.dim() - 2;
  if (grid.fixed.size() != extra)
    throw DimensionError("extract_coefficients: fixed must hold the chart coordinates after sigma");

  const auto sigmas = geometric(grid.sigma0, grid.ratio, grid.sigma_levels);
  const auto rhos = geometric(grid.rho0, grid.ratio, grid.rho_levels);

  AsymptoticTable t;
  t.N = N;
  t.m = m;
  t.prefactor = pre;
  t.condition = std::max(linalg::condition_number(vandermonde(sigmas, grid.sigma0, N)),
                         linalg::condition_number(vandermonde(rhos, grid.rho0, N)));
  if (!(t.condition <= grid.max_condition)) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "extract_coefficients: Vandermonde condition %.3g exceeds %.3g; lower N, raise ratio toward 1, "
                  "or use fewer levels",
                  t.condition, grid.max_condition);
    throw ConvergenceError(buf);
  }

  const std::size_t Ms = sigmas.size();
  const std::size_t Mr = rhos.size();
  const auto samples = parallel_map(
      Ms * Mr,
      [&](std::size_t idx) {
        const double s = sigmas[idx / Mr];
        const double r = rhos[idx % Mr];
        ChartPoint p{chart, linalg::Vector(chart.dim())};
        p.coords[0] = r;
        p.coords[1] = s;
        for (int i = 0; i < extra; ++i) p.coords[2 + i] = grid.fixed[i];
        return u(p) / (std::pow(r, pre.rho_exponent) * std::pow(s, pre.sigma_exponent));
      },
      grid.threads);
  CMatrix values(static_cast<long>(Ms), static_cast<long>(Mr));
  for (std::size_t i = 0; i < Ms; ++i)
    for (std::size_t l = 0; l < Mr; ++l) values(static_cast<long>(i), static_cast<long>(l)) = samples[i * Mr + l];
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!std::isfinite(std::abs(samples[i]))) throw ConvergenceError("extract_coefficients: non-finite sample");

  t.c = two_stage_fit(values, sigmas, rhos, N, grid.sigma0, grid.rho0, -1, -1);
  std::vector<CMatrix> drop_s, drop_r;
  for (int i = 0; i < static_cast<int>(Ms); ++i)
    drop_s.push_back(two_stage_fit(values, sigmas, rhos, N, grid.sigma0, grid.rho0, i, -1));
  for (int l = 0; l < static_cast<int>(Mr); ++l)
    drop_r.push_back(two_stage_fit(values, sigmas, rhos, N, grid.sigma0, grid.rho0, -1, l));
  t.sigma_unc = (jackknife_variance(drop_s) + jackknife_variance(drop_r)).cwiseSqrt();
  return t;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Intersecting: return "intersecting";
    case Verdict::NotIntersecting: return "not_intersecting";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Membership check_membership(const AsymptoticTable& t, double tol) {
  Membership out;
  for (int j = 0; j <= t.N; ++j) {
    for (int l = 0; l < j; ++l) {
      const double a = std::abs(t.c(j, l));
      const double u = t.sigma_unc(j, l);
      if (t.indeterminate(j, l)) {
        out.indeterminate.emplace_back(j, l);
      } else if (a > std::max(tol, 3.0 * u)) {
        out.violations.push_back({j, l, t.c(j, l), u});
      }
    }
  }
  if (!out.violations.empty())
    out.verdict = Verdict::NotIntersecting;
  else if (!out.indeterminate.empty())
    out.verdict = Verdict::Inconclusive;
  else
    out.verdict = Verdict::Intersecting;
  out.intersecting = out.verdict == Verdict::Intersecting;
  return out;
}

bool smooth_on_X(const Polynomial& h, const Chart& chart) {
  if (chart.kind != ChartKind::FfProjective) throw PreconditionError("smooth_on_X: projective chart expected");
  if (h.nvars() != static_cast<std::size_t>(chart.dim())) throw DimensionError("smooth_on_X: wrong variable count");
  const int nw = chart.k - 1;
  for (const auto& [e, c] : h.terms()) {
    if (c == 0.0) continue;
    int w = 0;
    for (int i = 0; i < nw; ++i) w += e[static_cast<std::size_t>(2 + i)];
    if (e[0] < e[1] + w) return false;
  }
  return true;
}

WitnessReport properness_witness(const ChartFunction& u, const Chart& chart, const std::vector<LabelledMultiplier>& hs,
                                 int N, const CornerPrefactor& pre, const CornerGrid& grid, double m, double tol) {
  auto entry = [&](const std::string& label, const Polynomial& h) {
    WitnessEntry e;
    e.label = label;
    e.multiplier = h;
    e.smooth_on_X = smooth_on_X(h, chart);
    ChartFunction hu = [&](const ChartPoint& p) {
      return h(std::span<const double>(p.coords.data(), static_cast<std::size_t>(p.coords.size()))) * u(p);
    };
    e.table = extract_coefficients(hu, chart, N, pre, grid, m);
    e.membership = check_membership(e.table, tol);
    return e;
  };
  WitnessReport out;
  out.base = entry("1", Polynomial::constant(static_cast<std::size_t>(chart.dim()), 1.0));
  bool controls_ok = true;
  bool escaped = false;
  for (const auto& [label, h] : hs) {
    out.entries.push_back(entry(label, h));
    const auto& e = out.entries.back();
    if (e.smooth_on_X)
      controls_ok = controls_ok && e.membership.verdict == Verdict::Intersecting;
    else
      escaped = escaped || e.membership.verdict == Verdict::NotIntersecting;
  }
  out.proper = out.base.membership.verdict == Verdict::Intersecting && controls_ok && escaped;
  return out;
}

}  // namespace legendre
