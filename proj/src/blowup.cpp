#include "legendre/blowup.hpp"

#include "legendre/errors.hpp"

#include <algorithm>
#include <cmath>

namespace legendre {

namespace {

void validate(const Chart& c) {
  if (c.n < 2 || c.k < 1 || c.k > c.n - 1) throw DimensionError("chart: need 1 <= k <= n-1");
  if (c.kind == ChartKind::FfProjective && (c.j < 1 || c.j > c.k))
    throw DimensionError("ff_projective index must lie in 1..k");
}

// A point of the closed blow-up: (x, y') = scale * dir with |dir| = 1, plus y''.
struct Lifted {
  double scale = 0.0;
  linalg::Vector dir;
  linalg::Vector ypp;
};

Lifted lift(const ChartPoint& cp) {
  const Chart& c = cp.chart;
  validate(c);
  if (cp.coords.size() != c.n) throw DimensionError("chart point has wrong coordinate count");
  const int k = c.k;
  const int f = c.n - 1 - k;
  Lifted out;
  out.ypp = cp.coords.tail(f);
  linalg::Vector raw(k + 1);
  double factor = 1.0;
  switch (c.kind) {
    case ChartKind::InteriorMf:
      raw = cp.coords.head(k + 1);
      break;
    case ChartKind::FfProjective: {
      factor = cp.coords[0];
      raw[0] = cp.coords[1];
      int w = 2;
      for (int i = 1; i <= k; ++i) raw[i] = (i == c.j) ? 1.0 : cp.coords[w++];
      break;
    }
    case ChartKind::FfX:
      factor = cp.coords[0];
      raw[0] = 1.0;
      raw.tail(k) = cp.coords.segment(1, k);
      break;
  }
  const double norm = raw.norm();
  if (norm == 0.0) throw PreconditionError("chart point lies on the blown-up face C itself");
  out.dir = raw / norm;
  out.scale = factor * norm;
  return out;
}

ChartPoint lower(const Lifted& p, const Chart& c) {
  const int k = c.k;
  const int f = c.n - 1 - k;
  ChartPoint out{c, linalg::Vector(c.n)};
  out.coords.tail(f) = p.ypp;
  switch (c.kind) {
    case ChartKind::InteriorMf:
      if (p.scale <= 0.0) throw PreconditionError("interior_mf chart does not reach the front face");
      out.coords.head(k + 1) = p.scale * p.dir;
      break;
    case ChartKind::FfProjective: {
      const double dj = p.dir[c.j];
      if (dj <= 0.0) throw PreconditionError("point outside ff_projective domain (needs y_j > 0)");
      out.coords[0] = p.scale * dj;
      out.coords[1] = p.dir[0] / dj;
      int w = 2;
      for (int i = 1; i <= k; ++i)
        if (i != c.j) out.coords[w++] = p.dir[i] / dj;
      break;
    }
    case ChartKind::FfX: {
      const double d0 = p.dir[0];
      if (d0 <= 0.0) throw PreconditionError("point outside ff_x domain (needs x > 0 relative to y')");
      out.coords[0] = p.scale * d0;
      out.coords.segment(1, k) = p.dir.tail(k) / d0;
      break;
    }
  }
  return out;
}

}  // namespace

Chart Chart::interior_mf(int n, int k) {
  Chart c{ChartKind::InteriorMf, n, k, 0};
  validate(c);
  return c;
}

Chart Chart::ff_projective(int n, int k, int j) {
  Chart c{ChartKind::FfProjective, n, k, j};
  validate(c);
  return c;
}

Chart Chart::ff_x(int n, int k) {
  Chart c{ChartKind::FfX, n, k, 0};
  validate(c);
  return c;
}

std::string Chart::name() const {
  switch (kind) {
    case ChartKind::InteriorMf:
      return "interior_mf";
    case ChartKind::FfProjective:
      return "ff_projective_" + std::to_string(j);
    case ChartKind::FfX:
      return "ff_x";
  }
  return {};
}

std::vector<std::string> Chart::coordinate_names() const {
  std::vector<std::string> names;
  auto y = [](int i) { return "y" + std::to_string(i); };
  switch (kind) {
    case ChartKind::InteriorMf:
      names.push_back("x");
      for (int i = 1; i < n; ++i) names.push_back(y(i));
      return names;
    case ChartKind::FfProjective:
      names = {"rho", "sigma"};
      for (int i = 1; i <= k; ++i)
        if (i != j) names.push_back("w" + std::to_string(i));
      break;
    case ChartKind::FfX:
      names.push_back("x");
      for (int i = 1; i <= k; ++i) names.push_back("Z" + std::to_string(i));
      break;
  }
  for (int i = k + 1; i < n; ++i) names.push_back(y(i));
  return names;
}

ChartPoint to_chart(const XPoint& p, const Chart& chart) {
  validate(chart);
  if (p.y.size() != chart.n - 1) throw DimensionError("XPoint has wrong number of y coordinates");
  if (!(p.x > 0.0)) throw PreconditionError("to_chart needs an interior point (x > 0)");
  linalg::Vector coords(chart.n);
  coords[0] = p.x;
  coords.tail(chart.n - 1) = p.y;
  return lower(lift(ChartPoint{Chart::interior_mf(chart.n, chart.k), coords}), chart);
}

XPoint from_chart(const ChartPoint& cp) {
  const Lifted l = lift(cp);
  XPoint out;
  out.x = l.scale * l.dir[0];
  out.y.resize(cp.chart.n - 1);
  out.y.head(cp.chart.k) = l.scale * l.dir.tail(cp.chart.k);
  out.y.tail(cp.chart.n - 1 - cp.chart.k) = l.ypp;
  // Exact formulas where the chart gives them directly.
  if (cp.chart.kind == ChartKind::InteriorMf) {
    out.x = cp.coords[0];
    out.y = cp.coords.tail(cp.chart.n - 1);
  } else if (cp.chart.kind == ChartKind::FfProjective) {
    const double rho = cp.coords[0];
    out.x = rho * cp.coords[1];
    int w = 2;
    for (int i = 1; i <= cp.chart.k; ++i) out.y[i - 1] = (i == cp.chart.j) ? rho : rho * cp.coords[w++];
  } else {
    const double x = cp.coords[0];
    out.x = x;
    for (int i = 1; i <= cp.chart.k; ++i) out.y[i - 1] = x * cp.coords[i];
  }
  return out;
}

ChartPoint transition(const ChartPoint& cp, const Chart& target) {
  validate(target);
  if (target.n != cp.chart.n || target.k != cp.chart.k) throw DimensionError("transition between different splittings");
  if (!in_domain(cp)) throw PreconditionError("transition: point outside its own chart domain");
  if (target == cp.chart) return cp;
  return lower(lift(cp), target);
}

bool in_domain(const ChartPoint& cp) {
  const auto& c = cp.chart;
  if (cp.coords.size() != c.n) return false;
  switch (c.kind) {
    case ChartKind::InteriorMf:
      return cp.coords[0] > 0.0 || (cp.coords[0] == 0.0 && cp.coords.segment(1, c.k).norm() > 0.0);
    case ChartKind::FfProjective:
      return cp.coords[0] >= 0.0 && cp.coords[1] >= 0.0;
    case ChartKind::FfX:
      return cp.coords[0] >= 0.0;
  }
  return false;
}

BoundaryDefiningFunctions boundary_defining_functions(const Chart& chart) {
  validate(chart);
  switch (chart.kind) {
    case ChartKind::InteriorMf:
      return {0, std::nullopt};
    case ChartKind::FfProjective:
      return {1, 0};
    case ChartKind::FfX:
      return {std::nullopt, 0};
  }
  return {};
}

double defining_function(const ChartPoint& cp, Face face) {
  const auto b = boundary_defining_functions(cp.chart);
  const auto idx = face == Face::Mf ? b.mf : b.ff;
  if (!idx) throw PreconditionError("chart " + cp.chart.name() + " does not meet the requested face");
  return cp.coords[*idx];
}

namespace {

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

ProbeResult smoothness_probe(const std::function<double(const XPoint&)>& f, const Chart& chart,
                             const ProbeSpec& spec, double tol) {
  validate(chart);
  const int dim = chart.n;
  if (spec.endpoint.size() != dim || spec.direction.size() != dim)
    throw DimensionError("smoothness_probe: endpoint/direction size must match chart");
  if (spec.order < 1 || spec.levels < 2) throw DimensionError("smoothness_probe: need order >= 1 and levels >= 2");
  const auto bdf = boundary_defining_functions(chart);
  std::vector<int> constrained;
  if (bdf.mf) constrained.push_back(*bdf.mf);
  if (bdf.ff) constrained.push_back(*bdf.ff);

  auto value = [&](const linalg::Vector& c) {
    const double v = f(from_chart(ChartPoint{chart, c}));
    if (!std::isfinite(v)) throw ConvergenceError("smoothness_probe: function evaluation failed");
    return v;
  };

  const int N = spec.order;
  // derivs[axis][order-1][level]
  std::vector<std::vector<std::vector<double>>> derivs(
      dim, std::vector<std::vector<double>>(N, std::vector<double>(spec.levels)));
  std::vector<double> log_inv_t(spec.levels);
  double f_scale = 1.0;
  for (int lvl = 0; lvl < spec.levels; ++lvl) {
    const double t = spec.t0 * std::ldexp(1.0, -lvl);
    log_inv_t[lvl] = -std::log(t);
    const linalg::Vector p = spec.endpoint + t * spec.direction;
    double h = spec.h0;
    for (int c : constrained) {
      if (p[c] <= 0.0) throw PreconditionError("smoothness_probe: sample left the chart interior");
      h = std::min(h, p[c] / (N + 1));
    }
    f_scale = std::max(f_scale, std::abs(value(p)));
    for (int a = 0; a < dim; ++a) {
      for (int o = 1; o <= N; ++o) {
        auto diff = [&](double step) {
          double s = 0.0;
          for (int i = 0; i <= o; ++i) {
            linalg::Vector q = p;
            q[a] += (0.5 * o - i) * step;
            s += ((i % 2) ? -1.0 : 1.0) * binomial(o, i) * value(q);
          }
          return s / std::pow(step, o);
        };
        derivs[a][o - 1][lvl] = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
      }
    }
  }

  ProbeResult out;
  out.growth.assign(dim, std::vector<double>(N, 0.0));
  const double floor = spec.noise_floor * f_scale;
  for (int a = 0; a < dim; ++a)
    for (int o = 0; o < N; ++o) {
      std::vector<double> logs(spec.levels);
      for (int lvl = 0; lvl < spec.levels; ++lvl) logs[lvl] = std::log(std::max(std::abs(derivs[a][o][lvl]), floor));
      out.growth[a][o] = least_squares_slope(log_inv_t, logs);
      out.max_derivative_growth = std::max(out.max_derivative_growth, out.growth[a][o]);
    }
  out.smooth = out.max_derivative_growth <= tol;
  return out;
}

}  // namespace legendre
