#include "legendre/chebyshev.hpp"

#include "legendre/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace legendre {

PiecewiseChebyshev::PiecewiseChebyshev(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                       int degree, int max_depth)
    : degree_(degree), max_depth_(max_depth), lo_(a), hi_(b) {
  if (!(b > a)) throw DimensionError("PiecewiseChebyshev: empty interval");
  if (degree < 2) throw DimensionError("PiecewiseChebyshev: degree must be at least 2");
  for (int j = 0; j <= degree; ++j) {
    nodes_.push_back(std::cos(std::numbers::pi * j / degree));
    double w = (j % 2) ? -1.0 : 1.0;
    if (j == 0 || j == degree) w *= 0.5;
    weights_.push_back(w);
  }
  build(f, a, b, abs_tol, 0);
}

void PiecewiseChebyshev::build(const std::function<cplx(double)>& f, double a, double b, double abs_tol, int depth) {
  Piece p{a, b, {}};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (double s : nodes_) p.values.push_back(f(mid + half * s));
  double err = 0.0;
  for (int j = 0; j < degree_; ++j) {
    const double t = mid + half * std::cos(std::numbers::pi * (j + 0.5) / degree_);
    err = std::max(err, std::abs(eval_piece(p, t) - f(t)));
  }
  if (err <= abs_tol || depth >= max_depth_) {
    error_ = std::max(error_, err);
    pieces_.push_back(std::move(p));
    return;
  }
  build(f, a, mid, abs_tol, depth + 1);
  build(f, mid, b, abs_tol, depth + 1);
}

PiecewiseChebyshev::cplx PiecewiseChebyshev::eval_piece(const Piece& p, double t) const {
  const double s = (2.0 * t - p.a - p.b) / (p.b - p.a);
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double diff = s - nodes_[j];
    if (diff == 0.0) return p.values[j];
    const double c = weights_[j] / diff;
    num += c * p.values[j];
    den += c;
  }
  return num / den;
}

PiecewiseChebyshev::cplx PiecewiseChebyshev::operator()(double t) const {
  if (pieces_.empty()) throw PreconditionError("PiecewiseChebyshev: not built");
  if (t < lo_ || t > hi_) throw PreconditionError("PiecewiseChebyshev: point outside the interpolation interval");
  // Pieces are stored left to right.
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t, [](const Piece& p, double v) { return p.b < v; });
  if (it == pieces_.end()) --it;
  return eval_piece(*it, t);
}

}  // namespace legendre
