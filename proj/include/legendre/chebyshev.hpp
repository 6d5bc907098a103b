#pragma once

// Piecewise barycentric Chebyshev interpolation of complex functions on an
// interval, bisecting pieces until the interleaved check points agree.

#include <complex>
#include <functional>
#include <vector>

namespace legendre {

class PiecewiseChebyshev {
 public:
  using cplx = std::complex<double>;

  PiecewiseChebyshev() = default;
  // Each piece uses degree+1 second-kind Chebyshev points; a piece is
  // accepted when the max error at the degree interleaved points is <= abs_tol.
  PiecewiseChebyshev(const std::function<cplx(double)>& f, double a, double b, double abs_tol, int degree = 24,
                     int max_depth = 12);

  cplx operator()(double t) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool empty() const { return pieces_.empty(); }
  std::size_t pieces() const { return pieces_.size(); }
  // Largest check-point error seen on an accepted piece.
  double error_estimate() const { return error_; }

 private:
  struct Piece {
    double a, b;
    std::vector<cplx> values;
  };
  void build(const std::function<cplx(double)>& f, double a, double b, double abs_tol, int depth);
  cplx eval_piece(const Piece& p, double t) const;

  int degree_ = 24;
  int max_depth_ = 12;
  double lo_ = 0.0, hi_ = 0.0;
  double error_ = 0.0;
  std::vector<double> nodes_;    // reference nodes on [-1, 1]
  std::vector<double> weights_;  // barycentric weights
  std::vector<Piece> pieces_;
};

}  // namespace legendre
