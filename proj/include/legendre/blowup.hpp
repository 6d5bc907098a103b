#pragma once

// Charts on the blow-up Y = [X; C] of a boundary face C = {x = 0, y' = 0},
// y' = (y_1..y_k), y'' = (y_{k+1}..y_{n-1}).
//
//   interior_mf        (x, y)                                  away from C
//   ff_projective_j    (rho, sigma, w, y'')  rho = y_j, sigma = x / y_j,
//                      w_i = y_i / y_j for i != j, i <= k       y_j > 0
//   ff_x               (x, Z', y'')          Z' = y' / x        x > 0

#include "legendre/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace legendre {

enum class ChartKind { InteriorMf, FfProjective, FfX };
enum class Face { Mf, Ff };

struct Chart {
  ChartKind kind = ChartKind::InteriorMf;
  int n = 2;
  int k = 1;
  int j = 0;  // projective index (1-based); 0 for the other charts

  static Chart interior_mf(int n, int k);
  static Chart ff_projective(int n, int k, int j);
  static Chart ff_x(int n, int k);

  int dim() const { return n; }
  std::string name() const;
  // Coordinate names in storage order.
  std::vector<std::string> coordinate_names() const;
  friend bool operator==(const Chart&, const Chart&) = default;
};

struct XPoint {
  double x = 0.0;
  linalg::Vector y;
};

struct ChartPoint {
  Chart chart;
  linalg::Vector coords;
};

// PreconditionError outside the chart domain; requires x > 0.
ChartPoint to_chart(const XPoint& p, const Chart& chart);
// Blow-down; defined everywhere on the closed chart domain.
XPoint from_chart(const ChartPoint& cp);
// Works for boundary points of Y as well (ff points have no X image).
ChartPoint transition(const ChartPoint& cp, const Chart& target);
bool in_domain(const ChartPoint& cp);

// Indices of the coordinates that define mf and ff in this chart.
struct BoundaryDefiningFunctions {
  std::optional<int> mf;
  std::optional<int> ff;
};
BoundaryDefiningFunctions boundary_defining_functions(const Chart& chart);
// Value of the face's defining coordinate; PreconditionError if the chart misses the face.
double defining_function(const ChartPoint& cp, Face face);

struct ProbeSpec {
  linalg::Vector endpoint;   // boundary point approached, in chart coordinates
  linalg::Vector direction;  // points sampled at endpoint + t * direction
  int order = 3;             // highest derivative order
  int levels = 6;            // t = t0 * 2^-i, i = 0..levels-1
  double t0 = 0.5;
  double h0 = 1e-2;          // largest difference step
  double noise_floor = 1e-5; // relative to max |f| over the samples
};

struct ProbeResult {
  bool smooth = false;
  double max_derivative_growth = 0.0;
  // growth[axis][order-1]: fitted exponent of |d^order f / d coord^order| against 1/t.
  std::vector<std::vector<double>> growth;
};

// Finite-difference derivatives along each chart axis on a geometric approach
// to the endpoint, Richardson-refined; a derivative "grows" when its log-log
// slope against 1/t exceeds tol.
ProbeResult smoothness_probe(const std::function<double(const XPoint&)>& f, const Chart& chart,
                             const ProbeSpec& spec, double tol = 0.1);

}  // namespace legendre
