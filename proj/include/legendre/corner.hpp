#pragma once

// Corner coefficients at mf ∩ ff in the chart ff_projective_k,
//   u / (rho^a sigma^b) ~ sum_{j,l} c_{jl} sigma^j rho^l,   sigma = x / y_k, rho = y_k,
// and the membership test c_{jl} = 0 for l < j.

#include "legendre/blowup.hpp"
#include "legendre/polynomial.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace legendre {

using cplx = std::complex<double>;
using ChartFunction = std::function<cplx(const ChartPoint&)>;

struct CornerGrid {
  double sigma0 = 0.4;
  double rho0 = 0.2;
  int sigma_levels = 8;  // sigma0 * ratio^i, i < sigma_levels
  int rho_levels = 8;
  double ratio = 0.5;
  linalg::Vector fixed;  // remaining chart coordinates (w, y''), empty for n = 2
  double max_condition = 1e12;
  unsigned threads = 0;
};

// rho^rho_exponent * sigma^sigma_exponent, divided out before fitting.
struct CornerPrefactor {
  double rho_exponent = 0.5;
  double sigma_exponent = 0.5;
};
// Fibred exponents with r = m + 1/2.
CornerPrefactor intersecting_prefactor(double m, int n, int k);

struct AsymptoticTable {
  int N = 4;
  double m = 0.0;
  CornerPrefactor prefactor;
  linalg::CMatrix c;          // c(j, l): j power of sigma, l power of rho
  linalg::Matrix sigma_unc;   // jackknife over leave-one-out refits in sigma and in rho
  double condition = 0.0;     // worse of the two scaled Vandermonde conditions
  double indeterminate_floor = 1e-4;
  bool indeterminate(int j, int l) const;
};

AsymptoticTable extract_coefficients(const ChartFunction& u, const Chart& chart, int N, const CornerPrefactor& pre,
                                     const CornerGrid& grid = {}, double m = 0.0);

enum class Verdict { Intersecting, NotIntersecting, Inconclusive };
std::string to_string(Verdict v);

struct Violation {
  int j = 0;
  int l = 0;
  cplx value;
  double uncertainty = 0.0;
};

struct Membership {
  Verdict verdict = Verdict::Intersecting;
  bool intersecting = true;
  std::vector<Violation> violations;
  std::vector<std::pair<int, int>> indeterminate;
};

Membership check_membership(const AsymptoticTable& t, double tol = 1e-8);

// True when every monomial rho^a sigma^b w^c of h has a >= b + |c|, i.e. h is a polynomial in (x, y).
bool smooth_on_X(const Polynomial& h, const Chart& chart);

struct WitnessEntry {
  std::string label;
  Polynomial multiplier;  // over chart coordinates
  bool smooth_on_X = false;
  AsymptoticTable table;
  Membership membership;
};

struct WitnessReport {
  WitnessEntry base;                  // h = 1
  std::vector<WitnessEntry> entries;  // one per multiplier
  // base in the class, every smooth-on-X multiple in the class, some other multiple outside it.
  bool proper = false;
};

struct LabelledMultiplier {
  std::string label;
  Polynomial h;
};

WitnessReport properness_witness(const ChartFunction& u, const Chart& chart, const std::vector<LabelledMultiplier>& hs,
                                 int N, const CornerPrefactor& pre, const CornerGrid& grid = {}, double m = 0.0,
                                 double tol = 1e-8);

}  // namespace legendre
