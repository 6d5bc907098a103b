#pragma once

// Splitting an intersecting distribution as
//   u = x^e W(y_1/x) [ alpha(y_k/x) f(x, y) + g(x, y) ]
// with f polynomial, g Schwartz in Z = y_k/x, and W a transverse factor
// present only for n = 3, k = 2 (W = 1 otherwise); e is the exponent after
// the substitution ybar = y_k - x t (m + 1/2 for n = 2). Plus the converse
// synthesis and the type-2 Fourier round trip.

#include "legendre/amplitude.hpp"
#include "legendre/chebyshev.hpp"
#include "legendre/distribution.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace legendre {

struct YbarReduction {
  Intersecting reduced;
  int order = 4;
  // |dropped part| <= x^e sum_j remainder_coefficients[j] x^{order+1+j} for |x|, |y| <= 1.
  std::vector<double> remainder_coefficients;
  bool cutoff_dropped = false;
  std::vector<std::string> notes;
  double remainder_bound(double x) const;
};

// Writes the amplitude as sum_j (y_k - ybar)^j Q_j(x, y) a(zeta) and replaces
// each (y_k - ybar)^j by (i x d/dzeta)^j, exact under the integral; powers
// j > order are dropped and bounded. A ybar cutoff is dropped (its effect is
// rapidly decreasing for y_k below the cutoff's flat region).
YbarReduction reduce_ybar_dependence(const Intersecting& d, int order = 4);

struct DecompositionDiagnostics {
  double residual = 0.0;             // max |reconstruct - reduced eval| / max |reduced eval| on the check grid
  double b_cancellation = 0.0;       // max over components of |∫ a^ (quadrature) - ∫ a^ (closed form)|
  double interpolation_error = 0.0;  // max |interpolated g - quadrature g| at check points
  bool decay_ok = true;
  std::vector<std::vector<DecayEntry>> decay;  // per component, g profile in Z
  std::vector<double> remainder_coefficients;
  bool cutoff_dropped = false;
  std::vector<std::string> notes;
};

struct DecomposeOptions {
  bool strict = true;      // throw ConvergenceError when the decay check fails
  int decay_order = 6;
  double interp_tol = 1e-12;  // relative to the component scale
};

class Decomposition {
 public:
  struct Part;

  double m = 0.0;
  int n = 2;
  int k = 1;
  double exponent = 0.5;

  const CPolynomial& f() const { return f_; }  // over (x, y_1..y_{n-1})
  cplx f_value(double x, const linalg::Vector& y) const;
  // Schwartz part, interpolated in Z where available.
  cplx g(double x, const linalg::Vector& y) const;
  // Schwartz part by direct quadrature.
  cplx g_exact(double x, const linalg::Vector& y) const;
  // n = 2 convenience: g(x, x Z).
  cplx g_xz(double x, double Z) const;
  // g profile of one component in Z (quadrature).
  cplx g_profile(std::size_t component, double Z) const;
  std::size_t components() const;
  cplx transverse(double z1) const;
  cplx reconstruct(double x, const linalg::Vector& y) const;
  // Without the x^e prefactor.
  cplx reconstruct_stripped(double x, const linalg::Vector& y) const;
  const DecompositionDiagnostics& diagnostics() const { return diag_; }

 private:
  friend Decomposition decompose_forward(const Intersecting&, const DecomposeOptions&, const YbarReduction*);
  CPolynomial f_;
  std::optional<SchwartzAmplitude> transverse_;  // closed-form W
  std::vector<std::shared_ptr<const Part>> parts_;
  DecompositionDiagnostics diag_;
};

// Needs a ybar-independent amplitude, no ybar cutoff, trivial phase; for
// k = 2 a common v profile and v-independent passive factors.
Decomposition decompose_forward(const Intersecting& d, const DecomposeOptions& opt = {},
                                const YbarReduction* reduction = nullptr);

// n = 2: the intersecting distribution x^{m+1/2} alpha(y/x) f(x, y), f over (x, y).
Intersecting decompose_converse(const CPolynomial& f, double m);

struct Type2Roundtrip {
  Type2 type2;
  double residual = 0.0;  // max |synthesis - x^{m+1/2} V(y/x)| / max |x^{m+1/2} V| on the check grid
};
// n = 2: V(Z) as the type-2 distribution of order m + 1/2.
Type2Roundtrip type2_roundtrip(const SchwartzAmplitude& V, double m);

}  // namespace legendre
