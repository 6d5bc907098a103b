#pragma once

// The four model distribution classes and their pointwise evaluation.
//
//   Type1         x^q e^{i phi(y)/x} a(x, y),                q = m + n/4
//   Type2         x^q V(x, y'/x, y''),                       q = m + n/4 - k/2
//   Intersecting  x^{m + n/4 - (p+1)/2} ∫ dv ∫_0^inf d ybar ∫ d zeta
//                   e^{i (phi(y, v) + zeta (y_k - ybar)) / x} a,  p = k (v and zeta)
//   Fibred        rho^{r + n/4 - k/2} sigma^{m + n/4 - p/2} ∫ dv e^{i phi~ / sigma} a,  p = k - 1
//
// Fourier convention: a^(Z) = ∫ e^{i zeta Z} a(zeta) d zeta.

#include "legendre/amplitude.hpp"
#include "legendre/blowup.hpp"
#include "legendre/phase.hpp"
#include "legendre/polynomial.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace legendre {

enum class EvalMethod { DirectQuadrature, FourierReduced, ClosedForm };
std::string to_string(EvalMethod m);

struct EvalReport {
  cplx value{0.0, 0.0};
  double est_error = 0.0;
  EvalMethod method = EvalMethod::ClosedForm;
  bool converged = true;
};

struct Type1 {
  double m = 0.0;
  int n = 2;
  PhaseFunction phase;    // phase in y only (n_v = 0)
  CPolynomial amplitude;  // over (x, y_1..y_{n-1})
  double q() const { return m + n / 4.0; }
};

// passive(x, y'') * prod_i factors[i](Z_i), Z = y'/x.
struct Type2Component {
  CPolynomial passive;
  std::vector<SchwartzAmplitude> factors;  // k factors
};

struct Type2 {
  double m = 0.0;
  int n = 2;
  int k = 1;
  std::vector<Type2Component> components;
  double q() const { return m + n / 4.0 - k / 2.0; }
};

// The zeta profile whose transform is alpha': a(zeta) = (1/2pi) (alpha')^(-zeta).
struct CutoffDerivativeProfile {};

using ZetaProfile = std::variant<SchwartzAmplitude, CutoffDerivativeProfile>;

cplx profile_value(const ZetaProfile& p, double zeta);
cplx profile_transform(const ZetaProfile& p, double Z);
// ∫_R a^ = 2 pi a(0).
cplx profile_total(const ZetaProfile& p);
// |zeta| beyond which the profile is negligible.
double profile_zeta_radius(const ZetaProfile& p);
// Interval outside which the transform is negligible.
std::pair<double, double> profile_transform_support(const ZetaProfile& p);

// passive(x, y_1..y_{n-1}, ybar, v_1..v_{k-1}) * profile(zeta) * v_profile(v).
struct IntersectingComponent {
  CPolynomial passive;
  ZetaProfile profile;
  SchwartzAmplitude v_profile;  // used when k = 2
};

// 1 for ybar <= flat_until, 0 for ybar >= zero_after.
struct YbarCutoff {
  double flat_until = 1.0;
  double zero_after = 2.0;
  double operator()(double ybar) const;
};

struct Intersecting {
  double m = 0.0;
  int n = 2;
  int k = 1;
  std::vector<IntersectingComponent> components;
  std::optional<YbarCutoff> cutoff;
  std::optional<ModelPhaseData> phase;  // default: trivial model phase

  int p() const { return k; }
  double prefactor_exponent() const { return m + n / 4.0 - (p() + 1) / 2.0; }
  // After ybar = y_k - x t.
  double reduced_exponent() const { return prefactor_exponent() + 1.0; }
  std::size_t passive_vars() const { return static_cast<std::size_t>(n + k); }
  void validate() const;
};

struct Fibred {
  double m = 0.0;
  double r = 0.0;
  int n = 2;
  int k = 1;
  Polynomial phase_tilde;   // over (w_1..w_{k-1}, rho, y'', v_1..v_{k-1})
  CPolynomial amplitude;    // over (rho, w_1..w_{k-1}, sigma, y'', v_1..v_{k-1})
  std::vector<SchwartzAmplitude> v_profiles;  // k-1 factors
  int p() const { return k - 1; }
  double rho_exponent() const { return r + n / 4.0 - k / 2.0; }
  double sigma_exponent() const { return m + n / 4.0 - p() / 2.0; }
  void validate() const;
};

using ModelDistribution = std::variant<Type1, Type2, Intersecting, Fibred>;

struct QuadratureSettings {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  int max_depth = 20;
  int max_zeta_level = 12;
};

EvalReport eval_type1(const Type1& d, double x, const linalg::Vector& y);
EvalReport eval_type2(const Type2& d, double x, const linalg::Vector& y);
// Same value through x^q ∫ e^{i y'.eta/x} V^(x, eta, y'') d eta with V^ = (2pi)^{-k} F[V(-.)].
EvalReport eval_type2_synthesis(const Type2& d, double x, const linalg::Vector& y, const QuadratureSettings& s = {});
// Quadrature in (v, t, zeta) after ybar = y_k - x t, zeta integral done numerically.
EvalReport eval_intersecting_direct(const Intersecting& d, double x, const linalg::Vector& y,
                                    const QuadratureSettings& s = {});
// Quadrature in (v, t) with the closed-form zeta transform.
EvalReport eval_intersecting_reduced(const Intersecting& d, double x, const linalg::Vector& y,
                                     const QuadratureSettings& s = {});
EvalReport eval_fibred(const Fibred& d, const ChartPoint& p, const QuadratureSettings& s = {});

// Type1/Type2: closed form; Intersecting: reduced path; Fibred: via ff_projective_k.
EvalReport evaluate(const ModelDistribution& d, double x, const linalg::Vector& y, const QuadratureSettings& s = {});
std::vector<EvalReport> evaluate_grid(const ModelDistribution& d, const std::vector<XPoint>& points,
                                      unsigned threads = 0, const QuadratureSettings& s = {});

int model_n(const ModelDistribution& d);
int model_k(const ModelDistribution& d);

}  // namespace legendre
