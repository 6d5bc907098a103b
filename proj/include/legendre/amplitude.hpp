#pragma once

// Hermite-Gaussian amplitudes and the smooth step alpha.
//
// Fourier convention used throughout:  a^(Z) = ∫ e^{i zeta Z} a(zeta) d zeta,
// so that applying it twice gives 2 pi times the reflection a(-Z).

#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace legendre {

using cplx = std::complex<double>;

// coeff * H_k(u) * exp(-u^2) * exp(i frequency w),  u = (w - center) / width,
// with H_k the physicists' Hermite polynomial.
struct HermiteTerm {
  cplx coeff{1.0, 0.0};
  int k = 0;
  double center = 0.0;
  double width = 1.0;
  double frequency = 0.0;
};

class SchwartzAmplitude {
 public:
  SchwartzAmplitude() = default;
  explicit SchwartzAmplitude(std::vector<HermiteTerm> terms);

  static SchwartzAmplitude gaussian(cplx coeff = 1.0, double center = 0.0, double width = 1.0);
  static SchwartzAmplitude hermite(int k, cplx coeff = 1.0, double center = 0.0, double width = 1.0);

  const std::vector<HermiteTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  cplx operator()(double w) const;

  SchwartzAmplitude derivative() const;
  SchwartzAmplitude reflect() const;                  // w -> a(-w)
  SchwartzAmplitude translate(double shift) const;    // w -> a(w - shift)
  SchwartzAmplitude modulate(double frequency) const; // w -> e^{i f w} a(w)

  // Interval outside which every term is below ~1e-25 of its peak.
  std::pair<double, double> support() const;
  double support_radius() const;
  double abs_sum() const;  // sum |coeff| * sup |H_k e^{-u^2}| bound

  friend SchwartzAmplitude operator+(const SchwartzAmplitude& a, const SchwartzAmplitude& b);
  friend SchwartzAmplitude operator*(cplx s, const SchwartzAmplitude& a);

 private:
  std::vector<HermiteTerm> terms_;
};

SchwartzAmplitude fourier_transform(const SchwartzAmplitude& a);
// ∫_R a, which is a^(0).
cplx integral_over_line(const SchwartzAmplitude& a);

// Smooth step: 0 for t <= 0, 1 for t >= 1, built from h(t) = exp(-1/t).
double alpha(double t);
double alpha_prime(double t);

struct DecayWindow {
  double r_min = 1.0;
  double r_max = 64.0;
  int samples_per_shell = 64;
  double noise_floor = 1e-13;  // shells below this fraction of max |f| are ignored
  double pass_exponent = 0.1;
};

struct DecayEntry {
  int order = 0;
  double sup = 0.0;            // sup over the window of |Z|^N |f(Z)|
  double exponent = 0.0;       // fitted growth exponent of the shell sups
  bool decayed = false;        // fewer than two shells above the noise floor
  bool pass = false;           // exponent <= pass_exponent
};

// Shells |Z| in [R, 2R] for R = r_min, 2 r_min, ... up to r_max on both
// sides; the exponent is the log-log slope over the outermost three shells
// above the noise floor.
std::vector<DecayEntry> schwartz_decay_report(const std::function<cplx(double)>& f, int n_max,
                                              const DecayWindow& window = {});

}  // namespace legendre
