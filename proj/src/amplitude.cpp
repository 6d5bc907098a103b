#include "legendre/amplitude.hpp"

#include "legendre/errors.hpp"

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace legendre {

namespace {

void check_term(const HermiteTerm& t) {
  if (!(t.width > 0.0)) throw DimensionError("Hermite term width must be positive");
  if (t.k < 0) throw DimensionError("Hermite index must be nonnegative");
}

cplx ipow(int k) {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[k % 4];
}

}  // namespace

SchwartzAmplitude::SchwartzAmplitude(std::vector<HermiteTerm> terms) {
  for (auto& t : terms) {
    check_term(t);
    if (t.coeff != 0.0) terms_.push_back(t);
  }
}

SchwartzAmplitude SchwartzAmplitude::gaussian(cplx coeff, double center, double width) {
  return SchwartzAmplitude({HermiteTerm{coeff, 0, center, width, 0.0}});
}

SchwartzAmplitude SchwartzAmplitude::hermite(int k, cplx coeff, double center, double width) {
  return SchwartzAmplitude({HermiteTerm{coeff, k, center, width, 0.0}});
}

cplx SchwartzAmplitude::operator()(double w) const {
  cplx sum = 0.0;
  for (const auto& t : terms_) {
    const double u = (w - t.center) / t.width;
    const double g = u * u;
    if (g > 745.0) continue;
    const double real_part = boost::math::hermite(static_cast<unsigned>(t.k), u) * std::exp(-g);
    sum += t.coeff * real_part * (t.frequency == 0.0 ? cplx(1.0) : std::polar(1.0, t.frequency * w));
  }
  return sum;
}

SchwartzAmplitude SchwartzAmplitude::derivative() const {
  std::vector<HermiteTerm> out;
  for (const auto& t : terms_) {
    HermiteTerm up = t;
    up.k = t.k + 1;
    up.coeff = -t.coeff / t.width;
    out.push_back(up);
    if (t.frequency != 0.0) {
      HermiteTerm same = t;
      same.coeff = cplx(0.0, t.frequency) * t.coeff;
      out.push_back(same);
    }
  }
  return SchwartzAmplitude(std::move(out));
}

SchwartzAmplitude SchwartzAmplitude::reflect() const {
  std::vector<HermiteTerm> out = terms_;
  for (auto& t : out) {
    if (t.k % 2) t.coeff = -t.coeff;
    t.center = -t.center;
    t.frequency = -t.frequency;
  }
  return SchwartzAmplitude(std::move(out));
}

SchwartzAmplitude SchwartzAmplitude::translate(double shift) const {
  std::vector<HermiteTerm> out = terms_;
  for (auto& t : out) {
    t.center += shift;
    t.coeff *= std::polar(1.0, -t.frequency * shift);
  }
  return SchwartzAmplitude(std::move(out));
}

SchwartzAmplitude SchwartzAmplitude::modulate(double frequency) const {
  std::vector<HermiteTerm> out = terms_;
  for (auto& t : out) t.frequency += frequency;
  return SchwartzAmplitude(std::move(out));
}

std::pair<double, double> SchwartzAmplitude::support() const {
  if (terms_.empty()) return {0.0, 0.0};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& t : terms_) {
    const double r = t.width * (8.0 + std::sqrt(2.0 * t.k + 1.0));
    lo = std::min(lo, t.center - r);
    hi = std::max(hi, t.center + r);
  }
  return {lo, hi};
}

double SchwartzAmplitude::support_radius() const {
  double r = 0.0;
  for (const auto& t : terms_) r = std::max(r, std::abs(t.center) + t.width * (8.0 + std::sqrt(2.0 * t.k + 1.0)));
  return r;
}

double SchwartzAmplitude::abs_sum() const {
  // |H_k(u)| e^{-u^2/2} <= 1.0865 sqrt(2^k k!)
  double s = 0.0;
  for (const auto& t : terms_)
    s += std::abs(t.coeff) * 1.0865 * std::sqrt(std::ldexp(boost::math::factorial<double>(static_cast<unsigned>(t.k)), t.k));
  return s;
}

SchwartzAmplitude operator+(const SchwartzAmplitude& a, const SchwartzAmplitude& b) {
  std::vector<HermiteTerm> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return SchwartzAmplitude(std::move(out));
}

SchwartzAmplitude operator*(cplx s, const SchwartzAmplitude& a) {
  std::vector<HermiteTerm> out = a.terms_;
  for (auto& t : out) t.coeff *= s;
  return SchwartzAmplitude(std::move(out));
}

// ∫ e^{i xi u} H_k(u) e^{-u^2} du = sqrt(pi) (i xi)^k e^{-xi^2/4}, and
// (2v)^k = sum_m k! / (m! (k-2m)!) H_{k-2m}(v).
SchwartzAmplitude fourier_transform(const SchwartzAmplitude& a) {
  std::vector<HermiteTerm> out;
  for (const auto& t : a.terms()) {
    const cplx base = t.coeff * t.width * std::sqrt(std::numbers::pi) * std::polar(1.0, t.center * t.frequency) * ipow(t.k);
    for (int m = 0; 2 * m <= t.k; ++m) {
      const double mult = boost::math::factorial<double>(static_cast<unsigned>(t.k)) /
                          (boost::math::factorial<double>(static_cast<unsigned>(m)) *
                           boost::math::factorial<double>(static_cast<unsigned>(t.k - 2 * m)));
      out.push_back(HermiteTerm{base * mult, t.k - 2 * m, -t.frequency, 2.0 / t.width, t.center});
    }
  }
  return SchwartzAmplitude(std::move(out));
}

cplx integral_over_line(const SchwartzAmplitude& a) { return fourier_transform(a)(0.0); }

namespace {

double h_step(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double alpha(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = h_step(t);
  const double b = h_step(1.0 - t);
  return a / (a + b);
}

double alpha_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = h_step(t);
  const double b = h_step(1.0 - t);
  const double da = a / (t * t);
  const double db = b / ((1.0 - t) * (1.0 - t));
  const double s = a + b;
  return (da * b + a * db) / (s * s);
}

std::vector<DecayEntry> schwartz_decay_report(const std::function<cplx(double)>& f, int n_max,
                                              const DecayWindow& window) {
  if (n_max < 0) throw DimensionError("schwartz_decay_report: negative order");
  if (!(window.r_min > 0.0) || window.r_max <= window.r_min) throw DimensionError("schwartz_decay_report: bad window");
  std::vector<double> radii;
  for (double r = window.r_min; r < window.r_max * (1 - 1e-12); r *= 2.0) radii.push_back(r);
  const int shells = static_cast<int>(radii.size());
  // samples[s] = (|Z|, |f(Z)|) over both sides of shell s
  std::vector<std::vector<std::pair<double, double>>> samples(shells);
  double global = 0.0;
  for (int s = 0; s < shells; ++s) {
    const double r = radii[s];
    for (int i = 0; i <= window.samples_per_shell; ++i) {
      const double z = r * (1.0 + static_cast<double>(i) / window.samples_per_shell);
      for (double sign : {-1.0, 1.0}) {
        const double v = std::abs(f(sign * z));
        samples[s].push_back({z, v});
        global = std::max(global, v);
      }
    }
  }
  std::vector<int> live;
  for (int s = 0; s < shells; ++s) {
    double m = 0.0;
    for (const auto& [z, v] : samples[s]) m = std::max(m, v);
    if (global > 0.0 && m > window.noise_floor * global) live.push_back(s);
  }
  std::vector<DecayEntry> report;
  for (int N = 0; N <= n_max; ++N) {
    DecayEntry e;
    e.order = N;
    std::vector<double> shell_sup(shells, 0.0);
    for (int s = 0; s < shells; ++s)
      for (const auto& [z, v] : samples[s]) shell_sup[s] = std::max(shell_sup[s], std::pow(z, N) * v);
    for (double v : shell_sup) e.sup = std::max(e.sup, v);
    if (live.size() < 2) {
      e.decayed = true;
      e.exponent = -std::numeric_limits<double>::infinity();
    } else {
      const std::size_t use = std::min<std::size_t>(3, live.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = live.size() - use; i < live.size(); ++i) {
        const double lx = std::log(radii[live[i]]);
        const double ly = std::log(shell_sup[live[i]]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
      }
      const double n = static_cast<double>(use);
      e.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    e.pass = e.exponent <= window.pass_exponent;
    report.push_back(e);
  }
  return report;
}

}  // namespace legendre
