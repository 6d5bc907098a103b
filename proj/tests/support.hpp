#pragma once

#include "legendre/amplitude.hpp"
#include "legendre/linalg.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testing_support {

inline double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

inline legendre::linalg::Vector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  legendre::linalg::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(rng, -scale, scale);
  return v;
}

// A few Hermite-Gaussian terms with moderate parameters.
inline legendre::SchwartzAmplitude random_amplitude(std::mt19937_64& rng, int max_terms = 3, int max_k = 3,
                                                    double max_frequency = 0.0) {
  std::vector<legendre::HermiteTerm> terms;
  const int count = std::uniform_int_distribution<int>(1, max_terms)(rng);
  for (int i = 0; i < count; ++i) {
    legendre::HermiteTerm t;
    t.coeff = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    t.k = std::uniform_int_distribution<int>(0, max_k)(rng);
    t.center = uniform(rng, -0.5, 0.5);
    t.width = uniform(rng, 0.7, 1.5);
    t.frequency = max_frequency > 0 ? uniform(rng, -max_frequency, max_frequency) : 0.0;
    terms.push_back(t);
  }
  return legendre::SchwartzAmplitude(terms);
}

// Least-squares slope of log|v| against log x.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& vs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = std::log(xs[i]);
    const double b = std::log(std::abs(vs[i]));
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing_support
