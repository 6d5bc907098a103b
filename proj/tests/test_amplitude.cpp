#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "legendre/amplitude.hpp"
#include "support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace legendre;
using testing_support::random_amplitude;
using testing_support::uniform;

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Gauss-Kronrod on [a, b], real and imaginary parts separately.
template <class F>
cplx quad(F&& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double re = GK::integrate([&](double t) { return std::real(f(t)); }, a, b, 15, 1e-14);
  const double im = GK::integrate([&](double t) { return std::imag(f(t)); }, a, b, 15, 1e-14);
  return {re, im};
}

cplx transform_by_quadrature(const SchwartzAmplitude& a, double Z) {
  const auto [lo, hi] = a.support();
  return quad([&](double z) { return std::exp(cplx(0, z * Z)) * a(z); }, lo, hi);
}

}  // namespace

TEST_CASE("alpha examples") {
  CHECK(alpha(-5.0) == 0.0);
  CHECK(alpha(0.0) == 0.0);
  CHECK(alpha(2.0) == 1.0);
  CHECK(alpha(1.0) == 1.0);
  CHECK(alpha(0.5) == doctest::Approx(0.5));
  const cplx total = quad([](double t) { return cplx(alpha_prime(t)); }, 0.0, 1.0);
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("alpha is monotone and alpha_prime matches its difference quotient") {
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = -0.1 + 1.2 * i / 1000.0;
    const double a = alpha(t);
    CHECK(a >= prev);
    prev = a;
    const double h = 1e-6;
    CHECK(alpha_prime(t) == doctest::Approx((alpha(t + h) - alpha(t - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("alpha has bounded finite differences up to order 6") {
  // Forward differences of order m scaled by h^-m stay bounded as h shrinks.
  for (int m = 1; m <= 6; ++m) {
    double prev_sup = 0.0;
    for (double h : {4e-3, 2e-3}) {
      double sup = 0.0;
      for (double t = -0.05; t <= 1.05; t += 1e-3) {
        double d = 0.0;
        for (int i = 0; i <= m; ++i) d += (((m - i) % 2) ? -1.0 : 1.0) * std::tgamma(m + 1) /
                                        (std::tgamma(i + 1) * std::tgamma(m - i + 1)) * alpha(t + i * h);
        sup = std::max(sup, std::abs(d) / std::pow(h, m));
      }
      if (prev_sup > 0) CHECK(sup < 2.0 * prev_sup);
      prev_sup = sup;
    }
  }
}

TEST_CASE("fourier_transform examples") {
  const auto g = SchwartzAmplitude::gaussian();
  const auto G = fourier_transform(g);
  for (double Z : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
    const cplx expect = std::sqrt(kPi) * std::exp(-Z * Z / 4);
    CHECK(std::abs(G(Z) - expect) < 1e-14);
    CHECK(std::abs(transform_by_quadrature(g, Z) - expect) < 1e-10);
  }
  CHECK(fourier_transform(SchwartzAmplitude()).is_zero());
  // zeta e^{-zeta^2} is H_1 / 2.
  const auto h1 = SchwartzAmplitude::hermite(1, 0.5);
  const auto H1 = fourier_transform(h1);
  for (double Z : {-2.0, 0.3, 1.7}) {
    const cplx expect = cplx(0, std::sqrt(kPi) / 2) * Z * std::exp(-Z * Z / 4);
    CHECK(std::abs(H1(Z) - expect) < 1e-14);
    CHECK(std::abs(transform_by_quadrature(h1, Z) - expect) < 1e-10);
  }
}

TEST_CASE("fourier_transform matches quadrature on random amplitudes") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_amplitude(rng, 3, 4, 1.5);
    const auto A = fourier_transform(a);
    for (int s = 0; s < 5; ++s) {
      const double Z = uniform(rng, -6, 6);
      const cplx q = transform_by_quadrature(a, Z);
      CHECK(std::abs(A(Z) - q) < 1e-10 * std::max(1.0, a.abs_sum()));
    }
  }
}

TEST_CASE("double transform is 2 pi times the reflection") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_amplitude(rng, 3, 4, 1.0);
    const auto AA = fourier_transform(fourier_transform(a));
    for (int s = 0; s < 5; ++s) {
      const double w = uniform(rng, -3, 3);
      CHECK(std::abs(AA(w) - 2 * kPi * a(-w)) < 1e-11 * std::max(1.0, a.abs_sum()));
    }
  }
}

TEST_CASE("linearity of the transform and the line integral") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_amplitude(rng);
    const auto b = random_amplitude(rng);
    const cplx s(uniform(rng, -2, 2), uniform(rng, -2, 2));
    const auto lhs = fourier_transform(a + s * b);
    const auto A = fourier_transform(a), B = fourier_transform(b);
    for (double Z : {-2.5, 0.0, 1.1}) CHECK(std::abs(lhs(Z) - (A(Z) + s * B(Z))) < 1e-12);
    CHECK(std::abs(integral_over_line(a + s * b) - (integral_over_line(a) + s * integral_over_line(b))) < 1e-12);
  }
}

TEST_CASE("integral_over_line examples and quadrature agreement") {
  CHECK(std::abs(integral_over_line(SchwartzAmplitude::gaussian()) - std::sqrt(kPi)) < 1e-15);
  CHECK(std::abs(integral_over_line(SchwartzAmplitude::hermite(3, 2.0, 0.4, 1.3))) < 1e-15);
  const auto G = fourier_transform(SchwartzAmplitude::gaussian());
  CHECK(std::abs(integral_over_line(G) - 2 * kPi) < 1e-13);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_amplitude(rng, 3, 4, 1.0);
    const auto [lo, hi] = a.support();
    CHECK(std::abs(integral_over_line(a) - quad(a, lo, hi)) < 1e-10);
  }
}

TEST_CASE("Plancherel identity on random amplitudes") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_amplitude(rng, 3, 3, 1.0);
    const auto A = fourier_transform(a);
    const auto [lo, hi] = a.support();
    const auto [Lo, Hi] = A.support();
    const double lhs = std::real(quad([&](double w) { return cplx(std::norm(a(w))); }, lo, hi));
    const double rhs = std::real(quad([&](double w) { return cplx(std::norm(A(w))); }, Lo, Hi)) / (2 * kPi);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, lhs));
  }
}

TEST_CASE("translation law") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_amplitude(rng, 3, 3, 1.0);
    const double c = uniform(rng, -2, 2);
    const auto lhs = fourier_transform(a.translate(c));
    const auto A = fourier_transform(a);
    for (int s = 0; s < 5; ++s) {
      const double Z = uniform(rng, -5, 5);
      CHECK(std::abs(lhs(Z) - std::exp(cplx(0, c * Z)) * A(Z)) < 1e-10);
    }
  }
}

TEST_CASE("amplitudes decay beyond their support interval") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_amplitude(rng, 3, 4, 1.0);
    const auto [lo, hi] = a.support();
    double peak = 0.0;
    for (double w = lo; w <= hi; w += (hi - lo) / 400) peak = std::max(peak, std::abs(a(w)));
    CHECK(std::abs(a(lo - 0.5)) <= 1e-20 * std::max(1.0, peak));
    CHECK(std::abs(a(hi + 0.5)) <= 1e-20 * std::max(1.0, peak));
    DecayWindow window;
    window.noise_floor = 1e-40;  // keep the outer shells in the fit
    const auto rep = schwartz_decay_report([&](double w) { return a(w); }, 6, window);
    for (const auto& e : rep) CHECK(e.pass);
  }
}

TEST_CASE("schwartz_decay_report examples") {
  const auto gauss = schwartz_decay_report([](double Z) { return cplx(std::exp(-Z * Z / 4)); }, 6);
  REQUIRE(gauss.size() == 7);
  for (const auto& e : gauss) {
    CHECK(e.pass);
    CHECK(e.exponent <= 0.0);
  }
  const auto lorentz = schwartz_decay_report([](double Z) { return cplx(1.0 / (1.0 + Z * Z)); }, 3);
  CHECK(lorentz[0].pass);
  CHECK(lorentz[1].pass);
  CHECK_FALSE(lorentz[3].pass);
  CHECK(lorentz[3].exponent == doctest::Approx(1.0).epsilon(0.05));
  const auto step = schwartz_decay_report([](double Z) { return cplx(alpha(Z)); }, 1);
  CHECK(step[0].pass);
  CHECK_FALSE(step[1].pass);
}
