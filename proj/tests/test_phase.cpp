#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "legendre/errors.hpp"
#include "legendre/phase.hpp"
#include "support.hpp"

#include <boost/multiprecision/cpp_int.hpp>

using namespace legendre;
using boost::multiprecision::cpp_rational;
using testing_support::uniform;

namespace {

using RMatrix = std::vector<std::vector<cpp_rational>>;

// Exact second derivative d^2 P / (d z_a d z_b) at an integer point.
cpp_rational exact_second(const Polynomial& P, std::size_t a, std::size_t b, const std::vector<int>& pt) {
  cpp_rational sum = 0;
  for (const auto& [e, c] : P.terms()) {
    std::vector<int> ex = e;
    cpp_rational coef = static_cast<long long>(c);
    coef *= ex[a];
    if (ex[a] == 0) continue;
    ex[a] -= 1;
    coef *= ex[b];
    if (ex[b] == 0) continue;
    ex[b] -= 1;
    for (std::size_t i = 0; i < pt.size(); ++i)
      for (int p = 0; p < ex[i]; ++p) coef *= pt[i];
    sum += coef;
  }
  return sum;
}

cpp_rational exact_first(const Polynomial& P, std::size_t a, const std::vector<int>& pt) {
  cpp_rational sum = 0;
  for (const auto& [e, c] : P.terms()) {
    if (e[a] == 0) continue;
    std::vector<int> ex = e;
    cpp_rational coef = static_cast<long long>(c);
    coef *= ex[a];
    ex[a] -= 1;
    for (std::size_t i = 0; i < pt.size(); ++i)
      for (int p = 0; p < ex[i]; ++p) coef *= pt[i];
    sum += coef;
  }
  return sum;
}

// Rank by fraction-exact Gaussian elimination.
int exact_rank(RMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const cpp_rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

// Sparse random polynomial with small integer coefficients.
Polynomial sparse_integer_polynomial(std::size_t nvars, int degree, std::mt19937_64& rng) {
  const Polynomial dense = random_polynomial(nvars, degree, rng);
  Polynomial out(nvars);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::bernoulli_distribution keep(0.35);
  for (const auto& [e, c] : dense.terms())
    if (keep(rng)) out.add_term(e, coef(rng));
  return out;
}

// P - sum_i (dP/dv_i)(pt) v_i over the slots in `crit`, so pt is critical there.
Polynomial make_critical(Polynomial P, const std::vector<std::size_t>& crit, const std::vector<int>& pt) {
  for (std::size_t slot : crit) {
    const cpp_rational g = exact_first(P, slot, pt);
    P -= Polynomial::variable(P.nvars(), slot) * static_cast<double>(g);
  }
  return P;
}

std::vector<double> to_double(const std::vector<int>& v, std::size_t from, std::size_t to) {
  return std::vector<double>(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(to));
}

}  // namespace

TEST_CASE("gradient self-test on random polynomial phases") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const int ny = 1 + t % 3, nv = t % 3;
    const PhaseFunction phi(ny, nv, random_polynomial(static_cast<std::size_t>(ny + nv), 4, rng));
    CHECK(phi.gradient_self_test(rng) <= 1e-6);
  }
}

TEST_CASE("nondegeneracy_check examples") {
  const std::size_t yv = 2;
  const Polynomial y = Polynomial::variable(yv, 0);
  const Polynomial v = Polynomial::variable(yv, 1);
  const PhaseFunction linear(1, 1, v * y);
  CHECK(nondegeneracy_check(linear, std::vector<double>{0.0}, std::vector<double>{0.37}, 1e-12));
  const PhaseFunction quartic(1, 1, v * v * v * v);
  CHECK_FALSE(nondegeneracy_check(quartic, std::vector<double>{0.0}, std::vector<double>{0.0}, 1e-12));
  CHECK_THROWS_AS(nondegeneracy_check(linear, std::vector<double>{0.5}, std::vector<double>{0.0}, 1e-12),
                  PreconditionError);
}

TEST_CASE("model phase with T = c v^2 and Y~ = y_k v") {
  const double c = 0.7;
  const SplittingData split(3, 2);
  const std::size_t nl = 2;  // (y_2, v_1)
  const Polynomial v = Polynomial::variable(nl, 1);
  const auto data = ModelPhaseData::from_factors(split, c * v * v, {v});
  const PhaseFunction phi = build_model_phase(data);
  REQUIRE(phi.n_y() == 2);
  REQUIRE(phi.n_v() == 1);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const double y1 = uniform(rng, -1, 1), y2 = uniform(rng, -1, 1), vv = uniform(rng, -1, 1);
    const double expect = -y2 * c * vv * vv + vv * (y1 - y2 * vv);
    CHECK(phi.eval(std::vector<double>{y1, y2}, std::vector<double>{vv}) == doctest::Approx(expect).epsilon(1e-14));
    // Critical when y1 = 2 (c + 1) y2 v; the hand-assembled row (1, -2(c+1)v, -2(c+1)y2) has rank 1.
    const double yc = 2.0 * (c + 1.0) * y2 * vv;
    CHECK(nondegeneracy_check(phi, std::vector<double>{yc, y2}, std::vector<double>{vv}, 1e-12));
  }
}

TEST_CASE("build_model_phase examples with trivial T and Y~") {
  {
    const auto psi = build_model_intersecting_phase(ModelPhaseData::trivial(SplittingData(2, 1)));
    // variables (y, zeta, ybar)
    CHECK(psi.phase().eval(std::vector<double>{0.3}, std::vector<double>{2.0, 0.1}) == doctest::Approx(2.0 * 0.2));
    CHECK(psi.phase().polynomial() ==
          Polynomial::variable(3, 1) * (Polynomial::variable(3, 0) - Polynomial::variable(3, 2)));
  }
  {
    const auto data = ModelPhaseData::trivial(SplittingData(3, 2));
    const PhaseFunction phi = build_model_phase(data);
    CHECK(phi.polynomial() == Polynomial::variable(3, 2) * Polynomial::variable(3, 0));
    const auto psi = build_model_intersecting_phase(data);
    const Polynomial expect = Polynomial::variable(5, 2) * Polynomial::variable(5, 0) +
                              Polynomial::variable(5, 3) * (Polynomial::variable(5, 1) - Polynomial::variable(5, 4));
    CHECK(psi.phase().polynomial() == expect);
  }
}

TEST_CASE("ModelPhaseData rejects T' not vanishing at y_k = 0") {
  const SplittingData split(2, 1);
  CHECK_THROWS_AS(ModelPhaseData(split, Polynomial::constant(1, 1.0), {}), PreconditionError);
  CHECK_THROWS_AS(ModelPhaseData(split, Polynomial::constant(2, 0.0), {}), DimensionError);
}

TEST_CASE("intersecting_nondeg_check examples") {
  const auto psi = build_model_intersecting_phase(ModelPhaseData::trivial(SplittingData(2, 1)));
  CHECK(intersecting_nondeg_check(psi, std::vector<double>{0.4}, std::vector<double>{1.3, 0.4}, 1e-12));
  // psi = zeta y with s not appearing.
  const IntersectingPhase flat(PhaseFunction(1, 2, Polynomial::variable(3, 1) * Polynomial::variable(3, 0)));
  CHECK_FALSE(intersecting_nondeg_check(flat, std::vector<double>{0.0}, std::vector<double>{0.2, 0.5}, 1e-12));
  CHECK_THROWS_AS(intersecting_nondeg_check(psi, std::vector<double>{0.4}, std::vector<double>{1.0, -1.0}, 1e-12),
                  PreconditionError);
  // The s = 0 restriction is a phase in (y, zeta).
  const PhaseFunction b = psi.boundary_phase();
  CHECK(b.n_v() == 1);
  CHECK(b.polynomial() == Polynomial::variable(2, 1) * Polynomial::variable(2, 0));
}

TEST_CASE("nondegeneracy_check agrees with exact rational rank on random phases") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> small(-1, 1);
  int degenerate = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t ny = 1 + static_cast<std::size_t>(t % 2), nv = 1 + static_cast<std::size_t>((t / 2) % 2);
    const std::size_t nvars = ny + nv;
    std::vector<int> pt(nvars);
    for (auto& p : pt) p = small(rng);
    std::vector<std::size_t> vslots;
    for (std::size_t i = ny; i < nvars; ++i) vslots.push_back(i);
    const Polynomial P = make_critical(sparse_integer_polynomial(nvars, 3, rng), vslots, pt);
    const PhaseFunction phi(static_cast<int>(ny), static_cast<int>(nv), P);

    RMatrix rows(nv, std::vector<cpp_rational>(nvars));
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nvars; ++j) rows[i][j] = exact_second(P, ny + i, j, pt);
    const bool exact = exact_rank(rows) == static_cast<int>(nv);
    degenerate += exact ? 0 : 1;
    CHECK(nondegeneracy_check(phi, to_double(pt, 0, ny), to_double(pt, ny, nvars), 1e-9) == exact);
  }
  CHECK(degenerate > 0);
  CHECK(degenerate < 50);
}

TEST_CASE("intersecting_nondeg_check agrees with exact rational rank on random phases") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> small(-1, 1);
  std::uniform_int_distribution<int> half(0, 1);
  int degenerate = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t ny = 1 + static_cast<std::size_t>(t % 2), free = static_cast<std::size_t>((t / 2) % 2);
    const std::size_t nvars = ny + free + 1;
    std::vector<int> pt(nvars);
    for (auto& p : pt) p = small(rng);
    pt.back() = half(rng);
    std::vector<std::size_t> vslots;
    for (std::size_t i = ny; i < ny + free; ++i) vslots.push_back(i);
    const Polynomial P = make_critical(sparse_integer_polynomial(nvars, 3, rng), vslots, pt);
    const IntersectingPhase psi(PhaseFunction(static_cast<int>(ny), static_cast<int>(free + 1), P));

    const std::size_t s = nvars - 1;
    RMatrix rows;
    auto row_of = [&](std::size_t a) {
      std::vector<cpp_rational> r(nvars);
      for (std::size_t j = 0; j < nvars; ++j) r[j] = exact_second(P, a, j, pt);
      return r;
    };
    rows.push_back(row_of(s));
    for (std::size_t i = 0; i < free; ++i) rows.push_back(row_of(ny + i));
    std::vector<cpp_rational> ds(nvars);
    ds[s] = 1;
    rows.push_back(ds);
    const bool exact = exact_rank(rows) == static_cast<int>(free + 2);
    degenerate += exact ? 0 : 1;
    CHECK(intersecting_nondeg_check(psi, to_double(pt, 0, ny), to_double(pt, ny, nvars), 1e-9) == exact);
  }
  CHECK(degenerate > 0);
  CHECK(degenerate < 50);
}

TEST_CASE("induced_legendrian_sample examples") {
  SUBCASE("plane wave") {
    const double k1 = 0.8, k2 = -1.7;
    const PhaseFunction phi(2, 0, k1 * Polynomial::variable(2, 0) + k2 * Polynomial::variable(2, 1));
    const auto s = induced_legendrian_sample(phi, {{0.1, 0.2}, {-1.0, 3.0}}, {});
    REQUIRE(s.points.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(s.points[i].tau == doctest::Approx(-(k1 * s.y[i][0] + k2 * s.y[i][1])));
      CHECK(s.points[i].mu[0] == doctest::Approx(k1));
      CHECK(s.points[i].mu[1] == doctest::Approx(k2));
    }
  }
  SUBCASE("conormal of y = 0") {
    const PhaseFunction phi(1, 1, Polynomial::variable(2, 1) * Polynomial::variable(2, 0));
    const auto s = induced_legendrian_sample(phi, {{0.0}}, {{0.5}, {-2.0}});
    REQUIRE(s.points.size() == 2);
    CHECK(s.points[0].tau == 0.0);
    CHECK(s.points[0].mu[0] == 0.5);
    CHECK(s.points[1].mu[0] == -2.0);
    const auto none = induced_legendrian_sample(phi, {{0.3}, {-0.1}}, {{0.5}});
    CHECK(none.points.empty());
    CHECK(none.skipped == 2);
    CHECK_FALSE(none.notes.empty());
  }
}

TEST_CASE("trivial model phase with k = 1 induces the zero section") {
  for (int n = 2; n <= 4; ++n) {
    const PhaseFunction phi = build_model_phase(ModelPhaseData::trivial(SplittingData(n, 1)));
    std::vector<std::vector<double>> grid;
    std::mt19937_64 rng(static_cast<unsigned>(n));
    for (int i = 0; i < 10; ++i) {
      std::vector<double> y(static_cast<std::size_t>(n - 1));
      y[0] = uniform(rng, 0.01, 1.0);
      for (std::size_t j = 1; j < y.size(); ++j) y[j] = uniform(rng, -1, 1);
      grid.push_back(y);
    }
    const auto s = induced_legendrian_sample(phi, grid, {});
    REQUIRE(s.points.size() == grid.size());
    for (const auto& q : s.points) {
      CHECK(q.tau == 0.0);
      CHECK(q.mu.cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("sampled Legendrians annihilate the contact form along finite differences") {
  const double c = 0.4;
  const SplittingData split(3, 2);
  const Polynomial v = Polynomial::variable(2, 1);
  const Polynomial yk = Polynomial::variable(2, 0);
  const PhaseFunction phi = build_model_phase(ModelPhaseData::from_factors(split, c * v * v + yk, {v + 0.5 * yk}));
  std::mt19937_64 rng(9);
  int done = 0;
  for (int t = 0; t < 20; ++t) {
    const linalg::Vector y0 = testing_support::random_vector(rng, 2) + linalg::Vector::Constant(2, 1.5);
    const linalg::Vector dir = testing_support::random_vector(rng, 2).normalized();
    const double h = 1e-4;
    std::vector<std::vector<double>> grid;
    for (int s = -1; s <= 1; ++s) {
      const linalg::Vector y = y0 + s * h * dir;
      grid.push_back({y[0], y[1]});
    }
    // Seed from the local solve at y0.
    const auto v0 = find_critical_point(phi, grid[1], std::vector<double>{0.3});
    if (!v0) continue;
    const auto sample = induced_legendrian_sample(phi, grid, {{(*v0)[0]}});
    REQUIRE(sample.points.size() == 3);
    const auto& a = sample.points[0];
    const auto& b = sample.points[2];
    const TangentVector tv((b.y - a.y) / (2 * h), (b.tau - a.tau) / (2 * h), (b.mu - a.mu) / (2 * h));
    const double scale = std::max(1.0, tv.dense().norm());
    CHECK(std::abs(contact_eval(sample.points[1], tv)) <= 1e-5 * scale);
    // The tangent space from the exact Jacobian is Legendre.
    const auto T = legendrian_tangent_space(phi, grid[1], std::vector<double>{(*v0)[0]});
    CHECK(is_legendre_subspace(T, 1e-6));
    CHECK(T.contains(tv, 1e-5 * scale));
    ++done;
  }
  CHECK(done >= 15);
}

TEST_CASE("random Legendre pairs are Legendre and share the base point") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 3;
    const int k = 1 + (t / 3) % (n - 1);
    const LegendrePair p = random_legendre_pair(SplittingData(n, k), rng);
    CHECK(is_legendre_subspace(p.V1, 1e-8));
    CHECK(is_legendre_subspace(p.V2, 1e-8));
    CHECK(intersect(p.V1, p.V2).dim() == n - 2);
  }
}
