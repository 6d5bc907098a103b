#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "legendre/contact.hpp"
#include "legendre/errors.hpp"
#include "legendre/phase.hpp"
#include "support.hpp"

using namespace legendre;
using testing_support::random_vector;
using Span = std::vector<TangentVector>;

namespace {

// Kernel of a small matrix by full-pivot LU, independent of the SVD used in the library.
linalg::Matrix lu_kernel(const linalg::Matrix& a) {
  Eigen::FullPivLU<linalg::Matrix> lu(a);
  lu.setThreshold(1e-10);
  return lu.kernel();
}

// Columns of a must lie in span(b) and vice versa.
bool same_span(const linalg::Matrix& a, const linalg::Matrix& b, double tol) {
  if (a.cols() != b.cols()) return false;
  linalg::Matrix ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return static_cast<long>(linalg::numerical_rank(ab, tol)) == a.cols();
}

ContactPoint random_point(std::mt19937_64& rng, int d) {
  return ContactPoint(random_vector(rng, d), testing_support::uniform(rng, -1, 1), random_vector(rng, d));
}

TangentVector random_tangent(std::mt19937_64& rng, int d) {
  return TangentVector(random_vector(rng, d), testing_support::uniform(rng, -1, 1), random_vector(rng, d));
}

// A basis of ker chi at q: dy_i - mu_i dtau and dmu_i.
std::vector<TangentVector> ker_chi_basis(const ContactPoint& q) {
  const int d = q.dim();
  std::vector<TangentVector> out;
  for (int i = 1; i <= d; ++i) {
    TangentVector v = TangentVector::unit_dy(d, i);
    v.dtau = -q.mu[i - 1];
    out.push_back(v);
    out.push_back(TangentVector::unit_dmu(d, i));
  }
  return out;
}

}  // namespace

TEST_CASE("contact_eval examples") {
  const ContactPoint q(linalg::Vector::Constant(2, 0.3), 1.5, (linalg::Vector(2) << 2.0, 0.0).finished());
  CHECK(contact_eval(q, TangentVector::zero(2)) == 0.0);
  CHECK(contact_eval(ContactPoint::origin(2), TangentVector::unit_dy(2, 1)) == 0.0);
  CHECK(contact_eval(q, TangentVector::unit_dy(2, 1) + TangentVector::unit_dtau(2)) == doctest::Approx(3.0));
  CHECK_THROWS_AS(contact_eval(q, TangentVector::zero(3)), DimensionError);
}

TEST_CASE("dchi_pairing examples") {
  const auto dmu1 = TangentVector::unit_dmu(2, 1);
  const auto dy1 = TangentVector::unit_dy(2, 1);
  CHECK(dchi_pairing(dmu1, dy1) == doctest::Approx(1.0));
  CHECK(dchi_pairing(dy1, dmu1) == doctest::Approx(-1.0));
  std::mt19937_64 rng(1);
  const auto v = random_tangent(rng, 3);
  CHECK(dchi_pairing(v, v) == doctest::Approx(0.0));
  CHECK_THROWS_AS(dchi_pairing(dy1, TangentVector::zero(1)), DimensionError);
}

TEST_CASE("dchi_pairing is antisymmetric on random vectors") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + t % 3;
    const auto v = random_tangent(rng, d);
    const auto w = random_tangent(rng, d);
    CHECK(dchi_pairing(v, w) == doctest::Approx(-dchi_pairing(w, v)).epsilon(1e-14));
  }
}

TEST_CASE("dchi is nondegenerate on ker chi") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 3;  // n = 2..4
    const ContactPoint q = random_point(rng, d);
    const auto basis = ker_chi_basis(q);
    // random nonzero v in ker chi
    TangentVector v = TangentVector::zero(d);
    for (const auto& b : basis) v = v + testing_support::uniform(rng, -1, 1) * b;
    REQUIRE(std::abs(contact_eval(q, v)) < 1e-12);
    double best = 0.0;
    for (const auto& w : basis) best = std::max(best, std::abs(dchi_pairing(v, w)));
    CHECK(best > 0.0);
  }
}

TEST_CASE("is_legendre_subspace examples") {
  for (int d = 1; d <= 3; ++d) {
    const ContactPoint origin = ContactPoint::origin(d);
    std::vector<TangentVector> dy, dmu;
    for (int i = 1; i <= d; ++i) {
      dy.push_back(TangentVector::unit_dy(d, i));
      dmu.push_back(TangentVector::unit_dmu(d, i));
    }
    CHECK(is_legendre_subspace(TangentSubspace(origin, dy), 1e-12));
    std::mt19937_64 rng(d);
    CHECK(is_legendre_subspace(TangentSubspace(random_point(rng, d), dmu), 1e-12));
    std::vector<TangentVector> bad{TangentVector::unit_dtau(d)};
    for (int i = 2; i <= d; ++i) bad.push_back(TangentVector::unit_dy(d, i));
    CHECK_FALSE(is_legendre_subspace(TangentSubspace(origin, bad), 1e-12));
  }
  // Too small.
  CHECK_FALSE(is_legendre_subspace(TangentSubspace(ContactPoint::origin(2), Span{TangentVector::unit_dmu(2, 1)}), 1e-12));
}

TEST_CASE("TangentSubspace rejects dependent spanning sets") {
  const auto v = TangentVector::unit_dy(2, 1);
  CHECK_THROWS_AS(TangentSubspace(ContactPoint::origin(2), Span{v, 2.0 * v}), PreconditionError);
}

TEST_CASE("annihilator_in_ker examples") {
  const ContactPoint o1 = ContactPoint::origin(1);
  {
    const TangentSubspace W(o1, Span{});
    const TangentSubspace Wp = annihilator_in_ker(W);
    CHECK(Wp.dim() == 2);
    linalg::Matrix expect(3, 2);
    expect << 1, 0, 0, 0, 0, 1;
    CHECK(same_span(Wp.basis_matrix(), expect, 1e-10));
  }
  {
    const TangentSubspace W(o1, Span{TangentVector::unit_dmu(1, 1)});
    const TangentSubspace Wp = annihilator_in_ker(W);
    CHECK(Wp.dim() == 1);
    CHECK(Wp.contains(TangentVector::unit_dmu(1, 1), 1e-10));
  }
  {
    const ContactPoint o2 = ContactPoint::origin(2);
    const TangentSubspace W(o2, Span{TangentVector::unit_dy(2, 1), TangentVector::unit_dy(2, 2)});
    const TangentSubspace Wp = annihilator_in_ker(W);
    CHECK(Wp.dim() == 2);
    CHECK(same_span(Wp.basis_matrix(), W.basis_matrix(), 1e-10));
  }
  CHECK_THROWS_AS(annihilator_in_ker(TangentSubspace(o1, Span{TangentVector::unit_dtau(1)})), PreconditionError);
}

TEST_CASE("annihilator_in_ker matches a brute-force nullspace and has complementary dimension") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    const int d = 1 + t % 3;
    const ContactPoint q = random_point(rng, d);
    const auto kb = ker_chi_basis(q);
    // Isotropic W: a random subset of a Legendre subspace rotated into ker chi.
    // Start from span{dy_i - mu_i dtau} (isotropic) and take the first w vectors of a random mixture.
    const int w = std::uniform_int_distribution<int>(0, d)(rng);
    linalg::Matrix L(2 * d + 1, d);
    for (int i = 0; i < d; ++i) L.col(i) = kb[static_cast<std::size_t>(2 * i)].dense();
    const linalg::Matrix mix = linalg::Matrix::Random(d, w);
    std::vector<TangentVector> span;
    for (int c = 0; c < w; ++c) span.push_back(TangentVector::from_dense(L * mix.col(c)));
    const TangentSubspace W(q, span);
    const TangentSubspace Wp = annihilator_in_ker(W);
    CHECK(W.dim() + Wp.dim() == 2 * d);

    // Conditions: chi(v) = 0 and dchi(v, w_j) = 0 as rows over the dense layout.
    linalg::Matrix cond(1 + W.dim(), 2 * d + 1);
    for (int c = 0; c < 2 * d + 1; ++c) {
      linalg::Vector e = linalg::Vector::Zero(2 * d + 1);
      e[c] = 1.0;
      const TangentVector ec = TangentVector::from_dense(e);
      cond(0, c) = contact_eval(q, ec);
      for (int j = 0; j < W.dim(); ++j)
        cond(1 + j, c) = dchi_pairing(ec, TangentVector::from_dense(W.basis_matrix().col(j)));
    }
    const linalg::Matrix K = lu_kernel(cond);
    CHECK(same_span(Wp.basis_matrix(), K, 1e-8));
    for (const auto& b : W.basis()) CHECK(Wp.contains(b, 1e-9));
  }
}

TEST_CASE("intersect agrees with a brute-force nullspace") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 40; ++t) {
    const int d = 2 + t % 2;
    const ContactPoint q = ContactPoint::origin(d);
    const linalg::Matrix shared = linalg::Matrix::Random(2 * d + 1, 1);
    linalg::Matrix a(2 * d + 1, 2), b(2 * d + 1, 2);
    a << shared, linalg::Matrix::Random(2 * d + 1, 1);
    b << shared, linalg::Matrix::Random(2 * d + 1, 1);
    const auto V1 = TangentSubspace::from_columns(q, a);
    const auto V2 = TangentSubspace::from_columns(q, b);
    const auto W = intersect(V1, V2);
    // [a, -b] c = 0 gives the intersection as a * c_a.
    linalg::Matrix ab(2 * d + 1, 4);
    ab << a, -b;
    const linalg::Matrix K = lu_kernel(ab);
    REQUIRE(K.cols() == 1);
    CHECK(W.dim() == 1);
    CHECK(same_span(W.basis_matrix(), a * K.topRows(2), 1e-8));
  }
}

TEST_CASE("transversal_coordinate_index examples") {
  const ContactPoint o1 = ContactPoint::origin(1);
  const TangentSubspace zero_section(o1, Span{TangentVector::unit_dy(1, 1)});
  const TangentSubspace fibre(o1, Span{TangentVector::unit_dmu(1, 1)});
  CHECK(transversal_coordinate_index(zero_section, fibre, SplittingData(2, 1), 1e-8) == 1);
  CHECK_THROWS_AS(transversal_coordinate_index(zero_section, zero_section, SplittingData(2, 1), 1e-8),
                  PreconditionError);

  const ContactPoint o2 = ContactPoint::origin(2);
  const TangentSubspace V1(o2, Span{TangentVector::unit_dy(2, 2), TangentVector::unit_dmu(2, 1)});
  const TangentSubspace V2(o2, Span{TangentVector::unit_dmu(2, 1), TangentVector::unit_dmu(2, 2)});
  CHECK(transversal_coordinate_index(V1, V2, SplittingData(3, 2), 1e-8) == 2);
}

TEST_CASE("transversal_coordinate_index output has a nonzero differential on V1") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 3;
    const int k = 1 + t % (n - 1);
    const LegendrePair p = random_legendre_pair(SplittingData(n, k), rng);
    const int j = transversal_coordinate_index(p.V1, p.V2, p.split, 1e-8);
    REQUIRE(j >= 1);
    REQUIRE(j <= k);
    // Brute force over the primed coordinates: j has the largest |dy_j| on V1.
    double best = 0.0;
    for (int i = 1; i <= k; ++i) {
      double s = 0.0;
      for (long c = 0; c < p.V1.basis_matrix().cols(); ++c) s = std::max(s, std::abs(p.V1.basis_matrix()(i - 1, c)));
      best = std::max(best, s);
    }
    CHECK(coordinate_differential_norm(p.V1, j) == doctest::Approx(best));
    CHECK(coordinate_differential_norm(p.V1, j) > 1e-8);
  }
}
