#include "legendre/contact.hpp"

#include "legendre/errors.hpp"

#include <cmath>
#include <string>

namespace legendre {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch");
}

}  // namespace

SplittingData::SplittingData(int n_, int k_) : n(n_), k(k_) {
  if (n < 2) throw DimensionError("dim X must be at least 2");
  if (k < 1 || k > n - 1) throw DimensionError("need 1 <= k <= n-1");
}

ContactPoint::ContactPoint(linalg::Vector y_, double tau_, linalg::Vector mu_)
    : y(std::move(y_)), tau(tau_), mu(std::move(mu_)) {
  require_same_dim(static_cast<int>(y.size()), static_cast<int>(mu.size()), "ContactPoint");
}

ContactPoint ContactPoint::origin(int boundary_dim) {
  return {linalg::Vector::Zero(boundary_dim), 0.0, linalg::Vector::Zero(boundary_dim)};
}

TangentVector::TangentVector(linalg::Vector dy_, double dtau_, linalg::Vector dmu_)
    : dy(std::move(dy_)), dtau(dtau_), dmu(std::move(dmu_)) {
  require_same_dim(static_cast<int>(dy.size()), static_cast<int>(dmu.size()), "TangentVector");
}

TangentVector TangentVector::zero(int d) {
  return {linalg::Vector::Zero(d), 0.0, linalg::Vector::Zero(d)};
}

TangentVector TangentVector::from_dense(const linalg::Vector& v) {
  if (v.size() % 2 != 1) throw DimensionError("dense tangent vector must have odd length");
  const auto d = (v.size() - 1) / 2;
  return {v.head(d), v[d], v.tail(d)};
}

TangentVector TangentVector::unit_dy(int d, int i) {
  auto t = zero(d);
  t.dy[i - 1] = 1.0;
  return t;
}

TangentVector TangentVector::unit_dmu(int d, int i) {
  auto t = zero(d);
  t.dmu[i - 1] = 1.0;
  return t;
}

TangentVector TangentVector::unit_dtau(int d) {
  auto t = zero(d);
  t.dtau = 1.0;
  return t;
}

linalg::Vector TangentVector::dense() const {
  const auto d = dy.size();
  linalg::Vector v(2 * d + 1);
  v.head(d) = dy;
  v[d] = dtau;
  v.tail(d) = dmu;
  return v;
}

TangentVector operator+(const TangentVector& a, const TangentVector& b) {
  require_same_dim(a.dim(), b.dim(), "TangentVector sum");
  return {a.dy + b.dy, a.dtau + b.dtau, a.dmu + b.dmu};
}

TangentVector operator*(double s, const TangentVector& a) { return {s * a.dy, s * a.dtau, s * a.dmu}; }

TangentSubspace::TangentSubspace(ContactPoint base, linalg::Matrix basis)
    : base_(std::move(base)), basis_(std::move(basis)) {}

TangentSubspace::TangentSubspace(ContactPoint base, const std::vector<TangentVector>& spanning,
                                 double rel_tol)
    : base_(std::move(base)) {
  const int d = base_.dim();
  linalg::Matrix cols(2 * d + 1, static_cast<Eigen::Index>(spanning.size()));
  for (std::size_t i = 0; i < spanning.size(); ++i) {
    require_same_dim(spanning[i].dim(), d, "TangentSubspace");
    cols.col(static_cast<Eigen::Index>(i)) = spanning[i].dense();
  }
  basis_ = linalg::orthonormal_range(cols, rel_tol);
  if (basis_.cols() != cols.cols()) throw PreconditionError("TangentSubspace basis is linearly dependent");
}

TangentSubspace TangentSubspace::from_columns(ContactPoint base, const linalg::Matrix& columns,
                                              double rel_tol) {
  if (columns.rows() != 2 * base.dim() + 1) throw DimensionError("TangentSubspace columns");
  return TangentSubspace(std::move(base), linalg::orthonormal_range(columns, rel_tol));
}

std::vector<TangentVector> TangentSubspace::basis() const {
  std::vector<TangentVector> out;
  out.reserve(static_cast<std::size_t>(basis_.cols()));
  for (Eigen::Index i = 0; i < basis_.cols(); ++i) out.push_back(TangentVector::from_dense(basis_.col(i)));
  return out;
}

linalg::Matrix TangentSubspace::projector() const { return basis_ * basis_.transpose(); }

bool TangentSubspace::contains(const TangentVector& v, double tol) const {
  const linalg::Vector d = v.dense();
  return (d - projector() * d).norm() <= tol * std::max(1.0, d.norm());
}

double contact_eval(const ContactPoint& q, const TangentVector& v) {
  require_same_dim(q.dim(), v.dim(), "contact_eval");
  return v.dtau + q.mu.dot(v.dy);
}

double dchi_pairing(const TangentVector& v, const TangentVector& w) {
  require_same_dim(v.dim(), w.dim(), "dchi_pairing");
  return v.dmu.dot(w.dy) - v.dy.dot(w.dmu);
}

bool is_legendre_subspace(const TangentSubspace& V, double tol) {
  const int d = V.ambient_boundary_dim();
  if (V.dim() != d) return false;
  const auto basis = V.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (std::abs(contact_eval(V.base(), basis[i])) > tol) return false;
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (std::abs(dchi_pairing(basis[i], basis[j])) > tol) return false;
  }
  return true;
}

TangentSubspace annihilator_in_ker(const TangentSubspace& W, double tol) {
  const int d = W.ambient_boundary_dim();
  const auto basis = W.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (std::abs(contact_eval(W.base(), basis[i])) > tol)
      throw PreconditionError("annihilator_in_ker: W is not inside ker chi");
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (std::abs(dchi_pairing(basis[i], basis[j])) > tol)
        throw PreconditionError("annihilator_in_ker: W is not isotropic for d chi");
  }
  // Row 0: chi. Row 1+i: z -> d chi(z, w_i) = z.dmu . w.dy - z.dy . w.dmu.
  linalg::Matrix conditions(1 + static_cast<Eigen::Index>(basis.size()), 2 * d + 1);
  conditions.setZero();
  conditions.block(0, 0, 1, d) = W.base().mu.transpose();
  conditions(0, d) = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i) + 1;
    conditions.block(r, 0, 1, d) = -basis[i].dmu.transpose();
    conditions.block(r, d + 1, 1, d) = basis[i].dy.transpose();
  }
  return TangentSubspace::from_columns(W.base(), linalg::nullspace(conditions));
}

TangentSubspace intersect(const TangentSubspace& V1, const TangentSubspace& V2, double rel_tol) {
  require_same_dim(V1.ambient_boundary_dim(), V2.ambient_boundary_dim(), "intersect");
  const auto& b1 = V1.base();
  const auto& b2 = V2.base();
  const double gap = (b1.y - b2.y).norm() + std::abs(b1.tau - b2.tau) + (b1.mu - b2.mu).norm();
  if (gap > 1e-9 * (1.0 + b1.y.norm() + b1.mu.norm()))
    throw PreconditionError("intersect: subspaces live at different base points");
  const Eigen::Index D = V1.basis_matrix().rows();
  const linalg::Matrix id = linalg::Matrix::Identity(D, D);
  linalg::Matrix stacked(2 * D, D);
  stacked.topRows(D) = id - V1.projector();
  stacked.bottomRows(D) = id - V2.projector();
  // Both complements have unit singular values; an absolute floor is the meaningful cut.
  return TangentSubspace::from_columns(b1, linalg::nullspace(stacked, 0.0, rel_tol));
}

double coordinate_differential_norm(const TangentSubspace& V, int j) {
  double best = 0.0;
  for (const auto& b : V.basis()) best = std::max(best, std::abs(b.dy[j - 1]));
  return best;
}

int transversal_coordinate_index(const TangentSubspace& V1, const TangentSubspace& V2,
                                 const SplittingData& split, double tol) {
  const int d = split.boundary_dim();
  if (V1.ambient_boundary_dim() != d || V2.ambient_boundary_dim() != d)
    throw DimensionError("transversal_coordinate_index: splitting does not match subspaces");
  const double legendre_tol = std::max(tol, 1e-8);
  if (!is_legendre_subspace(V1, legendre_tol)) throw PreconditionError("V1 is not a Legendre subspace");
  if (!is_legendre_subspace(V2, legendre_tol)) throw PreconditionError("V2 is not a Legendre subspace");

  const TangentSubspace W = intersect(V1, V2);
  if (W.dim() != d - 1)
    throw PreconditionError("V1 and V2 must meet cleanly in codimension one (got dim W = " +
                            std::to_string(W.dim()) + ", expected " + std::to_string(d - 1) + ")");

  const int fibre = split.fibre_dim();
  if (fibre > 0) {
    linalg::Matrix proj(fibre, W.dim());
    for (int r = 0; r < fibre; ++r)
      for (Eigen::Index c = 0; c < W.dim(); ++c) proj(r, c) = W.basis_matrix()(split.k + r, c);
    if (static_cast<int>(linalg::numerical_rank(proj, 1e-8)) != fibre)
      throw PreconditionError("the dy'' differentials are not independent on V1 ∩ V2");
  }

  int best_j = 0;
  double best = 0.0;
  for (int j = 1; j <= split.k; ++j) {
    const double s = coordinate_differential_norm(V1, j);
    if (s > best) {
      best = s;
      best_j = j;
    }
  }
  if (best <= tol)
    throw PreconditionError("no primed coordinate differential is nonzero on V1; inputs contradict the clean-intersection hypotheses");
  return best_j;
}

}  // namespace legendre
