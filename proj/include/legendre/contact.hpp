#pragma once

// Linear contact algebra on the boundary scattering cotangent space in the
// flat coordinates (y, tau, mu), where the contact form is
//   chi = d tau + mu . dy,   d chi = sum_i d mu_i ^ d y_i.
// Tangent vectors are stored as (dy, dtau, dmu); the dense layout used for
// matrices is [dy_1..dy_{n-1}, dtau, dmu_1..dmu_{n-1}].

#include "legendre/linalg.hpp"

#include <cstddef>
#include <vector>

namespace legendre {

struct SplittingData {
  int n = 2;  // dim X
  int k = 1;  // codimension of C in the boundary: y' = (y_1..y_k)

  SplittingData() = default;
  SplittingData(int n_, int k_);
  int boundary_dim() const { return n - 1; }
  int fibre_dim() const { return n - 1 - k; }  // number of y'' coordinates
};

struct ContactPoint {
  linalg::Vector y;
  double tau = 0.0;
  linalg::Vector mu;

  ContactPoint() = default;
  ContactPoint(linalg::Vector y_, double tau_, linalg::Vector mu_);
  static ContactPoint origin(int boundary_dim);

  int dim() const { return static_cast<int>(y.size()); }
};

struct TangentVector {
  linalg::Vector dy;
  double dtau = 0.0;
  linalg::Vector dmu;

  TangentVector() = default;
  TangentVector(linalg::Vector dy_, double dtau_, linalg::Vector dmu_);
  static TangentVector zero(int boundary_dim);
  static TangentVector from_dense(const linalg::Vector& v);
  // Unit vectors along the coordinate axes, 1-based index as in y_1..y_{n-1}.
  static TangentVector unit_dy(int boundary_dim, int i);
  static TangentVector unit_dmu(int boundary_dim, int i);
  static TangentVector unit_dtau(int boundary_dim);

  int dim() const { return static_cast<int>(dy.size()); }
  linalg::Vector dense() const;

  friend TangentVector operator+(const TangentVector& a, const TangentVector& b);
  friend TangentVector operator*(double s, const TangentVector& a);
};

// A linear subspace of T_q at a base point, kept as an orthonormal basis.
class TangentSubspace {
 public:
  // Throws DimensionError on mismatched sizes and PreconditionError when the
  // given vectors are linearly dependent (singular-value test, rel_tol).
  TangentSubspace(ContactPoint base, const std::vector<TangentVector>& spanning,
                  double rel_tol = linalg::kRelativeRankTol);
  // Orthonormalises the given columns, dropping dependent directions.
  static TangentSubspace from_columns(ContactPoint base, const linalg::Matrix& columns,
                                      double rel_tol = linalg::kRelativeRankTol);

  const ContactPoint& base() const { return base_; }
  int ambient_boundary_dim() const { return base_.dim(); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const linalg::Matrix& basis_matrix() const { return basis_; }
  std::vector<TangentVector> basis() const;

  // Orthogonal projector onto the subspace (Euclidean metric on the dense layout).
  linalg::Matrix projector() const;
  bool contains(const TangentVector& v, double tol) const;

 private:
  TangentSubspace(ContactPoint base, linalg::Matrix basis);

  ContactPoint base_;
  linalg::Matrix basis_;
};

double contact_eval(const ContactPoint& q, const TangentVector& v);
double dchi_pairing(const TangentVector& v, const TangentVector& w);

// Maximal dimension n-1 and both chi and d chi vanish on the basis (to tol).
bool is_legendre_subspace(const TangentSubspace& V, double tol);

// W' = { w' : chi(w') = 0, d chi(w', w) = 0 for all w in W }.
// PreconditionError unless W is isotropic inside ker chi.
TangentSubspace annihilator_in_ker(const TangentSubspace& W, double tol = 1e-10);

// V1 ∩ V2 as the nullspace of the stacked complement projectors.
TangentSubspace intersect(const TangentSubspace& V1, const TangentSubspace& V2,
                          double rel_tol = 1e-8);

// A primed coordinate index j in 1..k whose differential does not vanish on
// V1, for a Legendre pair meeting cleanly in codimension one with the dy''
// independent on the intersection. PreconditionError otherwise.
int transversal_coordinate_index(const TangentSubspace& V1, const TangentSubspace& V2,
                                 const SplittingData& split, double tol);

// The largest |dy_j| over the orthonormal basis of V (j is 1-based).
double coordinate_differential_norm(const TangentSubspace& V, int j);

}  // namespace legendre
