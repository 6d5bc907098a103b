#pragma once

// Polynomial phase functions phi(y, v), their critical sets and the
// Legendre submanifolds they parametrize:
//   { (y, tau = -phi(y,v), mu = d_y phi(y,v)) : d_v phi(y,v) = 0 }.

#include "legendre/contact.hpp"
#include "legendre/linalg.hpp"
#include "legendre/polynomial.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace legendre {

// Polynomial in (y_1..y_{n_y}, v_1..v_{n_v}). Derivative polynomials are
// formed once at construction, so gradients and Hessians are exact.
class PhaseFunction {
 public:
  PhaseFunction() = default;
  PhaseFunction(int n_y, int n_v, Polynomial poly);

  int n_y() const { return n_y_; }
  int n_v() const { return n_v_; }
  const Polynomial& polynomial() const { return poly_; }

  double eval(std::span<const double> y, std::span<const double> v) const;
  linalg::Vector grad_y(std::span<const double> y, std::span<const double> v) const;
  linalg::Vector grad_v(std::span<const double> y, std::span<const double> v) const;
  // Full gradient over (y, v).
  linalg::Vector gradient(std::span<const double> y, std::span<const double> v) const;
  // Row i is d(∂phi/∂v_i) over (y, v): an n_v x (n_y + n_v) matrix.
  linalg::Matrix hess_mixed(std::span<const double> y, std::span<const double> v) const;
  // Full Hessian over (y, v).
  linalg::Matrix hessian(std::span<const double> y, std::span<const double> v) const;

  // Largest gap between the exact gradient and central differences of eval
  // at `samples` random points in [-1,1]^(n_y+n_v), relative to max(1,|grad|).
  double gradient_self_test(std::mt19937_64& rng, int samples = 20, double step = 1e-5) const;

 private:
  std::vector<double> join(std::span<const double> y, std::span<const double> v) const;

  int n_y_ = 0;
  int n_v_ = 0;
  Polynomial poly_;
  std::vector<Polynomial> grad_;
  std::vector<std::vector<Polynomial>> hess_;
};

// A phase in (y, v, s) whose last parameter s ranges over [0, inf).
class IntersectingPhase {
 public:
  IntersectingPhase() = default;
  explicit IntersectingPhase(PhaseFunction phase);

  const PhaseFunction& phase() const { return phase_; }
  int n_y() const { return phase_.n_y(); }
  // Parameters other than s.
  int n_free() const { return phase_.n_v() - 1; }
  // The restriction to s = 0 as a phase in (y, v).
  PhaseFunction boundary_phase() const;

 private:
  PhaseFunction phase_;
};

// Data of the model phase -T' + v.(y~ - Y~) around a boundary point of L_1,
// with y~ = (y_1..y_{k-1}). Both polynomials live in the local variables
// (y_k, y''_{k+1}..y''_{n-1}, v_1..v_{k-1}) and vanish at y_k = 0.
struct ModelPhaseData {
  SplittingData split;
  Polynomial t_prime;                // T'
  std::vector<Polynomial> y_tilde;   // Y~, k-1 components

  ModelPhaseData() = default;
  ModelPhaseData(SplittingData split, Polynomial t_prime, std::vector<Polynomial> y_tilde);

  // Builds T' = y_k T and Y~ = y_k Y from the factors T, Y.
  static ModelPhaseData from_factors(SplittingData split, const Polynomial& t, const std::vector<Polynomial>& y);
  static ModelPhaseData trivial(SplittingData split);

  std::size_t local_vars() const { return static_cast<std::size_t>(split.n - 1); }
  // Local variable slots in the full (y_1..y_{n-1}, v...) ordering.
  std::vector<std::size_t> local_to_phase_slots(std::size_t extra_params = 0) const;
  bool is_trivial() const;
};

PhaseFunction build_model_phase(const ModelPhaseData& data);
// psi(y, v, zeta, ybar) = -T' + v.(y~ - Y~) + zeta (y_k - ybar), parameters (v, zeta, ybar).
IntersectingPhase build_model_intersecting_phase(const ModelPhaseData& data);

// (y, v) must be critical (|d_v phi| <= tol). True iff the rows d(∂phi/∂v_i) have rank n_v.
bool nondegeneracy_check(const PhaseFunction& phi, std::span<const double> y, std::span<const double> v, double tol);

// Same with rows d(∂psi/∂s), d(∂psi/∂v_i), ds. Criticality is required in
// the free parameters only; s >= 0 is required.
bool intersecting_nondeg_check(const IntersectingPhase& psi, std::span<const double> y,
                               std::span<const double> params, double tol);

// Damped Newton on d_v phi(y, .) = 0 from `seed`: at most 50 iterations,
// stops at residual <= tol. nullopt on failure (singular Hessian, no progress).
std::optional<linalg::Vector> find_critical_point(const PhaseFunction& phi, std::span<const double> y,
                                                  std::span<const double> seed, double tol = 1e-12,
                                                  int max_iterations = 50);

ContactPoint induced_point(const PhaseFunction& phi, std::span<const double> y, std::span<const double> v);

// Tangent space of the induced Legendrian at a critical point: the kernel of
// d(d_v phi) pushed forward by (y, v) -> (y, -phi, d_y phi).
TangentSubspace legendrian_tangent_space(const PhaseFunction& phi, std::span<const double> y,
                                         std::span<const double> v);

struct LegendrianSample {
  std::vector<ContactPoint> points;
  std::vector<linalg::Vector> y;       // base y of each point
  std::vector<linalg::Vector> params;  // critical v of each point
  std::size_t skipped = 0;             // seeds without a converged critical point
  std::vector<std::string> notes;
};

LegendrianSample induced_legendrian_sample(const PhaseFunction& phi,
                                           const std::vector<std::vector<double>>& y_grid,
                                           const std::vector<std::vector<double>>& v_seeds,
                                           double tol = 1e-12);

// Tangent spaces of L_1 (with boundary) and L_2 at a point of their
// intersection, from a random model phase followed by a random linear change
// of coordinates y' -> A y', y'' -> E y' + D y'' and its cotangent lift.
struct LegendrePair {
  SplittingData split;
  ModelPhaseData phase;
  ContactPoint base;
  TangentSubspace V1;
  TangentSubspace V2;
};
LegendrePair random_legendre_pair(const SplittingData& split, std::mt19937_64& rng, int degree = 2);

// All monomials of total degree <= degree with coefficients uniform in [-scale, scale].
Polynomial random_polynomial(std::size_t nvars, int degree, std::mt19937_64& rng, double scale = 1.0);

}  // namespace legendre
