#pragma once

// Discrete generator of the first-order system
//
//   u' = v,   M v' = -K u - rho D0 v,
//
// acting on states U = (u, v) of the energy space with Gram matrix
// G = blockdiag(K, M).

#include <cstddef>
#include <memory>

#include "platelab/fem.hpp"
#include "platelab/linalg.hpp"

namespace platelab::op {

using linalg::Matrix;
using linalg::Vector;

struct StateVector {
  Vector u;
  Vector v;

  static StateVector zero(std::size_t n) { return {Vector(n, 0.0), Vector(n, 0.0)}; }
  [[nodiscard]] std::size_t size() const noexcept { return u.size(); }
};

/// Energy inner product <U, W>_G = u^T K w_u + v^T M w_v.
class EnergyGram {
public:
  explicit EnergyGram(const fem::AssembledForms& forms);

  [[nodiscard]] std::size_t n_dof() const noexcept { return bending_.rows(); }
  [[nodiscard]] double inner(const StateVector& a, const StateVector& b) const;
  [[nodiscard]] double norm(const StateVector& a) const;
  /// Dense blockdiag(K, M) of size 2 n_dof.
  [[nodiscard]] const Matrix& matrix() const noexcept { return g_; }
  [[nodiscard]] const linalg::Cholesky& factor() const noexcept { return *factor_; }

private:
  Matrix bending_;
  Matrix mass_;
  Matrix g_;
  std::shared_ptr<const linalg::Cholesky> factor_;
};

/// E = (u^T K u + v^T M v) / 2.
double energy(const EnergyGram& gram, const StateVector& state);

class FirstOrderSystem {
public:
  FirstOrderSystem(fem::AssembledForms forms, double rho);

  [[nodiscard]] const fem::AssembledForms& forms() const noexcept { return forms_; }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] std::size_t n_dof() const noexcept { return forms_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return 2 * forms_.size(); }
  [[nodiscard]] const EnergyGram& gram() const noexcept { return gram_; }

  /// (v, M^{-1}(-K u - rho D0 v)).
  [[nodiscard]] StateVector apply(const StateVector& state) const;

  /// Dense generator on the (u, v) ordering: [[0, I], [-M^{-1}K, -rho M^{-1}D0]].
  [[nodiscard]] Matrix generator_matrix() const;

  [[nodiscard]] const linalg::Cholesky& mass_factor() const noexcept { return *mass_factor_; }
  [[nodiscard]] const linalg::Cholesky& bending_factor() const noexcept { return *bending_factor_; }
  [[nodiscard]] const linalg::Cholesky& shifted_factor() const noexcept { return *shifted_factor_; }

private:
  fem::AssembledForms forms_;
  double rho_;
  EnergyGram gram_;
  std::shared_ptr<const linalg::Cholesky> mass_factor_;
  std::shared_ptr<const linalg::Cholesky> bending_factor_;
  std::shared_ptr<const linalg::Cholesky> shifted_factor_;
};

/// Convenience: validate, mesh, build the space and assemble.
FirstOrderSystem make_system(const DomainConfig& config);

StateVector apply_generator(const FirstOrderSystem& sys, const StateVector& state);

/// Re <A U, U>_G; equals -rho v^T D0 v.
double dissipation_form(const FirstOrderSystem& sys, const StateVector& state);

struct SolveResult {
  StateVector state;
  /// ||L U - F||_G / ||F||_G (absolute when F = 0), L the operator inverted.
  double residual = 0.0;
};

/// Solves (1 - A) U = F with F = (f, g): (M + K + rho D0) u = M(g + f) + rho D0 f,
/// v = u - f.
SolveResult lax_milgram_solve_shifted(const FirstOrderSystem& sys, const StateVector& rhs);

/// Solves -A U = F: K u = M g + rho D0 f, v = -f.
SolveResult solve_inverse(const FirstOrderSystem& sys, const StateVector& rhs);

}  // namespace platelab::op
