#pragma once

// Global C^1 cubic Hermite space on a 1D mesh with clamped ends eliminated.
// Continuity of value and slope across every node (in particular at the
// interfaces a and b) is built into the DOF sharing, so the space is a
// conforming discretization of H^2_0(0,L).

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "platelab/domain.hpp"
#include "platelab/linalg.hpp"

namespace platelab::fem {

using linalg::Matrix;
using linalg::Vector;

inline constexpr std::size_t kEliminated = std::numeric_limits<std::size_t>::max();

struct HermiteSpace {
  Mesh1D mesh;
  std::size_t n_dof = 0;
  /// Per node: {value DOF, slope DOF}, kEliminated at the clamped ends.
  std::vector<std::array<std::size_t, 2>> dof_map;

  /// Global indices of (value_left, slope_left, value_right, slope_right).
  [[nodiscard]] std::array<std::size_t, 4> element_dofs(std::size_t element) const;
};

/// Node-major numbering, value before slope. Throws DegenerateSpace when
/// every DOF is clamped (a single-element mesh).
HermiteSpace build_space(const Mesh1D& mesh);

using Local = std::array<std::array<double, 4>, 4>;

struct LocalMatrices {
  Local mass;     ///< int phi_i phi_j
  Local bending;  ///< int phi_i'' phi_j''
  Local damping;  ///< int phi_i' phi_j' on damped elements, zero otherwise
};

LocalMatrices local_matrices(double h, Region region);

/// M, K and D0 on the free DOFs: <u,phi>, <u'',phi''> and the damped-region
/// part of <u',phi'>.
struct AssembledForms {
  Matrix mass;
  Matrix bending;
  Matrix damping;

  [[nodiscard]] std::size_t size() const noexcept { return mass.rows(); }
};

AssembledForms assemble(const HermiteSpace& space);

/// L^2 Gram matrix restricted to the elements tagged `region`.
Matrix assemble_region_mass(const HermiteSpace& space, Region region);

using ScalarFunction = std::function<double(double)>;

/// Nodal value/slope interpolant. Throws BoundaryMismatch if f or f' do not
/// vanish at the clamped ends (tolerance 1e-12 times the nodal scale).
Vector interpolate(const HermiteSpace& space, const ScalarFunction& f, const ScalarFunction& df);

struct PointValue {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};

/// Evaluates the represented function at x using the polynomial of `element`
/// (x may be an element end point, which gives one-sided derivatives).
PointValue evaluate(const HermiteSpace& space, std::span<const double> coeffs, std::size_t element, double x);

}  // namespace platelab::fem
