#include "platelab/fem.hpp"

#include <algorithm>
#include <cmath>

#include "platelab/errors.hpp"

namespace platelab::fem {

std::array<std::size_t, 4> HermiteSpace::element_dofs(std::size_t element) const {
  const auto& left = dof_map.at(element);
  const auto& right = dof_map.at(element + 1);
  return {left[0], left[1], right[0], right[1]};
}

HermiteSpace build_space(const Mesh1D& mesh) {
  const std::size_t nodes = mesh.nodes.size();
  if (nodes < 2) throw DegenerateSpace("fem: mesh needs at least one element");
  HermiteSpace space;
  space.mesh = mesh;
  space.n_dof = 2 * nodes - 4;
  if (space.n_dof == 0) throw DegenerateSpace("fem: every DOF is clamped");
  space.dof_map.assign(nodes, {kEliminated, kEliminated});
  for (std::size_t i = 1; i + 1 < nodes; ++i) space.dof_map[i] = {2 * (i - 1), 2 * (i - 1) + 1};
  return space;
}

LocalMatrices local_matrices(double h, Region region) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("fem: element length must be positive");
  const double h2 = h * h;
  LocalMatrices out{};

  const double m = h / 420.0;
  out.mass = {{{156 * m, 22 * h * m, 54 * m, -13 * h * m},
               {22 * h * m, 4 * h2 * m, 13 * h * m, -3 * h2 * m},
               {54 * m, 13 * h * m, 156 * m, -22 * h * m},
               {-13 * h * m, -3 * h2 * m, -22 * h * m, 4 * h2 * m}}};

  const double k = 1.0 / (h2 * h);
  out.bending = {{{12 * k, 6 * h * k, -12 * k, 6 * h * k},
                  {6 * h * k, 4 * h2 * k, -6 * h * k, 2 * h2 * k},
                  {-12 * k, -6 * h * k, 12 * k, -6 * h * k},
                  {6 * h * k, 2 * h2 * k, -6 * h * k, 4 * h2 * k}}};

  if (region == Region::Damped) {
    const double d = 1.0 / (30.0 * h);
    out.damping = {{{36 * d, 3 * h * d, -36 * d, 3 * h * d},
                    {3 * h * d, 4 * h2 * d, -3 * h * d, -h2 * d},
                    {-36 * d, -3 * h * d, 36 * d, -3 * h * d},
                    {3 * h * d, -h2 * d, -3 * h * d, 4 * h2 * d}}};
  }
  return out;
}

namespace {

void scatter(Matrix& global, const Local& local, const std::array<std::size_t, 4>& dofs) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (dofs[i] == kEliminated) continue;
    for (std::size_t j = 0; j < 4; ++j) {
      if (dofs[j] == kEliminated) continue;
      global(dofs[i], dofs[j]) += local[i][j];
    }
  }
}

}  // namespace

AssembledForms assemble(const HermiteSpace& space) {
  if (space.n_dof == 0) throw DegenerateSpace("fem: cannot assemble on an empty space");
  const std::size_t n = space.n_dof;
  AssembledForms forms{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  const Mesh1D& mesh = space.mesh;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const LocalMatrices local = local_matrices(mesh.element_length(e), mesh.element_region[e]);
    const auto dofs = space.element_dofs(e);
    scatter(forms.mass, local.mass, dofs);
    scatter(forms.bending, local.bending, dofs);
    if (mesh.element_region[e] == Region::Damped) scatter(forms.damping, local.damping, dofs);
  }
  return forms;
}

Matrix assemble_region_mass(const HermiteSpace& space, Region region) {
  const std::size_t n = space.n_dof;
  Matrix mass(n, n);
  const Mesh1D& mesh = space.mesh;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    if (mesh.element_region[e] != region) continue;
    scatter(mass, local_matrices(mesh.element_length(e), region).mass, space.element_dofs(e));
  }
  return mass;
}

Vector interpolate(const HermiteSpace& space, const ScalarFunction& f, const ScalarFunction& df) {
  const auto& nodes = space.mesh.nodes;
  double scale = 1.0;
  for (double x : nodes) scale = std::max({scale, std::abs(f(x)), std::abs(df(x))});
  const double tol = 1e-12 * scale;
  for (double x : {nodes.front(), nodes.back()}) {
    if (std::abs(f(x)) > tol || std::abs(df(x)) > tol) {
      throw BoundaryMismatch("fem: interpolated function is not clamped at the boundary");
    }
  }
  Vector coeffs(space.n_dof, 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [value_dof, slope_dof] = space.dof_map[i];
    if (value_dof != kEliminated) coeffs[value_dof] = f(nodes[i]);
    if (slope_dof != kEliminated) coeffs[slope_dof] = df(nodes[i]);
  }
  return coeffs;
}

PointValue evaluate(const HermiteSpace& space, std::span<const double> coeffs, std::size_t element, double x) {
  if (coeffs.size() != space.n_dof) throw DimensionMismatch("fem: coefficient vector length");
  const double x0 = space.mesh.nodes.at(element);
  const double h = space.mesh.element_length(element);
  const double t = (x - x0) / h;
  const auto dofs = space.element_dofs(element);
  std::array<double, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) c[i] = dofs[i] == kEliminated ? 0.0 : coeffs[dofs[i]];

  const double t2 = t * t;
  const double t3 = t2 * t;
  const std::array<double, 4> n{1 - 3 * t2 + 2 * t3, h * (t - 2 * t2 + t3), 3 * t2 - 2 * t3, h * (t3 - t2)};
  const std::array<double, 4> dn{(6 * t2 - 6 * t) / h, 1 - 4 * t + 3 * t2, (6 * t - 6 * t2) / h, 3 * t2 - 2 * t};
  const std::array<double, 4> ddn{(12 * t - 6) / (h * h), (6 * t - 4) / h, (6 - 12 * t) / (h * h), (6 * t - 2) / h};

  PointValue out;
  for (std::size_t i = 0; i < 4; ++i) {
    out.value += c[i] * n[i];
    out.slope += c[i] * dn[i];
    out.curvature += c[i] * ddn[i];
  }
  return out;
}

}  // namespace platelab::fem
