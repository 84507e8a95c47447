#pragma once

#include "fdfsi/assembly/fluid_operator.hpp"
#include "fdfsi/assembly/solid_operator.hpp"
#include "fdfsi/coupling/coupling_matrix.hpp"

#include <map>
#include <string>

namespace fdfsi::assembly {

/// Saddle-point system [[A, B^T], [B, 0]] over (velocity, pressure).
struct GlobalSystem {
  SparseMatrix matrix;
  Vector rhs;
  DofLayout layout;
  bool has_pressure = true; // false for velocity-only systems (convection substep)
};

/// Fluid velocity block plus the solid block pulled through the coupling:
/// A = A_f + blockdiag(P^T A_s P) + P_d^T A_coupled P_d with P_d = blockdiag(P),
/// rhs_u = rhs_f + P^T rhs_s.
inline GlobalSystem merge_systems(const FluidBlocks &fluid, const SolidBlocks *solid,
                                  const coupling::CouplingMatrix *P, const DofLayout &layout) {
  const Index nv = layout.velocity_size();
  const Index n = layout.n_velocity;
  if (fluid.A.rows() != nv || fluid.A.cols() != nv || fluid.rhs.size() != nv)
    throw std::invalid_argument("merge_systems: fluid block does not match layout");
  if (fluid.B.rows() != layout.pressure_size() || fluid.B.cols() != nv)
    throw std::invalid_argument("merge_systems: divergence block does not match layout");

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(fluid.A.nonZeros() + 2 * fluid.B.nonZeros()));
  append_matrix(trips, fluid.A, 0, 0);
  GlobalSystem sys;
  sys.layout = layout;
  sys.rhs = Vector::Zero(layout.size());
  sys.rhs.head(nv) = fluid.rhs;
  if (solid && P) {
    if (P->cols() != n || solid->A.rows() != P->rows() || solid->rhs.rows() != P->rows() ||
        solid->rhs.cols() != layout.dim)
      throw std::invalid_argument("merge_systems: solid block does not match coupling matrix");
    const SparseMatrix S = coupling::gather_to_fluid(*P, solid->A);
    append_block_diagonal(trips, S, layout.dim);
    if (solid->A_coupled.size() > 0) {
      if (solid->A_coupled.rows() != layout.dim * P->rows() || solid->A_coupled.cols() != solid->A_coupled.rows())
        throw std::invalid_argument("merge_systems: coupled solid block does not match coupling matrix");
      const SparseMatrix Pb = block_diagonal(SparseMatrix(P->matrix()), layout.dim);
      append_matrix(trips, SparseMatrix(SparseMatrix(Pb.transpose()) * (solid->A_coupled * Pb)), 0, 0);
    }
    const NodalField g = coupling::gather_to_fluid(*P, solid->rhs);
    for (int c = 0; c < layout.dim; ++c)
      sys.rhs.segment(c * n, n) += g.col(c);
  }
  append_matrix(trips, fluid.B, nv, 0);
  append_matrix(trips, SparseMatrix(fluid.B.transpose()), 0, nv);
  sys.matrix.resize(layout.size(), layout.size());
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

/// Homogeneous or prescribed values for individual unknowns.
class ConstraintSet {
public:
  /// Adds u[index] = value. A second, different value for the same unknown is a
  /// conflict.
  void add(Index index, double value = 0.0) {
    auto [it, inserted] = fixed_.emplace(index, value);
    if (!inserted && it->second != value)
      throw ConfigError("conflicting constraints on unknown " + std::to_string(index) + ": " +
                        std::to_string(it->second) + " vs " + std::to_string(value));
  }
  bool contains(Index index) const { return fixed_.count(index) != 0; }
  const std::map<Index, double> &values() const { return fixed_; }
  std::size_t size() const { return fixed_.size(); }

  /// Pressure unknowns pinned to remove the enclosed-flow nullspace.
  std::vector<Index> pinned_pressure;

private:
  std::map<Index, double> fixed_;
};

/// Boundary constraints implied by the grid's face tags: walls fix every
/// velocity component, symmetry faces fix the normal component, periodic faces
/// are already folded into shared dofs. One Q1 coefficient (and one P0
/// coefficient when present) is pinned; each spans a pressure nullspace mode.
template <int Dim>
ConstraintSet boundary_constraints(const mesh::FluidGrid<Dim> &grid, const DofLayout &layout,
                                   bool pin_pressure = true) {
  ConstraintSet cs;
  for (int face = 0; face < 2 * Dim; ++face) {
    const auto kind = grid.boundary_kind(face);
    if (kind == mesh::BoundaryKind::periodic)
      continue;
    const int axis = face / 2;
    for (Index node : grid.velocity_nodes_on_face(face)) {
      const Index dof = grid.velocity_dof(node);
      if (kind == mesh::BoundaryKind::wall) {
        for (int c = 0; c < Dim; ++c)
          cs.add(layout.velocity_index(c, dof));
      } else {
        cs.add(layout.velocity_index(axis, dof));
      }
    }
  }
  if (pin_pressure) {
    cs.pinned_pressure.push_back(layout.q1_index(0));
    if (layout.n_p0 > 0)
      cs.pinned_pressure.push_back(layout.p0_index(0));
  }
  return cs;
}

/// Symmetric elimination: constrained rows and columns are replaced by identity
/// rows, their known values moved to the right-hand side.
inline GlobalSystem apply_constraints(const GlobalSystem &system, const ConstraintSet &cs) {
  const Index n = system.matrix.rows();
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  Vector g = Vector::Zero(n);
  for (const auto &[idx, val] : cs.values()) {
    if (idx < 0 || idx >= n)
      throw std::invalid_argument("apply_constraints: unknown index " + std::to_string(idx));
    fixed[idx] = 1;
    g[idx] = val;
  }
  for (Index idx : cs.pinned_pressure) {
    if (idx < system.layout.velocity_size() || idx >= n)
      throw std::invalid_argument("apply_constraints: pinned index is not a pressure unknown");
    if (fixed[idx])
      throw ConfigError("conflicting constraints on pressure unknown " + std::to_string(idx));
    fixed[idx] = 1;
  }
  GlobalSystem out = system;
  if (g.lpNorm<Eigen::Infinity>() > 0.0)
    out.rhs -= system.matrix * g;
  out.matrix.prune([&](Index r, Index c, double) { return !fixed[r] && !fixed[c]; });
  std::vector<Triplet> diag;
  for (Index i = 0; i < n; ++i)
    if (fixed[i]) {
      diag.emplace_back(i, i, 1.0);
      out.rhs[i] = g[i];
    }
  SparseMatrix D(n, n);
  D.setFromTriplets(diag.begin(), diag.end());
  out.matrix += D;
  return out;
}

} // namespace fdfsi::assembly
