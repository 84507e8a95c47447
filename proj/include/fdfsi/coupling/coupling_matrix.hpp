#pragma once

#include "fdfsi/fem/shape_functions.hpp"
#include "fdfsi/mesh/fluid_grid.hpp"
#include "fdfsi/mesh/solid_mesh.hpp"

#include <string>

namespace fdfsi::coupling {

/// Interpolation operator from fluid velocity coefficients (columns, one per
/// scalar velocity dof) to solid nodal values (rows). Row i holds the Q2 basis
/// functions of the fluid cell containing solid node i evaluated at that node.
/// The same matrix acts on each velocity component.
class CouplingMatrix {
public:
  using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  CouplingMatrix() = default;
  explicit CouplingMatrix(RowMajor p) : P_(std::move(p)) {}

  Index rows() const { return P_.rows(); }
  Index cols() const { return P_.cols(); }
  const RowMajor &matrix() const { return P_; }

private:
  RowMajor P_;
};

template <int Dim>
CouplingMatrix build_coupling(const mesh::FluidGrid<Dim> &grid, const NodalField &solid_nodes,
                              double eps_rel = 1e-12) {
  using Q2 = fem::Q2<Dim>;
  const Index ns = solid_nodes.rows();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(ns) * Q2::count);
  for (Index i = 0; i < ns; ++i) {
    const Point<Dim> x = solid_nodes.row(i).transpose();
    mesh::CellLocation<Dim> loc;
    try {
      loc = grid.locate(x, eps_rel);
    } catch (const std::out_of_range &) {
      throw OutsideDomainError(i, "build_coupling: solid node " + std::to_string(i) +
                                      " lies outside the fluid domain");
    }
    const auto vals = Q2::values(loc.local);
    const auto dofs = grid.cell_velocity_dofs(loc.cell);
    for (int a = 0; a < Q2::count; ++a)
      if (vals[a] != 0.0)
        trips.emplace_back(i, dofs[a], vals[a]);
  }
  CouplingMatrix::RowMajor P(ns, grid.num_velocity_dofs());
  P.setFromTriplets(trips.begin(), trips.end());
  return CouplingMatrix(std::move(P));
}

template <int Dim>
CouplingMatrix build_coupling(const mesh::FluidGrid<Dim> &grid, const mesh::SolidMesh<Dim> &solid,
                              double eps_rel = 1e-12) {
  return build_coupling(grid, solid.current_coords(), eps_rel);
}

/// Per-component interpolation: fluid_field is N^u x d, result N^s x d.
inline NodalField interpolate_to_solid(const CouplingMatrix &P, const NodalField &fluid_field) {
  if (fluid_field.rows() != P.cols())
    throw std::invalid_argument("interpolate_to_solid: field has " +
                                std::to_string(fluid_field.rows()) + " rows, expected " +
                                std::to_string(P.cols()));
  return P.matrix() * fluid_field;
}

/// Component-blocked coefficient vector overload.
inline NodalField interpolate_to_solid(const CouplingMatrix &P, const Vector &coeffs, int dim) {
  if (coeffs.size() != P.cols() * dim)
    throw std::invalid_argument("interpolate_to_solid: coefficient vector size mismatch");
  return P.matrix() * Eigen::Map<const Eigen::MatrixXd>(coeffs.data(), P.cols(), dim);
}

/// Transpose application P^T w.
inline NodalField gather_to_fluid(const CouplingMatrix &P, const NodalField &solid_dual) {
  if (solid_dual.rows() != P.rows())
    throw std::invalid_argument("gather_to_fluid: field has " + std::to_string(solid_dual.rows()) +
                                " rows, expected " + std::to_string(P.rows()));
  return P.matrix().transpose() * solid_dual;
}

/// Congruence P^T A P of a scalar solid block.
inline SparseMatrix gather_to_fluid(const CouplingMatrix &P, const SparseMatrix &solid_block) {
  if (solid_block.rows() != P.rows() || solid_block.cols() != P.rows())
    throw std::invalid_argument("gather_to_fluid: block is " + std::to_string(solid_block.rows()) +
                                "x" + std::to_string(solid_block.cols()) + ", expected " +
                                std::to_string(P.rows()) + " square");
  const SparseMatrix Pc = P.matrix();
  return SparseMatrix(SparseMatrix(Pc.transpose()) * (solid_block * Pc));
}

} // namespace fdfsi::coupling
