#pragma once

#include "fdfsi/timestepper/state.hpp"

#include <fstream>
#include <string>

namespace fdfsi::io {

namespace detail {

inline void vtk_vector(std::ostream &os, const double *v, int dim) {
  os << v[0] << ' ' << v[1] << ' ' << (dim == 3 ? v[2] : 0.0) << '\n';
}

inline std::ofstream open_for_write(const std::string &path) {
  std::ofstream os(path);
  if (!os)
    throw Error("cannot open '" + path + "' for writing");
  os.precision(12);
  return os;
}

} // namespace detail

/// Fluid fields as a legacy VTK unstructured grid. Each Q2 cell is split into
/// 2^Dim linear cells over its 3^Dim nodes. Velocity and the continuous
/// pressure are point data; the cellwise constant pressure (if any) is cell data.
template <int Dim>
void write_fluid_vtk(std::ostream &os, const mesh::FluidGrid<Dim> &grid, const Vector &u,
                     const Vector &p, Index n_p0) {
  using Q1 = fem::Q1<Dim>;
  using Q2 = fem::Q2<Dim>;
  const Index nn = grid.num_velocity_nodes();
  const Index ndof = grid.num_velocity_dofs();
  const Index nq1 = grid.num_pressure_vertex_dofs();
  if (u.size() != Dim * ndof || p.size() != nq1 + n_p0)
    throw std::invalid_argument("write_fluid_vtk: field sizes do not match the grid");
  constexpr int sub = 1 << Dim;
  constexpr int corners = 1 << Dim;
  const Index ncells = grid.num_cells() * sub;

  os << "# vtk DataFile Version 3.0\nfluid\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nn << " double\n";
  for (Index n = 0; n < nn; ++n) {
    const Point<Dim> x = grid.velocity_node(n);
    detail::vtk_vector(os, x.data(), Dim);
  }
  // corner order of VTK_QUAD / VTK_HEXAHEDRON
  static constexpr int order2[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  os << "CELLS " << ncells << ' ' << ncells * (corners + 1) << '\n';
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto nodes = grid.cell_velocity_nodes(c);
    for (int s = 0; s < sub; ++s) {
      const int sx = s & 1, sy = (s >> 1) & 1, sz = (s >> 2) & 1;
      os << corners;
      for (int layer = 0; layer < (Dim == 3 ? 2 : 1); ++layer)
        for (const auto &q : order2) {
          int a = (sx + q[0]) + 3 * (sy + q[1]);
          if constexpr (Dim == 3)
            a += 9 * (sz + layer);
          os << ' ' << nodes[a];
        }
      os << '\n';
    }
  }
  os << "CELL_TYPES " << ncells << '\n';
  for (Index c = 0; c < ncells; ++c)
    os << (Dim == 2 ? 9 : 12) << '\n';

  Vector pn = Vector::Zero(nn);
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto nodes = grid.cell_velocity_nodes(c);
    const auto pd = grid.cell_pressure_dofs(c);
    for (int a = 0; a < Q2::count; ++a) {
      const auto psi = Q1::values(Q2::node(a));
      double v = 0.0;
      for (int k = 0; k < Q1::count; ++k)
        v += psi[k] * p[pd[k]];
      pn[nodes[a]] = v;
    }
  }
  os << "POINT_DATA " << nn << "\nVECTORS velocity double\n";
  for (Index n = 0; n < nn; ++n) {
    const Index d = grid.velocity_dof(n);
    double v[3] = {0.0, 0.0, 0.0};
    for (int k = 0; k < Dim; ++k)
      v[k] = u[k * ndof + d];
    detail::vtk_vector(os, v, 3);
  }
  os << "SCALARS pressure_continuous double 1\nLOOKUP_TABLE default\n";
  for (Index n = 0; n < nn; ++n)
    os << pn[n] << '\n';
  if (n_p0 > 0) {
    os << "CELL_DATA " << ncells << "\nSCALARS pressure_cellwise double 1\nLOOKUP_TABLE default\n";
    for (Index c = 0; c < grid.num_cells(); ++c)
      for (int s = 0; s < sub; ++s)
        os << p[nq1 + c] << '\n';
  }
}

/// Solid mesh on its current configuration with nodal velocity and per-element J.
template <int Dim>
void write_solid_vtk(std::ostream &os, const mesh::SolidMesh<Dim> &solid, const NodalField &w,
                     const assembly::TensorField<Dim> &F) {
  const Index nn = solid.num_nodes();
  const Index ne = solid.num_elements();
  if (w.rows() != nn || w.cols() != Dim || F.size() != static_cast<std::size_t>(ne))
    throw std::invalid_argument("write_solid_vtk: field sizes do not match the mesh");
  os << "# vtk DataFile Version 3.0\nsolid\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nn << " double\n";
  for (Index n = 0; n < nn; ++n) {
    const Point<Dim> x = solid.node(n);
    detail::vtk_vector(os, x.data(), Dim);
  }
  os << "CELLS " << ne << ' ' << ne * (Dim + 2) << '\n';
  for (const auto &el : solid.elements()) {
    os << Dim + 1;
    for (Index n : el)
      os << ' ' << n;
    os << '\n';
  }
  os << "CELL_TYPES " << ne << '\n';
  for (Index e = 0; e < ne; ++e)
    os << (Dim == 2 ? 5 : 10) << '\n';
  os << "POINT_DATA " << nn << "\nVECTORS velocity double\n";
  for (Index n = 0; n < nn; ++n) {
    double v[3] = {0.0, 0.0, 0.0};
    for (int k = 0; k < Dim; ++k)
      v[k] = w(n, k);
    detail::vtk_vector(os, v, 3);
  }
  os << "CELL_DATA " << ne << "\nSCALARS J double 1\nLOOKUP_TABLE default\n";
  for (const auto &f : F)
    os << f.determinant() << '\n';
}

/// Writes `<prefix>_fluid.vtk` and `<prefix>_solid.vtk`.
template <int Dim>
void write_fields(const timestepper::SimulationState<Dim> &state, const mesh::FluidGrid<Dim> &grid,
                  Index n_p0, const std::string &prefix) {
  {
    auto os = detail::open_for_write(prefix + "_fluid.vtk");
    write_fluid_vtk(os, grid, state.u, state.p, n_p0);
  }
  auto os = detail::open_for_write(prefix + "_solid.vtk");
  write_solid_vtk(os, state.solid, state.w, state.F);
}

} // namespace fdfsi::io
