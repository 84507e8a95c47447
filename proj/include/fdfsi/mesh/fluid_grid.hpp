#pragma once

#include "fdfsi/fem/shape_functions.hpp"
#include "fdfsi/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace fdfsi::mesh {

enum class BoundaryKind { wall, periodic, symmetry };

/// Faces are numbered 2*axis + side, side 0 = lower, 1 = upper.
constexpr int face_index(int axis, int side) { return 2 * axis + side; }

template <int Dim>
struct Box {
  Point<Dim> lower;
  Point<Dim> upper;
};

template <int Dim>
struct CellLocation {
  Index cell = -1;
  Point<Dim> local; // in [-1, 1]^Dim
};

/// Fixed structured Eulerian grid of Q2 velocity cells with a Q1 pressure
/// vertex lattice. Periodic faces are folded into shared degrees of freedom:
/// the lattice index 2n (velocity) or n (pressure) along a periodic axis maps
/// onto index 0.
template <int Dim>
class FluidGrid {
  static_assert(Dim == 2 || Dim == 3);

public:
  static constexpr int dim = Dim;
  static constexpr int velocity_nodes_per_cell = fem::Q2<Dim>::count;
  static constexpr int pressure_vertices_per_cell = fem::Q1<Dim>::count;

  using Cells = std::array<int, Dim>;
  using Tags = std::array<BoundaryKind, 2 * Dim>;

  FluidGrid(const Box<Dim> &extents, const Cells &cells, const Tags &tags)
      : extents_(extents), cells_(cells), tags_(tags) {
    for (int k = 0; k < Dim; ++k) {
      if (cells_[k] < 2)
        throw std::invalid_argument("FluidGrid: need at least 2 cells per axis, axis " +
                                    std::to_string(k) + " has " + std::to_string(cells_[k]));
      const double len = extents_.upper[k] - extents_.lower[k];
      if (!(len > 0.0) || !std::isfinite(len))
        throw std::invalid_argument("FluidGrid: degenerate extent along axis " + std::to_string(k));
      h_[k] = len / cells_[k];
      const bool lo = tags_[face_index(k, 0)] == BoundaryKind::periodic;
      const bool hi = tags_[face_index(k, 1)] == BoundaryKind::periodic;
      if (lo != hi)
        throw std::invalid_argument("FluidGrid: periodic face on axis " + std::to_string(k) +
                                    " has no periodic partner");
      periodic_[k] = lo;
      vel_lattice_[k] = 2 * cells_[k] + 1;
      pre_lattice_[k] = cells_[k] + 1;
      vel_dof_lattice_[k] = periodic_[k] ? 2 * cells_[k] : vel_lattice_[k];
      pre_dof_lattice_[k] = periodic_[k] ? cells_[k] : pre_lattice_[k];
    }
    size_ = (extents_.upper - extents_.lower).maxCoeff();
  }

  const Box<Dim> &extents() const { return extents_; }
  const Cells &cells_per_axis() const { return cells_; }
  const Point<Dim> &cell_size() const { return h_; }
  const Tags &boundary_tags() const { return tags_; }
  BoundaryKind boundary_kind(int face) const { return tags_[face]; }
  bool periodic(int axis) const { return periodic_[axis]; }
  double domain_size() const { return size_; }
  double volume() const { return (extents_.upper - extents_.lower).prod(); }
  double cell_volume() const { return h_.prod(); }

  Index num_cells() const { return product(cells_); }
  Index num_velocity_nodes() const { return product(vel_lattice_); }
  Index num_pressure_vertices() const { return product(pre_lattice_); }
  Index num_velocity_dofs() const { return product(vel_dof_lattice_); }
  Index num_pressure_vertex_dofs() const { return product(pre_dof_lattice_); }
  const Cells &velocity_lattice() const { return vel_lattice_; }
  const Cells &pressure_lattice() const { return pre_lattice_; }

  Cells cell_multi_index(Index c) const { return unflatten(c, cells_); }
  Index cell_index(const Cells &m) const { return flatten(m, cells_); }

  Point<Dim> velocity_node(Index n) const {
    const auto m = unflatten(n, vel_lattice_);
    Point<Dim> p;
    for (int k = 0; k < Dim; ++k)
      p[k] = extents_.lower[k] + 0.5 * h_[k] * m[k];
    return p;
  }

  Point<Dim> pressure_vertex(Index n) const {
    const auto m = unflatten(n, pre_lattice_);
    Point<Dim> p;
    for (int k = 0; k < Dim; ++k)
      p[k] = extents_.lower[k] + h_[k] * m[k];
    return p;
  }

  Index velocity_dof(Index node) const {
    return fold(unflatten(node, vel_lattice_), vel_dof_lattice_);
  }
  Index pressure_dof(Index vertex) const {
    return fold(unflatten(vertex, pre_lattice_), pre_dof_lattice_);
  }

  /// Velocity lattice nodes of a cell in the local Q2 node order.
  std::array<Index, velocity_nodes_per_cell> cell_velocity_nodes(Index c) const {
    return cell_nodes<velocity_nodes_per_cell, 3>(c, 2, vel_lattice_);
  }
  std::array<Index, pressure_vertices_per_cell> cell_pressure_vertices(Index c) const {
    return cell_nodes<pressure_vertices_per_cell, 2>(c, 1, pre_lattice_);
  }

  std::array<Index, velocity_nodes_per_cell> cell_velocity_dofs(Index c) const {
    auto nodes = cell_velocity_nodes(c);
    for (auto &n : nodes)
      n = velocity_dof(n);
    return nodes;
  }
  std::array<Index, pressure_vertices_per_cell> cell_pressure_dofs(Index c) const {
    auto nodes = cell_pressure_vertices(c);
    for (auto &n : nodes)
      n = pressure_dof(n);
    return nodes;
  }

  Point<Dim> cell_lower_corner(Index c) const {
    const auto m = unflatten(c, cells_);
    Point<Dim> p;
    for (int k = 0; k < Dim; ++k)
      p[k] = extents_.lower[k] + h_[k] * m[k];
    return p;
  }

  Point<Dim> global_point(Index c, const Point<Dim> &local) const {
    return cell_lower_corner(c) + (0.5 * (local.array() + 1.0) * h_.array()).matrix();
  }

  /// O(1) point location. Points within `eps_rel * domain_size()` of the box
  /// are clamped onto it; anything further out is an error.
  CellLocation<Dim> locate(const Point<Dim> &p, double eps_rel = 1e-12) const {
    const double eps = eps_rel * size_;
    Cells m;
    Point<Dim> local;
    for (int k = 0; k < Dim; ++k) {
      double x = p[k];
      if (!(x >= extents_.lower[k] - eps && x <= extents_.upper[k] + eps))
        throw std::out_of_range("FluidGrid::locate: point outside grid extents along axis " +
                                std::to_string(k));
      x = std::clamp(x, extents_.lower[k], extents_.upper[k]);
      const double t = (x - extents_.lower[k]) / h_[k];
      int i = static_cast<int>(std::floor(t));
      i = std::clamp(i, 0, cells_[k] - 1);
      m[k] = i;
      local[k] = std::clamp(2.0 * (t - i) - 1.0, -1.0, 1.0);
    }
    return {flatten(m, cells_), local};
  }

  /// Velocity lattice nodes lying on a boundary face.
  std::vector<Index> velocity_nodes_on_face(int face) const {
    const int axis = face / 2;
    const int idx = (face % 2 == 0) ? 0 : vel_lattice_[axis] - 1;
    std::vector<Index> out;
    const Index total = num_velocity_nodes();
    for (Index n = 0; n < total; ++n)
      if (unflatten(n, vel_lattice_)[axis] == idx)
        out.push_back(n);
    return out;
  }

private:
  static Index product(const Cells &c) {
    Index r = 1;
    for (int k = 0; k < Dim; ++k)
      r *= c[k];
    return r;
  }
  static Cells unflatten(Index n, const Cells &sizes) {
    Cells m;
    for (int k = 0; k < Dim; ++k) {
      m[k] = static_cast<int>(n % sizes[k]);
      n /= sizes[k];
    }
    return m;
  }
  static Index flatten(const Cells &m, const Cells &sizes) {
    Index n = 0;
    for (int k = Dim - 1; k >= 0; --k)
      n = n * sizes[k] + m[k];
    return n;
  }
  static Index fold(Cells m, const Cells &dof_sizes) {
    for (int k = 0; k < Dim; ++k)
      if (m[k] == dof_sizes[k])
        m[k] = 0;
    return flatten(m, dof_sizes);
  }

  template <int Count, int PerAxis>
  std::array<Index, Count> cell_nodes(Index c, int stride, const Cells &lattice) const {
    const auto base = unflatten(c, cells_);
    std::array<Index, Count> out;
    for (int a = 0; a < Count; ++a) {
      Cells m;
      int rem = a;
      for (int k = 0; k < Dim; ++k) {
        m[k] = stride * base[k] + rem % PerAxis;
        rem /= PerAxis;
      }
      out[a] = flatten(m, lattice);
    }
    return out;
  }

  Box<Dim> extents_;
  Cells cells_;
  Tags tags_;
  Point<Dim> h_;
  std::array<bool, Dim> periodic_{};
  Cells vel_lattice_{}, pre_lattice_{}, vel_dof_lattice_{}, pre_dof_lattice_{};
  double size_ = 0.0;
};

template <int Dim>
FluidGrid<Dim> build_fluid_grid(const Box<Dim> &extents, const typename FluidGrid<Dim>::Cells &cells,
                                const typename FluidGrid<Dim>::Tags &tags) {
  return FluidGrid<Dim>(extents, cells, tags);
}

template <int Dim>
typename FluidGrid<Dim>::Tags uniform_tags(BoundaryKind kind) {
  typename FluidGrid<Dim>::Tags t;
  t.fill(kind);
  return t;
}

} // namespace fdfsi::mesh
