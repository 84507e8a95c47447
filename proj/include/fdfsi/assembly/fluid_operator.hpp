#pragma once

#include "fdfsi/assembly/params.hpp"
#include "fdfsi/fem/quadrature.hpp"
#include "fdfsi/fem/shape_functions.hpp"
#include "fdfsi/mesh/fluid_grid.hpp"

#include <array>

namespace fdfsi::assembly {

/// Builds a block-diagonal (one copy per component) matrix from a scalar block.
inline void append_block_diagonal(std::vector<Triplet> &trips, const SparseMatrix &scalar, int dim,
                                  double scale = 1.0) {
  const Index n = scalar.rows();
  for (int c = 0; c < dim; ++c)
    for (Index k = 0; k < scalar.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(scalar, k); it; ++it)
        trips.emplace_back(c * n + it.row(), c * n + it.col(), scale * it.value());
}

inline void append_matrix(std::vector<Triplet> &trips, const SparseMatrix &m, Index row0,
                          Index col0, double scale = 1.0) {
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      trips.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
}

inline SparseMatrix block_diagonal(const SparseMatrix &scalar, int dim, double scale = 1.0) {
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(scalar.nonZeros()) * dim);
  append_block_diagonal(trips, scalar, dim, scale);
  SparseMatrix out(scalar.rows() * dim, scalar.cols() * dim);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

/// Time-independent fluid operators on a fixed grid. Every cell is the same
/// axis-aligned box, so the element matrices are computed once and scattered.
template <int Dim>
class FluidOperators {
public:
  using Q2 = fem::Q2<Dim>;
  using Q1 = fem::Q1<Dim>;
  static constexpr int nu = Q2::count;
  static constexpr int nq = Q1::count;

  FluidOperators(const mesh::FluidGrid<Dim> &grid, PressureSpace space)
      : grid_(grid), space_(space), rule_(fem::gauss_box<Dim>(3)) {
    layout_.dim = Dim;
    layout_.n_velocity = grid.num_velocity_dofs();
    layout_.n_q1 = grid.num_pressure_vertex_dofs();
    layout_.n_p0 = space == PressureSpace::p1_p0 ? grid.num_cells() : 0;

    const Point<Dim> h = grid.cell_size();
    detJ_ = (0.5 * h).prod();
    for (std::size_t q = 0; q < rule_.size(); ++q) {
      typename Q2::Values v;
      typename Q2::Gradients g;
      Q2::evaluate(rule_.points[q], v, g);
      for (int k = 0; k < Dim; ++k)
        g.col(k) *= 2.0 / h[k];
      phi_.push_back(v);
      dphi_.push_back(g);
      psi_.push_back(Q1::values(rule_.points[q]));
    }
    build_element_matrices();
    assemble_static();
  }

  const mesh::FluidGrid<Dim> &grid() const { return grid_; }
  PressureSpace pressure_space() const { return space_; }
  const DofLayout &layout() const { return layout_; }
  const fem::QuadratureRule<Dim> &rule() const { return rule_; }

  /// Scalar velocity mass matrix, N^u x N^u.
  const SparseMatrix &mass() const { return mass_; }
  /// Integral of D(u):D(v) with D(u) = grad u + grad u^T, dN^u x dN^u.
  const SparseMatrix &deformation_stiffness() const { return stiff_; }
  /// Discrete divergence, entries -(q_k, div phi_j); N^p x dN^u.
  const SparseMatrix &divergence() const { return div_; }
  /// Integral of each pressure basis function (Q1 dofs, then P0 cells).
  const Vector &pressure_weights() const { return p_weights_; }

  /// Scalar convection block for advecting velocity `a` (component-blocked
  /// coefficients). Standard form: (a.grad phi_j, phi_i). Skew form:
  /// 1/2[(a.grad phi_j, phi_i) - (a.grad phi_i, phi_j)], exactly skew-symmetric.
  SparseMatrix convection(const Vector &a, ConvectionForm form) const {
    if (a.size() != layout_.velocity_size())
      throw std::invalid_argument("convection: advecting field has wrong size");
    const Index n = layout_.n_velocity;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(grid_.num_cells()) * nu * nu);
    Eigen::Matrix<double, nu, nu> E;
    for (Index c = 0; c < grid_.num_cells(); ++c) {
      const auto dofs = grid_.cell_velocity_dofs(c);
      Eigen::Matrix<double, nu, Dim> ae;
      for (int i = 0; i < nu; ++i)
        for (int k = 0; k < Dim; ++k)
          ae(i, k) = a[k * n + dofs[i]];
      E.setZero();
      for (std::size_t q = 0; q < rule_.size(); ++q) {
        const Eigen::Matrix<double, 1, Dim> aq = phi_[q].transpose() * ae;
        const Eigen::Matrix<double, nu, 1> adv = dphi_[q] * aq.transpose(); // a . grad phi_j
        E.noalias() += (rule_.weights[q] * detJ_) * phi_[q] * adv.transpose();
      }
      if (form == ConvectionForm::skew)
        E = (0.5 * (E - E.transpose())).eval();
      for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j)
          trips.emplace_back(dofs[i], dofs[j], E(i, j));
    }
    SparseMatrix C(n, n);
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
  }

  /// Velocity at a point given component-blocked coefficients.
  Point<Dim> evaluate_velocity(const Vector &u, const Point<Dim> &x) const {
    const auto loc = grid_.locate(x);
    const auto v = Q2::values(loc.local);
    const auto dofs = grid_.cell_velocity_dofs(loc.cell);
    Point<Dim> out = Point<Dim>::Zero();
    for (int i = 0; i < nu; ++i)
      for (int k = 0; k < Dim; ++k)
        out[k] += v[i] * u[k * layout_.n_velocity + dofs[i]];
    return out;
  }

private:
  void build_element_matrices() {
    Me_.setZero();
    for (auto &row : Ke_)
      for (auto &m : row)
        m.setZero();
    const int np = nq + (space_ == PressureSpace::p1_p0 ? 1 : 0);
    for (auto &b : Be_)
      b = Eigen::MatrixXd::Zero(np, nu);
    for (std::size_t q = 0; q < rule_.size(); ++q) {
      const double w = rule_.weights[q] * detJ_;
      const auto &v = phi_[q];
      const auto &g = dphi_[q];
      Me_.noalias() += w * v * v.transpose();
      const Eigen::Matrix<double, nu, nu> lap = g * g.transpose();
      for (int r = 0; r < Dim; ++r)
        for (int c = 0; c < Dim; ++c) {
          // row (r, i), col (c, j): 2[delta_rc grad phi_i . grad phi_j + d_c phi_i d_r phi_j]
          Ke_[r][c].noalias() += (2.0 * w) * g.col(c) * g.col(r).transpose();
          if (r == c)
            Ke_[r][c].noalias() += (2.0 * w) * lap;
        }
      for (int c = 0; c < Dim; ++c) {
        Be_[c].topRows(nq).noalias() -= w * psi_[q] * g.col(c).transpose();
        if (np > nq)
          Be_[c].row(nq).noalias() -= w * g.col(c).transpose();
      }
    }
  }

  void assemble_static() {
    const Index n = layout_.n_velocity;
    std::vector<Triplet> tm, tk, tb;
    const Index ncells = grid_.num_cells();
    tm.reserve(static_cast<std::size_t>(ncells) * nu * nu);
    tk.reserve(static_cast<std::size_t>(ncells) * nu * nu * Dim * Dim);
    p_weights_ = Vector::Zero(layout_.pressure_size());
    const double cell_vol = grid_.cell_volume();
    Eigen::Matrix<double, nq, 1> psi_int = Eigen::Matrix<double, nq, 1>::Zero();
    for (std::size_t q = 0; q < rule_.size(); ++q)
      psi_int += rule_.weights[q] * detJ_ * psi_[q];
    for (Index c = 0; c < ncells; ++c) {
      const auto dofs = grid_.cell_velocity_dofs(c);
      const auto pdofs = grid_.cell_pressure_dofs(c);
      for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j)
          tm.emplace_back(dofs[i], dofs[j], Me_(i, j));
      for (int r = 0; r < Dim; ++r)
        for (int cc = 0; cc < Dim; ++cc)
          for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nu; ++j)
              tk.emplace_back(r * n + dofs[i], cc * n + dofs[j], Ke_[r][cc](i, j));
      for (int cc = 0; cc < Dim; ++cc)
        for (int j = 0; j < nu; ++j) {
          for (int k = 0; k < nq; ++k)
            tb.emplace_back(pdofs[k], cc * n + dofs[j], Be_[cc](k, j));
          if (layout_.n_p0 > 0)
            tb.emplace_back(layout_.n_q1 + c, cc * n + dofs[j], Be_[cc](nq, j));
        }
      for (int k = 0; k < nq; ++k)
        p_weights_[pdofs[k]] += psi_int[k];
      if (layout_.n_p0 > 0)
        p_weights_[layout_.n_q1 + c] = cell_vol;
    }
    mass_.resize(n, n);
    mass_.setFromTriplets(tm.begin(), tm.end());
    stiff_.resize(Dim * n, Dim * n);
    stiff_.setFromTriplets(tk.begin(), tk.end());
    div_.resize(layout_.pressure_size(), Dim * n);
    div_.setFromTriplets(tb.begin(), tb.end());
  }

  mesh::FluidGrid<Dim> grid_;
  PressureSpace space_;
  DofLayout layout_;
  fem::QuadratureRule<Dim> rule_;
  double detJ_ = 0.0;
  std::vector<typename Q2::Values> phi_;
  std::vector<typename Q2::Gradients> dphi_;
  std::vector<typename Q1::Values> psi_;

  Eigen::Matrix<double, nu, nu> Me_;
  std::array<std::array<Eigen::Matrix<double, nu, nu>, Dim>, Dim> Ke_;
  std::array<Eigen::MatrixXd, Dim> Be_;

  SparseMatrix mass_, stiff_, div_;
  Vector p_weights_;
};

struct FluidBlocks {
  SparseMatrix A; // velocity block, dN^u x dN^u
  SparseMatrix B; // divergence, N^p x dN^u
  Vector rhs;     // velocity right-hand side
};

/// Velocity mass/convection/viscous blocks for one backward-Euler solve:
/// A_f = (rho_f/dt) M + rho_f C(u_advect) + (mu_f/2) K_D, rhs = (rho_f/dt) M u_n.
template <int Dim>
FluidBlocks assemble_fluid_operator(const FluidOperators<Dim> &ops, const PhysicalParams &params,
                                    double dt, const Vector &u_n, const Vector &u_advect,
                                    ConvectionForm form = ConvectionForm::skew) {
  if (!(dt > 0.0))
    throw std::invalid_argument("assemble_fluid_operator: dt must be positive");
  const auto &L = ops.layout();
  if (u_n.size() != L.velocity_size())
    throw std::invalid_argument("assemble_fluid_operator: u_n has wrong size");
  SparseMatrix scalar = (params.rho_f / dt) * ops.mass();
  if (params.rho_f != 0.0 && u_advect.size() > 0 && u_advect.lpNorm<Eigen::Infinity>() > 0.0)
    scalar += params.rho_f * ops.convection(u_advect, form);
  FluidBlocks out;
  out.A = block_diagonal(scalar, Dim) + (0.5 * params.mu_f) * ops.deformation_stiffness();
  out.B = ops.divergence();
  out.rhs = Vector(L.velocity_size());
  const Index n = L.n_velocity;
  for (int c = 0; c < Dim; ++c)
    out.rhs.segment(c * n, n) = (params.rho_f / dt) * (ops.mass() * u_n.segment(c * n, n));
  return out;
}

/// Fluid kinetic energy (rho_f/2) |u|^2_M.
template <int Dim>
double fluid_kinetic_energy(const FluidOperators<Dim> &ops, double rho_f, const Vector &u) {
  const Index n = ops.layout().n_velocity;
  double e = 0.0;
  for (int c = 0; c < Dim; ++c) {
    const auto uc = u.segment(c * n, n);
    e += uc.dot(ops.mass() * uc);
  }
  return 0.5 * rho_f * e;
}

/// Viscous dissipation rate (mu_f/2) int D(u):D(u).
template <int Dim>
double viscous_dissipation_rate(const FluidOperators<Dim> &ops, double mu_f, const Vector &u) {
  return 0.5 * mu_f * u.dot(ops.deformation_stiffness() * u);
}

} // namespace fdfsi::assembly
