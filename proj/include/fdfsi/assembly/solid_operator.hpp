#pragma once

#include "fdfsi/assembly/params.hpp"
#include "fdfsi/fem/mapping.hpp"
#include "fdfsi/fem/quadrature.hpp"
#include "fdfsi/fem/shape_functions.hpp"
#include "fdfsi/mesh/solid_mesh.hpp"

#include <string>
#include <vector>

namespace fdfsi::assembly {

template <int Dim>
using TensorField = std::vector<Tensor<Dim>>;

template <int Dim>
TensorField<Dim> identity_field(Index n) {
  return TensorField<Dim>(static_cast<std::size_t>(n), Tensor<Dim>::Identity());
}

/// Operators of the solid on its reference configuration. P1 gradients are
/// constant per element, so a one-point rule is exact for every stiffness and
/// deformation-gradient integral; the mass matrix uses an order-2 rule.
template <int Dim>
class SolidOperators {
public:
  using P1 = fem::P1<Dim>;
  static constexpr int nv = Dim + 1;
  using ElementGradients = Eigen::Matrix<double, nv, Dim>;

  explicit SolidOperators(const mesh::SolidMesh<Dim> &solid)
      : elements_(solid.elements()), measures_(solid.reference_measures()),
        n_nodes_(solid.num_nodes()) {
    const auto ref = P1::reference_gradients();
    const auto rule = fem::simplex_rule<Dim>(2);
    std::vector<Triplet> tm, tk;
    grads_.reserve(elements_.size());
    for (Index e = 0; e < solid.num_elements(); ++e) {
      const auto coords = solid.element_coords(e, mesh::Configuration::reference);
      const auto mapped = fem::physical_gradients<Dim, nv>(coords, ref, e);
      grads_.push_back(mapped.gradients);
      const double vol = measures_[e];
      Eigen::Matrix<double, nv, nv> Me = Eigen::Matrix<double, nv, nv>::Zero();
      for (std::size_t q = 0; q < rule.size(); ++q) {
        typename P1::Values v;
        typename P1::Gradients g;
        P1::evaluate(rule.points[q], v, g);
        Me.noalias() += rule.weights[q] * mapped.det * v * v.transpose();
      }
      const Eigen::Matrix<double, nv, nv> Ke = vol * mapped.gradients * mapped.gradients.transpose();
      const auto &el = elements_[e];
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          tm.emplace_back(el[a], el[b], Me(a, b));
          tk.emplace_back(el[a], el[b], Ke(a, b));
        }
    }
    mass_.resize(n_nodes_, n_nodes_);
    mass_.setFromTriplets(tm.begin(), tm.end());
    stiff_.resize(n_nodes_, n_nodes_);
    stiff_.setFromTriplets(tk.begin(), tk.end());
  }

  Index num_nodes() const { return n_nodes_; }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  const Vector &reference_measures() const { return measures_; }
  /// Scalar P1 mass matrix on the reference configuration.
  const SparseMatrix &mass() const { return mass_; }
  /// Scalar reference-gradient stiffness, int grad_X phi_a . grad_X phi_b dX.
  const SparseMatrix &stiffness() const { return stiff_; }
  /// grad_X of the element's basis functions (row per vertex).
  const ElementGradients &element_gradients(Index e) const { return grads_[e]; }

  /// grad_X w per element for nodal field w: (grad w)_{cb} = sum_a w_{a,c} d_b phi_a.
  TensorField<Dim> gradient(const NodalField &w) const {
    check_field(w, "gradient");
    TensorField<Dim> out(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      Eigen::Matrix<double, Dim, nv> we;
      for (int a = 0; a < nv; ++a)
        we.col(a) = w.row(elements_[e][a]).transpose();
      out[e] = we * grads_[e];
    }
    return out;
  }

  /// Load int F : grad_X v dX, one row per node.
  NodalField stress_load(const TensorField<Dim> &F) const {
    check_tensors(F, "stress_load");
    NodalField g = NodalField::Zero(n_nodes_, Dim);
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      const Eigen::Matrix<double, nv, Dim> contrib = measures_[e] * grads_[e] * F[e].transpose();
      for (int a = 0; a < nv; ++a)
        g.row(elements_[e][a]) += contrib.row(a);
    }
    return g;
  }

  /// Load int tr(grad_X v F^{-1}) dX, which equals int_{Omega_t} J^{-1} div v dx
  /// on the configuration with deformation gradient F.
  NodalField volumetric_load(const TensorField<Dim> &F) const {
    check_tensors(F, "volumetric_load");
    NodalField g = NodalField::Zero(n_nodes_, Dim);
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      const double J = F[e].determinant();
      if (!(J > 0.0))
        throw InvertedElementError(static_cast<Index>(e), J, "volumetric_load");
      const Eigen::Matrix<double, nv, Dim> contrib = measures_[e] * grads_[e] * F[e].inverse();
      for (int a = 0; a < nv; ++a)
        g.row(elements_[e][a]) += contrib.row(a);
    }
    return g;
  }

  /// Tangent of the volumetric load: entry ((i,a),(j,b)) is
  /// int (F^{-T} grad phi_a)_j (F^{-T} grad phi_b)_i dX, the derivative of
  /// int tr(grad_X v F^{-1}) with respect to F along grad_X u, up to sign.
  /// Component-blocked, d N^s square, symmetric.
  SparseMatrix volumetric_tangent(const TensorField<Dim> &F) const {
    check_tensors(F, "volumetric_tangent");
    std::vector<Triplet> trips;
    trips.reserve(elements_.size() * nv * nv * Dim * Dim);
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      const double J = F[e].determinant();
      if (!(J > 0.0))
        throw InvertedElementError(static_cast<Index>(e), J, "volumetric_tangent");
      // row a: grad phi_a^T F^{-1}
      const Eigen::Matrix<double, nv, Dim> r = grads_[e] * F[e].inverse();
      const auto &el = elements_[e];
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b)
          for (int i = 0; i < Dim; ++i)
            for (int j = 0; j < Dim; ++j)
              trips.emplace_back(i * n_nodes_ + el[a], j * n_nodes_ + el[b],
                                 measures_[e] * r(a, j) * r(b, i));
    }
    SparseMatrix K(Dim * n_nodes_, Dim * n_nodes_);
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
  }

private:
  void check_field(const NodalField &w, const char *what) const {
    if (w.rows() != n_nodes_ || w.cols() != Dim)
      throw std::invalid_argument(std::string(what) + ": nodal field has wrong shape");
  }
  void check_tensors(const TensorField<Dim> &F, const char *what) const {
    if (F.size() != elements_.size())
      throw std::invalid_argument(std::string(what) + ": need one tensor per element");
  }

  std::vector<typename mesh::SolidMesh<Dim>::Element> elements_;
  Vector measures_;
  Index n_nodes_;
  std::vector<ElementGradients> grads_;
  SparseMatrix mass_, stiff_;
};

struct SolidBlocks {
  SparseMatrix A;         // scalar block, N^s x N^s, applied to each component
  SparseMatrix A_coupled; // optional component-coupled block, d N^s square
  NodalField rhs;         // N^s x d
};

/// Solid contribution for one solve:
///   A_s   = (rho_delta/dt) M_s + c1 dt K_X
///   rhs_s = (rho_delta/dt) M_s u_n_solid - c1 int F_n : grad_X v
///           + c1 int tr(grad_X v F_iterate^{-1})
/// The volumetric term is evaluated at F_iterate. When `w_iterate` (the solid
/// velocity that produced F_iterate) is given, the term is also linearized
/// about it: A_coupled = c1 dt K_J and rhs_s gains c1 dt K_J w_iterate, which
/// cancel once the fixed point is reached but speed up the iteration.
template <int Dim>
SolidBlocks assemble_solid_operator(const SolidOperators<Dim> &ops, const TensorField<Dim> &F_n,
                                    const PhysicalParams &params, double dt,
                                    const NodalField &u_n_solid, const TensorField<Dim> &F_iterate,
                                    const NodalField *w_iterate = nullptr) {
  if (!(dt > 0.0))
    throw std::invalid_argument("assemble_solid_operator: dt must be positive");
  for (std::size_t e = 0; e < F_iterate.size(); ++e) {
    const double J = F_iterate[e].determinant();
    if (!(J > 0.0))
      throw InvertedElementError(static_cast<Index>(e), J, "assemble_solid_operator");
  }
  const double rd = params.rho_delta();
  SolidBlocks out;
  out.A = (rd / dt) * ops.mass() + (params.c1 * dt) * ops.stiffness();
  out.rhs = (rd / dt) * (ops.mass() * u_n_solid);
  if (params.c1 != 0.0) {
    out.rhs += params.c1 * (ops.volumetric_load(F_iterate) - ops.stress_load(F_n));
    if (w_iterate) {
      if (w_iterate->rows() != ops.num_nodes() || w_iterate->cols() != Dim)
        throw std::invalid_argument("assemble_solid_operator: w_iterate has wrong shape");
      out.A_coupled = (params.c1 * dt) * ops.volumetric_tangent(F_iterate);
      const Vector wv = Eigen::Map<const Vector>(w_iterate->data(), w_iterate->size());
      const Vector corr = out.A_coupled * wv;
      out.rhs += Eigen::Map<const NodalField>(corr.data(), ops.num_nodes(), Dim);
    }
  }
  return out;
}

/// Solid kinetic energy relative to the fictitious fluid, (rho_delta/2) |w|^2_{M_s}.
template <int Dim>
double solid_kinetic_energy(const SolidOperators<Dim> &ops, double rho_delta, const NodalField &w) {
  double e = 0.0;
  for (int c = 0; c < Dim; ++c)
    e += w.col(c).dot(ops.mass() * w.col(c));
  return 0.5 * rho_delta * e;
}

} // namespace fdfsi::assembly
