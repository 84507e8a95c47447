#pragma once

#include "fdfsi/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace fdfsi::mesh {

enum class Configuration { reference, initial, current };

/// Signed measure (area / volume) of a simplex given as Dim x (Dim+1) columns.
template <int Dim>
double simplex_measure(const Eigen::Matrix<double, Dim, Dim + 1> &v) {
  Tensor<Dim> edges;
  for (int k = 0; k < Dim; ++k)
    edges.col(k) = v.col(k + 1) - v.col(0);
  return edges.determinant() / (Dim == 2 ? 2.0 : 6.0);
}

/// Lagrangian simplex mesh of the solid. Node count and connectivity are fixed
/// at construction; only the current coordinates are replaced between steps.
template <int Dim>
class SolidMesh {
  static_assert(Dim == 2 || Dim == 3);

public:
  static constexpr int dim = Dim;
  static constexpr int nodes_per_element = Dim + 1;
  using Element = std::array<Index, Dim + 1>;
  using ElementCoords = Eigen::Matrix<double, Dim, Dim + 1>;

  SolidMesh() = default;

  SolidMesh(NodalField reference, std::vector<Element> elements)
      : SolidMesh(reference, reference, reference, std::move(elements)) {}

  SolidMesh(NodalField reference, NodalField initial, NodalField current,
            std::vector<Element> elements)
      : X_(std::move(reference)), x0_(std::move(initial)), x_(std::move(current)),
        elements_(std::move(elements)) {
    if (X_.cols() != Dim || x0_.cols() != Dim || x_.cols() != Dim)
      throw std::invalid_argument("SolidMesh: coordinate arrays must have Dim columns");
    if (x0_.rows() != X_.rows() || x_.rows() != X_.rows())
      throw std::invalid_argument("SolidMesh: coordinate arrays differ in node count");
    for (std::size_t e = 0; e < elements_.size(); ++e)
      for (Index n : elements_[e])
        if (n < 0 || n >= X_.rows())
          throw std::invalid_argument("SolidMesh: element " + std::to_string(e) +
                                      " references missing node " + std::to_string(n));
    measures_.resize(static_cast<Index>(elements_.size()));
    for (Index e = 0; e < num_elements(); ++e) {
      const double m = simplex_measure<Dim>(element_coords(e, Configuration::reference));
      if (!(m > 0.0))
        throw InvertedElementError(e, m, "SolidMesh reference configuration");
      measures_[e] = m;
    }
  }

  Index num_nodes() const { return X_.rows(); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  const std::vector<Element> &elements() const { return elements_; }
  const Element &element(Index e) const { return elements_[e]; }

  const NodalField &reference_coords() const { return X_; }
  const NodalField &initial_coords() const { return x0_; }
  const NodalField &current_coords() const { return x_; }
  const NodalField &coords(Configuration c) const {
    return c == Configuration::reference ? X_ : (c == Configuration::initial ? x0_ : x_);
  }
  const Vector &reference_measures() const { return measures_; }

  Point<Dim> node(Index n, Configuration c = Configuration::current) const {
    return coords(c).row(n).transpose();
  }

  ElementCoords element_coords(Index e, Configuration c) const {
    const NodalField &x = coords(c);
    ElementCoords out;
    for (int a = 0; a < Dim + 1; ++a)
      out.col(a) = x.row(elements_[e][a]).transpose();
    return out;
  }

  /// Wholesale replacement of the current configuration.
  void set_current_coords(NodalField x) {
    if (x.rows() != X_.rows() || x.cols() != Dim)
      throw std::invalid_argument("SolidMesh::set_current_coords: shape mismatch");
    x_ = std::move(x);
  }

  SolidMesh with_current_coords(NodalField x) const {
    SolidMesh copy = *this;
    copy.set_current_coords(std::move(x));
    return copy;
  }

  void set_initial_and_current(NodalField x0, NodalField x) {
    if (x0.rows() != X_.rows() || x.rows() != X_.rows())
      throw std::invalid_argument("SolidMesh::set_initial_and_current: shape mismatch");
    x0_ = std::move(x0);
    x_ = std::move(x);
  }

private:
  NodalField X_, x0_, x_;
  std::vector<Element> elements_;
  Vector measures_;
};

/// Total measure in the requested configuration. An inverted element is an
/// error carrying its index.
template <int Dim>
double solid_measure(const SolidMesh<Dim> &mesh, Configuration config) {
  double total = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const double m = simplex_measure<Dim>(mesh.element_coords(e, config));
    if (!(m > 0.0))
      throw InvertedElementError(e, m, "solid_measure");
    total += m;
  }
  return total;
}

/// Stretch by diag(s, 1/s[, 1]) about `center`. Reference coordinates are left
/// alone; the initial and current configurations are both mapped.
template <int Dim>
SolidMesh<Dim> apply_stretch(const SolidMesh<Dim> &mesh, double s, const Point<Dim> &center) {
  if (!(s > 0.0))
    throw std::invalid_argument("apply_stretch: stretch ratio must be positive");
  Point<Dim> scale = Point<Dim>::Ones();
  scale[0] = s;
  scale[1] = 1.0 / s;
  auto map = [&](const NodalField &x) {
    NodalField y = x;
    for (Index n = 0; n < x.rows(); ++n)
      for (int k = 0; k < Dim; ++k)
        y(n, k) = center[k] + scale[k] * (x(n, k) - center[k]);
    return y;
  };
  SolidMesh<Dim> out = mesh;
  out.set_initial_and_current(map(mesh.initial_coords()), map(mesh.current_coords()));
  return out;
}

} // namespace fdfsi::mesh
