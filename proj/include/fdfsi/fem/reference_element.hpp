#pragma once

#include "fdfsi/fem/quadrature.hpp"
#include "fdfsi/fem/shape_functions.hpp"

#include <string>

namespace fdfsi::fem {

enum class ElementKind {
  q2_box,              // Q2 velocity (quad in 2D, hex in 3D)
  q1_box,              // continuous linear pressure on boxes
  p1_simplex,          // linear triangle / tetrahedron
  pressure_q1_plus_p0, // Q1 vertex functions plus one cellwise constant
};

/// Runtime description of a reference element. The compile-time structs in
/// shape_functions.hpp do the actual work; this is the dimension-erased view.
struct ReferenceElement {
  ElementKind kind;
  int dim;
  int node_count;
  Eigen::MatrixXd local_node_coords; // dim x node_count

  bool is_box() const { return kind != ElementKind::p1_simplex; }
};

struct ShapeEvaluation {
  Eigen::VectorXd values;
  Eigen::MatrixXd gradients; // node_count x dim
};

namespace detail {

template <typename Element, int Dim>
ReferenceElement describe(ElementKind kind, int extra_nodes = 0) {
  ReferenceElement e{kind, Dim, Element::count + extra_nodes,
                     Eigen::MatrixXd::Zero(Dim, Element::count + extra_nodes)};
  for (int a = 0; a < Element::count; ++a)
    e.local_node_coords.col(a) = Element::node(a);
  return e;
}

template <typename Element, int Dim>
ShapeEvaluation evaluate(const Eigen::VectorXd &local, int extra_nodes) {
  typename Element::Values v;
  typename Element::Gradients g;
  Point<Dim> xi = local.head<Dim>();
  Element::evaluate(xi, v, g);
  ShapeEvaluation out{Eigen::VectorXd::Zero(Element::count + extra_nodes),
                      Eigen::MatrixXd::Zero(Element::count + extra_nodes, Dim)};
  out.values.head(Element::count) = v;
  out.gradients.topRows(Element::count) = g;
  if (extra_nodes == 1)
    out.values[Element::count] = 1.0; // P0 enrichment, zero gradient
  return out;
}

template <int Dim>
ReferenceElement make(ElementKind kind) {
  switch (kind) {
  case ElementKind::q2_box:
    return describe<Q2<Dim>, Dim>(kind);
  case ElementKind::q1_box:
    return describe<Q1<Dim>, Dim>(kind);
  case ElementKind::p1_simplex:
    return describe<P1<Dim>, Dim>(kind);
  case ElementKind::pressure_q1_plus_p0:
    return describe<Q1<Dim>, Dim>(kind, 1);
  }
  throw std::invalid_argument("unknown element kind");
}

template <int Dim>
ShapeEvaluation eval(const ReferenceElement &e, const Eigen::VectorXd &local) {
  switch (e.kind) {
  case ElementKind::q2_box:
    return evaluate<Q2<Dim>, Dim>(local, 0);
  case ElementKind::q1_box:
    return evaluate<Q1<Dim>, Dim>(local, 0);
  case ElementKind::p1_simplex:
    return evaluate<P1<Dim>, Dim>(local, 0);
  case ElementKind::pressure_q1_plus_p0:
    return evaluate<Q1<Dim>, Dim>(local, 1);
  }
  throw std::invalid_argument("unknown element kind");
}

} // namespace detail

inline ReferenceElement make_reference_element(ElementKind kind, int dim) {
  if (dim == 2)
    return detail::make<2>(kind);
  if (dim == 3)
    return detail::make<3>(kind);
  throw std::invalid_argument("make_reference_element: dim must be 2 or 3");
}

inline ShapeEvaluation shape_values(const ReferenceElement &elem, const Eigen::VectorXd &local) {
  if (local.size() != elem.dim)
    throw std::invalid_argument("shape_values: local point has wrong dimension");
  return elem.dim == 2 ? detail::eval<2>(elem, local) : detail::eval<3>(elem, local);
}

/// Quadrature for an element kind: Gauss tensor rules up to order 5 on boxes,
/// symmetric (or collapsed product) simplex rules up to order 4.
template <int Dim>
QuadratureRule<Dim> quadrature_rule(ElementKind kind, int order) {
  if (kind == ElementKind::p1_simplex)
    return simplex_rule<Dim>(order);
  return box_rule<Dim>(order);
}

} // namespace fdfsi::fem
