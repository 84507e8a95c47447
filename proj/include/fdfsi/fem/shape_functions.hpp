#pragma once

#include "fdfsi/types.hpp"

namespace fdfsi::fem {

namespace detail {

constexpr int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i)
    r *= base;
  return r;
}

// 1D Lagrange basis on [-1, 1] with equispaced nodes.
template <int Order>
struct Lagrange1D;

template <>
struct Lagrange1D<1> {
  static constexpr int count = 2;
  static constexpr double node(int i) { return i == 0 ? -1.0 : 1.0; }
  static void eval(double x, double (&v)[2], double (&d)[2]) {
    v[0] = 0.5 * (1.0 - x);
    v[1] = 0.5 * (1.0 + x);
    d[0] = -0.5;
    d[1] = 0.5;
  }
};

template <>
struct Lagrange1D<2> {
  static constexpr int count = 3;
  static constexpr double node(int i) { return static_cast<double>(i) - 1.0; }
  static void eval(double x, double (&v)[3], double (&d)[3]) {
    v[0] = 0.5 * x * (x - 1.0);
    v[1] = 1.0 - x * x;
    v[2] = 0.5 * x * (x + 1.0);
    d[0] = x - 0.5;
    d[1] = -2.0 * x;
    d[2] = x + 0.5;
  }
};

} // namespace detail

/// Tensor-product Lagrange element on [-1,1]^Dim. Local node a has lattice
/// index (i0, i1, i2) with a = i0 + n*i1 + n*n*i2, x varying fastest.
template <int Order, int Dim>
struct LagrangeBox {
  static_assert(Dim == 2 || Dim == 3);
  static constexpr int nodes_per_axis = Order + 1;
  static constexpr int count = detail::ipow(nodes_per_axis, Dim);

  using Values = Eigen::Matrix<double, count, 1>;
  using Gradients = Eigen::Matrix<double, count, Dim>;

  static int axis_index(int a, int axis) {
    for (int k = 0; k < axis; ++k)
      a /= nodes_per_axis;
    return a % nodes_per_axis;
  }

  static Point<Dim> node(int a) {
    Point<Dim> p;
    for (int k = 0; k < Dim; ++k)
      p[k] = detail::Lagrange1D<Order>::node(axis_index(a, k));
    return p;
  }

  static void evaluate(const Point<Dim> &xi, Values &values, Gradients &grads) {
    double v[Dim][nodes_per_axis];
    double d[Dim][nodes_per_axis];
    for (int k = 0; k < Dim; ++k)
      detail::Lagrange1D<Order>::eval(xi[k], v[k], d[k]);
    for (int a = 0; a < count; ++a) {
      int idx[Dim];
      for (int k = 0; k < Dim; ++k)
        idx[k] = axis_index(a, k);
      double value = 1.0;
      for (int k = 0; k < Dim; ++k)
        value *= v[k][idx[k]];
      values[a] = value;
      for (int g = 0; g < Dim; ++g) {
        double dg = 1.0;
        for (int k = 0; k < Dim; ++k)
          dg *= (k == g) ? d[k][idx[k]] : v[k][idx[k]];
        grads(a, g) = dg;
      }
    }
  }

  static Values values(const Point<Dim> &xi) {
    Values v;
    Gradients g;
    evaluate(xi, v, g);
    return v;
  }
};

/// Linear simplex on the unit reference simplex with vertices 0, e_1, ..., e_Dim.
template <int Dim>
struct LinearSimplex {
  static constexpr int count = Dim + 1;
  using Values = Eigen::Matrix<double, count, 1>;
  using Gradients = Eigen::Matrix<double, count, Dim>;

  static Point<Dim> node(int a) {
    Point<Dim> p = Point<Dim>::Zero();
    if (a > 0)
      p[a - 1] = 1.0;
    return p;
  }

  static void evaluate(const Point<Dim> &xi, Values &values, Gradients &grads) {
    values[0] = 1.0 - xi.sum();
    values.template tail<Dim>() = xi;
    grads = reference_gradients();
  }

  static Gradients reference_gradients() {
    Gradients g = Gradients::Zero();
    g.row(0).setConstant(-1.0);
    g.template bottomRows<Dim>().setIdentity();
    return g;
  }
};

template <int Dim>
using Q2 = LagrangeBox<2, Dim>;
template <int Dim>
using Q1 = LagrangeBox<1, Dim>;
template <int Dim>
using P1 = LinearSimplex<Dim>;

} // namespace fdfsi::fem
