#pragma once

#include "fdfsi/types.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace fdfsi::fem {

template <int Dim>
struct QuadratureRule {
  std::vector<Point<Dim>> points;
  std::vector<double> weights;
  int order = 0; // highest total polynomial degree integrated exactly

  std::size_t size() const { return weights.size(); }
};

namespace detail {

struct Gauss1D {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre on [-1, 1].
inline Gauss1D gauss_legendre(int n) {
  switch (n) {
  case 1:
    return {{0.0}, {2.0}};
  case 2: {
    const double a = 1.0 / std::sqrt(3.0);
    return {{-a, a}, {1.0, 1.0}};
  }
  case 3: {
    const double a = std::sqrt(0.6);
    return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
  }
  case 4: {
    const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
    return {{-b, -a, a, b}, {wb, wa, wa, wb}};
  }
  default:
    throw std::invalid_argument("gauss_legendre: unsupported point count " + std::to_string(n));
  }
}

} // namespace detail

/// Tensor Gauss rule on [-1,1]^Dim, exact to degree 2n-1 per axis.
template <int Dim>
QuadratureRule<Dim> gauss_box(int points_per_axis) {
  const auto g = detail::gauss_legendre(points_per_axis);
  const int n = points_per_axis;
  QuadratureRule<Dim> rule;
  rule.order = 2 * n - 1;
  int total = 1;
  for (int k = 0; k < Dim; ++k)
    total *= n;
  for (int q = 0; q < total; ++q) {
    Point<Dim> p;
    double w = 1.0;
    int rem = q;
    for (int k = 0; k < Dim; ++k) {
      const int i = rem % n;
      rem /= n;
      p[k] = g.x[i];
      w *= g.w[i];
    }
    rule.points.push_back(p);
    rule.weights.push_back(w);
  }
  return rule;
}

namespace detail {

// Collapsed (Duffy) product rule on the unit simplex; positive weights.
template <int Dim>
QuadratureRule<Dim> collapsed_simplex(int order) {
  const int n = (order + Dim + 1) / 2; // 2n-1 >= order + Dim - 1
  const auto g = gauss_legendre(n);
  QuadratureRule<Dim> rule;
  rule.order = order;
  int total = 1;
  for (int k = 0; k < Dim; ++k)
    total *= n;
  for (int q = 0; q < total; ++q) {
    std::array<double, 3> t{};
    double w = 1.0;
    int rem = q;
    for (int k = 0; k < Dim; ++k) {
      const int i = rem % n;
      rem /= n;
      t[k] = 0.5 * (g.x[i] + 1.0);
      w *= 0.5 * g.w[i];
    }
    Point<Dim> p;
    double scale = 1.0;
    for (int k = 0; k < Dim; ++k) {
      p[k] = t[k] * scale;
      w *= (k + 1 < Dim) ? std::pow(1.0 - t[k], Dim - 1 - k) : 1.0;
      scale *= (1.0 - t[k]);
    }
    rule.points.push_back(p);
    rule.weights.push_back(w);
  }
  return rule;
}

} // namespace detail

/// Rules on the unit reference simplex (measure 1/2 in 2D, 1/6 in 3D).
template <int Dim>
QuadratureRule<Dim> simplex_rule(int order) {
  static_assert(Dim == 2 || Dim == 3);
  if (order < 0 || order > 4)
    throw std::invalid_argument("simplex_rule: unsupported order " + std::to_string(order));
  QuadratureRule<Dim> rule;
  auto add = [&rule](std::initializer_list<double> bary, double w) {
    Point<Dim> p;
    auto it = bary.begin();
    ++it; // first barycentric coordinate belongs to vertex 0
    for (int k = 0; k < Dim; ++k, ++it)
      p[k] = *it;
    rule.points.push_back(p);
    rule.weights.push_back(w);
  };
  if (order <= 1) {
    rule.order = 1;
    if constexpr (Dim == 2)
      add({1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.5);
    else
      add({0.25, 0.25, 0.25, 0.25}, 1.0 / 6.0);
    return rule;
  }
  if (order == 2) {
    rule.order = 2;
    if constexpr (Dim == 2) {
      const double a = 1.0 / 6.0, b = 2.0 / 3.0;
      add({b, a, a}, 1.0 / 6.0);
      add({a, b, a}, 1.0 / 6.0);
      add({a, a, b}, 1.0 / 6.0);
    } else {
      const double a = 0.1381966011250105, b = 0.5854101966249685;
      add({b, a, a, a}, 1.0 / 24.0);
      add({a, b, a, a}, 1.0 / 24.0);
      add({a, a, b, a}, 1.0 / 24.0);
      add({a, a, a, b}, 1.0 / 24.0);
    }
    return rule;
  }
  if constexpr (Dim == 2) {
    // Six-point symmetric rule of degree 4.
    rule.order = 4;
    const double a = 0.445948490915965, wa = 0.5 * 0.223381589678011;
    const double b = 0.091576213509771, wb = 0.5 * 0.109951743655322;
    add({1 - 2 * a, a, a}, wa);
    add({a, 1 - 2 * a, a}, wa);
    add({a, a, 1 - 2 * a}, wa);
    add({1 - 2 * b, b, b}, wb);
    add({b, 1 - 2 * b, b}, wb);
    add({b, b, 1 - 2 * b}, wb);
    return rule;
  } else {
    return detail::collapsed_simplex<Dim>(order);
  }
}

/// Box rule for a requested exactness order (1..5).
template <int Dim>
QuadratureRule<Dim> box_rule(int order) {
  if (order < 0 || order > 5)
    throw std::invalid_argument("box_rule: unsupported order " + std::to_string(order));
  return gauss_box<Dim>(order / 2 + 1);
}

} // namespace fdfsi::fem
