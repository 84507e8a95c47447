#pragma once

#include "fdfsi/mesh/solid_mesh.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fdfsi::mesh {

enum class SolidShape { disc, quarter_disc, ball_octant };

inline SolidShape parse_solid_shape(const std::string &s) {
  if (s == "disc")
    return SolidShape::disc;
  if (s == "quarter_disc")
    return SolidShape::quarter_disc;
  if (s == "ball_octant")
    return SolidShape::ball_octant;
  throw std::invalid_argument("unknown solid shape '" + s + "'");
}

namespace detail {

// Orders the vertices of a triangle counter-clockwise.
inline std::array<Index, 3> ccw(const NodalField &x, Index a, Index b, Index c) {
  const double cross = (x(b, 0) - x(a, 0)) * (x(c, 1) - x(a, 1)) -
                       (x(b, 1) - x(a, 1)) * (x(c, 0) - x(a, 0));
  return cross > 0.0 ? std::array<Index, 3>{a, b, c} : std::array<Index, 3>{a, c, b};
}

// Number of rings for a concentric triangulation.
inline int ring_count(double radius, double target_h) {
  if (!(radius > 0.0))
    throw std::invalid_argument("solid mesh: radius must be positive");
  if (!(target_h > 0.0))
    throw std::invalid_argument("solid mesh: target_h must be positive");
  if (target_h > radius)
    throw std::invalid_argument("solid mesh: target_h larger than radius");
  return static_cast<int>(std::ceil(radius / target_h - 1e-9));
}

// Concentric-ring triangulation of the sector [0, sweep]. Ring k (k = 1..m)
// sits at radius k*r/m with segs(k) angular segments; a closed sweep (2*pi)
// wraps around. Between rings the two node chains are zipped together by
// always advancing the chain whose next node has the smaller angle.
template <typename Segs>
SolidMesh<2> ring_triangulation(const Point<2> &center, double radius, int m, double sweep,
                                bool closed, Segs segs) {
  std::vector<Point<2>> pts{center};
  std::vector<std::vector<Index>> rings{{0}};
  std::vector<std::vector<double>> angles{{0.0}};
  for (int k = 1; k <= m; ++k) {
    const int n = segs(k);
    const int count = closed ? n : n + 1;
    const double r = radius * k / m;
    std::vector<Index> ring;
    std::vector<double> ang;
    for (int j = 0; j < count; ++j) {
      const double t = sweep * j / n;
      ring.push_back(static_cast<Index>(pts.size()));
      ang.push_back(t);
      pts.push_back(center + r * Point<2>(std::cos(t), std::sin(t)));
    }
    rings.push_back(std::move(ring));
    angles.push_back(std::move(ang));
  }
  NodalField x(static_cast<Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    x.row(static_cast<Index>(i)) = pts[i].transpose();

  std::vector<SolidMesh<2>::Element> tris;
  for (int k = 1; k <= m; ++k) {
    const auto &in = rings[k - 1];
    const auto &out = rings[k];
    const int n_in = (k == 1) ? 0 : segs(k - 1);
    const int n_out = segs(k);
    auto node_in = [&](int i) { return in[closed && k > 1 ? i % n_in : (k == 1 ? 0 : i)]; };
    auto node_out = [&](int j) { return out[closed ? j % n_out : j]; };
    auto ang_in = [&](int i) { return k == 1 ? 0.0 : sweep * i / n_in; };
    auto ang_out = [&](int j) { return sweep * j / n_out; };
    int i = 0, j = 0;
    while (i < n_in || j < n_out) {
      const bool advance_out = j < n_out && (i == n_in || ang_out(j + 1) <= ang_in(i + 1) + 1e-14);
      if (advance_out) {
        tris.push_back(ccw(x, node_in(i), node_out(j), node_out(j + 1)));
        ++j;
      } else {
        tris.push_back(ccw(x, node_in(i), node_out(j), node_in(i + 1)));
        ++i;
      }
    }
  }
  return SolidMesh<2>(std::move(x), std::move(tris));
}

} // namespace detail

/// Full disc: ring k carries 6k nodes, giving 1 + 3m(m+1) nodes and 6m^2
/// triangles for m = ceil(radius / target_h) rings.
inline SolidMesh<2> make_disc(const Point<2> &center, double radius, double target_h) {
  const int m = detail::ring_count(radius, target_h);
  return detail::ring_triangulation(center, radius, m, 2.0 * std::numbers::pi, true,
                                    [](int k) { return 6 * k; });
}

/// Quarter disc in the first quadrant about `center`: ring k carries 2k + 1
/// nodes, giving 1 + m(m+2) nodes and 2m^2 triangles.
inline SolidMesh<2> make_quarter_disc(const Point<2> &center, double radius, double target_h) {
  const int m = detail::ring_count(radius, target_h);
  return detail::ring_triangulation(center, radius, m, 0.5 * std::numbers::pi, false,
                                    [](int k) { return 2 * k; });
}

/// Positive octant of a ball about `center`. A Kuhn-subdivided cube lattice
/// (n^3 cubes, 6 tetrahedra each) is pushed onto the ball by the radial map
/// v -> v |v|_inf / |v|_2, which keeps the three symmetry planes flat.
inline SolidMesh<3> make_ball_octant(const Point<3> &center, double radius, double target_h) {
  const int n = detail::ring_count(radius, target_h);
  const int np = n + 1;
  auto id = [np](int i, int j, int k) { return static_cast<Index>(i + np * (j + np * k)); };
  NodalField x(static_cast<Index>(np) * np * np, 3);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) {
        Point<3> v(double(i) / n, double(j) / n, double(k) / n);
        const double l2 = v.norm();
        if (l2 > 0.0)
          v *= v.cwiseAbs().maxCoeff() / l2;
        x.row(id(i, j, k)) = (center + radius * v).transpose();
      }
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<SolidMesh<3>::Element> tets;
  tets.reserve(static_cast<std::size_t>(6) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto &p : perms) {
          std::array<int, 3> c{i, j, k};
          SolidMesh<3>::Element t;
          t[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            t[s + 1] = id(c[0], c[1], c[2]);
          }
          Eigen::Matrix<double, 3, 4> v;
          for (int a = 0; a < 4; ++a)
            v.col(a) = x.row(t[a]).transpose();
          if (simplex_measure<3>(v) < 0.0)
            std::swap(t[2], t[3]);
          tets.push_back(t);
        }
  return SolidMesh<3>(std::move(x), std::move(tets));
}

/// Dimension-generic entry point. Shapes that do not exist in `Dim` throw.
template <int Dim>
SolidMesh<Dim> build_solid_mesh(SolidShape shape, const Point<Dim> &center, double radius,
                                double target_h) {
  if constexpr (Dim == 2) {
    if (shape == SolidShape::disc)
      return make_disc(center, radius, target_h);
    if (shape == SolidShape::quarter_disc)
      return make_quarter_disc(center, radius, target_h);
    throw std::invalid_argument("build_solid_mesh: ball_octant needs a 3D grid");
  } else {
    if (shape == SolidShape::ball_octant)
      return make_ball_octant(center, radius, target_h);
    throw std::invalid_argument("build_solid_mesh: disc shapes need a 2D grid");
  }
}

} // namespace fdfsi::mesh
