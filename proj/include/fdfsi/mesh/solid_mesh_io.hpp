#pragma once

#include "fdfsi/mesh/solid_mesh.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fdfsi::mesh {

// ASCII solid mesh:
//   dim nnodes nelems
//   nnodes lines of coordinates
//   nelems lines of 1-based vertex indices
// Coordinates are written with 17 significant digits so that reading back
// reproduces every double exactly.

template <int Dim>
void write_solid_mesh(std::ostream &os, const SolidMesh<Dim> &mesh,
                      Configuration config = Configuration::reference) {
  os << Dim << ' ' << mesh.num_nodes() << ' ' << mesh.num_elements() << '\n';
  os << std::setprecision(17);
  const NodalField &x = mesh.coords(config);
  for (Index n = 0; n < mesh.num_nodes(); ++n) {
    for (int k = 0; k < Dim; ++k)
      os << (k ? " " : "") << x(n, k);
    os << '\n';
  }
  for (const auto &el : mesh.elements()) {
    for (int a = 0; a < Dim + 1; ++a)
      os << (a ? " " : "") << el[a] + 1;
    os << '\n';
  }
}

template <int Dim>
void write_solid_mesh(const std::string &path, const SolidMesh<Dim> &mesh,
                      Configuration config = Configuration::reference) {
  std::ofstream os(path);
  if (!os)
    throw Error("cannot open '" + path + "' for writing");
  write_solid_mesh(os, mesh, config);
  if (!os)
    throw Error("error writing '" + path + "'");
}

template <int Dim>
SolidMesh<Dim> read_solid_mesh(std::istream &is) {
  int dim = 0;
  Index nnodes = 0, nelems = 0;
  if (!(is >> dim >> nnodes >> nelems))
    throw Error("solid mesh: malformed header");
  if (dim != Dim)
    throw Error("solid mesh: file has dim " + std::to_string(dim) + ", expected " +
                std::to_string(Dim));
  if (nnodes <= 0 || nelems <= 0)
    throw Error("solid mesh: empty mesh");
  NodalField x(nnodes, Dim);
  for (Index n = 0; n < nnodes; ++n)
    for (int k = 0; k < Dim; ++k)
      if (!(is >> x(n, k)))
        throw Error("solid mesh: truncated coordinates at node " + std::to_string(n + 1));
  std::vector<typename SolidMesh<Dim>::Element> elems(static_cast<std::size_t>(nelems));
  for (auto &el : elems)
    for (int a = 0; a < Dim + 1; ++a) {
      Index v = 0;
      if (!(is >> v))
        throw Error("solid mesh: truncated connectivity");
      if (v < 1 || v > nnodes)
        throw Error("solid mesh: vertex index " + std::to_string(v) + " out of range");
      el[a] = v - 1;
    }
  return SolidMesh<Dim>(std::move(x), std::move(elems));
}

template <int Dim>
SolidMesh<Dim> read_solid_mesh(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw Error("cannot open solid mesh '" + path + "'");
  return read_solid_mesh<Dim>(is);
}

} // namespace fdfsi::mesh
