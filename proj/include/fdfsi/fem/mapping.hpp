#pragma once

#include "fdfsi/types.hpp"

namespace fdfsi::fem {

template <int Dim, int N>
struct MappedGradients {
  Eigen::Matrix<double, N, Dim> gradients;
  double det = 0.0;
};

/// Chain rule for an element with node coordinates `coords` (one column per
/// node). Row a of `ref_gradients` is the reference gradient of basis a.
template <int Dim, int N>
MappedGradients<Dim, N> physical_gradients(const Eigen::Matrix<double, Dim, N> &coords,
                                           const Eigen::Matrix<double, N, Dim> &ref_gradients,
                                           Index element = -1) {
  const Tensor<Dim> jac = coords * ref_gradients;
  const double det = jac.determinant();
  if (!(det > 0.0))
    throw InvertedElementError(element, det, "physical_gradients");
  return {ref_gradients * jac.inverse(), det};
}

} // namespace fdfsi::fem
