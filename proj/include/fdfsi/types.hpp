#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fdfsi {

template <int Dim>
using Point = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Tensor = Eigen::Matrix<double, Dim, Dim>;

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Nodal vector field: one row per node, one column per component. Column-major
/// storage makes this the same memory layout as a component-blocked coefficient
/// vector.
using NodalField = Eigen::MatrixXd;

using Index = std::ptrdiff_t;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An element with nonpositive measure or deformation determinant.
class InvertedElementError : public Error {
public:
  InvertedElementError(Index element, double value, const std::string &where)
      : Error(where + ": element " + std::to_string(element) +
              " is inverted or degenerate (value " + std::to_string(value) + ")"),
        element_(element), value_(value) {}

  Index element() const noexcept { return element_; }
  double value() const noexcept { return value_; }

private:
  Index element_;
  double value_;
};

/// A point (typically a solid node) that lies outside the fluid grid.
class OutsideDomainError : public Error {
public:
  OutsideDomainError(Index node, const std::string &what)
      : Error(what), node_(node) {}
  Index node() const noexcept { return node_; }

private:
  Index node_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class SolverError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public SolverError {
public:
  ConvergenceError(const std::string &what, std::vector<double> history)
      : SolverError(what), history_(std::move(history)) {}
  const std::vector<double> &history() const noexcept { return history_; }

private:
  std::vector<double> history_;
};

} // namespace fdfsi
