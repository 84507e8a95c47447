#pragma once

#include "fdfsi/assembly/global_system.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <cmath>
#include <memory>
#include <string>

namespace fdfsi::timestepper {

using DirectSolver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

/// Direct sparse solve with a residual acceptance test |A x - b| <= tol |b|.
/// Up to two rounds of iterative refinement are tried before giving up.
inline Vector solve_linear(const SparseMatrix &A, const Vector &b, double tol,
                           double *relative_residual = nullptr) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw std::invalid_argument("solve_linear: dimension mismatch");
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (relative_residual)
      *relative_residual = 0.0;
    return Vector::Zero(b.size());
  }
  if (!std::isfinite(bnorm))
    throw SolverError("solve_linear: right-hand side is not finite");
  DirectSolver lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SolverError("solve_linear: factorization failed (singular system?)");
  Vector x = lu.solve(b);
  if (lu.info() != Eigen::Success)
    throw SolverError("solve_linear: back substitution failed");
  Vector r = b - A * x;
  double rel = r.norm() / bnorm;
  for (int k = 0; k < 2 && rel > tol && std::isfinite(rel); ++k) {
    x += lu.solve(r);
    r = b - A * x;
    rel = r.norm() / bnorm;
  }
  if (relative_residual)
    *relative_residual = rel;
  if (!(rel <= tol))
    throw SolverError("solve_linear: relative residual " + std::to_string(rel) +
                      " exceeds tolerance " + std::to_string(tol));
  return x;
}

namespace detail {

// Preconditioner adaptor that applies an LU factorization of a nearby matrix.
class StaleLU {
public:
  StaleLU() = default;
  void attach(const DirectSolver *lu) { lu_ = lu; }
  template <typename M>
  StaleLU &analyzePattern(const M &) { return *this; }
  template <typename M>
  StaleLU &factorize(const M &) { return *this; }
  template <typename M>
  StaleLU &compute(const M &) { return *this; }
  template <typename Rhs>
  Vector solve(const Rhs &b) const { return lu_->solve(b); }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

private:
  const DirectSolver *lu_ = nullptr;
};

} // namespace detail

/// Sparse solver that keeps its last LU factorization. A new matrix is first
/// tried with BiCGSTAB preconditioned by the kept factors, which is cheap while
/// the matrix changes little (fixed-point iterates, consecutive steps); when
/// that misses the tolerance the new matrix is factorized. Every accepted
/// solution satisfies |A x - b| <= tol |b|.
class LinearSolver {
public:
  explicit LinearSolver(int max_krylov_iterations = 40) : max_krylov_(max_krylov_iterations) {}
  LinearSolver(const LinearSolver &other) : max_krylov_(other.max_krylov_) {}
  LinearSolver &operator=(const LinearSolver &other) {
    max_krylov_ = other.max_krylov_;
    reset();
    return *this;
  }

  void reset() {
    lu_.reset();
    n_ = 0;
  }

  Vector solve(const SparseMatrix &A, const Vector &b, double tol, double *relative_residual = nullptr) {
    if (A.rows() != A.cols() || A.rows() != b.size())
      throw std::invalid_argument("LinearSolver: dimension mismatch");
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
      if (relative_residual)
        *relative_residual = 0.0;
      return Vector::Zero(b.size());
    }
    if (!std::isfinite(bnorm))
      throw SolverError("LinearSolver: right-hand side is not finite");
    if (lu_ && n_ == A.rows() && max_krylov_ > 0) {
      Eigen::BiCGSTAB<SparseMatrix, detail::StaleLU> it;
      it.preconditioner().attach(lu_.get());
      it.setTolerance(0.5 * tol);
      it.setMaxIterations(max_krylov_);
      it.compute(A);
      Vector x = it.solveWithGuess(b, Vector(lu_->solve(b)));
      const double rel = (b - A * x).norm() / bnorm;
      if (it.info() == Eigen::Success && rel <= tol && std::isfinite(rel)) {
        ++reused_;
        if (relative_residual)
          *relative_residual = rel;
        return x;
      }
    }
    auto lu = std::make_unique<DirectSolver>();
    lu->compute(A);
    if (lu->info() != Eigen::Success)
      throw SolverError("LinearSolver: factorization failed (singular system?)");
    ++factorizations_;
    lu_ = std::move(lu);
    n_ = A.rows();
    Vector x = lu_->solve(b);
    Vector r = b - A * x;
    double rel = r.norm() / bnorm;
    for (int k = 0; k < 2 && rel > tol && std::isfinite(rel); ++k) {
      x += lu_->solve(r);
      r = b - A * x;
      rel = r.norm() / bnorm;
    }
    if (relative_residual)
      *relative_residual = rel;
    if (!(rel <= tol))
      throw SolverError("LinearSolver: relative residual " + std::to_string(rel) +
                        " exceeds tolerance " + std::to_string(tol));
    return x;
  }

  long factorizations() const { return factorizations_; }
  long reused() const { return reused_; }

private:
  int max_krylov_;
  std::unique_ptr<DirectSolver> lu_;
  Index n_ = 0;
  long factorizations_ = 0;
  long reused_ = 0;
};

struct SaddleSolution {
  Vector u;
  Vector p;
  double relative_residual = 0.0;
};

/// Shifts the pressure so that it has zero mean. The Q1 and P0 parts each carry
/// a constant mode; the P0 part is first made mean-free (its constant moved
/// into the Q1 part, whose basis sums to one) and then the total mean is
/// removed from the Q1 part.
inline void normalize_pressure(Vector &p, const assembly::DofLayout &layout, const Vector &weights) {
  if (p.size() != layout.pressure_size() || weights.size() != p.size())
    throw std::invalid_argument("normalize_pressure: size mismatch");
  auto q1 = p.head(layout.n_q1);
  const auto wq1 = weights.head(layout.n_q1);
  if (layout.n_p0 > 0) {
    auto p0 = p.tail(layout.n_p0);
    const auto w0 = weights.tail(layout.n_p0);
    const double shift = w0.dot(p0) / w0.sum();
    p0.array() -= shift;
    q1.array() += shift;
  }
  const double mean = wq1.dot(q1) / wq1.sum();
  q1.array() -= mean;
}

/// Solves a constrained saddle-point system and splits the result. When
/// pressure weights are given the pressure is returned mean-free.
inline SaddleSolution solve_saddle_point(LinearSolver &solver, const assembly::GlobalSystem &system,
                                         double tol, const Vector *pressure_weights = nullptr) {
  SaddleSolution out;
  const Vector x = solver.solve(system.matrix, system.rhs, tol, &out.relative_residual);
  const auto &L = system.layout;
  out.u = x.head(L.velocity_size());
  out.p = x.tail(x.size() - L.velocity_size());
  if (pressure_weights && out.p.size() == L.pressure_size() && L.pressure_size() > 0)
    normalize_pressure(out.p, L, *pressure_weights);
  return out;
}

/// One-off solve with a fresh factorization.
inline SaddleSolution solve_saddle_point(const assembly::GlobalSystem &system, double tol,
                                         const Vector *pressure_weights = nullptr) {
  LinearSolver solver(0);
  return solve_saddle_point(solver, system, tol, pressure_weights);
}

} // namespace fdfsi::timestepper
