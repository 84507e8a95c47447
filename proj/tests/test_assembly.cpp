#include "fdfsi/assembly/fluid_operator.hpp"
#include "fdfsi/assembly/global_system.hpp"
#include "fdfsi/assembly/solid_operator.hpp"
#include "fdfsi/mesh/solid_generators.hpp"
#include "fdfsi/timestepper/saddle_solver.hpp"
#include "fdfsi/timestepper/state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fdfsi;
using assembly::ConvectionForm;
using assembly::PressureSpace;
using mesh::BoundaryKind;

namespace {

mesh::FluidGrid<2> square_grid(int n, BoundaryKind kind) {
  return mesh::FluidGrid<2>({Point<2>(0, 0), Point<2>(1, 1)}, {n, n}, mesh::uniform_tags<2>(kind));
}

Vector random_vector(Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N;
  Vector v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = N(rng);
  return v;
}

double asymmetry(const SparseMatrix &A) {
  return (Eigen::MatrixXd(A) - Eigen::MatrixXd(A).transpose()).norm() / Eigen::MatrixXd(A).norm();
}

mesh::SolidMesh<2> single_triangle() {
  NodalField x(3, 2);
  x << 0, 0, 1, 0, 0, 1;
  return mesh::SolidMesh<2>(x, {{0, 1, 2}});
}

template <int Dim>
Tensor<Dim> random_tensor(std::mt19937 &rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Tensor<Dim> F;
  do {
    F = Tensor<Dim>::Identity();
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        F(i, j) += u(rng);
  } while (F.determinant() < 0.2);
  return F;
}

} // namespace

TEST(FluidOperator, NoConvectionGivesSymmetricBlock) {
  const auto g = square_grid(4, BoundaryKind::wall);
  const assembly::FluidOperators<2> ops(g, PressureSpace::p1_p0);
  const assembly::PhysicalParams params;
  const Vector u = random_vector(ops.layout().velocity_size(), 1);
  const auto blocks = assembly::assemble_fluid_operator(ops, params, 0.01, u, Vector::Zero(u.size()));
  EXPECT_LT(asymmetry(blocks.A), 1e-13);
  EXPECT_EQ(blocks.B.rows(), ops.layout().pressure_size());
  EXPECT_EQ(blocks.B.cols(), ops.layout().velocity_size());
}

TEST(FluidOperator, RigidTranslationHasNoStrain) {
  const auto g = square_grid(5, BoundaryKind::periodic);
  const assembly::FluidOperators<2> ops(g, PressureSpace::p1);
  const Index n = ops.layout().n_velocity;
  Vector u = Vector::Zero(2 * n);
  u.head(n).setOnes();
  EXPECT_LT((ops.deformation_stiffness() * u).cwiseAbs().maxCoeff(), 1e-12);
  // rigid rotation has no strain either
  const auto gw = square_grid(5, BoundaryKind::wall);
  const assembly::FluidOperators<2> opw(gw, PressureSpace::p1);
  const auto rot = timestepper::interpolate_velocity(gw, [](const Point<2> &x) {
    return Point<2>(-(x.y() - 0.5), x.x() - 0.5);
  });
  EXPECT_LT((opw.deformation_stiffness() * rot).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FluidOperator, ViscosityScalesStiffnessExactly) {
  const auto g = square_grid(3, BoundaryKind::wall);
  const assembly::FluidOperators<2> ops(g, PressureSpace::p1);
  assembly::PhysicalParams p1, p2;
  p2.mu_f = 2.0 * p1.mu_f;
  const Vector z = Vector::Zero(ops.layout().velocity_size());
  const auto a1 = assembly::assemble_fluid_operator(ops, p1, 0.1, z, z);
  const auto a2 = assembly::assemble_fluid_operator(ops, p2, 0.1, z, z);
  const SparseMatrix m = (1.0 / 0.1) * assembly::block_diagonal(ops.mass(), 2);
  const Eigen::MatrixXd k1 = Eigen::MatrixXd(a1.A - m), k2 = Eigen::MatrixXd(a2.A - m);
  EXPECT_LT((k2 - 2.0 * k1).norm(), 1e-14 * k2.norm());
  EXPECT_LT((k1 - 0.5 * p1.mu_f * Eigen::MatrixXd(ops.deformation_stiffness())).norm(), 1e-14 * k1.norm());
}

TEST(FluidOperator, RejectsBadInput) {
  const auto g = square_grid(3, BoundaryKind::wall);
  const assembly::FluidOperators<2> ops(g, PressureSpace::p1);
  const assembly::PhysicalParams params;
  const Vector z = Vector::Zero(ops.layout().velocity_size());
  EXPECT_THROW(assembly::assemble_fluid_operator(ops, params, 0.0, z, z), std::invalid_argument);
  EXPECT_THROW(assembly::assemble_fluid_operator(ops, params, 0.1, Vector::Zero(3), z), std::invalid_argument);
  EXPECT_THROW(ops.convection(Vector::Zero(3), ConvectionForm::skew), std::invalid_argument);
}

TEST(FluidOperator, MassIntegratesDomain) {
  const mesh::FluidGrid<2> g({Point<2>(0, 0), Point<2>(2, 0.5)}, {4, 3}, mesh::uniform_tags<2>(BoundaryKind::wall));
  const assembly::FluidOperators<2> ops(g, PressureSpace::p1_p0);
  const Vector ones = Vector::Ones(ops.layout().n_velocity);
  EXPECT_NEAR(ones.dot(ops.mass() * ones), 1.0, 1e-13);
  EXPECT_NEAR(ops.pressure_weights().head(ops.layout().n_q1).sum(), 1.0, 1e-13);
  EXPECT_NEAR(ops.pressure_weights().tail(ops.layout().n_p0).sum(), 1.0, 1e-13);
}

TEST(ConvectionProperty, SkewFormIsEnergyNeutral) {
  for (auto kind : {BoundaryKind::periodic, BoundaryKind::wall}) {
    const auto g = square_grid(5, kind);
    const assembly::FluidOperators<2> ops(g, PressureSpace::p1);
    const Index n = ops.layout().n_velocity;
    for (unsigned s = 0; s < 10; ++s) {
      const Vector a = random_vector(2 * n, s);
      const Vector u = random_vector(n, 100 + s);
      const SparseMatrix C = ops.convection(a, ConvectionForm::skew);
      const double scale = a.norm() * u.squaredNorm();
      EXPECT_LT(std::abs(u.dot(C * u)), 1e-13 * scale);
    }
  }
  const mesh::FluidGrid<3> g3({Point<3>(0, 0, 0), Point<3>(1, 1, 1)}, {3, 3, 3},
                              mesh::uniform_tags<3>(BoundaryKind::symmetry));
  const assembly::FluidOperators<3> ops3(g3, PressureSpace::p1);
  const Index n3 = ops3.layout().n_velocity;
  const Vector a = random_vector(3 * n3, 4), u = random_vector(n3, 5);
  EXPECT_LT(std::abs(u.dot(ops3.convection(a, ConvectionForm::skew) * u)), 1e-13 * a.norm() * u.squaredNorm());
}

TEST(SolidOperator, RigidTranslationFeelsNoLoad) {
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.05);
  const assembly::SolidOperators<2> ops(disc);
  std::mt19937 rng(3);
  assembly::TensorField<2> F(static_cast<std::size_t>(disc.num_elements()));
  for (auto &f : F)
    f = random_tensor<2>(rng, 0.3);
  // a constant test function has zero gradient, so summing rows over nodes gives zero
  const auto g = ops.stress_load(assembly::identity_field<2>(disc.num_elements()));
  EXPECT_LT(g.colwise().sum().norm(), 1e-14);
  EXPECT_LT(ops.stress_load(F).colwise().sum().norm(), 1e-14);
  EXPECT_LT(ops.volumetric_load(F).colwise().sum().norm(), 1e-14);
}

TEST(SolidOperator, ZeroParametersGiveZeroBlocks) {
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.05);
  const assembly::SolidOperators<2> ops(disc);
  assembly::PhysicalParams p;
  p.c1 = 0.0;
  p.rho_s = p.rho_f;
  const auto F = assembly::identity_field<2>(disc.num_elements());
  const NodalField w = NodalField::Ones(disc.num_nodes(), 2);
  const auto blocks = assembly::assemble_solid_operator(ops, F, p, 0.01, w, F, &w);
  EXPECT_EQ(Eigen::MatrixXd(blocks.A).norm(), 0.0);
  EXPECT_EQ(blocks.rhs.norm(), 0.0);
  EXPECT_EQ(blocks.A_coupled.nonZeros(), 0);
}

TEST(SolidOperator, StressLoadOnReferenceTriangle) {
  const auto tri = single_triangle();
  const assembly::SolidOperators<2> ops(tri);
  Tensor<2> F;
  F << 2.0, 0.0, 0.0, 0.5;
  const auto g = ops.stress_load({F});
  // int F : grad phi_a = |e| F grad phi_a with grad phi = (-1,-1), (1,0), (0,1), |e| = 1/2
  NodalField expected(3, 2);
  expected << -1.0, -0.25, 1.0, 0.0, 0.0, 0.25;
  EXPECT_LT((g - expected).norm(), 1e-13);
  // and the full solid right-hand side with c1 = 1, rho_delta = 0
  assembly::PhysicalParams p;
  p.c1 = 1.0;
  p.rho_s = p.rho_f;
  const auto blocks = assembly::assemble_solid_operator(ops, {F}, p, 0.1, NodalField::Zero(3, 2),
                                                        assembly::identity_field<2>(1));
  // volumetric load at F = I: |e| grad phi_a
  NodalField vol(3, 2);
  vol << -0.5, -0.5, 0.5, 0.0, 0.0, 0.5;
  EXPECT_LT((blocks.rhs - (vol - expected)).norm(), 1e-13);
}

TEST(SolidOperator, InvertedIterateReported) {
  const auto tri = single_triangle();
  const assembly::SolidOperators<2> ops(tri);
  Tensor<2> bad;
  bad << -1.0, 0.0, 0.0, 1.0;
  const assembly::PhysicalParams p;
  EXPECT_THROW(assembly::assemble_solid_operator(ops, assembly::identity_field<2>(1), p, 0.1,
                                                 NodalField::Zero(3, 2), {bad}),
               InvertedElementError);
  EXPECT_THROW(ops.volumetric_load({bad}), InvertedElementError);
}

TEST(SolidOperator, MassAndStiffness) {
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.04);
  const assembly::SolidOperators<2> ops(disc);
  const Vector ones = Vector::Ones(disc.num_nodes());
  EXPECT_NEAR(ones.dot(ops.mass() * ones), ops.reference_measures().sum(), 1e-14);
  EXPECT_LT((ops.stiffness() * ones).cwiseAbs().maxCoeff(), 1e-12);
  // linear field x: stiffness energy equals the area
  const Vector x = disc.reference_coords().col(0);
  EXPECT_NEAR(x.dot(ops.stiffness() * x), ops.reference_measures().sum(), 1e-13);
}

TEST(JTermProperty, ReferenceEvaluationMatchesCurrentConfiguration) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  auto run = [&]<int Dim>() {
    for (int t = 0; t < 200; ++t) {
      NodalField X = NodalField::Zero(Dim + 1, Dim);
      for (int k = 0; k < Dim; ++k)
        X(k + 1, k) = 1.0;
      for (Index i = 0; i < X.size(); ++i)
        X.data()[i] += 0.5 * u(rng);
      typename mesh::SolidMesh<Dim>::Element el;
      for (int a = 0; a <= Dim; ++a)
        el[a] = a;
      if (mesh::simplex_measure<Dim>(X.transpose()) <= 0.05)
        continue;
      const mesh::SolidMesh<Dim> m(X, {el});
      // random affine deformation x = A X + b with det A > 0
      const Tensor<Dim> A = random_tensor<Dim>(rng, 0.4);
      NodalField x = X * A.transpose();
      x.rowwise() += Point<Dim>::Constant(u(rng)).transpose();
      const assembly::SolidOperators<Dim> ops(m);
      const auto Fs = ops.gradient(x);
      EXPECT_LT((Fs[0] - A).norm(), 1e-12);
      const NodalField ref = ops.volumetric_load(Fs);
      // current configuration: int_{e_t} J^{-1} d phi_a / dx_i dx
      const auto cur = fem::physical_gradients<Dim, Dim + 1>(Eigen::Matrix<double, Dim, Dim + 1>(x.transpose()),
                                                             fem::P1<Dim>::reference_gradients());
      const double vol_t = mesh::simplex_measure<Dim>(x.transpose());
      const double J = A.determinant();
      const NodalField direct = (vol_t / J) * cur.gradients;
      EXPECT_LT((ref - direct).norm(), 1e-12 * std::max(1.0, direct.norm()));
    }
  };
  run.template operator()<2>();
  run.template operator()<3>();
}

TEST(JTermProperty, TangentIsDerivativeOfLoad) {
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.07);
  const assembly::SolidOperators<2> ops(disc);
  std::mt19937 rng(8);
  assembly::TensorField<2> F(static_cast<std::size_t>(disc.num_elements()));
  for (auto &f : F)
    f = random_tensor<2>(rng, 0.2);
  const Vector dw = random_vector(2 * disc.num_nodes(), 77);
  const NodalField dW = Eigen::Map<const NodalField>(dw.data(), disc.num_nodes(), 2);
  const auto G = ops.gradient(dW);
  const double eps = 1e-6;
  auto Fp = F, Fm = F;
  for (std::size_t e = 0; e < F.size(); ++e) {
    Fp[e] += eps * G[e];
    Fm[e] -= eps * G[e];
  }
  const NodalField fd = (ops.volumetric_load(Fp) - ops.volumetric_load(Fm)) / (2 * eps);
  const SparseMatrix K = ops.volumetric_tangent(F);
  const Vector Kdw = K * dw;
  const NodalField tangent = -Eigen::Map<const NodalField>(Kdw.data(), disc.num_nodes(), 2);
  EXPECT_LT((fd - tangent).norm(), 1e-7 * tangent.norm());
  EXPECT_LT(asymmetry(K), 1e-14);
}

TEST(Merge, ZeroSolidLeavesFluidSystem) {
  const auto g = square_grid(4, BoundaryKind::periodic);
  const assembly::FluidOperators<2> fops(g, PressureSpace::p1_p0);
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.05);
  const assembly::SolidOperators<2> sops(disc);
  const auto P = coupling::build_coupling(g, disc);
  const assembly::PhysicalParams params;
  const Vector u = random_vector(fops.layout().velocity_size(), 3);
  const auto fluid = assembly::assemble_fluid_operator(fops, params, 0.01, u, u);
  assembly::SolidBlocks zero{SparseMatrix(disc.num_nodes(), disc.num_nodes()), SparseMatrix(),
                             NodalField::Zero(disc.num_nodes(), 2)};
  const auto with = assembly::merge_systems(fluid, &zero, &P, fops.layout());
  const auto without = assembly::merge_systems(fluid, nullptr, nullptr, fops.layout());
  EXPECT_EQ((Eigen::MatrixXd(with.matrix) - Eigen::MatrixXd(without.matrix)).norm(), 0.0);
  EXPECT_EQ((with.rhs - without.rhs).norm(), 0.0);
  EXPECT_EQ(with.matrix.rows(), 2 * g.num_velocity_dofs() + g.num_pressure_vertex_dofs() + g.num_cells());
}

TEST(Merge, SymmetricWithoutConvectionAndSparsityBound) {
  const auto g = square_grid(5, BoundaryKind::wall);
  const assembly::FluidOperators<2> fops(g, PressureSpace::p1);
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.05);
  const assembly::SolidOperators<2> sops(disc);
  const auto P = coupling::build_coupling(g, disc);
  const assembly::PhysicalParams params;
  const Vector z = Vector::Zero(fops.layout().velocity_size());
  const auto fluid = assembly::assemble_fluid_operator(fops, params, 0.01, z, z);
  const auto F = assembly::identity_field<2>(disc.num_elements());
  const NodalField w = NodalField::Zero(disc.num_nodes(), 2);
  const auto solid = assembly::assemble_solid_operator(sops, F, params, 0.01, w, F);
  const auto sys = assembly::merge_systems(fluid, &solid, &P, fops.layout());
  EXPECT_LT(asymmetry(sys.matrix), 1e-13);
  const SparseMatrix PAP = assembly::block_diagonal(coupling::gather_to_fluid(P, solid.A), 2);
  SparseMatrix velocity_block = sys.matrix.topLeftCorner(fops.layout().velocity_size(), fops.layout().velocity_size());
  velocity_block.prune(0.0);
  EXPECT_LE(velocity_block.nonZeros(), fluid.A.nonZeros() + PAP.nonZeros());
  // with the linearized volumetric term the block stays symmetric
  const auto lin = assembly::assemble_solid_operator(sops, F, params, 0.01, w, F, &w);
  EXPECT_GT(lin.A_coupled.nonZeros(), 0);
  EXPECT_LT(asymmetry(assembly::merge_systems(fluid, &lin, &P, fops.layout()).matrix), 1e-13);
}

TEST(Merge, DimensionMismatch) {
  const auto g = square_grid(4, BoundaryKind::wall);
  const assembly::FluidOperators<2> fops(g, PressureSpace::p1);
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.05);
  const auto P = coupling::build_coupling(g, disc);
  const Vector z = Vector::Zero(fops.layout().velocity_size());
  const auto fluid = assembly::assemble_fluid_operator(fops, assembly::PhysicalParams{}, 0.01, z, z);
  assembly::SolidBlocks bad{SparseMatrix(3, 3), SparseMatrix(), NodalField::Zero(3, 2)};
  EXPECT_THROW(assembly::merge_systems(fluid, &bad, &P, fops.layout()), std::invalid_argument);
  auto other = fops.layout();
  other.n_velocity += 1;
  EXPECT_THROW(assembly::merge_systems(fluid, nullptr, nullptr, other), std::invalid_argument);
}

TEST(Constraints, ConflictingValuesRejected) {
  assembly::ConstraintSet cs;
  cs.add(3, 0.0);
  EXPECT_NO_THROW(cs.add(3, 0.0));
  EXPECT_THROW(cs.add(3, 1.0), ConfigError);
}

TEST(Constraints, AllWallStokesWithoutForcingIsTrivial) {
  const auto g = square_grid(4, BoundaryKind::wall);
  const assembly::FluidOperators<2> fops(g, PressureSpace::p1_p0);
  const assembly::PhysicalParams params;
  const Vector z = Vector::Zero(fops.layout().velocity_size());
  const auto fluid = assembly::assemble_fluid_operator(fops, params, 0.01, z, z);
  const auto cs = assembly::boundary_constraints(g, fops.layout());
  const auto sys = assembly::apply_constraints(assembly::merge_systems(fluid, nullptr, nullptr, fops.layout()), cs);
  const auto sol = timestepper::solve_saddle_point(sys, 1e-10, &fops.pressure_weights());
  EXPECT_EQ(sol.u.norm(), 0.0);
  EXPECT_EQ(sol.p.norm(), 0.0);
}

TEST(Constraints, SymmetryFaceFixesNormalComponentOnly) {
  mesh::FluidGrid<2>::Tags tags = mesh::uniform_tags<2>(BoundaryKind::wall);
  tags[mesh::face_index(0, 0)] = BoundaryKind::symmetry;
  const mesh::FluidGrid<2> g({Point<2>(0, 0), Point<2>(1, 1)}, {6, 6}, tags);
  const assembly::FluidOperators<2> fops(g, PressureSpace::p1);
  const assembly::PhysicalParams params;
  // start from a swirl so the solve has something to do
  const Vector u0 = timestepper::interpolate_velocity(g, [](const Point<2> &x) {
    return Point<2>(std::sin(std::numbers::pi * x.y()), x.x() * (1 - x.x()));
  });
  const auto fluid = assembly::assemble_fluid_operator(fops, params, 0.05, u0, u0);
  const auto cs = assembly::boundary_constraints(g, fops.layout());
  const auto sys = assembly::apply_constraints(assembly::merge_systems(fluid, nullptr, nullptr, fops.layout()), cs);
  const auto sol = timestepper::solve_saddle_point(sys, 1e-10, &fops.pressure_weights());
  const Index n = fops.layout().n_velocity;
  double max_tangential = 0.0;
  for (Index node : g.velocity_nodes_on_face(mesh::face_index(0, 0))) {
    const auto p = g.velocity_node(node);
    const Index dof = g.velocity_dof(node);
    EXPECT_EQ(sol.u[dof], 0.0);
    if (p.y() > 0.0 && p.y() < 1.0)
      max_tangential = std::max(max_tangential, std::abs(sol.u[n + dof]));
  }
  EXPECT_GT(max_tangential, 1e-3);
}

TEST(Constraints, PeriodicSolveIsShiftEquivariant) {
  const int cells = 8;
  const auto g = square_grid(cells, BoundaryKind::periodic);
  const assembly::FluidOperators<2> fops(g, PressureSpace::p1_p0);
  const assembly::PhysicalParams params;
  const double shift = 1.0 / cells;
  auto field = [](double s) {
    return [s](const Point<2> &x) {
      const double X = 2 * std::numbers::pi * (x.x() - s), Y = 2 * std::numbers::pi * x.y();
      return Point<2>(std::sin(X) * std::cos(Y) + 0.3 * std::cos(Y), std::cos(X) * std::sin(2 * Y));
    };
  };
  auto solve = [&](const Vector &u0) {
    const auto fluid = assembly::assemble_fluid_operator(fops, params, 0.05, u0, u0);
    const auto cs = assembly::boundary_constraints(g, fops.layout());
    const auto sys = assembly::apply_constraints(assembly::merge_systems(fluid, nullptr, nullptr, fops.layout()), cs);
    return timestepper::solve_saddle_point(sys, 1e-12, &fops.pressure_weights()).u;
  };
  const Vector a = solve(timestepper::interpolate_velocity(g, field(0.0)));
  const Vector b = solve(timestepper::interpolate_velocity(g, field(shift)));
  // b(x) must equal a(x - shift); compare at every velocity node
  double worst = 0.0;
  for (Index node = 0; node < g.num_velocity_nodes(); ++node) {
    Point<2> x = g.velocity_node(node);
    Point<2> xs(x.x() - shift, x.y());
    if (xs.x() < 0)
      xs.x() += 1.0;
    worst = std::max(worst, (fops.evaluate_velocity(b, x) - fops.evaluate_velocity(a, xs)).norm());
  }
  EXPECT_LT(worst, 1e-10 * a.cwiseAbs().maxCoeff());
}

TEST(Constraints, RejectsPinnedVelocityIndex) {
  const auto g = square_grid(3, BoundaryKind::wall);
  const assembly::FluidOperators<2> fops(g, PressureSpace::p1);
  const Vector z = Vector::Zero(fops.layout().velocity_size());
  const auto sys = assembly::merge_systems(assembly::assemble_fluid_operator(fops, assembly::PhysicalParams{}, 0.1, z, z),
                                           nullptr, nullptr, fops.layout());
  assembly::ConstraintSet cs;
  cs.pinned_pressure.push_back(0);
  EXPECT_THROW(assembly::apply_constraints(sys, cs), std::invalid_argument);
  assembly::ConstraintSet out_of_range;
  out_of_range.add(sys.matrix.rows() + 5);
  EXPECT_THROW(assembly::apply_constraints(sys, out_of_range), std::invalid_argument);
}

TEST(Consistency, AssembledProductEqualsElementSums) {
  // (mu/2) u^T K_D v summed cell by cell with the quadrature rule, against the global matrix
  const mesh::FluidGrid<2> g({Point<2>(0, 0), Point<2>(1, 0.5)}, {4, 3}, mesh::uniform_tags<2>(BoundaryKind::wall));
  const assembly::FluidOperators<2> ops(g, PressureSpace::p1);
  const Index n = ops.layout().n_velocity;
  const Vector u = random_vector(2 * n, 31), v = random_vector(2 * n, 32);
  const auto rule = fem::gauss_box<2>(3);
  const Point<2> h = g.cell_size();
  double direct_k = 0.0, direct_m = 0.0;
  for (Index c = 0; c < g.num_cells(); ++c) {
    const auto dofs = g.cell_velocity_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      fem::Q2<2>::Values phi;
      fem::Q2<2>::Gradients dphi;
      fem::Q2<2>::evaluate(rule.points[q], phi, dphi);
      dphi.col(0) *= 2.0 / h[0];
      dphi.col(1) *= 2.0 / h[1];
      Tensor<2> Gu = Tensor<2>::Zero(), Gv = Tensor<2>::Zero();
      Point<2> uq = Point<2>::Zero(), vq = Point<2>::Zero();
      for (int a = 0; a < 9; ++a)
        for (int k = 0; k < 2; ++k) {
          Gu.row(k) += u[k * n + dofs[a]] * dphi.row(a);
          Gv.row(k) += v[k * n + dofs[a]] * dphi.row(a);
          uq[k] += u[k * n + dofs[a]] * phi[a];
          vq[k] += v[k * n + dofs[a]] * phi[a];
        }
      const double w = rule.weights[q] * h.prod() / 4.0;
      direct_k += w * ((Gu + Gu.transpose()).cwiseProduct(Gv + Gv.transpose())).sum();
      direct_m += w * uq.dot(vq);
    }
  }
  EXPECT_NEAR(u.dot(ops.deformation_stiffness() * v), direct_k, 1e-12 * std::abs(direct_k) + 1e-12);
  const SparseMatrix M2 = assembly::block_diagonal(ops.mass(), 2);
  EXPECT_NEAR(u.dot(M2 * v), direct_m, 1e-12 * std::abs(direct_m) + 1e-12);
}
