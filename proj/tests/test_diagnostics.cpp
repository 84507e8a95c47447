#include "fdfsi/diagnostics/energy.hpp"
#include "fdfsi/io/config.hpp"
#include "fdfsi/timestepper/stepper.hpp"

#include "property_checks.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace fdfsi;

namespace {

assembly::TensorField<2> single(const Tensor<2> &F) { return {F}; }

Vector unit_measure() { return Vector::Ones(1); }

timestepper::Problem<2> small_problem(const io::ScenarioConfig &c) {
  return timestepper::Problem<2>(io::make_grid<2>(c), io::make_solid<2>(c), c.physical, c.pressure, c.solver);
}

io::ScenarioConfig small_disc(int nx = 8, double h = 0.05) {
  auto c = io::preset("activated_disc");
  c.nx = nx;
  c.target_h = h;
  return c;
}

} // namespace

TEST(PotentialEnergy, IdentityAndRotation) {
  EXPECT_EQ(diagnostics::potential_energy<2>(single(Tensor<2>::Identity()), unit_measure(), 1.0), 0.0);
  const double th = 0.7;
  Tensor<2> R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  EXPECT_NEAR(diagnostics::potential_energy<2>(single(R), unit_measure(), 3.0), 0.0, 1e-14);
  const Tensor<3> R3 = Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  EXPECT_NEAR(diagnostics::strain_energy_density<3>(R3, 2.0), 0.0, 1e-14);
}

TEST(PotentialEnergy, HandEvaluatedStretch) {
  const Tensor<2> F = Eigen::Vector2d(2.0, 0.5).asDiagonal();
  EXPECT_NEAR(diagnostics::potential_energy<2>(single(F), unit_measure(), 1.0), 1.125, 1e-15);
  Vector meas(2);
  meas << 0.5, 0.25;
  EXPECT_NEAR(diagnostics::potential_energy<2>({F, F}, meas, 2.0), 2.0 * 1.125 * 0.75, 1e-14);
}

TEST(PotentialEnergy, RejectsSingularAndMismatched) {
  const Tensor<2> flat = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  EXPECT_THROW(diagnostics::potential_energy<2>(single(flat), unit_measure(), 1.0), InvertedElementError);
  EXPECT_THROW(diagnostics::potential_energy<2>(single(Tensor<2>::Identity()), Vector::Ones(2), 1.0),
               std::invalid_argument);
}

TEST(PotentialEnergyProperty, LowerBound) {
  // the density is a sum of x^2/2 - 1/2 - ln x over singular values, so it is
  // nonnegative; the weaker bound -c1 |X| max(0, ln J_max) follows
  std::mt19937 rng(6);
  for (int s = 0; s < 1000; ++s) {
    const auto F = checks::random_deformation<3>(rng);
    const double psi = diagnostics::strain_energy_density<3>(F, 1.5);
    EXPECT_GE(psi, -1e-14);
    EXPECT_GE(psi, -1.5 * std::max(0.0, std::log(F.determinant())) - 1e-14);
  }
}

TEST(ImplicitResidual, Examples) {
  const Tensor<2> F = Eigen::Vector2d(2.0, 0.5).asDiagonal();
  const Tensor<2> I = Tensor<2>::Identity();
  EXPECT_NEAR(diagnostics::residual_implicit<2>(single(F), single(I), unit_measure(), 1.0, 0.1), 0.01125,
              1e-15);
  EXPECT_EQ(diagnostics::residual_implicit<2>(single(I), single(F), unit_measure(), 1.0, 0.1), 0.0);
  EXPECT_EQ(diagnostics::residual_implicit<2>(single(F), single(Tensor<2>::Zero()), unit_measure(), 1.0, 0.1),
            0.0);
  EXPECT_THROW(diagnostics::residual_implicit<2>(single(Tensor<2>::Zero()), single(I), unit_measure(), 1.0, 0.1),
               InvertedElementError);
}

TEST(ExplicitResidual, RigidTranslationHasNoDivergenceGap) {
  const Tensor<2> Fp = Eigen::Vector2d(1.3, 0.9).asDiagonal();
  const Tensor<2> Fn = Eigen::Vector2d(1.1, 1.2).asDiagonal();
  EXPECT_EQ(diagnostics::residual_explicit_divergence<2>(single(Fp), single(Fn), single(Tensor<2>::Zero()),
                                                         unit_measure(), 1.0, 0.1),
            0.0);
  // same configuration on both sides
  EXPECT_NEAR(diagnostics::residual_explicit_divergence<2>(single(Fn), single(Fn), single(Fp), unit_measure(),
                                                           1.0, 0.1),
              0.0, 1e-16);
}

TEST(ExplicitResidual, TermsFromStates) {
  const auto c = small_disc();
  const auto problem = small_problem(c);
  const auto s0 = timestepper::initial_state(problem, io::make_solid<2>(c), c.init);
  auto s1 = timestepper::step_explicit(problem, s0, 0.01);
  const auto r = diagnostics::residual_explicit_terms(problem, s1);
  EXPECT_DOUBLE_EQ(diagnostics::step_residual(problem, s1), r.total());
  EXPECT_NE(r.R_split, 0.0);
  s1.last.u_half.setZero();
  EXPECT_EQ(diagnostics::residual_explicit_terms(problem, s1).R_split, 0.0);
  const auto s_imp = timestepper::step_implicit(problem, s0, 0.01);
  EXPECT_THROW(diagnostics::residual_explicit_terms(problem, s_imp), std::invalid_argument);
}

TEST(MassVariation, InitialAndRigidMotion) {
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.04);
  EXPECT_EQ(diagnostics::mass_variation(disc), 0.0);
  const double th = 0.4;
  Tensor<2> R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  NodalField x = disc.current_coords() * R.transpose();
  x.rowwise() += Eigen::RowVector2d(0.1, -0.05);
  EXPECT_NEAR(diagnostics::mass_variation(disc.with_current_coords(x)), 0.0, 1e-14);
  const NodalField scaled = 1.1 * disc.current_coords();
  EXPECT_NEAR(diagnostics::mass_variation(disc.with_current_coords(scaled)), 0.21, 1e-13);
}

TEST(EnergyReport, ZeroStateHasNoEnergyAndNoRatio) {
  auto c = small_disc();
  c.init.kind = timestepper::InitialKind::zero;
  const auto problem = small_problem(c);
  const auto s = timestepper::initial_state(problem, io::make_solid<2>(c), c.init);
  const auto r = diagnostics::initial_report(problem, s);
  EXPECT_EQ(r.E_k_fluid, 0.0);
  EXPECT_EQ(r.E_k_solid_delta, 0.0);
  EXPECT_EQ(r.E_d, 0.0);
  EXPECT_EQ(r.E_p, 0.0);
  EXPECT_EQ(r.E_total, 0.0);
  EXPECT_FALSE(r.E_ratio.has_value());
  EXPECT_EQ(r.R_step, 0.0);
  EXPECT_EQ(r.mass_variation, 0.0);
}

TEST(EnergyReport, InitialRatioAndSum) {
  const auto c = small_disc();
  const auto problem = small_problem(c);
  const auto s0 = timestepper::initial_state(problem, io::make_solid<2>(c), c.init);
  const auto r0 = diagnostics::initial_report(problem, s0);
  ASSERT_TRUE(r0.E_ratio.has_value());
  EXPECT_EQ(*r0.E_ratio, 1.0);
  const auto s1 = timestepper::step_implicit(problem, s0, 0.01);
  const auto r1 = diagnostics::energy_report(problem, s1, r0.E_total);
  EXPECT_EQ(r1.E_total, r1.E_k_fluid + r1.E_k_solid_delta + r1.E_d + r1.E_p);
  EXPECT_DOUBLE_EQ(*r1.E_ratio, r1.E_total / r0.E_total);
  EXPECT_GT(r1.E_d, 0.0);
  EXPECT_GT(r1.E_p, 0.0);
  EXPECT_NEAR(r1.mass_solid, c.physical.rho_s * mesh::solid_measure(s1.solid, mesh::Configuration::current), 1e-15);
}

TEST(EnergyReport, SolidKineticEnergyOnReferenceMesh) {
  const auto disc = mesh::make_disc(Point<2>(0.5, 0.5), 0.2, 0.04);
  const assembly::SolidOperators<2> ops(disc);
  NodalField w(disc.num_nodes(), 2);
  w.col(0).setConstant(2.0);
  w.col(1).setConstant(-1.0);
  EXPECT_NEAR(assembly::solid_kinetic_energy(ops, 0.5, w), 0.25 * 5.0 * ops.reference_measures().sum(), 1e-14);
}

TEST(EnergyReport, StreamFunctionKineticEnergy) {
  auto c = small_disc(32, 0.05);
  const auto problem = small_problem(c);
  const auto s0 = timestepper::initial_state(problem, io::make_solid<2>(c), c.init);
  const auto &sf = c.init.stream;
  const double exact = 0.5 * c.physical.rho_f * sf.psi0 * sf.psi0 * (sf.a * sf.a + sf.b * sf.b) / 4.0;
  const double Ek = assembly::fluid_kinetic_energy(problem.fluid(), c.physical.rho_f, s0.u);
  EXPECT_NEAR(Ek / exact, 1.0, 5e-3);
  EXPECT_NEAR(exact, 0.0125 * std::numbers::pi * std::numbers::pi / 5.0, 1e-15);
}

TEST(EnergyEstimate, PotentialEnergyChangeIsBoundedByWork) {
  // E_p(n+1) - E_p(n) <= dt c1 [int F_{n+1}:G - int tr(G F_{n+1}^{-1})] + R_{n+1}
  const auto c = small_disc(10, 0.04);
  const auto problem = small_problem(c);
  auto s = timestepper::initial_state(problem, io::make_solid<2>(c), c.init);
  const double E0 = diagnostics::initial_report(problem, s).E_total;
  const auto &meas = problem.solid().reference_measures();
  const double c1 = c.physical.c1;
  for (int k = 0; k < 4; ++k) {
    const double Ep_prev = diagnostics::potential_energy<2>(s.F, meas, c1);
    s = timestepper::step_implicit(problem, s, 0.02);
    const double Ep = diagnostics::potential_energy<2>(s.F, meas, c1);
    double work = 0.0;
    for (std::size_t e = 0; e < s.F.size(); ++e) {
      const Tensor<2> &G = s.last.grad_w[e];
      work += meas[e] * ((s.F[e].array() * G.array()).sum() - (G * s.F[e].inverse()).trace());
    }
    const double R = diagnostics::step_residual(problem, s);
    EXPECT_LE(Ep - Ep_prev, 0.02 * c1 * work + R + 1e-10 * E0) << "step " << k + 1;
  }
}
