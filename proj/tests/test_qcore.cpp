#include <gtest/gtest.h>

#include <cstdlib>

#include "qtsl/qcore.hpp"
#include "qtsl/random.hpp"

using namespace qtsl;

namespace {

const RegisterLayout kBit({{"q", Role::Workspace, 2}});

}  // namespace

TEST(Measurement, ThreeFifthsFourFifths) {
  const PureState phi(kBit, {{0, Complex{0.6, 0.0}}, {1, Complex{0.8, 0.0}}});
  const auto records = measure_register(phi, "q");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_NEAR(records[0].probability, 9.0 / 25.0, 1e-12);
  EXPECT_NEAR(records[1].probability, 16.0 / 25.0, 1e-12);
  EXPECT_TRUE(equal_up_to_phase(records[0].post_state, PureState(kBit, {{0, 1.0}})));
  EXPECT_TRUE(equal_up_to_phase(records[1].post_state, PureState(kBit, {{1, 1.0}})));
}

TEST(Measurement, ZeroProbabilityOutcomeThrows) {
  const auto records = measure_register(PureState(kBit, {{0, 1.0}}), "q");
  EXPECT_THROW(select_outcome(records, 1), std::domain_error);
}

TEST(PureState, RejectsNonUnitNorm) {
  EXPECT_THROW(PureState(kBit, {{0, 0.5}}), std::exception);
}

TEST(PureState, PrunesDust) {
  const PureState s = PureState::normalized(kBit, {{0, 1.0}, {1, 1e-16}});
  EXPECT_EQ(s.support(), 1u);
}

TEST(Layout, MixedRadixFirstRegisterMostSignificant) {
  const RegisterLayout l({{"a", Role::Workspace, 3}, {"b", Role::Workspace, 5}});
  const std::vector<std::size_t> digits{2, 4};
  EXPECT_EQ(l.encode(digits), 2u * 5u + 4u);
  EXPECT_EQ(l.decode(14), digits);
  EXPECT_EQ(l.dimension(), 15u);
}

TEST(Qft, MatrixIsUnitary) {
  for (std::size_t n : {2, 3, 5, 8}) {
    const Eigen::MatrixXcd f = qft_matrix(n);
    EXPECT_TRUE((f * f.adjoint()).isIdentity(1e-12)) << n;
    EXPECT_TRUE((qft_matrix(n, true) * f).isIdentity(1e-12)) << n;
  }
}

TEST(Qft, InverseUndoesForward) {
  const RegisterLayout l({{"x", Role::Workspace, 6}, {"y", Role::Workspace, 3}});
  Rng rng = make_rng(3);
  const PureState s = random_state(l, rng);
  EXPECT_NEAR(std::abs(inner_product(inverse_qft(qft(s, "x"), "x"), s)), 1.0, 1e-12);
}

TEST(Qft, ZeroMapsToUniform) {
  const RegisterLayout l({{"x", Role::Workspace, 4}});
  const PureState s = qft(PureState::zero(l), "x");
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s.amplitude(i)), 0.5, 1e-12);
}

TEST(ClassicalMap, AddThenSubtractIsIdentity) {
  const RegisterLayout l({{"x", Role::Input, 4}, {"u", Role::Output, 3}});
  Rng rng = make_rng(5);
  const PureState s = random_state(l, rng);
  auto f = [](std::size_t x) { return (x * x + 1) % 3; };
  const PureState back = apply_classical(apply_classical(s, "x", "u", f), "x", "u", f, -1);
  EXPECT_NEAR(std::abs(inner_product(back, s)), 1.0, 1e-12);
}

TEST(TraceDistance, PureStatesMatchOverlapFormula) {
  const PureState zero(kBit, {{0, 1.0}});
  const double h = std::sqrt(0.5);
  const PureState plus(kBit, {{0, h}, {1, h}});
  EXPECT_NEAR(trace_distance_pure(zero, plus), std::sqrt(0.5), 1e-12);
  const std::vector<std::string> keep{"q"};
  EXPECT_NEAR(trace_distance(reduced_density(zero, keep), reduced_density(plus, keep)), std::sqrt(0.5), 1e-12);
}

TEST(TraceDistance, PartialTraceOfBellPairIsMaximallyMixed) {
  const RegisterLayout l({{"a", Role::Workspace, 2}, {"b", Role::Workspace, 2}});
  const double h = std::sqrt(0.5);
  const PureState bell(l, {{0, h}, {3, h}});
  const auto rho = reduced_density(bell, std::vector<std::string>{"a"});
  EXPECT_TRUE(rho.rho.isApprox(Eigen::MatrixXcd::Identity(2, 2) * 0.5, 1e-12));
  const auto zero = reduced_density(PureState::zero(l), std::vector<std::string>{"a"});
  EXPECT_NEAR(trace_distance(rho, zero), 0.5, 1e-12);
}

TEST(Discard, RefusesEntangledRegister) {
  const RegisterLayout l({{"a", Role::Workspace, 2}, {"b", Role::Workspace, 2}});
  const double h = std::sqrt(0.5);
  EXPECT_THROW(discard(PureState(l, {{0, h}, {3, h}}), "b"), std::logic_error);
  EXPECT_EQ(discard(PureState(l, {{0, h}, {2, h}}), "b").layout().count(), 1u);
}

TEST(Guard, OverrideRaisesTheLimit) {
  unsetenv("QTSL_GUARD_OVERRIDE");
  EXPECT_EQ(dimension_guard(), 4096u);
  setenv("QTSL_GUARD_OVERRIDE", "100000", 1);
  EXPECT_EQ(dimension_guard(), 100000u);
  setenv("QTSL_GUARD_OVERRIDE", "junk", 1);
  EXPECT_EQ(dimension_guard(), 4096u);
  unsetenv("QTSL_GUARD_OVERRIDE");
}

TEST(Random, DerivedSeedsIndependentOfOrder) {
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  EXPECT_NE(derive_seed(7, 3), derive_seed(7, 4));
  Rng a = make_rng(7, 3);
  Rng b = make_rng(7, 3);
  EXPECT_EQ(a(), b());
}

TEST(Random, UnitaryIsUnitary) {
  Rng rng = make_rng(11);
  const auto u = random_unitary(7, rng);
  EXPECT_TRUE((u * u.adjoint()).isIdentity(1e-10));
}
