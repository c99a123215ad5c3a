#include <gtest/gtest.h>

#include <cstdlib>

#include "qtsl/checks.hpp"
#include "qtsl/oracles.hpp"
#include "qtsl/program.hpp"
#include "qtsl/random.hpp"

using namespace qtsl;

namespace {

RegisterLayout xu(std::size_t N, std::size_t M) { return RegisterLayout({{"x", Role::Input, N}, {"u", Role::Output, M}}); }

PureState basis_xu(std::size_t N, std::size_t M, std::size_t x, std::size_t u) {
  const std::vector<std::size_t> d{x, u};
  return PureState::basis(xu(N, M), d);
}

struct FaultGuard {
  explicit FaultGuard(std::size_t offset) { fault::std_decomp_offset = offset; }
  ~FaultGuard() { fault::std_decomp_offset = 0; }
};

}  // namespace

TEST(ExactOracle, AddsTableValue) {
  const TruthTable H(3, 4, {2, 3, 1});
  const PureState s = exact_query(H, basis_xu(3, 4, 1, 2), "x", "u");
  EXPECT_EQ(definite_value(s, "u"), (2 + 3) % 4);
  EXPECT_EQ(definite_value(exact_query(H, s, "x", "u", -1), "u"), 2u);
}

TEST(TruthTable, IndexRoundTrip) {
  for (std::uint64_t i = 0; i < 27; ++i) EXPECT_EQ(TruthTable::from_index(3, 3, i).index(), i);
  EXPECT_EQ(TruthTable::from_index(2, 3, 5).values, (std::vector<std::size_t>{1, 2}));
}

TEST(Database, InsertOnceAndPrint) {
  Database d(4, 2);
  EXPECT_EQ(d.size(), 0u);
  d.insert(3, 0);
  d.insert(0, 1);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.get(3), 0u);
  EXPECT_FALSE(d.get(1).has_value());
  EXPECT_THROW(d.insert(3, 1), std::logic_error);
  EXPECT_EQ(d.to_string(), "{(0,1),(3,0)}");
}

TEST(CompressedOracle, FreshPointAnswersUniformly) {
  const std::size_t N = 3;
  const std::size_t M = 4;
  OracleSession s(OracleMode::Compressed, N, M, basis_xu(N, M, 2, 0));
  s.query("x", "u");
  const auto records = measure_register(s.state(), "u");
  ASSERT_EQ(records.size(), M);
  for (const auto& r : records) EXPECT_NEAR(r.probability, 1.0 / M, 1e-12);
  EXPECT_NEAR(database_mass_above(s.state(), N, 1), 0.0, 1e-15);
}

TEST(CompressedOracle, QueryThenInverseEmptiesDatabase) {
  const std::size_t N = 3;
  const std::size_t M = 3;
  Rng rng = make_rng(8);
  OracleSession s(OracleMode::Compressed, N, M, random_state(xu(N, M), rng));
  s.query("x", "u");
  s.query("x", "u", -1);
  EXPECT_NEAR(database_mass_above(s.state(), N, 0), 0.0, 1e-12);
}

TEST(CompressedOracle, RepeatedQueryIsConsistent) {
  const RegisterLayout l({{"x", Role::Input, 2}, {"u", Role::Output, 3}, {"v", Role::Output, 3}});
  const std::vector<std::size_t> d{1, 0, 0};
  OracleSession s(OracleMode::Compressed, 2, 3, PureState::basis(l, d));
  s.query("x", "u");
  s.query("x", "v");
  const RegisterLayout& joint = s.state().layout();
  const std::size_t u = joint.index("u");
  const std::size_t v = joint.index("v");
  for (const auto& [label, amp] : s.state().entries()) {
    if (std::norm(amp) > 1e-24) EXPECT_EQ(joint.digit(label, u), joint.digit(label, v));
  }
}

TEST(OracleModes, AgreeOnRandomPrograms) {
  EXPECT_LE(oracle_equivalence_worst_tv(40, 99), 1e-9);
}

TEST(OracleModes, SerialAndParallelAgree) {
  EXPECT_EQ(oracle_equivalence_worst_tv(20, 5, Exec::Serial), oracle_equivalence_worst_tv(20, 5, Exec::Parallel));
}

TEST(OracleModes, StdDecompMutationBreaksEquivalence) {
  FaultGuard fault(1);
  EXPECT_GT(oracle_equivalence_worst_tv(40, 99), 0.05);
}

TEST(Session, BudgetIsEnforced) {
  OracleSession s(OracleMode::Exact, 2, 2, basis_xu(2, 2, 0, 0), TruthTable(2, 2, {1, 0}));
  s.begin_window(1);
  s.query("x", "u");
  EXPECT_THROW(s.query("x", "u"), BudgetExceeded);
  s.query_uncounted("x", "u");
  EXPECT_EQ(s.query_count(), 1u);
}

TEST(Session, PurifiedOracleRespectsGuard) {
  unsetenv("QTSL_GUARD_OVERRIDE");
  EXPECT_THROW(OracleSession(OracleMode::Standard, 6, 5, basis_xu(6, 5, 0, 0)), GuardExceeded);
  setenv("QTSL_GUARD_OVERRIDE", "20000", 1);
  EXPECT_NO_THROW(OracleSession(OracleMode::Standard, 6, 5, basis_xu(6, 5, 0, 0)));
  unsetenv("QTSL_GUARD_OVERRIDE");
}

TEST(Session, CompressedHasNoTableGuard) {
  OracleSession s(OracleMode::Compressed, 12, 12, basis_xu(12, 12, 5, 0));
  s.query("x", "u");
  EXPECT_LE(s.state().support(), 12u * 13u);
  EXPECT_EQ(measure_register(s.state(), "u").size(), 12u);
}

TEST(ClassicalQuery, FreshPointBranchesUniformly) {
  OracleSession s(OracleMode::Compressed, 3, 5, basis_xu(3, 5, 0, 0));
  const auto branches = classical_query(s, 1);
  ASSERT_EQ(branches.size(), 5u);
  for (const auto& b : branches) {
    EXPECT_NEAR(b.probability, 0.2, 1e-12);
    const auto again = classical_query(b.session, 1);
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0].value, b.value);
  }
}

TEST(BoundedDatabase, NoMassAboveQueryCount) {
  for (std::size_t i = 0; i < 10; ++i) {
    Rng rng = make_rng(123, i);
    const QueryProgram p = random_program(3, 2, 4, rng);
    OracleSession s(OracleMode::Compressed, 3, 2, PureState::zero(RegisterLayout(p.registers)));
    apply_steps(s, p.steps);
    EXPECT_LE(database_mass_above(s.state(), 3, p.queries()), 1e-12);
  }
}
