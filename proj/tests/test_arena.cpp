#include <gtest/gtest.h>

#include "qtsl/adversaries.hpp"
#include "qtsl/arena.hpp"
#include "qtsl/parallel.hpp"

using namespace qtsl;

namespace {

RunOptions exact_options(Exec exec = Exec::Parallel) {
  RunOptions o;
  o.method = RunOptions::Method::Exact;
  o.exec = exec;
  return o;
}

std::vector<std::pair<TruthTable, double>> identity_table(std::size_t N) {
  std::vector<std::size_t> v(N);
  for (std::size_t x = 0; x < N; ++x) v[x] = x;
  return {{TruthTable(N, N, v), 1.0}};
}

OracleSession answer_session(const PureState& answer) {
  return OracleSession(OracleMode::Exact, 2, 2, answer, TruthTable(2, 2, {0, 1}));
}

const RegisterLayout kAnswer({{"a", Role::Answer, 2}});

}  // namespace

TEST(Wilson, MatchesReferenceInterval) {
  const Estimate e = wilson(50, 100);
  EXPECT_NEAR(e.ci_low, 0.40383, 5e-5);
  EXPECT_NEAR(e.ci_high, 0.59617, 5e-5);
  const Estimate zero = wilson(0, 20);
  EXPECT_EQ(zero.ci_low, 0.0);
  EXPECT_GT(zero.ci_high, 0.0);
  EXPECT_LE(zero.ci_low, zero.mean);
}

TEST(Wilson, ExactEstimateHasZeroWidth) {
  const Estimate e = exact_estimate(0.3, 10);
  EXPECT_TRUE(e.exact);
  EXPECT_EQ(e.ci_low, e.mean);
  EXPECT_EQ(e.ci_high, e.mean);
}

TEST(RunSingle, ConstantAnswerWinsWhenRangeIsTrivial) {
  const GameSpec g = owf_y_game(3, 1);
  const Transcript t = run_single(g, constant_guesser(g, 2), OracleMode::Exact, 5);
  EXPECT_TRUE(t.win);
  ASSERT_EQ(t.rounds.size(), 1u);
  EXPECT_TRUE(t.rounds[0].bit);
}

TEST(RunSingle, GroverOnUniquePreimageIsCertain) {
  RunOptions o = exact_options();
  o.tables = identity_table(4);
  EXPECT_NEAR(single_win_probability(owf_y_game(4, 4), grover_invert(4, 4, 1), o), 1.0, 1e-12);
}

TEST(RunMulti, PredictionGuessingConvergesToOneOverM) {
  const GameSpec g = prediction_game(5);
  RunOptions o;
  o.method = RunOptions::Method::MonteCarlo;
  o.trials = 4000;
  o.seed = 17;
  const Estimate e = estimate_win(run_multi_instance(g, random_guesser(g), o));
  EXPECT_LE(e.ci_low, 0.2);
  EXPECT_GE(e.ci_high, 0.2);
}

TEST(RunMulti, TranscriptsRespectSequencingAndConjunction) {
  RunOptions o;
  o.method = RunOptions::Method::MonteCarlo;
  o.trials = 50;
  o.keep_transcripts = true;
  o.mode = OracleMode::Compressed;
  const auto set = run_multi_instance(owf_y_game(3, 3), iterated_grover_multi(3, 1, 3, 3), o);
  ASSERT_EQ(set.samples.size(), 50u);
  for (const auto& t : set.samples) {
    bool all = true;
    for (std::size_t i = 0; i < t.rounds.size(); ++i) {
      all = all && t.rounds[i].bit;
      EXPECT_LT(t.rounds[i].issued_seq, t.rounds[i].measured_seq);
      if (i > 0) EXPECT_GT(t.rounds[i].issued_seq, t.rounds[i - 1].measured_seq);
      EXPECT_LE(t.rounds[i].queries, 2u);
    }
    EXPECT_EQ(t.win, all);
    const auto j = t.to_json();
    EXPECT_EQ(j.at("rounds").size(), 3u);
  }
}

TEST(RunMulti, MonteCarloIndependentOfWorkerCount) {
  RunOptions o;
  o.method = RunOptions::Method::MonteCarlo;
  o.trials = 300;
  o.seed = 4;
  const GameSpec g = owf_y_game(4, 4);
  const auto adv = iterated_grover_multi(2, 1, 4, 4);
  set_worker_count(1);
  const auto a = run_multi_instance(g, adv, o);
  set_worker_count(3);
  const auto b = run_multi_instance(g, adv, o);
  set_worker_count(0);
  o.exec = Exec::Serial;
  const auto c = run_multi_instance(g, adv, o);
  EXPECT_EQ(a.patterns, b.patterns);
  EXPECT_EQ(a.patterns, c.patterns);
}

TEST(RunMulti, ExactSerialEqualsParallel) {
  const GameSpec g = salt_wrap(prediction_game(2), 4);
  const auto adv = salted_prediction_attack(4, 2, 1, 1);
  const auto a = run_multi_instance(g, adv, exact_options(Exec::Serial));
  const auto b = run_multi_instance(g, adv, exact_options(Exec::Parallel));
  ASSERT_EQ(a.patterns.size(), b.patterns.size());
  for (const auto& [k, v] : a.patterns) EXPECT_NEAR(v, b.patterns.at(k), 1e-15);
}

TEST(RunMulti, FiberClassesMatchFullEnumeration) {
  const GameSpec g = owf_y_game(4, 4);
  const auto adv = iterated_grover_multi(2, 1, 4, 4);
  RunOptions full = exact_options();
  RunOptions fiber = exact_options();
  fiber.tables = fiber_classes(4, 4);
  const double a = estimate_win(run_multi_instance(g, adv, full)).mean;
  const double b = estimate_win(run_multi_instance(g, adv, fiber)).mean;
  EXPECT_NEAR(a, b, 1e-12);
  double total = 0.0;
  for (const auto& [t, w] : fiber_classes(8, 8)) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(fiber_classes(8, 8).size(), 22u);
}

TEST(RunMulti, ModesAgreeForGrover) {
  const GameSpec g = owf_y_game(3, 3);
  double ref = -1;
  for (auto mode : {OracleMode::Exact, OracleMode::Standard, OracleMode::Phase, OracleMode::Compressed}) {
    RunOptions o = exact_options();
    o.mode = mode;
    const double p = estimate_win(run_multi_instance(g, iterated_grover_multi(2, 1, 3, 3), o)).mean;
    if (ref < 0) ref = p;
    EXPECT_NEAR(p, ref, 1e-10) << to_string(mode);
  }
}

TEST(RunMulti, ProductLawForIndependentRounds) {
  AdversaryProgram adv;
  adv.name = "independent";
  adv.rounds = 2;
  adv.budget = 1;
  ClassicalBody body;
  body.coins = 2;
  body.online = [](ClassicalRound& ctx) -> std::size_t {
    if (ctx.round == 0) return ctx.coin;
    return *ctx.oracle.query(0) == static_cast<std::size_t>(ctx.challenge.at(0)) ? 0 : 1;
  };
  adv.body = body;
  const auto set = run_multi_instance(owf_y_game(2, 2), adv, exact_options());
  // Round 1: uniform guess, 1/2. Round 2: preimage found unless H(0) != y and H(1) != y, 3/4.
  EXPECT_NEAR(estimate_win(set).mean, 0.5 * 0.75, 1e-12);
  for (std::uint32_t b1 : {0u, 1u}) {
    EXPECT_NEAR(conditional_round_success(set, 2, [b1](std::uint32_t b) { return b == b1; }).mean, 0.75, 1e-12);
  }
  EXPECT_NEAR(conditional_round_success(set, 1, [](std::uint32_t) { return true; }).mean, 0.5, 1e-12);
}

TEST(RunMulti, ZeroSupportConditionThrows) {
  const GameSpec g = owf_y_game(2, 1);
  const auto set = run_multi_instance(g, constant_guesser(g, 0, 2), exact_options());
  EXPECT_THROW(conditional_round_success(set, 2, [](std::uint32_t b) { return b == 0; }), std::domain_error);
}

TEST(RunMulti, BudgetViolationAborts) {
  AdversaryProgram adv;
  adv.name = "greedy";
  adv.budget = 1;
  ClassicalBody body;
  body.online = [](ClassicalRound& ctx) -> std::size_t {
    ctx.oracle.query(0);
    ctx.oracle.query(1);
    return 0;
  };
  adv.body = body;
  EXPECT_THROW(run_multi_instance(owf_y_game(2, 2), adv, exact_options()), BudgetExceeded);
}

TEST(RunMulti, StoreFirstAdviceMatchesHalfPlusOneOverTwoN) {
  for (std::size_t N : {2, 4, 8}) {
    const double p = estimate_win(run_multi_instance(yaobox_game(N), yaobox_store_first(N), exact_options())).mean;
    EXPECT_NEAR(p, 0.5 + 0.5 / static_cast<double>(N), 1e-12) << N;
  }
}

TEST(SuperposedVerify, HalfCorrectAnswerCollapses) {
  const double h = std::sqrt(0.5);
  const OracleSession s = answer_session(PureState(kAnswer, {{0, h}, {1, h}}));
  const auto branches = challenger_verify_superposed(s, "a", owf_y_game(2, 2), 0);
  ASSERT_EQ(branches.size(), 2u);
  for (const auto& b : branches) {
    EXPECT_NEAR(b.probability, 0.5, 1e-12);
    EXPECT_EQ(definite_value(b.session.state(), "a"), b.bit ? 0u : 1u);
  }
}

TEST(SuperposedVerify, ClassicalAnswerIsUntouched) {
  for (std::size_t a = 0; a < 2; ++a) {
    const PureState in = PureState(kAnswer, {{a, 1.0}});
    const auto branches = challenger_verify_superposed(answer_session(in), "a", owf_y_game(2, 2), 1);
    ASSERT_EQ(branches.size(), 1u);
    EXPECT_EQ(branches[0].bit, a == 1);
    EXPECT_NEAR(trace_distance_pure(branches[0].session.state(), answer_session(in).state()), 0.0, 1e-9);
  }
}

TEST(SuperposedVerify, CertainAnswerIsGentle) {
  const RegisterLayout l({{"a", Role::Answer, 2}, {"w", Role::Workspace, 3}});
  const double h = std::sqrt(0.5);
  // a = 1 always (correct for y = 1), entangled with a workspace.
  const std::vector<std::size_t> d0{1, 0};
  const std::vector<std::size_t> d2{1, 2};
  const PureState in(l, {{l.encode(d0), h}, {l.encode(d2), Complex{0.0, h}}});
  const OracleSession s(OracleMode::Exact, 2, 2, in, TruthTable(2, 2, {0, 1}));
  const auto branches = challenger_verify_superposed(s, "a", owf_y_game(2, 2), 1);
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_TRUE(branches[0].bit);
  EXPECT_LE(trace_distance_pure(branches[0].session.state(), s.state()), 1e-9);
}

TEST(SuperposedVerify, Idempotent) {
  const double h = std::sqrt(0.5);
  const OracleSession s = answer_session(PureState(kAnswer, {{0, h}, {1, h}}));
  for (const auto& b : challenger_verify_superposed(s, "a", owf_y_game(2, 2), 0)) {
    const auto again = challenger_verify_superposed(b.session, "a", owf_y_game(2, 2), 0);
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0].bit, b.bit);
  }
}

TEST(SingleVsMulti, OneRoundIsTheSingleGame) {
  for (auto mode : {OracleMode::Exact, OracleMode::Compressed}) {
    RunOptions o = exact_options();
    o.mode = mode;
    const GameSpec g = owf_y_game(3, 2);
    const auto adv = grover_invert(3, 2, 1);
    EXPECT_NEAR(estimate_win(run_multi_instance(g, adv, o)).mean, single_win_probability(g, adv, o), 1e-12);
  }
}
