#include <gtest/gtest.h>

#include "qtsl/adversaries.hpp"
#include "qtsl/bruteforce.hpp"

using namespace qtsl;

namespace {

BruteForceOptions opts(std::size_t S, std::size_t T, std::size_t g, Exec exec = Exec::Parallel) {
  BruteForceOptions o;
  o.S = S;
  o.T = T;
  o.g = g;
  o.exec = exec;
  return o;
}

}  // namespace

TEST(BruteForce, PredictionWithoutAdviceIsAGuess) {
  EXPECT_DOUBLE_EQ(brute_force_best(prediction_game(2), opts(0, 0, 1)).value, 0.5);
  EXPECT_DOUBLE_EQ(brute_force_best(prediction_game(3), opts(0, 1, 1)).value, 1.0 / 3.0);
}

TEST(BruteForce, OneBitOfAdviceSolvesBinaryPrediction) {
  const auto r = brute_force_best(prediction_game(2), opts(1, 0, 1));
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  ASSERT_EQ(r.advice.size(), 2u);
  EXPECT_NE(r.advice[0], r.advice[1]);
}

TEST(BruteForce, YaoBoxOneBitTwoPoints) {
  // Storing H(0) wins challenge 0 always and challenge 1 half the time.
  EXPECT_DOUBLE_EQ(brute_force_best(yaobox_game(2), opts(1, 0, 1)).value, 0.75);
  // With one query the other point is visible but uninformative.
  EXPECT_DOUBLE_EQ(brute_force_best(yaobox_game(2), opts(0, 1, 1)).value, 0.5);
}

TEST(BruteForce, SaltCollisionClosedForm) {
  // Two rounds share a salt with probability 1/K; the repeated salt then wins for free.
  const double K = 16;
  EXPECT_DOUBLE_EQ(brute_force_best(salt_wrap(prediction_game(2), 16), opts(0, 0, 2)).value,
                   (1 / K) * 0.5 + (1 - 1 / K) * 0.25);
}

TEST(BruteForce, DominatesTheConstructedAttack) {
  const GameSpec g = salt_wrap(prediction_game(2), 4);
  RunOptions o;
  o.method = RunOptions::Method::Exact;
  for (std::size_t S = 1; S <= 1; ++S) {
    const double attack = estimate_win(run_multi_instance(g, salted_prediction_attack(4, 2, S, 1), o)).mean;
    EXPECT_GE(brute_force_best(g, opts(S, 1, 1)).value + 1e-12, attack) << S;
  }
}

TEST(BruteForce, SerialEqualsParallel) {
  const GameSpec g = salt_wrap(prediction_game(2), 2);
  EXPECT_EQ(brute_force_best(g, opts(1, 1, 2, Exec::Serial)).wins, brute_force_best(g, opts(1, 1, 2, Exec::Parallel)).wins);
  EXPECT_EQ(brute_force_best(owf_y_game(2, 2), opts(0, 1, 2, Exec::Serial)).wins,
            brute_force_best(owf_y_game(2, 2), opts(0, 1, 2, Exec::Parallel)).wins);
}

TEST(BruteForce, GuardsRejectHugeSpaces) {
  EXPECT_THROW(brute_force_best(owf_game(8, 8), opts(0, 1, 1)), GuardExceeded);
  EXPECT_THROW(brute_force_best(salt_wrap(prediction_game(2), 16), opts(2, 0, 1)), GuardExceeded);
  EXPECT_THROW(brute_force_best(prediction_game(2), opts(0, 0, 0)), std::invalid_argument);
}
