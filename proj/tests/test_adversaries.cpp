#include <gtest/gtest.h>

#include <cmath>

#include "qtsl/adversaries.hpp"

using namespace qtsl;

namespace {

double exact_win(const GameSpec& g, const AdversaryProgram& adv,
                 std::optional<std::vector<std::pair<TruthTable, double>>> tables = std::nullopt,
                 OracleMode mode = OracleMode::Exact) {
  RunOptions o;
  o.method = RunOptions::Method::Exact;
  o.max_worlds = 1e7;
  o.mode = mode;
  o.tables = std::move(tables);
  return estimate_win(run_multi_instance(g, adv, o)).mean;
}

std::vector<std::pair<TruthTable, double>> identity_table(std::size_t N) {
  std::vector<std::size_t> v(N);
  for (std::size_t x = 0; x < N; ++x) v[x] = x;
  return {{TruthTable(N, N, v), 1.0}};
}

}  // namespace

TEST(Grover, ClosedFormAgainstIndependentAngle) {
  // theta = asin(1/2) = pi/6 for N = 4: (2T+1) theta = pi/2 at T = 1.
  EXPECT_NEAR(grover_success(4, 1, 1), 1.0, 1e-15);
  EXPECT_NEAR(grover_success(4, 1, 0), 0.25, 1e-15);
  EXPECT_NEAR(grover_success(16, 1, 3), std::pow(std::sin(7 * std::asin(0.25)), 2), 1e-15);
}

TEST(Grover, SimulationMatchesClosedFormOnUniquePreimages) {
  for (std::size_t N : {2, 4, 8}) {
    for (std::size_t T = 0; T <= 2; ++T) {
      EXPECT_NEAR(exact_win(owf_y_game(N, N), grover_invert(N, N, T), identity_table(N)), grover_success(N, 1, T), 1e-9)
          << "N=" << N << " T=" << T;
    }
  }
}

TEST(Grover, SimulationMatchesClosedFormPerChallenge) {
  // H = (0, 0, 1, 2): y = 0 has two preimages, y = 1 and y = 2 one each, y = 3 none.
  const std::vector<std::pair<TruthTable, double>> table{{TruthTable(4, 4, {0, 0, 1, 2}), 1.0}};
  const double expected = (grover_success(4, 2, 1) + 2 * grover_success(4, 1, 1) + 0.0) / 4.0;
  EXPECT_NEAR(exact_win(owf_y_game(4, 4), grover_invert(4, 4, 1), table), expected, 1e-9);
}

TEST(Grover, ModesAgreeOnRandomTables) {
  const GameSpec g = owf_y_game(3, 3);
  const double a = exact_win(g, grover_invert(3, 3, 1));
  EXPECT_NEAR(exact_win(g, grover_invert(3, 3, 1), std::nullopt, OracleMode::Compressed), a, 1e-10);
  EXPECT_NEAR(exact_win(g, grover_invert(3, 3, 1), std::nullopt, OracleMode::Standard), a, 1e-10);
}

TEST(SaltedPrediction, MatchesCoverageFormula) {
  // c = S(T+1) / (K log2 M); success c + (1 - c) / M.
  for (std::size_t S : {1, 2}) {
    for (std::size_t T : {0, 1}) {
      const double c = static_cast<double>(S * (T + 1)) / 4.0;
      EXPECT_NEAR(exact_win(salt_wrap(prediction_game(2), 4), salted_prediction_attack(4, 2, S, T)), c + (1 - c) / 2,
                  1e-12);
    }
  }
}

TEST(SaltedPrediction, RejectsOversizedBlocks) {
  EXPECT_THROW(salted_prediction_attack(2, 2, 2, 1), std::invalid_argument);
}

TEST(Crh, StoredCollisionWinsWhenOneExists) {
  // N = 2, M = 1: every table collides; M = 2: half the tables do.
  EXPECT_NEAR(exact_win(crh_game(2, 1), crh_store_collision(2, 2, 1, 1)), 1.0, 1e-12);
  EXPECT_NEAR(exact_win(crh_game(2, 2), crh_store_collision(2, 2, 2, 1)), 0.5, 1e-12);
}

TEST(Prg, FirstPointDistinguisher) {
  // Real case wins when x = 0 or H(0) = H(x); random case wins unless y = H(0).
  const std::size_t N = 2;
  const std::size_t M = 4;
  const double real = 1.0 / N + (1.0 - 1.0 / N) / M;
  const double random = 1.0 - 1.0 / M;
  EXPECT_NEAR(exact_win(prg_game(N, M), prg_first_point(N, M)), 0.5 * real + 0.5 * random, 1e-12);
}

TEST(Guessers, ConstantAndRandom) {
  const GameSpec g = prediction_game(3);
  EXPECT_NEAR(exact_win(g, constant_guesser(g, 1)), 1.0 / 3, 1e-12);
  EXPECT_NEAR(exact_win(g, random_guesser(g, 2)), 1.0 / 9, 1e-12);
}

TEST(RemoveAdvice, KeepsAtLeastTwoToMinusS) {
  for (std::size_t N = 1; N <= 4; ++N) {
    const auto adv = yaobox_store_first(N);
    const double with = exact_win(yaobox_game(N), adv);
    const double without = exact_win(yaobox_game(N), remove_advice(adv));
    EXPECT_GE(without + 1e-12, with / 2.0) << N;
    EXPECT_NEAR(without, 0.5, 1e-12);
  }
}

TEST(RemoveAdvice, QuantumAdviceBecomesUniformBasisState) {
  const auto adv = noisy_owf_advice(2, 2, 0.0);
  EXPECT_NEAR(exact_win(owf_game(2, 2), adv), 1.0, 1e-12);
  const double without = exact_win(owf_game(2, 2), remove_advice(adv));
  EXPECT_GE(without + 1e-12, std::ldexp(1.0, -static_cast<int>(adv.advice.bits)));
}

TEST(RepeatPerInstance, SquaresPerTableSuccess) {
  for (std::uint64_t h = 0; h < 4; ++h) {
    const std::vector<std::pair<TruthTable, double>> t{{TruthTable::from_index(2, 2, h), 1.0}};
    const double one = exact_win(yaobox_game(2), yaobox_store_first(2), t);
    const double two = exact_win(yaobox_game(2), repeat_per_instance(yaobox_store_first(2), 2), t);
    EXPECT_NEAR(two, one * one, 1e-12);
  }
}

TEST(Wrapper, NoisyAdviceGainsFromPublicVerification) {
  const GameSpec g = owf_game(2, 2);
  const auto inner = noisy_owf_advice(2, 2, 0.1);
  const double repeat = exact_win(g, repeat_per_instance(inner, 2));
  const double wrapped = exact_win(g, public_verif_wrapper(inner, 2, g, 2));
  EXPECT_GT(wrapped, repeat);
  EXPECT_EQ(wrapper_advice_registers(inner, 2).size(), 2 * inner.advice.registers.size());
}

TEST(Wrapper, BudgetCoversVerifierQueries) {
  const GameSpec g = owf_game(2, 2);
  const auto inner = noisy_owf_advice(2, 2, 0.1);
  const auto w = public_verif_wrapper(inner, 3, g, 1);
  EXPECT_EQ(w.budget, 2 * 3 * (inner.budget + g.t_pub));
}

TEST(Factory, UnknownNameThrows) {
  EXPECT_THROW(make_adversary("nope", nlohmann::json::object(), owf_game(2, 2), 0, 0, 1), std::invalid_argument);
  EXPECT_EQ(make_adversary("grover", nlohmann::json::object(), owf_y_game(4, 4), 0, 1, 3).rounds, 3u);
}

TEST(Quarantine, ParallelSearchBeatsSequentialOnUniquePreimages) {
  const auto tables = identity_table(8);
  const double seq = exact_win(owf_y_game(8, 8), iterated_grover_multi(2, 1, 8, 8), tables);
  EXPECT_GT(quarantine::parallel_grover_win(8, 8, 2, 1, tables), seq);
}
