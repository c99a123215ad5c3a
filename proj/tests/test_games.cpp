#include <gtest/gtest.h>

#include "qtsl/games.hpp"

using namespace qtsl;

TEST(YaoBox, ChallengePointIsHidden) {
  const GameSpec g = yaobox_game(4);
  const TruthTable H(4, 2, {0, 1, 1, 0});
  for (std::size_t x = 0; x < 4; ++x) {
    EXPECT_EQ(sample_challenge(g, x, H), Challenge{static_cast<std::int64_t>(x)});
    for (std::size_t q = 0; q < 4; ++q) {
      const auto v = game_query(g, x, q, H);
      ASSERT_TRUE(v.has_value());
      EXPECT_EQ(*v, q == x ? 1u : H(q));
    }
    EXPECT_TRUE(verify(g, x, H(x), H));
    EXPECT_FALSE(verify(g, x, 1 - H(x), H));
  }
}

TEST(OwfY, AcceptsAnyPreimage) {
  const GameSpec g = owf_y_game(3, 2);
  const TruthTable H(3, 2, {1, 0, 1});
  EXPECT_TRUE(verify(g, 1, 0, H));
  EXPECT_TRUE(verify(g, 1, 2, H));
  EXPECT_FALSE(verify(g, 1, 1, H));
  EXPECT_FALSE(verify(g, 1, 7, H));
}

TEST(Owf, ChallengeIsImageOfSampledPoint) {
  const GameSpec g = owf_game(3, 4);
  const TruthTable H(3, 4, {3, 0, 2});
  for (std::size_t r = 0; r < g.randomness; ++r) {
    const Challenge ch = sample_challenge(g, r, H);
    ASSERT_EQ(ch.size(), 1u);
    bool some = false;
    for (std::size_t x = 0; x < 3; ++x) some = some || (H(x) == static_cast<std::size_t>(ch[0]) && verify(g, r, x, H));
    EXPECT_TRUE(some);
  }
}

TEST(Prg, DomainMustNotExceedRange) {
  EXPECT_THROW(prg_game(4, 2), std::invalid_argument);
  EXPECT_FALSE(prg_game(2, 2).warnings.empty());
  EXPECT_TRUE(prg_game(2, 4).warnings.empty());
}

TEST(Crh, RejectsTrivialCollision) {
  const GameSpec g = crh_game(3, 2);
  const TruthTable H(3, 2, {1, 1, 0});
  EXPECT_TRUE(verify(g, 0, 0 * 3 + 1, H));
  EXPECT_FALSE(verify(g, 0, 0 * 3 + 0, H));
  EXPECT_FALSE(verify(g, 0, 0 * 3 + 2, H));
}

TEST(Prediction, NoOnlineAccess) {
  const GameSpec g = prediction_game(3);
  const TruthTable H(1, 3, {2});
  EXPECT_FALSE(game_query(g, 0, 0, H).has_value());
  EXPECT_TRUE(verify(g, 0, 2, H));
}

TEST(Salting, SingleSaltBehavesLikeInnerGame) {
  const GameSpec inner = yaobox_game(3);
  const GameSpec salted = salt_wrap(inner, 1);
  for (std::uint64_t h = 0; h < 8; ++h) {
    const TruthTable H = TruthTable::from_index(3, 2, h);
    for (std::size_t r = 0; r < 3; ++r) {
      Challenge expect{0};
      const Challenge in = sample_challenge(inner, r, H);
      expect.insert(expect.end(), in.begin(), in.end());
      EXPECT_EQ(sample_challenge(salted, r, H), expect);
      for (std::size_t x = 0; x < 3; ++x) EXPECT_EQ(game_query(salted, r, x, H), game_query(inner, r, x, H));
      for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(verify(salted, r, a, H), verify(inner, r, a, H));
    }
  }
}

TEST(Salting, OtherSaltsAreOrdinaryOraclePoints) {
  const GameSpec g = salt_wrap(yaobox_game(2), 2);
  const TruthTable H(4, 2, {0, 1, 1, 0});
  // r = 1 * 2 + 0: salt 1, challenge x = 0, i.e. global point 2.
  EXPECT_EQ(game_query(g, 2, 2, H), 1u);
  EXPECT_EQ(game_query(g, 2, 0, H), 0u);
  EXPECT_EQ(game_query(g, 2, 3, H), 0u);
  EXPECT_TRUE(verify(g, 2, 1, H));
}

TEST(Factory, BuildsByName) {
  EXPECT_EQ(make_game("owf", {{"N", 4}, {"M", 3}}).randomness, 4u);
  EXPECT_EQ(make_game("salted:predict", {{"M", 4}, {"K", 8}}).domain, 8u);
  EXPECT_EQ(make_game("yaobox", {{"N", 5}}).answers, 2u);
  EXPECT_THROW(make_game("nope", nlohmann::json::object()), std::invalid_argument);
}
