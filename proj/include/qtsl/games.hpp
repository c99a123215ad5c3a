#pragma once

// Challenger triples (Samp, Query, Ver) as oracle-access programs. Samp and
// Ver first declare which oracle points they read, then decide from the
// values, so they can run against a table, a purified oracle or a database.

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtsl/oracles.hpp"

namespace qtsl {

using Challenge = std::vector<std::int64_t>;
using Values = std::span<const std::size_t>;

struct GameSpec {
  std::string name;
  std::size_t N = 1;  // inner domain size
  std::size_t M = 1;
  std::size_t K = 1;  // salt count, 1 when unsalted
  std::size_t domain = 1;      // oracle domain, K * N for salted games
  std::size_t randomness = 1;  // |R|
  std::size_t answers = 1;     // answer alphabet size
  bool is_decision = false;
  bool is_public = false;
  std::size_t t_ver = 0;
  std::size_t t_pub = 0;  // queries of the public verifier
  std::vector<std::string> warnings;

  std::function<std::vector<std::size_t>(std::size_t r)> samp_points;
  std::function<Challenge(std::size_t r, Values values)> samp;
  std::function<QueryResponse(std::size_t r, std::size_t x)> query;
  std::function<std::vector<std::size_t>(std::size_t r, std::size_t answer)> ver_points;
  std::function<bool(std::size_t r, std::size_t answer, Values values)> ver;
  std::function<std::vector<std::size_t>(const Challenge& ch, std::size_t answer)> pub_points;
  std::function<bool(const Challenge& ch, std::size_t answer, Values values)> pub_ver;
};

GameSpec owf_game(std::size_t N, std::size_t M);
GameSpec owf_y_game(std::size_t N, std::size_t M);
/// Randomness r = (b * N + x) * M + y. Throws for N > M; N == M adds a warning.
GameSpec prg_game(std::size_t N, std::size_t M);
/// M = 2. Query at the challenge point answers the constant 1.
GameSpec yaobox_game(std::size_t N);
/// Answer code x1 * N + x2.
GameSpec crh_game(std::size_t N, std::size_t M);
GameSpec prediction_game(std::size_t M);
/// Domain [K] x [N] flattened as s * N + x; r = s * |R| + r'; challenge (s, inner...).
GameSpec salt_wrap(const GameSpec& inner, std::size_t K);

/// Builds a game from its CLI name (owf, owf_y, prg, yaobox, crh, predict,
/// salted:<inner>) and a parameter object with N, M, K.
GameSpec make_game(const std::string& name, const nlohmann::json& params);

std::vector<std::size_t> read_points(const TruthTable& table, std::span<const std::size_t> points);
Challenge sample_challenge(const GameSpec& game, std::size_t r, const TruthTable& table);
/// Throws std::logic_error if ver declares more than t_ver points.
bool verify(const GameSpec& game, std::size_t r, std::size_t answer, const TruthTable& table);
QueryFilter query_filter(const GameSpec& game, std::size_t r);
/// Classical query through the game interface; nullopt for a bottom response.
std::optional<std::size_t> game_query(const GameSpec& game, std::size_t r, std::size_t x, const TruthTable& table);

}  // namespace qtsl
