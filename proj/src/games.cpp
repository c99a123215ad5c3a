#include "qtsl/games.hpp"

namespace qtsl {

namespace {

void require_positive(std::size_t N, std::size_t M) {
  if (N < 1 || M < 1) throw std::invalid_argument("games need N, M >= 1");
}

QueryResponse plain_query(std::size_t, std::size_t x) { return QueryResponse::oracle(x); }

}  // namespace

GameSpec owf_game(std::size_t N, std::size_t M) {
  require_positive(N, M);
  GameSpec g;
  g.name = "owf";
  g.N = g.domain = N;
  g.M = M;
  g.randomness = N;
  g.answers = N;
  g.is_public = true;
  g.t_ver = 2;
  g.t_pub = 1;
  g.samp_points = [](std::size_t x) { return std::vector<std::size_t>{x}; };
  g.samp = [](std::size_t, Values v) { return Challenge{static_cast<std::int64_t>(v[0])}; };
  g.query = plain_query;
  g.ver_points = [](std::size_t x, std::size_t a) { return std::vector<std::size_t>{x, a}; };
  g.ver = [](std::size_t, std::size_t, Values v) { return v[0] == v[1]; };
  g.pub_points = [](const Challenge&, std::size_t a) { return std::vector<std::size_t>{a}; };
  g.pub_ver = [](const Challenge& ch, std::size_t, Values v) { return static_cast<std::int64_t>(v[0]) == ch.at(0); };
  return g;
}

GameSpec owf_y_game(std::size_t N, std::size_t M) {
  require_positive(N, M);
  GameSpec g;
  g.name = "owf_y";
  g.N = g.domain = N;
  g.M = M;
  g.randomness = M;
  g.answers = N;
  g.is_public = true;
  g.t_ver = 1;
  g.t_pub = 1;
  g.samp_points = [](std::size_t) { return std::vector<std::size_t>{}; };
  g.samp = [](std::size_t y, Values) { return Challenge{static_cast<std::int64_t>(y)}; };
  g.query = plain_query;
  g.ver_points = [](std::size_t, std::size_t a) { return std::vector<std::size_t>{a}; };
  g.ver = [](std::size_t y, std::size_t, Values v) { return v[0] == y; };
  g.pub_points = [](const Challenge&, std::size_t a) { return std::vector<std::size_t>{a}; };
  g.pub_ver = [](const Challenge& ch, std::size_t, Values v) { return static_cast<std::int64_t>(v[0]) == ch.at(0); };
  return g;
}

GameSpec prg_game(std::size_t N, std::size_t M) {
  require_positive(N, M);
  if (N > M) throw std::invalid_argument("prg game needs N <= M");
  GameSpec g;
  g.name = "prg";
  g.N = g.domain = N;
  g.M = M;
  g.randomness = 2 * N * M;
  g.answers = 2;
  g.is_decision = true;
  g.t_ver = 0;
  if (N == M) g.warnings.push_back("prg with N == M admitted for testing; the game is defined for N < M");
  g.samp_points = [N, M](std::size_t r) {
    const std::size_t b = r / (N * M);
    const std::size_t x = (r / M) % N;
    return b == 0 ? std::vector<std::size_t>{x} : std::vector<std::size_t>{};
  };
  g.samp = [N, M](std::size_t r, Values v) {
    const std::size_t b = r / (N * M);
    const std::size_t y = r % M;
    return Challenge{static_cast<std::int64_t>(b == 0 ? v[0] : y)};
  };
  g.query = plain_query;
  g.ver_points = [](std::size_t, std::size_t) { return std::vector<std::size_t>{}; };
  g.ver = [N, M](std::size_t r, std::size_t a, Values) { return a == r / (N * M); };
  return g;
}

GameSpec yaobox_game(std::size_t N) {
  require_positive(N, 2);
  GameSpec g;
  g.name = "yaobox";
  g.N = g.domain = N;
  g.M = 2;
  g.randomness = N;
  g.answers = 2;
  g.is_decision = true;
  g.t_ver = 1;
  g.samp_points = [](std::size_t) { return std::vector<std::size_t>{}; };
  g.samp = [](std::size_t x, Values) { return Challenge{static_cast<std::int64_t>(x)}; };
  g.query = [](std::size_t x, std::size_t q) { return q == x ? QueryResponse::fixed(1) : QueryResponse::oracle(q); };
  g.ver_points = [](std::size_t x, std::size_t) { return std::vector<std::size_t>{x}; };
  g.ver = [](std::size_t, std::size_t b, Values v) { return v[0] == b; };
  return g;
}

GameSpec crh_game(std::size_t N, std::size_t M) {
  require_positive(N, M);
  if (N < 2) throw std::invalid_argument("crh game needs N >= 2");
  GameSpec g;
  g.name = "crh";
  g.N = g.domain = N;
  g.M = M;
  g.randomness = 1;
  g.answers = N * N;
  g.is_public = true;
  g.t_ver = 2;
  g.t_pub = 2;
  g.samp_points = [](std::size_t) { return std::vector<std::size_t>{}; };
  g.samp = [](std::size_t, Values) { return Challenge{}; };
  g.query = plain_query;
  g.ver_points = [N](std::size_t, std::size_t a) { return std::vector<std::size_t>{a / N, a % N}; };
  g.ver = [N](std::size_t, std::size_t a, Values v) { return a / N != a % N && v[0] == v[1]; };
  g.pub_points = [N](const Challenge&, std::size_t a) { return std::vector<std::size_t>{a / N, a % N}; };
  g.pub_ver = [N](const Challenge&, std::size_t a, Values v) { return a / N != a % N && v[0] == v[1]; };
  return g;
}

GameSpec prediction_game(std::size_t M) {
  require_positive(1, M);
  GameSpec g;
  g.name = "predict";
  g.N = g.domain = 1;
  g.M = M;
  g.randomness = 1;
  g.answers = M;
  g.t_ver = 1;
  g.samp_points = [](std::size_t) { return std::vector<std::size_t>{}; };
  g.samp = [](std::size_t, Values) { return Challenge{}; };
  g.query = [](std::size_t, std::size_t) { return QueryResponse::bottom(); };
  g.ver_points = [](std::size_t, std::size_t) { return std::vector<std::size_t>{0}; };
  g.ver = [](std::size_t, std::size_t a, Values v) { return v[0] == a; };
  return g;
}

GameSpec salt_wrap(const GameSpec& inner, std::size_t K) {
  if (K < 1) throw std::invalid_argument("salt count K must be >= 1");
  GameSpec g = inner;
  g.name = "salted:" + inner.name;
  g.K = K;
  g.domain = K * inner.domain;
  g.randomness = K * inner.randomness;
  const std::size_t n = inner.domain;
  const std::size_t R = inner.randomness;
  auto lift = [n](std::size_t s, std::vector<std::size_t> pts) {
    for (auto& p : pts) p = s * n + p;
    return pts;
  };
  g.samp_points = [inner, lift, R](std::size_t r) { return lift(r / R, inner.samp_points(r % R)); };
  g.samp = [inner, R](std::size_t r, Values v) {
    Challenge ch{static_cast<std::int64_t>(r / R)};
    const Challenge in = inner.samp(r % R, v);
    ch.insert(ch.end(), in.begin(), in.end());
    return ch;
  };
  g.query = [inner, n, R](std::size_t r, std::size_t x) {
    const std::size_t s = r / R;
    if (x / n != s) return QueryResponse::oracle(x);
    QueryResponse resp = inner.query(r % R, x % n);
    if (resp.kind == QueryResponse::Kind::Oracle) resp.value = s * n + resp.value;
    return resp;
  };
  g.ver_points = [inner, lift, R](std::size_t r, std::size_t a) { return lift(r / R, inner.ver_points(r % R, a)); };
  g.ver = [inner, R](std::size_t r, std::size_t a, Values v) { return inner.ver(r % R, a, v); };
  if (inner.is_public) {
    g.pub_points = [inner, lift](const Challenge& ch, std::size_t a) {
      const Challenge rest(ch.begin() + 1, ch.end());
      return lift(static_cast<std::size_t>(ch.at(0)), inner.pub_points(rest, a));
    };
    g.pub_ver = [inner](const Challenge& ch, std::size_t a, Values v) {
      const Challenge rest(ch.begin() + 1, ch.end());
      return inner.pub_ver(rest, a, v);
    };
  }
  return g;
}

GameSpec make_game(const std::string& name, const nlohmann::json& params) {
  auto get = [&](const char* key, std::size_t fallback) {
    return params.contains(key) ? params.at(key).get<std::size_t>() : fallback;
  };
  const std::string salted = "salted:";
  if (name.rfind(salted, 0) == 0) return salt_wrap(make_game(name.substr(salted.size()), params), get("K", 1));
  const std::size_t N = get("N", 1);
  const std::size_t M = get("M", 2);
  if (name == "owf") return owf_game(N, M);
  if (name == "owf_y") return owf_y_game(N, M);
  if (name == "prg") return prg_game(N, M);
  if (name == "yaobox") return yaobox_game(N);
  if (name == "crh") return crh_game(N, M);
  if (name == "predict") return prediction_game(M);
  throw std::invalid_argument("unknown game '" + name + "'");
}

std::vector<std::size_t> read_points(const TruthTable& table, std::span<const std::size_t> points) {
  std::vector<std::size_t> v;
  v.reserve(points.size());
  for (auto p : points) v.push_back(table(p));
  return v;
}

Challenge sample_challenge(const GameSpec& game, std::size_t r, const TruthTable& table) {
  const auto pts = game.samp_points(r);
  return game.samp(r, read_points(table, pts));
}

bool verify(const GameSpec& game, std::size_t r, std::size_t answer, const TruthTable& table) {
  if (answer >= game.answers) return false;
  const auto pts = game.ver_points(r, answer);
  if (pts.size() > game.t_ver) throw std::logic_error(game.name + " verifier reads more than t_ver points");
  return game.ver(r, answer, read_points(table, pts));
}

QueryFilter query_filter(const GameSpec& game, std::size_t r) {
  auto q = game.query;
  return [q, r](std::size_t x) { return q(r, x); };
}

std::optional<std::size_t> game_query(const GameSpec& game, std::size_t r, std::size_t x, const TruthTable& table) {
  const QueryResponse resp = game.query(r, x);
  switch (resp.kind) {
    case QueryResponse::Kind::Oracle: return table(resp.value);
    case QueryResponse::Kind::Fixed: return resp.value;
    case QueryResponse::Kind::Bottom: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace qtsl
