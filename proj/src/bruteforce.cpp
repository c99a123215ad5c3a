#include "qtsl/bruteforce.hpp"

#include <bit>
#include <cmath>

namespace qtsl {

namespace {

using Bits = std::vector<std::uint64_t>;

/// Per-table counts as bit planes, least significant plane first.
struct Count {
  std::vector<Bits> planes;

  bool empty() const {
    for (const auto& p : planes) {
      for (auto w : p) {
        if (w) return false;
      }
    }
    return true;
  }
};

Count masked(const Count& c, const Bits& mask) {
  Count out;
  out.planes.reserve(c.planes.size());
  for (const auto& p : c.planes) {
    Bits q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] & mask[i];
    out.planes.push_back(std::move(q));
  }
  while (!out.planes.empty() &&
         std::all_of(out.planes.back().begin(), out.planes.back().end(), [](std::uint64_t w) { return w == 0; })) {
    out.planes.pop_back();
  }
  return out;
}

void add_into(Count& acc, const Count& c) {
  const std::size_t words = !acc.planes.empty() ? acc.planes[0].size() : (!c.planes.empty() ? c.planes[0].size() : 0);
  Bits carry(words, 0);
  const std::size_t n = std::max(acc.planes.size(), c.planes.size());
  acc.planes.resize(n, Bits(words, 0));
  for (std::size_t p = 0; p < n; ++p) {
    const Bits* b = p < c.planes.size() ? &c.planes[p] : nullptr;
    for (std::size_t i = 0; i < words; ++i) {
      const std::uint64_t x = acc.planes[p][i];
      const std::uint64_t y = b ? (*b)[i] : 0;
      acc.planes[p][i] = x ^ y ^ carry[i];
      carry[i] = (x & y) | (carry[i] & (x ^ y));
    }
  }
  if (std::any_of(carry.begin(), carry.end(), [](std::uint64_t w) { return w != 0; })) acc.planes.push_back(carry);
}

std::uint64_t weight(const Count& c) {
  std::uint64_t total = 0;
  for (std::size_t p = 0; p < c.planes.size(); ++p) {
    std::uint64_t n = 0;
    for (auto w : c.planes[p]) n += static_cast<std::uint64_t>(std::popcount(w));
    total += n << p;
  }
  return total;
}

std::uint64_t masked_weight(const Count& c, const Bits& mask) {
  std::uint64_t total = 0;
  for (std::size_t p = 0; p < c.planes.size(); ++p) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) n += static_cast<std::uint64_t>(std::popcount(c.planes[p][i] & mask[i]));
    total += n << p;
  }
  return total;
}

class Search {
 public:
  Search(const GameSpec& game, const BruteForceOptions& options, std::uint64_t tables)
      : game_(game), opt_(options), tables_(tables), words_((tables + 63) / 64) {
    const std::size_t R = game.randomness;
    std::map<Challenge, std::size_t> ids;
    samp_.resize(R);
    resp_.assign(R, std::vector<std::vector<Bits>>(game.domain, std::vector<Bits>(game.M + 1, Bits(words_, 0))));
    ver_.assign(R, std::vector<Bits>(game.answers, Bits(words_, 0)));
    for (std::uint64_t h = 0; h < tables; ++h) {
      const TruthTable table = TruthTable::from_index(game.domain, game.M, h);
      const std::uint64_t bit = std::uint64_t{1} << (h % 64);
      const std::size_t word = h / 64;
      for (std::size_t r = 0; r < R; ++r) {
        const Challenge ch = sample_challenge(game, r, table);
        auto [it, fresh] = ids.emplace(ch, ids.size());
        if (fresh) {
          for (auto& s : samp_) s.emplace_back(words_, 0);
        }
        samp_[r][it->second][word] |= bit;
        for (std::size_t x = 0; x < game.domain; ++x) {
          const auto v = game_query(game, r, x, table);
          resp_[r][x][v ? std::min(*v, game.M) : game.M][word] |= bit;
        }
        for (std::size_t a = 0; a < game.answers; ++a) {
          if (verify(game, r, a, table)) ver_[r][a][word] |= bit;
        }
      }
    }
    challenges_ = ids.size();
    remaining_.assign(opt_.g + 1, 1);
    for (std::size_t i = opt_.g; i-- > 0;) remaining_[i] = remaining_[i + 1] * R;
  }

  std::size_t words() const { return words_; }
  std::size_t challenges() const { return challenges_; }

  /// Winning worlds from round i on, given per-table weights w.
  std::uint64_t round(std::size_t i, const Count& w) const {
    std::uint64_t total = 0;
    for (std::size_t ch = 0; ch < challenges_; ++ch) total += challenge(i, w, ch);
    return total;
  }

  std::uint64_t challenge(std::size_t i, const Count& w, std::size_t ch) const {
    std::vector<Count> worlds(game_.randomness);
    bool any = false;
    for (std::size_t r = 0; r < game_.randomness; ++r) {
      worlds[r] = masked(w, samp_[r][ch]);
      any = any || !worlds[r].empty();
    }
    return any ? decide(i, worlds, opt_.T) : 0;
  }

 private:
  std::uint64_t decide(std::size_t i, const std::vector<Count>& worlds, std::size_t t) const {
    const bool last = i + 1 == opt_.g;
    std::uint64_t alive = 0;
    for (const auto& c : worlds) alive += weight(c);
    const std::uint64_t bound = alive * remaining_[i + 1];
    std::uint64_t best = 0;
    for (std::size_t a = 0; a < game_.answers && best < bound; ++a) {
      std::uint64_t v = 0;
      if (last) {
        for (std::size_t r = 0; r < worlds.size(); ++r) {
          if (!worlds[r].planes.empty()) v += masked_weight(worlds[r], ver_[r][a]);
        }
      } else {
        Count next;
        next.planes.assign(1, Bits(words_, 0));
        for (std::size_t r = 0; r < worlds.size(); ++r) {
          if (!worlds[r].planes.empty()) add_into(next, masked(worlds[r], ver_[r][a]));
        }
        v = next.empty() ? 0 : round(i + 1, next);
      }
      best = std::max(best, v);
    }
    if (t == 0) return best;
    for (std::size_t x = 0; x < game_.domain && best < bound; ++x) {
      std::uint64_t v = 0;
      for (std::size_t resp = 0; resp <= game_.M; ++resp) {
        std::vector<Count> sub(worlds.size());
        bool any = false;
        for (std::size_t r = 0; r < worlds.size(); ++r) {
          if (worlds[r].planes.empty()) continue;
          sub[r] = masked(worlds[r], resp_[r][x][resp]);
          any = any || !sub[r].empty();
        }
        if (any) v += decide(i, sub, t - 1);
      }
      best = std::max(best, v);
    }
    return best;
  }

  const GameSpec& game_;
  BruteForceOptions opt_;
  std::uint64_t tables_;
  std::size_t words_;
  std::size_t challenges_ = 0;
  std::vector<std::vector<Bits>> samp_;
  std::vector<std::vector<std::vector<Bits>>> resp_;
  std::vector<std::vector<Bits>> ver_;
  std::vector<std::uint64_t> remaining_;
};

}  // namespace

BruteForceResult brute_force_best(const GameSpec& game, const BruteForceOptions& options) {
  if (options.g < 1 || options.g > 8) throw std::invalid_argument("brute force needs 1 <= g <= 8");
  std::uint64_t tables = 0;
  try {
    tables = table_count(game.domain, game.M);
  } catch (const std::overflow_error&) {
    throw GuardExceeded("M^N overflows the brute-force table guard");
  }
  if (tables > options.max_tables) {
    throw GuardExceeded("brute force over " + std::to_string(tables) + " tables exceeds the guard");
  }
  const double advice_values = std::ldexp(1.0, static_cast<int>(options.S));
  const double maps = std::pow(advice_values, static_cast<double>(tables));
  const double space = static_cast<double>(game.randomness) * static_cast<double>(tables) * maps;
  if (!(space <= options.max_space)) {
    throw GuardExceeded("brute-force search space " + std::to_string(space) + " exceeds the guard");
  }

  const Search search(game, options, tables);
  BruteForceResult result;
  result.worlds = tables;
  for (std::size_t i = 0; i < options.g; ++i) result.worlds *= game.randomness;

  const auto n_maps = static_cast<std::uint64_t>(maps);
  const auto A = static_cast<std::uint64_t>(advice_values);
  auto advice_of = [&](std::uint64_t map, std::uint64_t h) {
    for (std::uint64_t k = 0; k < h; ++k) map /= A;
    return static_cast<std::uint32_t>(map % A);
  };

  if (n_maps == 1) {
    Count w;
    Bits all(search.words(), 0);
    for (std::uint64_t h = 0; h < tables; ++h) all[h / 64] |= std::uint64_t{1} << (h % 64);
    w.planes.push_back(all);
    auto parts = parallel_map<std::uint64_t>(search.challenges(), options.exec,
                                             [&](std::size_t ch) { return search.challenge(0, w, ch); });
    for (auto p : parts) result.wins += p;
    if (options.S > 0) result.advice.assign(tables, 0);
  } else {
    struct Best {
      std::uint64_t wins = 0;
      std::uint64_t map = 0;
      bool set = false;
    };
    const Best best = chunked_reduce(
        static_cast<std::size_t>(n_maps), options.exec, Best{},
        [&](Best& acc, std::size_t map) {
          std::uint64_t wins = 0;
          for (std::uint64_t a = 0; a < A; ++a) {
            Count w;
            Bits set(search.words(), 0);
            bool any = false;
            for (std::uint64_t h = 0; h < tables; ++h) {
              if (advice_of(map, h) == a) {
                set[h / 64] |= std::uint64_t{1} << (h % 64);
                any = true;
              }
            }
            if (!any) continue;
            w.planes.push_back(std::move(set));
            wins += search.round(0, w);
          }
          if (!acc.set || wins > acc.wins) acc = {wins, map, true};
        },
        [](Best& acc, const Best& part) {
          if (part.set && (!acc.set || part.wins > acc.wins)) acc = part;
        });
    result.wins = best.wins;
    for (std::uint64_t h = 0; h < tables; ++h) result.advice.push_back(advice_of(best.map, h));
  }
  result.value = static_cast<double>(result.wins) / static_cast<double>(result.worlds);
  return result;
}

}  // namespace qtsl
