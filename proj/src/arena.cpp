#include "qtsl/arena.hpp"

#include <cmath>
#include <numeric>

namespace qtsl {

std::uint64_t AdviceSpec::quantum_dimension() const {
  std::uint64_t dim = 1;
  for (const auto& r : registers) dim *= r.size;
  return dim;
}

std::optional<std::size_t> ClassicalOracle::query(std::size_t x) {
  if (used_ + 1 > budget_) throw BudgetExceeded("classical query budget of " + std::to_string(budget_) + " exhausted");
  ++used_;
  if (x >= game_.domain) throw std::invalid_argument("classical query outside the oracle domain");
  return game_query(game_, r_, x, table_);
}

nlohmann::json Transcript::to_json() const {
  nlohmann::json rounds_json = nlohmann::json::array();
  for (const auto& r : rounds) {
    rounds_json.push_back({{"round", r.round + 1}, {"challenge", r.challenge}, {"queries", r.queries}, {"bit", r.bit ? 1 : 0}});
  }
  nlohmann::json j = {{"rounds", rounds_json}, {"win", win ? 1 : 0}};
  if (table_index) j["table"] = *table_index;
  return j;
}

double TranscriptSet::total() const {
  double t = 0.0;
  for (const auto& [k, w] : patterns) t += w;
  return t;
}

Estimate wilson(double successes, std::size_t trials, std::uint64_t seed) {
  Estimate e;
  e.trials = trials;
  e.seed = seed;
  if (trials == 0) throw std::domain_error("Wilson interval over zero trials");
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  e.mean = p;
  e.ci_low = std::min(p, std::max(0.0, center - half));
  e.ci_high = std::max(p, std::min(1.0, center + half));
  return e;
}

Estimate exact_estimate(double probability, std::size_t worlds, std::uint64_t seed) {
  return {probability, probability, probability, worlds, seed, true};
}

// ---------------------------------------------------------------------------
// Quantum building blocks

namespace {

std::string temp_name(const char* stem, std::size_t j) { return std::string(stem) + std::to_string(j); }

std::size_t ver_arity(const GameSpec& game, std::size_t r) {
  const std::size_t n = game.ver_points(r, 0).size();
  if (n > game.t_ver) throw std::logic_error(game.name + " verification circuit exceeds t_ver queries");
  for (std::size_t a = 1; a < game.answers; ++a) {
    if (game.ver_points(r, a).size() != n) throw std::logic_error(game.name + " verifier arity depends on the answer");
  }
  return n;
}

}  // namespace

std::vector<VerifyBranch> challenger_verify_superposed(const OracleSession& session, const std::string& answer_reg,
                                                       const GameSpec& game, std::size_t r) {
  const std::size_t n = ver_arity(game, r);
  const std::size_t answers = game.answers;
  PureState state = session.state();
  std::vector<QStep> forward;
  for (std::size_t j = 0; j < n; ++j) {
    state = extend(state, {temp_name("_vq", j), Role::Workspace, game.domain});
    state = extend(state, {temp_name("_vu", j), Role::Workspace, game.M});
    forward.push_back(QStep::compute({answer_reg}, temp_name("_vq", j), [&game, r, j, answers](QStep::Digits d) {
      return d[0] < answers ? game.ver_points(r, d[0])[j] : std::size_t{0};
    }));
    forward.push_back(QStep::query(temp_name("_vq", j), temp_name("_vu", j)));
  }
  state = extend(state, {"_vb", Role::Decision, 2});
  std::vector<std::string> ver_inputs{answer_reg};
  for (std::size_t j = 0; j < n; ++j) ver_inputs.push_back(temp_name("_vu", j));
  forward.push_back(QStep::compute(ver_inputs, "_vb", [&game, r, answers](QStep::Digits d) -> std::size_t {
    if (d[0] >= answers) return 0;
    return game.ver(r, d[0], d.subspan(1)) ? 1 : 0;
  }));

  OracleSession work = session;
  work.set_state(std::move(state));
  auto run = [](OracleSession& s, const std::vector<QStep>& steps) {
    for (const auto& step : steps) {
      if (step.kind == QStep::Kind::Query) {
        s.query_uncounted(step.regs[0], step.out, step.sign);
      } else {
        s.set_state(apply_step(s.state(), step));
      }
    }
  };
  run(work, forward);
  const auto backward = inverse(forward);
  std::vector<VerifyBranch> branches;
  for (auto& rec : measure_register(work.state(), "_vb")) {
    OracleSession b = work;
    b.set_state(std::move(rec.post_state));
    run(b, backward);
    PureState s = discard(b.state(), "_vb");
    for (std::size_t j = n; j-- > 0;) s = discard(discard(s, temp_name("_vu", j)), temp_name("_vq", j));
    b.set_state(std::move(s));
    branches.push_back({rec.outcome == 1, rec.probability, std::move(b)});
  }
  return branches;
}

PureState quantum_start(const AdversaryProgram& adv, const std::optional<TruthTable>& table, std::uint64_t label) {
  const auto& body = std::get<QuantumBody>(adv.body);
  PureState state;
  switch (adv.advice.kind) {
    case AdviceSpec::Kind::None: state = PureState::zero(RegisterLayout(std::vector<Register>{})); break;
    case AdviceSpec::Kind::Classical: {
      const std::size_t size = std::size_t{1} << adv.advice.bits;
      std::uint64_t value = label;
      if (!adv.advice.uniform) {
        if (!table) throw std::invalid_argument("H-dependent advice needs a truth table");
        value = adv.advice.classical(*table);
      }
      if (value >= size) throw std::logic_error("classical advice does not fit in S bits");
      const std::size_t digits[] = {static_cast<std::size_t>(value)};
      state = PureState::basis(RegisterLayout({{"advice", Role::Advice, size}}), digits);
      break;
    }
    case AdviceSpec::Kind::Quantum: {
      RegisterLayout layout(adv.advice.registers);
      if (adv.advice.uniform) {
        state = PureState(layout, {{label, Complex{1.0, 0.0}}});
      } else {
        if (!table) throw std::invalid_argument("H-dependent advice needs a truth table");
        state = adv.advice.quantum(*table);
        if (!(state.layout() == layout)) throw std::logic_error("quantum advice layout differs from its declaration");
      }
      break;
    }
  }
  for (const auto& reg : body.registers) state = extend(state, reg);
  return state;
}

namespace {

enum class Verification { Superposed, SuperposedThenCollapse, MeasureFirst };

template <class T>
std::vector<T> pick(std::vector<T> branches, const std::function<double(const T&)>& prob, Rng* sampler) {
  if (!sampler || branches.size() <= 1) return branches;
  double u = uniform_real(*sampler);
  for (auto& b : branches) {
    u -= prob(b);
    if (u < 0.0) return {std::move(b)};
  }
  return {std::move(branches.back())};
}

std::vector<QuantumWorld> play_round_impl(const QuantumWorld& world, const GameSpec& game,
                                          const AdversaryProgram& adv, std::size_t round, std::size_t r,
                                          Verification verification, Rng* sampler) {
  const auto& body = std::get<QuantumBody>(adv.body);
  const bool sampled = sampler != nullptr;

  struct Pending {
    QuantumWorld world;
    std::vector<std::size_t> values;
  };
  std::vector<Pending> pending{{world, {}}};
  for (auto point : game.samp_points(r)) {
    std::vector<Pending> next;
    for (auto& p : pending) {
      auto branches = classical_query(p.world.session, point);
      branches = pick<SessionBranch>(std::move(branches), [](const SessionBranch& b) { return b.probability; }, sampler);
      for (auto& b : branches) {
        Pending q{p.world, p.values};
        q.world.session = std::move(b.session);
        if (!sampled) q.world.weight *= b.probability;
        q.values.push_back(b.value);
        next.push_back(std::move(q));
      }
    }
    pending = std::move(next);
  }

  std::vector<QuantumWorld> out;
  const QueryFilter filter = query_filter(game, r);
  for (auto& p : pending) {
    QuantumWorld w = std::move(p.world);
    RoundRecord rec;
    rec.round = round;
    rec.challenge = game.samp(r, p.values);
    rec.issued_seq = ++w.seq;
    const QuantumRound ctx{round, rec.challenge};
    w.session.begin_window(adv.budget);
    apply_steps(w.session, body.steps(ctx), &filter);
    const std::string answer = body.answer(round);

    struct Verified {
      OracleSession session;
      double probability;
      bool bit;
    };
    std::vector<Verified> verified;
    if (verification == Verification::MeasureFirst) {
      for (auto& m : measure_register(w.session.state(), answer)) {
        OracleSession s = w.session;
        s.set_state(std::move(m.post_state));
        const auto a = static_cast<std::size_t>(m.outcome);
        if (a >= game.answers) {
          verified.push_back({std::move(s), m.probability, false});
          continue;
        }
        const auto pts = game.ver_points(r, a);
        if (pts.size() > game.t_ver) throw std::logic_error(game.name + " verifier reads more than t_ver points");
        struct V {
          OracleSession s;
          double p;
          std::vector<std::size_t> vals;
        };
        std::vector<V> vs{{std::move(s), m.probability, {}}};
        for (auto pt : pts) {
          std::vector<V> nv;
          for (auto& v : vs) {
            for (auto& b : classical_query(v.s, pt)) {
              V c{std::move(b.session), v.p * b.probability, v.vals};
              c.vals.push_back(b.value);
              nv.push_back(std::move(c));
            }
          }
          vs = std::move(nv);
        }
        for (auto& v : vs) verified.push_back({std::move(v.s), v.p, game.ver(r, a, v.vals)});
      }
    } else {
      for (auto& b : challenger_verify_superposed(w.session, answer, game, r)) {
        if (verification == Verification::SuperposedThenCollapse) {
          for (auto& m : measure_register(b.session.state(), answer)) {
            OracleSession s = b.session;
            s.set_state(std::move(m.post_state));
            verified.push_back({std::move(s), b.probability * m.probability, b.bit});
          }
        } else {
          verified.push_back({std::move(b.session), b.probability, b.bit});
        }
      }
    }
    verified = pick<Verified>(std::move(verified), [](const Verified& v) { return v.probability; }, sampler);

    for (auto& v : verified) {
      QuantumWorld nw = w;
      nw.session = std::move(v.session);
      if (!sampled) nw.weight *= v.probability;
      if (body.after) apply_steps(nw.session, body.after(ctx), &filter);
      RoundRecord r2 = rec;
      r2.queries = nw.session.window_count();
      r2.bit = v.bit;
      r2.measured_seq = ++nw.seq;
      if (r2.measured_seq <= r2.issued_seq) throw std::logic_error("round measured before its challenge was issued");
      if (v.bit) nw.bits |= std::uint32_t{1} << round;
      nw.records.push_back(std::move(r2));
      out.push_back(std::move(nw));
    }
  }
  return out;
}

}  // namespace

std::vector<QuantumWorld> play_round(const QuantumWorld& world, const GameSpec& game, const AdversaryProgram& adv,
                                     std::size_t round, std::size_t r, bool return_answer_state, Rng* sampler) {
  return play_round_impl(world, game, adv, round, r,
                         return_answer_state ? Verification::Superposed : Verification::SuperposedThenCollapse,
                         sampler);
}

// ---------------------------------------------------------------------------
// Runs

namespace {

double advice_factor(const AdversaryProgram& adv) {
  if (!adv.advice.uniform) return 1.0;
  if (adv.advice.kind == AdviceSpec::Kind::Classical) return std::ldexp(1.0, static_cast<int>(adv.advice.bits));
  if (adv.advice.kind == AdviceSpec::Kind::Quantum) return static_cast<double>(adv.advice.quantum_dimension());
  return 1.0;
}

double table_space(const GameSpec& game, const RunOptions& options) {
  if (options.tables) return static_cast<double>(options.tables->size());
  return std::pow(static_cast<double>(game.M), static_cast<double>(game.domain));
}

struct TableSpace {
  std::vector<std::pair<TruthTable, double>> explicit_tables;
  std::uint64_t count = 0;
  bool is_explicit = false;

  TruthTable table(const GameSpec& game, std::size_t i) const {
    return is_explicit ? explicit_tables[i].first : TruthTable::from_index(game.domain, game.M, i);
  }
  double weight(std::size_t i) const { return is_explicit ? explicit_tables[i].second : 1.0 / static_cast<double>(count); }
  TruthTable sample(const GameSpec& game, Rng& rng, std::optional<std::uint64_t>& index) const {
    if (!is_explicit) {
      TruthTable t = TruthTable::sample(game.domain, game.M, rng);
      index = t.index();
      return t;
    }
    double u = uniform_real(rng);
    for (std::size_t i = 0; i < explicit_tables.size(); ++i) {
      u -= explicit_tables[i].second;
      if (u < 0.0 || i + 1 == explicit_tables.size()) {
        index = i;
        return explicit_tables[i].first;
      }
    }
    return explicit_tables.back().first;
  }
};

TableSpace make_table_space(const GameSpec& game, const RunOptions& options, bool need_count) {
  TableSpace ts;
  if (options.tables) {
    ts.explicit_tables = *options.tables;
    ts.count = ts.explicit_tables.size();
    ts.is_explicit = true;
  } else if (need_count) {
    ts.count = table_count(game.domain, game.M);
  }
  return ts;
}

using Patterns = std::map<std::uint32_t, double>;

void merge_patterns(Patterns& acc, const Patterns& part) {
  for (const auto& [k, w] : part) acc[k] += w;
}

void classical_rounds(const GameSpec& game, const AdversaryProgram& adv, const TruthTable& table, std::uint64_t advice,
                      std::size_t round, const Memory& memory, std::uint32_t bits, double weight, Patterns& out) {
  if (round == adv.rounds) {
    out[bits] += weight;
    return;
  }
  const auto& body = std::get<ClassicalBody>(adv.body);
  const double w = weight / static_cast<double>(game.randomness * body.coins);
  for (std::size_t r = 0; r < game.randomness; ++r) {
    const Challenge ch = sample_challenge(game, r, table);
    for (std::size_t coin = 0; coin < body.coins; ++coin) {
      Memory mem = memory;
      ClassicalOracle oracle(game, r, table, adv.budget);
      ClassicalRound ctx{round, ch, advice, coin, oracle, mem};
      const std::size_t answer = body.online(ctx);
      const bool bit = verify(game, r, answer, table);
      classical_rounds(game, adv, table, advice, round + 1, mem, bits | (bit ? std::uint32_t{1} << round : 0), w, out);
    }
  }
}

std::uint64_t classical_advice(const AdversaryProgram& adv, const TruthTable& table) {
  if (adv.advice.kind != AdviceSpec::Kind::Classical) return 0;
  const std::uint64_t value = adv.advice.classical(table);
  if (adv.advice.bits < 64 && value >> adv.advice.bits) throw std::logic_error("classical advice exceeds S bits");
  return value;
}

void quantum_rounds(const GameSpec& game, const AdversaryProgram& adv, const QuantumWorld& world, std::size_t round,
                    Verification verification, Patterns& out) {
  if (round == adv.rounds) {
    out[world.bits] += world.weight;
    return;
  }
  for (std::size_t r = 0; r < game.randomness; ++r) {
    QuantumWorld w = world;
    w.weight /= static_cast<double>(game.randomness);
    for (auto& next : play_round_impl(w, game, adv, round, r, verification, nullptr)) {
      quantum_rounds(game, adv, next, round + 1, verification, out);
    }
  }
}

Transcript sample_trial(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options,
                        const TableSpace& space, std::size_t trial, Verification verification) {
  Rng rng = make_rng(options.seed, trial);
  Transcript t;
  std::optional<TruthTable> table;
  if (options.mode == OracleMode::Exact) {
    std::optional<std::uint64_t> idx;
    table = space.sample(game, rng, idx);
    t.table_index = idx;
  }
  const auto factor = static_cast<std::uint64_t>(advice_factor(adv));
  const std::uint64_t label = factor > 1 ? uniform_index(rng, factor) : 0;

  if (!adv.is_quantum()) {
    const auto& body = std::get<ClassicalBody>(adv.body);
    const std::uint64_t advice = adv.advice.uniform ? label : classical_advice(adv, *table);
    Memory memory;
    std::uint64_t seq = 0;
    t.win = true;
    for (std::size_t i = 0; i < adv.rounds; ++i) {
      const std::size_t r = uniform_index(rng, game.randomness);
      const std::size_t coin = uniform_index(rng, body.coins);
      RoundRecord rec;
      rec.round = i;
      rec.challenge = sample_challenge(game, r, *table);
      rec.issued_seq = ++seq;
      ClassicalOracle oracle(game, r, *table, adv.budget);
      ClassicalRound ctx{i, rec.challenge, advice, coin, oracle, memory};
      const std::size_t answer = body.online(ctx);
      rec.queries = oracle.used();
      rec.bit = verify(game, r, answer, *table);
      rec.measured_seq = ++seq;
      t.win = t.win && rec.bit;
      t.rounds.push_back(std::move(rec));
    }
    return t;
  }

  QuantumWorld world{OracleSession(options.mode, game.domain, game.M, quantum_start(adv, table, label), table)};
  for (std::size_t i = 0; i < adv.rounds; ++i) {
    const std::size_t r = uniform_index(rng, game.randomness);
    auto next = play_round_impl(world, game, adv, i, r, verification, &rng);
    world = std::move(next.at(0));
  }
  t.rounds = world.records;
  t.win = world.bits == (adv.rounds >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << adv.rounds) - 1);
  return t;
}

void check_program(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options) {
  if (adv.rounds < 1 || adv.rounds > 31) throw std::invalid_argument("rounds must be in [1, 31]");
  if (!adv.is_quantum() && options.mode != OracleMode::Exact) {
    throw std::invalid_argument("classical adversaries run against truth tables (exact mode)");
  }
  if (adv.is_quantum() && options.mode != OracleMode::Exact && adv.advice.kind != AdviceSpec::Kind::None &&
      !adv.advice.uniform) {
    throw std::invalid_argument("H-dependent advice needs exact mode");
  }
  if (adv.is_quantum()) {
    const auto& body = std::get<QuantumBody>(adv.body);
    if (!body.steps || !body.answer) throw std::invalid_argument("quantum body needs steps and an answer register");
  }
  (void)game;
}

TranscriptSet run_impl(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options,
                       Verification verification) {
  check_program(game, adv, options);
  TranscriptSet set;
  set.rounds = adv.rounds;
  set.seed = options.seed;
  const double size = enumeration_size(game, adv, options);
  const bool exact = options.method == RunOptions::Method::Exact ||
                     (options.method == RunOptions::Method::Auto && size <= options.max_worlds);
  if (exact && size > options.max_worlds) {
    throw GuardExceeded("exact enumeration needs " + std::to_string(size) + " worlds, guard is " +
                        std::to_string(options.max_worlds));
  }

  if (!exact) {
    const TableSpace space = make_table_space(game, options, false);
    auto transcripts = parallel_map<Transcript>(options.trials, options.exec, [&](std::size_t i) {
      return sample_trial(game, adv, options, space, i, verification);
    });
    for (const auto& t : transcripts) {
      std::uint32_t bits = 0;
      for (const auto& r : t.rounds) bits |= r.bit ? std::uint32_t{1} << r.round : 0;
      set.patterns[bits] += 1.0;
    }
    set.trials = options.trials;
    set.exact = false;
    if (options.keep_transcripts) set.samples = std::move(transcripts);
    return set;
  }

  set.exact = true;
  set.trials = static_cast<std::size_t>(size);
  const auto factor = static_cast<std::uint64_t>(advice_factor(adv));
  if (options.mode != OracleMode::Exact) {
    Patterns out;
    for (std::uint64_t label = 0; label < factor; ++label) {
      QuantumWorld world{OracleSession(options.mode, game.domain, game.M, quantum_start(adv, std::nullopt, label))};
      world.weight = 1.0 / static_cast<double>(factor);
      quantum_rounds(game, adv, world, 0, verification, out);
    }
    set.patterns = std::move(out);
    return set;
  }

  const TableSpace space = make_table_space(game, options, true);
  set.patterns = chunked_reduce(
      static_cast<std::size_t>(space.count), options.exec, Patterns{},
      [&](Patterns& acc, std::size_t i) {
        const TruthTable table = space.table(game, i);
        const double w = space.weight(i) / static_cast<double>(factor);
        for (std::uint64_t label = 0; label < factor; ++label) {
          if (adv.is_quantum()) {
            QuantumWorld world{OracleSession(OracleMode::Exact, game.domain, game.M, quantum_start(adv, table, label),
                                             table)};
            world.weight = w;
            quantum_rounds(game, adv, world, 0, verification, acc);
          } else {
            const std::uint64_t advice = adv.advice.uniform ? label : classical_advice(adv, table);
            classical_rounds(game, adv, table, advice, 0, {}, 0, w, acc);
          }
        }
      },
      merge_patterns);
  return set;
}

}  // namespace

double enumeration_size(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options) {
  const double tables = options.mode == OracleMode::Exact ? table_space(game, options) : 1.0;
  double per_round = static_cast<double>(game.randomness);
  if (!adv.is_quantum()) per_round *= static_cast<double>(std::get<ClassicalBody>(adv.body).coins);
  return tables * advice_factor(adv) * std::pow(per_round, static_cast<double>(adv.rounds));
}

TranscriptSet run_multi_instance(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options) {
  return run_impl(game, adv, options,
                  options.return_answer_state ? Verification::Superposed : Verification::SuperposedThenCollapse);
}

Transcript run_single(const GameSpec& game, const AdversaryProgram& adv, OracleMode mode, std::uint64_t seed) {
  if (adv.rounds != 1) throw std::invalid_argument("run_single needs a single-round adversary");
  RunOptions options;
  options.mode = mode;
  options.seed = seed;
  check_program(game, adv, options);
  const TableSpace space = make_table_space(game, options, false);
  return sample_trial(game, adv, options, space, 0, Verification::MeasureFirst);
}

double single_win_probability(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options) {
  if (adv.rounds != 1) throw std::invalid_argument("single-instance evaluation needs a single-round adversary");
  RunOptions exact = options;
  exact.method = RunOptions::Method::Exact;
  const auto set = run_impl(game, adv, exact, Verification::MeasureFirst);
  return estimate_win(set).mean;
}

Estimate estimate_win(const TranscriptSet& set) {
  const std::uint32_t all = (std::uint32_t{1} << set.rounds) - 1;
  double wins = 0.0;
  for (const auto& [k, w] : set.patterns) {
    if ((k & all) == all) wins += w;
  }
  const double total = set.total();
  if (set.exact) return exact_estimate(wins / total, set.trials, set.seed);
  return wilson(wins, static_cast<std::size_t>(std::llround(total)), set.seed);
}

Estimate conditional_round_success(const TranscriptSet& set, std::size_t i,
                                   const std::function<bool(std::uint32_t)>& condition) {
  if (i < 1 || i > set.rounds) throw std::invalid_argument("round index outside [1, g]");
  const std::uint32_t before = (std::uint32_t{1} << (i - 1)) - 1;
  double num = 0.0;
  double den = 0.0;
  for (const auto& [k, w] : set.patterns) {
    if (!condition(k & before)) continue;
    den += w;
    if ((k >> (i - 1)) & 1U) num += w;
  }
  if (den <= 0.0) throw std::domain_error("conditioning event has zero support");
  if (set.exact) return exact_estimate(num / den, set.trials, set.seed);
  return wilson(num, static_cast<std::size_t>(std::llround(den)), set.seed);
}

// ---------------------------------------------------------------------------

std::vector<std::pair<TruthTable, double>> fiber_classes(std::size_t N, std::size_t M) {
  std::vector<std::pair<TruthTable, double>> out;
  const double total = std::pow(static_cast<double>(M), static_cast<double>(N));
  std::vector<double> fact(N + M + 1, 1.0);
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  std::vector<std::size_t> parts;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t remaining, std::size_t max_part) {
    if (remaining == 0) {
      if (parts.size() > M) return;
      std::vector<std::size_t> values;
      for (std::size_t v = 0; v < parts.size(); ++v) values.insert(values.end(), parts[v], v);
      double count = fact[N];
      for (auto k : parts) count /= fact[k];
      std::map<std::size_t, std::size_t> mult;
      for (auto k : parts) ++mult[k];
      mult[0] += M - parts.size();
      double assign = fact[M];
      for (const auto& [k, m] : mult) assign /= fact[m];
      out.emplace_back(TruthTable(N, M, std::move(values)), count * assign / total);
      return;
    }
    for (std::size_t p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(N, N);
  return out;
}

}  // namespace qtsl
