#include "qtsl/adversaries.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace qtsl {

std::size_t ceil_log2(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

double grover_success(std::size_t N, std::size_t k, std::size_t T) {
  if (k == 0) return 0.0;
  const double theta = std::asin(std::sqrt(static_cast<double>(k) / static_cast<double>(N)));
  const double s = std::sin(static_cast<double>(2 * T + 1) * theta);
  return s * s;
}

namespace {

Eigen::MatrixXcd diffusion(std::size_t n) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                                                  Complex{2.0 / static_cast<double>(n), 0.0});
  d -= Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return d;
}

std::vector<QStep> grover_steps(const std::string& x, const std::string& u, std::size_t N, std::size_t T,
                                std::function<bool(std::size_t)> marked) {
  std::vector<QStep> steps{QStep::unitary({x}, qft_matrix(N))};
  const Eigen::MatrixXcd d = diffusion(N);
  for (std::size_t i = 0; i < T; ++i) {
    steps.push_back(QStep::query(x, u));
    steps.push_back(QStep::phase_step({u}, [marked](QStep::Digits v) {
      return marked(v[0]) ? Complex{-1.0, 0.0} : Complex{1.0, 0.0};
    }));
    steps.push_back(QStep::query(x, u, -1));
    steps.push_back(QStep::unitary({x}, d));
  }
  return steps;
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<Register> regs = a.layout().registers();
  for (const auto& r : b.layout().registers()) regs.push_back(r);
  RegisterLayout layout(regs);
  const Label dim_b = b.layout().dimension();
  std::vector<PureState::Entry> entries;
  entries.reserve(a.support() * b.support());
  for (const auto& [la, ca] : a.entries()) {
    for (const auto& [lb, cb] : b.entries()) entries.emplace_back(la * dim_b + lb, ca * cb);
  }
  return PureState(std::move(layout), std::move(entries));
}

PureState rename_registers(const PureState& s, const std::function<std::string(const std::string&)>& map) {
  std::vector<Register> regs = s.layout().registers();
  for (auto& r : regs) r.name = map(r.name);
  return PureState(RegisterLayout(regs), s.entries());
}

std::uint64_t pack(const std::vector<std::size_t>& fields, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) v |= static_cast<std::uint64_t>(fields[i]) << (i * width);
  return v;
}

std::size_t unpack(std::uint64_t v, std::size_t i, std::size_t width) {
  return static_cast<std::size_t>((v >> (i * width)) & ((std::uint64_t{1} << width) - 1));
}

std::size_t challenge_target(const Challenge& ch) { return static_cast<std::size_t>(ch.at(0)); }

}  // namespace

AdversaryProgram grover_invert(std::size_t N, std::size_t M, std::size_t T) {
  AdversaryProgram adv;
  adv.name = "grover";
  adv.rounds = 1;
  adv.budget = 2 * T;
  QuantumBody body;
  body.registers = {{"x0", Role::Input, N}, {"u0", Role::Output, M}};
  body.steps = [N, T](const QuantumRound& ctx) {
    const std::size_t y = challenge_target(ctx.challenge);
    return grover_steps("x0", "u0", N, T, [y](std::size_t u) { return u == y; });
  };
  body.answer = [](std::size_t) { return std::string("x0"); };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram iterated_grover_multi(std::size_t g, std::size_t T, std::size_t N, std::size_t M) {
  AdversaryProgram adv = repeat_per_instance(grover_invert(N, M, T), g);
  adv.name = "iterated_grover";
  return adv;
}

AdversaryProgram yaobox_store_first(std::size_t N) {
  AdversaryProgram adv;
  adv.name = "yaobox_store_first";
  adv.advice.kind = AdviceSpec::Kind::Classical;
  adv.advice.bits = 1;
  adv.advice.classical = [](const TruthTable& h) { return static_cast<std::uint64_t>(h(0)); };
  ClassicalBody body;
  body.coins = N == 1 ? 1 : 2;
  body.online = [](ClassicalRound& ctx) -> std::size_t {
    if (challenge_target(ctx.challenge) == 0) return static_cast<std::size_t>(ctx.advice);
    return ctx.coin;
  };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram salted_prediction_attack(std::size_t K, std::size_t M, std::size_t S, std::size_t T) {
  const std::size_t width = std::max<std::size_t>(1, ceil_log2(M));
  const std::size_t count = S / width;
  if (count * (T + 1) > K) throw std::invalid_argument("salted prediction attack needs S(T+1) <= K log2 M");
  if (count * width > 64) throw std::invalid_argument("salted prediction advice exceeds 64 bits");
  AdversaryProgram adv;
  adv.name = "salted_prediction";
  adv.budget = T;
  adv.advice.kind = AdviceSpec::Kind::Classical;
  adv.advice.bits = S;
  adv.advice.classical = [count, T, M, width](const TruthTable& h) {
    std::vector<std::size_t> sums(count, 0);
    for (std::size_t j = 0; j < count; ++j) {
      for (std::size_t k = 0; k <= T; ++k) sums[j] = (sums[j] + h(j * (T + 1) + k)) % M;
    }
    return pack(sums, width);
  };
  ClassicalBody body;
  body.coins = M;
  body.online = [count, T, M, width](ClassicalRound& ctx) -> std::size_t {
    const std::size_t s = challenge_target(ctx.challenge);
    const std::size_t j = s / (T + 1);
    if (j >= count) return ctx.coin;
    std::size_t v = unpack(ctx.advice, j, width);
    for (std::size_t k = 0; k <= T; ++k) {
      const std::size_t other = j * (T + 1) + k;
      if (other == s) continue;
      v = (v + M - *ctx.oracle.query(other)) % M;
    }
    return v;
  };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram prg_first_point(std::size_t N, std::size_t M) {
  (void)N;
  (void)M;
  AdversaryProgram adv;
  adv.name = "prg_first_point";
  adv.budget = 1;
  ClassicalBody body;
  body.online = [](ClassicalRound& ctx) -> std::size_t {
    const auto h0 = ctx.oracle.query(0);
    return h0 && static_cast<std::int64_t>(*h0) == ctx.challenge.at(0) ? 0 : 1;
  };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram crh_store_collision(std::size_t S, std::size_t N, std::size_t M, std::size_t K) {
  (void)M;
  const std::size_t width = std::max<std::size_t>(1, ceil_log2(N));
  const std::size_t count = std::min(K, S / (2 * width));
  if (count * 2 * width > 64) throw std::invalid_argument("collision advice exceeds 64 bits");
  AdversaryProgram adv;
  adv.name = "crh_store_collision";
  adv.advice.kind = AdviceSpec::Kind::Classical;
  adv.advice.bits = S;
  adv.advice.classical = [count, N, width](const TruthTable& h) {
    std::vector<std::size_t> fields(2 * count, 0);
    for (std::size_t s = 0; s < count; ++s) {
      bool found = false;
      for (std::size_t a = 0; a < N && !found; ++a) {
        for (std::size_t b = a + 1; b < N && !found; ++b) {
          if (h(s * N + a) == h(s * N + b)) {
            fields[2 * s] = a;
            fields[2 * s + 1] = b;
            found = true;
          }
        }
      }
    }
    return pack(fields, width);
  };
  ClassicalBody body;
  const bool salted = K > 1;
  body.online = [count, N, width, salted](ClassicalRound& ctx) -> std::size_t {
    const std::size_t s = salted ? challenge_target(ctx.challenge) : 0;
    if (s >= count) return 0;
    return unpack(ctx.advice, 2 * s, width) * N + unpack(ctx.advice, 2 * s + 1, width);
  };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram constant_guesser(const GameSpec& game, std::size_t answer, std::size_t rounds) {
  if (answer >= game.answers) throw std::invalid_argument("constant answer outside the answer alphabet");
  AdversaryProgram adv;
  adv.name = "constant";
  adv.rounds = rounds;
  ClassicalBody body;
  body.online = [answer](ClassicalRound&) { return answer; };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram random_guesser(const GameSpec& game, std::size_t rounds) {
  AdversaryProgram adv;
  adv.name = "random";
  adv.rounds = rounds;
  ClassicalBody body;
  body.coins = game.answers;
  body.online = [](ClassicalRound& ctx) { return ctx.coin; };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram noisy_owf_advice(std::size_t N, std::size_t M, double eta) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must lie in [0, 1]");
  AdversaryProgram adv;
  adv.name = "noisy_owf_advice";
  adv.advice.kind = AdviceSpec::Kind::Quantum;
  for (std::size_t y = 0; y < M; ++y) adv.advice.registers.push_back({"adv" + std::to_string(y), Role::Advice, N});
  adv.advice.bits = M * ceil_log2(N);
  adv.advice.quantum = [N, M, eta](const TruthTable& h) {
    PureState state = PureState::zero(RegisterLayout(std::vector<Register>{}));
    for (std::size_t y = 0; y < M; ++y) {
      RegisterLayout one({{"adv" + std::to_string(y), Role::Advice, N}});
      std::optional<std::size_t> pre;
      for (std::size_t x = 0; x < N && !pre; ++x) {
        if (h(x) == y) pre = x;
      }
      std::vector<PureState::Entry> entries;
      if (pre && N > 1) {
        entries = {{*pre, Complex{std::sqrt(1.0 - eta), 0.0}}, {(*pre + 1) % N, Complex{std::sqrt(eta), 0.0}}};
      } else {
        entries = {{pre.value_or(0), Complex{1.0, 0.0}}};
      }
      state = tensor(state, PureState(one, std::move(entries)));
    }
    return state;
  };
  QuantumBody body;
  body.registers = {{"ans", Role::Output, N}};
  body.steps = [](const QuantumRound& ctx) {
    const std::string reg = "adv" + std::to_string(challenge_target(ctx.challenge));
    return std::vector<QStep>{QStep::compute({reg}, "ans", [](QStep::Digits d) { return d[0]; })};
  };
  body.answer = [](std::size_t) { return std::string("ans"); };
  adv.body = std::move(body);
  return adv;
}

AdversaryProgram remove_advice(const AdversaryProgram& adv) {
  AdversaryProgram out = adv;
  if (adv.advice.kind == AdviceSpec::Kind::None) return out;
  out.name = "remove_advice(" + adv.name + ")";
  out.advice.uniform = true;
  return out;
}

AdversaryProgram repeat_per_instance(const AdversaryProgram& adv, std::size_t g) {
  if (adv.rounds != 1) throw std::invalid_argument("repeat_per_instance needs a single-instance adversary");
  if (g < 1) throw std::invalid_argument("repeat_per_instance needs g >= 1");
  if (g == 1) return adv;
  AdversaryProgram out = adv;
  out.name = "repeat(" + adv.name + ")";
  out.rounds = g;
  if (!adv.is_quantum()) {
    const auto inner = std::get<ClassicalBody>(adv.body);
    ClassicalBody body = inner;
    body.online = [inner](ClassicalRound& ctx) {
      ctx.memory.clear();
      ClassicalRound first{0, ctx.challenge, ctx.advice, ctx.coin, ctx.oracle, ctx.memory};
      return inner.online(first);
    };
    out.body = std::move(body);
    return out;
  }
  const auto inner = std::get<QuantumBody>(adv.body);
  std::set<std::string> workspace;
  for (const auto& r : inner.registers) workspace.insert(r.name);
  auto mapper = [workspace](std::size_t round) {
    return [workspace, round](const std::string& name) {
      return workspace.contains(name) ? name + "@" + std::to_string(round) : name;
    };
  };
  QuantumBody body;
  for (std::size_t i = 0; i < g; ++i) {
    for (auto r : inner.registers) {
      r.name = mapper(i)(r.name);
      body.registers.push_back(r);
    }
  }
  auto lift = [mapper](const std::function<std::vector<QStep>(const QuantumRound&)>& f) {
    return [f, mapper](const QuantumRound& ctx) {
      std::vector<QStep> steps;
      const auto map = mapper(ctx.round);
      for (const auto& s : f(QuantumRound{0, ctx.challenge})) steps.push_back(rename(s, map));
      return steps;
    };
  };
  body.steps = lift(inner.steps);
  if (inner.after) body.after = lift(inner.after);
  body.answer = [inner, mapper](std::size_t round) { return mapper(round)(inner.answer(0)); };
  out.body = std::move(body);
  return out;
}

namespace {

std::string copy_name(const std::string& name, std::size_t j) { return name + "#" + std::to_string(j); }
std::string copy_name(const std::string& name, std::size_t j, std::size_t i) {
  return name + "#" + std::to_string(j) + "@" + std::to_string(i);
}

}  // namespace

std::vector<std::string> wrapper_advice_registers(const AdversaryProgram& adv, std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < k; ++j) {
    for (const auto& r : adv.advice.registers) names.push_back(copy_name(r.name, j));
  }
  return names;
}

AdversaryProgram public_verif_wrapper(const AdversaryProgram& adv, std::size_t k, const GameSpec& game,
                                      std::size_t rounds) {
  if (!game.is_public) throw std::invalid_argument(game.name + " is not publicly verifiable");
  if (adv.advice.kind != AdviceSpec::Kind::Quantum || !adv.is_quantum()) {
    throw std::invalid_argument("public_verif_wrapper needs a quantum adversary with quantum advice");
  }
  if (adv.rounds != 1) throw std::invalid_argument("public_verif_wrapper needs a single-instance adversary");
  if (k < 1) throw std::invalid_argument("public_verif_wrapper needs k >= 1");
  const std::size_t per_copy = adv.budget + game.t_pub;
  if (per_copy != 0 && 2 * k > std::numeric_limits<std::size_t>::max() / per_copy) {
    throw std::overflow_error("wrapper budget 2k(T + t_pub) overflows");
  }

  const auto inner = std::get<QuantumBody>(adv.body);
  std::set<std::string> advice_names;
  for (const auto& r : adv.advice.registers) advice_names.insert(r.name);

  AdversaryProgram out;
  out.name = "public_verif_wrapper(" + adv.name + ")";
  out.rounds = rounds;
  out.budget = 2 * k * per_copy;
  out.advice.kind = AdviceSpec::Kind::Quantum;
  out.advice.bits = k * adv.advice.bits;
  out.advice.uniform = adv.advice.uniform;
  for (std::size_t j = 0; j < k; ++j) {
    for (auto r : adv.advice.registers) {
      r.name = copy_name(r.name, j);
      out.advice.registers.push_back(r);
    }
  }
  const auto inner_quantum = adv.advice.quantum;
  out.advice.quantum = [inner_quantum, k](const TruthTable& h) {
    const PureState one = inner_quantum(h);
    PureState state = PureState::zero(RegisterLayout(std::vector<Register>{}));
    for (std::size_t j = 0; j < k; ++j) {
      state = tensor(state, rename_registers(one, [j](const std::string& n) { return copy_name(n, j); }));
    }
    return state;
  };

  const std::size_t n_pub = game.pub_points(Challenge(game.K > 1 ? 2 : 1, 0), 0).size();
  if (n_pub > game.t_pub) throw std::logic_error(game.name + " public verifier exceeds t_pub queries");

  QuantumBody body;
  for (std::size_t i = 0; i < rounds; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (auto r : inner.registers) {
        r.name = copy_name(r.name, j, i);
        body.registers.push_back(r);
      }
      for (std::size_t p = 0; p < n_pub; ++p) {
        body.registers.push_back({copy_name("_pq" + std::to_string(p), j, i), Role::Workspace, game.domain});
        body.registers.push_back({copy_name("_pu" + std::to_string(p), j, i), Role::Workspace, game.M});
      }
      body.registers.push_back({copy_name("_pv", j, i), Role::Workspace, 2});
    }
    body.registers.push_back({"A@" + std::to_string(i), Role::Output, game.answers});
  }

  auto forward = [inner, advice_names, k, n_pub, game](const QuantumRound& ctx) {
    const std::size_t i = ctx.round;
    const std::size_t answers = game.answers;
    std::vector<QStep> steps;
    std::vector<std::string> pv_regs;
    std::vector<std::string> ans_regs;
    for (std::size_t j = 0; j < k; ++j) {
      auto map = [&advice_names, j, i](const std::string& n) {
        return advice_names.contains(n) ? copy_name(n, j) : copy_name(n, j, i);
      };
      for (const auto& s : inner.steps(QuantumRound{0, ctx.challenge})) steps.push_back(rename(s, map));
      const std::string ans = map(inner.answer(0));
      const Challenge ch = ctx.challenge;
      std::vector<std::string> ver_inputs{ans};
      for (std::size_t p = 0; p < n_pub; ++p) {
        const std::string pq = copy_name("_pq" + std::to_string(p), j, i);
        const std::string pu = copy_name("_pu" + std::to_string(p), j, i);
        steps.push_back(QStep::compute({ans}, pq, [game, ch, p, answers](QStep::Digits d) {
          return d[0] < answers ? game.pub_points(ch, d[0])[p] : std::size_t{0};
        }));
        steps.push_back(QStep::query(pq, pu));
        ver_inputs.push_back(pu);
      }
      const std::string pv = copy_name("_pv", j, i);
      steps.push_back(QStep::compute(ver_inputs, pv, [game, ch, answers](QStep::Digits d) -> std::size_t {
        if (d[0] >= answers) return 0;
        return game.pub_ver(ch, d[0], d.subspan(1)) ? 1 : 0;
      }));
      pv_regs.push_back(pv);
      ans_regs.push_back(ans);
    }
    std::vector<std::string> select = pv_regs;
    select.insert(select.end(), ans_regs.begin(), ans_regs.end());
    steps.push_back(QStep::compute(select, "A@" + std::to_string(i), [k](QStep::Digits d) {
      for (std::size_t j = 0; j < k; ++j) {
        if (d[j] == 1) return d[k + j];
      }
      return d[k];
    }));
    return steps;
  };
  body.steps = forward;
  body.after = [forward](const QuantumRound& ctx) { return inverse(forward(ctx)); };
  body.answer = [](std::size_t round) { return "A@" + std::to_string(round); };
  out.body = std::move(body);
  return out;
}

AdversaryProgram make_adversary(const std::string& name, const nlohmann::json& params, const GameSpec& game,
                                std::size_t S, std::size_t T, std::size_t g) {
  auto get = [&](const char* key, std::size_t fallback) {
    return params.contains(key) ? params.at(key).get<std::size_t>() : fallback;
  };
  AdversaryProgram adv;
  if (name == "grover") {
    adv = repeat_per_instance(grover_invert(game.domain, game.M, T), g);
  } else if (name == "iterated_grover") {
    adv = iterated_grover_multi(g, T, game.domain, game.M);
  } else if (name == "yaobox_store_first") {
    adv = repeat_per_instance(yaobox_store_first(game.N), g);
  } else if (name == "salted_prediction") {
    adv = repeat_per_instance(salted_prediction_attack(game.K, game.M, S, T), g);
  } else if (name == "prg_first_point") {
    adv = repeat_per_instance(prg_first_point(game.N, game.M), g);
  } else if (name == "crh_store_collision") {
    adv = repeat_per_instance(crh_store_collision(S, game.N, game.M, game.K), g);
  } else if (name == "constant") {
    adv = constant_guesser(game, get("answer", 0), g);
  } else if (name == "random") {
    adv = random_guesser(game, g);
  } else if (name == "noisy_owf_advice") {
    const double eta = params.contains("eta") ? params.at("eta").get<double>() : 0.0;
    adv = noisy_owf_advice(game.N, game.M, eta);
    const std::size_t k = get("copies", 0);
    adv = k > 0 ? public_verif_wrapper(adv, k, game, g) : repeat_per_instance(adv, g);
  } else {
    throw std::invalid_argument("unknown adversary '" + name + "'");
  }
  if (params.contains("remove_advice") && params.at("remove_advice").get<bool>()) adv = remove_advice(adv);
  return adv;
}

namespace quarantine {

namespace {

void parallel_phases(const TruthTable& table, std::size_t N, std::size_t M, std::size_t T,
                     const std::vector<std::size_t>& targets, std::vector<bool> solved, std::size_t phase,
                     std::size_t phases, double weight, double& win) {
  if (std::all_of(solved.begin(), solved.end(), [](bool b) { return b; })) {
    win += weight;
    return;
  }
  if (phase == phases) return;
  std::set<std::size_t> open;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!solved[i]) open.insert(targets[i]);
  }
  const RegisterLayout layout({{"x", Role::Input, N}, {"u", Role::Output, M}});
  OracleSession session(OracleMode::Exact, N, M, PureState::zero(layout), table);
  session.begin_window(2 * T + 1);
  apply_steps(session, grover_steps("x", "u", N, T, [&open](std::size_t u) { return open.contains(u); }));
  for (const auto& m : measure_register(session.state(), "x")) {
    const auto x = static_cast<std::size_t>(m.outcome);
    OracleSession check = session;
    check.set_state(m.post_state);
    check.query("x", "u");
    const std::size_t hx = *definite_value(check.state(), "u");
    std::vector<bool> next = solved;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] == hx) next[i] = true;
    }
    (void)x;
    parallel_phases(table, N, M, T, targets, std::move(next), phase + 1, phases, weight * m.probability, win);
  }
}

}  // namespace

double parallel_grover_win(std::size_t N, std::size_t M, std::size_t g, std::size_t T,
                           const std::vector<std::pair<TruthTable, double>>& tables, Exec exec) {
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < g; ++i) combos *= M;
  const double per_combo = 1.0 / static_cast<double>(combos);
  return chunked_reduce(
      tables.size() * combos, exec, 0.0,
      [&](double& acc, std::size_t idx) {
        const auto& [table, w] = tables[idx / combos];
        std::uint64_t c = idx % combos;
        std::vector<std::size_t> targets(g);
        for (std::size_t i = g; i-- > 0;) {
          targets[i] = static_cast<std::size_t>(c % M);
          c /= M;
        }
        parallel_phases(table, N, M, T, targets, std::vector<bool>(g, false), 0, g, w * per_combo, acc);
      },
      [](double& acc, double part) { acc += part; });
}

}  // namespace quarantine

}  // namespace qtsl
