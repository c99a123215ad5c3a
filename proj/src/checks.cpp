#include "qtsl/checks.hpp"

#include <cmath>
#include <cstdarg>
#include <set>

#include "qtsl/adversaries.hpp"
#include "qtsl/bruteforce.hpp"
#include "qtsl/hellman.hpp"
#include "qtsl/prgind.hpp"

namespace qtsl {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

CheckResult result(const std::string& family, std::string name, bool passed, std::string detail) {
  return {family, std::move(name), passed, std::move(detail)};
}

/// x over [N], u over Z/M, w a qubit: random unitary, then `queries` times
/// (query, random unitary).
QueryProgram exact_query_program(std::size_t N, std::size_t M, std::size_t queries, Rng& rng) {
  QueryProgram p;
  p.registers = {{"x", Role::Input, N}, {"u", Role::Output, M}, {"w", Role::Workspace, 2}};
  p.outputs = {"x", "u", "w"};
  const std::vector<std::string> all = {"x", "u", "w"};
  p.steps.push_back(QStep::unitary(all, random_unitary(N * M * 2, rng)));
  for (std::size_t i = 0; i < queries; ++i) {
    p.steps.push_back(QStep::query("x", "u"));
    p.steps.push_back(QStep::unitary(all, random_unitary(N * M * 2, rng)));
  }
  return p;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> oracle_equiv(Exec exec) {
  const std::string fam = "oracle-equiv";
  std::vector<CheckResult> out;
  const double tv = oracle_equivalence_worst_tv(200, 20240601, exec);
  out.push_back(result(fam, "four modes agree on 200 random programs", tv <= 1e-9, fmt("worst TV %.3e (tol 1e-9)", tv)));

  std::size_t hits = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    Rng rng = make_rng(77, i);
    const std::size_t N = 2 + uniform_index(rng, 3);
    const std::size_t M = 2 + uniform_index(rng, 3);
    const QueryProgram p = random_program(N, M, 3, rng);
    OracleSession s(OracleMode::Compressed, N, M, PureState::zero(RegisterLayout(p.registers)));
    apply_steps(s, p.steps);
    hits += s.bottom_hits();
  }
  out.push_back(result(fam, "CStO' never meets an empty cell inside CStO", hits == 0, fmt("%zu bottom hits", hits)));
  return out;
}

std::vector<CheckResult> bounded_db(Exec exec) {
  const std::string fam = "bounded-db";
  struct Worst {
    double mass = 0.0;
    std::size_t branches = 0;
  };
  const std::size_t cases = 4 * 40;
  const Worst worst = chunked_reduce(
      cases, exec, Worst{},
      [](Worst& acc, std::size_t i) {
        Rng rng = make_rng(4242, i);
        const std::size_t T = 1 + i % 4;
        const std::size_t N = 3 + uniform_index(rng, 3);
        const std::size_t M = 2 + uniform_index(rng, 2);
        const QueryProgram p = exact_query_program(N, M, T, rng);
        OracleSession s(OracleMode::Compressed, N, M, PureState::zero(RegisterLayout(p.registers)));
        std::size_t queries = 0;
        for (const auto& step : p.steps) {
          apply_steps(s, {step});
          if (step.kind != QStep::Kind::Query) continue;
          ++queries;
          acc.mass = std::max(acc.mass, database_mass_above(s.state(), N, queries));
          for (const auto& m : measure_register(s.state(), "w")) {
            acc.mass = std::max(acc.mass, database_mass_above(m.post_state, N, queries));
            ++acc.branches;
          }
        }
      },
      [](Worst& acc, const Worst& part) {
        acc.mass = std::max(acc.mass, part.mass);
        acc.branches += part.branches;
      });
  return {result(fam, "mass on |D| > T after T <= 4 queries, with conditioned branches", worst.mass <= 1e-12,
                 fmt("worst mass %.3e over %zu conditioned branches (tol 1e-12)", worst.mass, worst.branches))};
}

std::vector<CheckResult> conditioning_bound(Exec exec) {
  const std::string fam = "conditioning-bound";
  const std::size_t N = 4;
  const std::size_t M = 4;
  struct Worst {
    double slack = 1e9;
    double consistency = 0.0;
  };
  const Worst worst = chunked_reduce(
      std::size_t{100}, exec, Worst{},
      [&](Worst& acc, std::size_t i) {
        Rng rng = make_rng(5005, i);
        const QueryProgram p = exact_query_program(N, M, 2, rng);
        std::set<std::size_t> relation;
        for (std::size_t t = 0; t < N * M * 2; ++t) {
          if (uniform_index(rng, 2) == 1) relation.insert(t);
        }
        const bool conditioned = i % 2 == 1;
        auto run = [&](OracleMode mode, std::optional<std::int64_t>& outcome, double& outcome_p) {
          OracleSession s(mode, N, M, PureState::zero(RegisterLayout(p.registers)));
          for (std::size_t k = 0; k < p.steps.size(); ++k) {
            apply_steps(s, {p.steps[k]});
            if (conditioned && k == 1) {
              const auto records = measure_register(s.state(), "w");
              if (!outcome) {
                auto best = std::max_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
                  return a.probability < b.probability;
                });
                outcome = best->outcome;
              }
              const auto& rec = select_outcome(records, *outcome);
              outcome_p = rec.probability;
              s.set_state(rec.post_state);
            }
          }
          const auto& layout = s.state().layout();
          const std::size_t xi = layout.index("x");
          const std::size_t ui = layout.index("u");
          const std::size_t wi = layout.index("w");
          double prob = 0.0;
          for (const auto& [label, amp] : s.state().entries()) {
            const std::size_t x = layout.digit(label, xi);
            const std::size_t y = layout.digit(label, ui);
            const std::size_t w = layout.digit(label, wi);
            if (!relation.contains((x * M + y) * 2 + w)) continue;
            const std::string cell = mode == OracleMode::Standard ? table_register(x) : database_register(x);
            if (layout.digit(label, layout.index(cell)) == y) prob += std::norm(amp);
          }
          return prob;
        };
        std::optional<std::int64_t> outcome;
        double p_std = 0.0;
        double p_cmp = 0.0;
        const double prob = run(OracleMode::Standard, outcome, p_std);
        const double pp = run(OracleMode::Compressed, outcome, p_cmp);
        acc.slack = std::min(acc.slack, std::sqrt(pp) + std::sqrt(1.0 / M) - std::sqrt(prob));
        acc.consistency = std::max(acc.consistency, std::abs(p_std - p_cmp));
      },
      [](Worst& acc, const Worst& part) {
        acc.slack = std::min(acc.slack, part.slack);
        acc.consistency = std::max(acc.consistency, part.consistency);
      });
  return {result(fam, "sqrt p <= sqrt p' + sqrt(1/M) on 100 relations, N = M = 4, T = 2", worst.slack >= -1e-9,
                 fmt("min slack %.6f (tol -1e-9), conditioning outcome mismatch %.1e", worst.slack,
                     worst.consistency))};
}

std::vector<CheckResult> known_values(Exec exec) {
  const std::string fam = "known-values";
  std::vector<CheckResult> out;
  RunOptions o;
  o.exec = exec;
  o.method = RunOptions::Method::Exact;
  const double yao = estimate_win(run_multi_instance(yaobox_game(4), yaobox_store_first(4), o)).mean;
  out.push_back(result(fam, "Yao's box store-first at N = 4 wins 0.625", std::abs(yao - 0.625) <= 1e-12,
                       fmt("%.15f", yao)));

  double worst = 0.0;
  for (std::size_t M = 2; M <= 5; ++M) {
    const GameSpec g = prediction_game(M);
    for (const auto& adv : {random_guesser(g), constant_guesser(g, M - 1)}) {
      worst = std::max(worst, std::abs(estimate_win(run_multi_instance(g, adv, o)).mean - 1.0 / M));
    }
    RunOptions q = o;
    q.mode = OracleMode::Compressed;
    AdversaryProgram uniform;
    uniform.name = "uniform";
    QuantumBody body;
    body.registers = {{"a", Role::Output, M}};
    body.steps = [M](const QuantumRound&) { return std::vector<QStep>{QStep::unitary({"a"}, qft_matrix(M))}; };
    body.answer = [](std::size_t) { return std::string("a"); };
    uniform.body = body;
    worst = std::max(worst, std::abs(single_win_probability(g, uniform, q) - 1.0 / M));
  }
  out.push_back(result(fam, "prediction without advice wins 1/M", worst <= 1e-12, fmt("worst deviation %.3e", worst)));

  const RegisterLayout bit({{"q", Role::Workspace, 2}});
  const PureState phi(bit, {{0, Complex{0.6, 0.0}}, {1, Complex{0.8, 0.0}}});
  const auto records = measure_register(phi, "q");
  const bool collapse = records.size() == 2 && equal_up_to_phase(records[0].post_state, PureState(bit, {{0, 1.0}})) &&
                        equal_up_to_phase(records[1].post_state, PureState(bit, {{1, 1.0}}));
  const double p0 = records.at(0).probability;
  out.push_back(result(fam, "measuring 3/5|0> + 4/5|1> gives 0 with probability 9/25",
                       std::abs(p0 - 9.0 / 25.0) <= 1e-12 && std::abs(records.at(1).probability - 16.0 / 25.0) <= 1e-12 &&
                           collapse,
                       fmt("p0 = %.15f", p0)));
  return out;
}

std::vector<CheckResult> grover(Exec exec) {
  const std::string fam = "grover";
  double worst = 0.0;
  double n4t1 = 0.0;
  for (std::size_t N : {2, 4, 8, 16}) {
    std::vector<std::size_t> identity(N);
    for (std::size_t x = 0; x < N; ++x) identity[x] = x;
    RunOptions o;
    o.exec = exec;
    o.method = RunOptions::Method::Exact;
    o.tables = std::vector<std::pair<TruthTable, double>>{{TruthTable(N, N, identity), 1.0}};
    for (std::size_t T = 0; T <= 3; ++T) {
      const double p = estimate_win(run_multi_instance(owf_y_game(N, N), grover_invert(N, N, T), o)).mean;
      worst = std::max(worst, std::abs(p - grover_success(N, 1, T)));
      if (N == 4 && T == 1) n4t1 = p;
    }
  }
  return {result(fam, "simulated Grover equals sin^2((2T+1) asin(1/sqrt N)), N <= 16, T <= 3", worst <= 1e-9,
                 fmt("worst deviation %.3e (tol 1e-9)", worst)),
          result(fam, "N = 4, T = 1 finds the unique preimage with certainty", std::abs(n4t1 - 1.0) <= 1e-9,
                 fmt("%.15f", n4t1))};
}

std::vector<CheckResult> salted_attack(Exec exec) {
  const std::string fam = "salted-attack";
  const std::size_t K = 8;
  const std::size_t M = 4;
  std::vector<CheckResult> out;
  RunOptions o;
  o.exec = exec;
  o.method = RunOptions::Method::Exact;
  o.max_worlds = 1e7;
  for (std::size_t S : {2, 4}) {
    for (std::size_t T : {0, 1}) {
      const double c = static_cast<double>(S * (T + 1)) / (static_cast<double>(K) * std::log2(static_cast<double>(M)));
      const double expected = c + (1.0 - c) / M;
      const double p =
          estimate_win(run_multi_instance(salt_wrap(prediction_game(M), K), salted_prediction_attack(K, M, S, T), o))
              .mean;
      out.push_back(result(fam, fmt("K = 8, M = 4, S = %zu, T = %zu equals c + (1-c)/M", S, T),
                           std::abs(p - expected) <= 1e-12, fmt("%.15f vs %.15f", p, expected)));
    }
  }
  return out;
}

std::vector<CheckResult> prgind(Exec exec) {
  const std::string fam = "prgind";
  struct Worst {
    double ratio = 0.0;
    double excess = -1e9;
    std::size_t cases = 0;
  };
  std::vector<std::array<std::size_t, 4>> grid;
  for (std::size_t N : {4, 9, 16}) {
    for (std::size_t M : {4, 8}) {
      for (std::size_t q = 0; q <= 2; ++q) {
        for (std::size_t qp = 0; qp <= 2; ++qp) grid.push_back({N, M, q, qp});
      }
    }
  }
  const Worst worst = chunked_reduce(
      grid.size(), exec, Worst{},
      [&](Worst& acc, std::size_t i) {
        const auto [N, M, q, qp] = grid[i];
        Rng rng = make_rng(31337, i);
        const auto r = prgind_advantage(N, M, q, qp, random_prgind_program(N, M, q, qp, 2, rng));
        acc.excess = std::max(acc.excess, r.advantage - r.bound);
        if (r.bound > 0) acc.ratio = std::max(acc.ratio, r.advantage / r.bound);
        ++acc.cases;
      },
      [](Worst& acc, const Worst& part) {
        acc.ratio = std::max(acc.ratio, part.ratio);
        acc.excess = std::max(acc.excess, part.excess);
        acc.cases += part.cases;
      });
  Rng rng = make_rng(9, 0);
  const auto m1 = prgind_advantage(4, 1, 1, 1, random_prgind_program(4, 1, 1, 1, 2, rng));
  return {result(fam, "advantage <= 2(sqrt q + q')/sqrt N, N in {4,9,16}, M in {4,8}, q, q' <= 2",
                 worst.excess <= 1e-9,
                 fmt("%zu cases, max advantage - bound %.4f, max ratio %.4f", worst.cases, worst.excess, worst.ratio)),
          result(fam, "M = 1 gives advantage 0", m1.advantage <= 1e-9, fmt("%.3e", m1.advantage))};
}

std::vector<CheckResult> salting_bound(Exec exec) {
  const std::string fam = "salting-bound";
  const std::size_t K = 16;
  const std::size_t M = 2;
  const GameSpec game = salt_wrap(prediction_game(M), K);
  std::vector<CheckResult> out;
  bool ok = true;
  std::string detail;
  for (std::size_t g = 1; g <= 2; ++g) {
    for (std::size_t T = 0; T <= 1; ++T) {
      BruteForceOptions o;
      o.g = g;
      o.T = T;
      o.exec = exec;
      const double v = brute_force_best(game, o).value;
      const double bound =
          std::pow(1.0 / M + 3.0 * std::sqrt(static_cast<double>(g * (T + 1)) / static_cast<double>(K)),
                   static_cast<double>(g));
      ok = ok && v <= bound + 1e-12;
      detail += fmt("g=%zu T=%zu opt %.6f bound %.4f; ", g, T, v, bound);
    }
  }
  out.push_back(result(fam, "exhaustive optimum <= (1/M + 3 sqrt(g(T+1)/K))^g at K = 16", ok, detail));

  BruteForceOptions o;
  o.g = 2;
  o.exec = exec;
  const double g2t0 = brute_force_best(game, o).value;
  const double expected = (1.0 / K) * 0.5 + (1.0 - 1.0 / K) * 0.25;
  out.push_back(result(fam, "g = 2, T = 0 optimum matches the salt-collision closed form",
                       std::abs(g2t0 - expected) <= 1e-12, fmt("%.15f vs %.15f", g2t0, expected)));
  return out;
}

std::vector<CheckResult> multi_instance(Exec exec) {
  const std::string fam = "multi-instance";
  const std::size_t N = 8;
  std::vector<CheckResult> out;
  const GameSpec game = owf_y_game(N, N);
  const AdversaryProgram seq = iterated_grover_multi(2, 1, N, N);
  const auto all = [](std::uint32_t) { return true; };
  const auto won1 = [](std::uint32_t b) { return b == 1; };

  RunOptions exact;
  exact.exec = exec;
  exact.method = RunOptions::Method::Exact;
  exact.tables = fiber_classes(N, N);
  const auto set = run_multi_instance(game, seq, exact);
  const double r1 = conditional_round_success(set, 1, all).mean;
  const double r2 = conditional_round_success(set, 2, won1).mean;
  const double win = estimate_win(set).mean;
  out.push_back(result(fam, "chain rule: Pr[b1] Pr[b2 | b1] equals the win probability", std::abs(r1 * r2 - win) <= 1e-12,
                       fmt("%.12f * %.12f vs %.12f", r1, r2, win)));

  RunOptions mc;
  mc.exec = exec;
  mc.method = RunOptions::Method::MonteCarlo;
  mc.trials = 2000;
  mc.seed = 90210;
  const auto sampled = run_multi_instance(game, seq, mc);
  const Estimate c2 = conditional_round_success(sampled, 2, won1);
  out.push_back(result(fam, "round-2 success given round-1 success is within CI of round-1 success",
                       c2.ci_low <= r1 && r1 <= c2.ci_high,
                       fmt("round 1 %.4f exact; round 2 | b1 %.4f [%.4f, %.4f] over %zu trials (exact %.4f)", r1, c2.mean,
                           c2.ci_low, c2.ci_high, c2.trials, r2)));

  std::vector<std::size_t> identity(N);
  for (std::size_t x = 0; x < N; ++x) identity[x] = x;
  RunOptions unique = exact;
  unique.tables = std::vector<std::pair<TruthTable, double>>{{TruthTable(N, N, identity), 1.0}};
  const double seq_win = estimate_win(run_multi_instance(game, seq, unique)).mean;
  const double par_win = quarantine::parallel_grover_win(N, N, 2, 1, *unique.tables, exec);
  const double par_uniform = quarantine::parallel_grover_win(N, N, 2, 1, *exact.tables, exec);
  out.push_back(result(fam, "quarantined parallel Grover beats the legal sequential one (unique preimages)",
                       par_win > seq_win + 1e-9,
                       fmt("parallel %.6f vs sequential %.6f; uniform H: parallel %.6f vs sequential %.6f", par_win,
                           seq_win, par_uniform, win)));
  return out;
}

std::vector<CheckResult> reductions(Exec exec) {
  const std::string fam = "reductions";
  std::vector<CheckResult> out;
  RunOptions o;
  o.exec = exec;
  o.method = RunOptions::Method::Exact;
  struct Config {
    std::string name;
    GameSpec game;
    AdversaryProgram adv;
  };
  std::vector<Config> configs;
  for (std::size_t N = 1; N <= 4; ++N) configs.push_back({fmt("yaobox N=%zu", N), yaobox_game(N), yaobox_store_first(N)});
  for (std::size_t S = 1; S <= 2; ++S) {
    for (std::size_t T = 0; T <= 1; ++T) {
      if (S * (T + 1) > 4) continue;
      configs.push_back({fmt("salted prediction K=4 M=2 S=%zu T=%zu", S, T), salt_wrap(prediction_game(2), 4),
                         salted_prediction_attack(4, 2, S, T)});
    }
  }
  configs.push_back({"prediction M=2 storing H(0)", salt_wrap(prediction_game(2), 1), salted_prediction_attack(1, 2, 1, 0)});
  for (std::size_t M = 1; M <= 2; ++M) {
    configs.push_back({fmt("crh N=2 M=%zu", M), crh_game(2, M), crh_store_collision(2, 2, M, 1)});
  }
  for (double eta : {0.0, 0.1, 0.3}) {
    configs.push_back({fmt("owf quantum advice eta=%.1f", eta), owf_game(2, 2), noisy_owf_advice(2, 2, eta)});
  }
  bool ok = true;
  double min_slack = 1e9;
  for (const auto& c : configs) {
    const double orig = estimate_win(run_multi_instance(c.game, c.adv, o)).mean;
    const double removed = estimate_win(run_multi_instance(c.game, remove_advice(c.adv), o)).mean;
    const double slack = removed - std::ldexp(orig, -static_cast<int>(c.adv.advice.bits));
    min_slack = std::min(min_slack, slack);
    ok = ok && slack >= -1e-12;
  }
  out.push_back(result(fam, "remove_advice keeps at least 2^-S of the win probability (S <= 2)", ok,
                       fmt("%zu configs, min slack %.6f", configs.size(), min_slack)));

  double gentle = -1e9;
  double uni = -1e9;
  double exact_final = 0.0;
  std::size_t branches = 0;
  for (std::size_t g = 1; g <= 3; ++g) {
    for (std::size_t k = 1; k <= 2; ++k) {
      for (double eta : {0.05, 0.2, 0.4}) {
        const auto d = wrapper_disturbance(eta, k, g);
        gentle = std::max(gentle, d.gentle_excess);
        uni = std::max(uni, d.union_excess);
        branches += d.branches;
      }
      exact_final = std::max(exact_final, wrapper_disturbance(0.0, k, g).final_distance);
    }
  }
  out.push_back(result(fam, "k-copy wrapper: per-round advice disturbance <= sqrt(eps)", gentle <= 1e-9,
                       fmt("max excess %.3e over %zu branches", gentle, branches)));
  out.push_back(result(fam, "k-copy wrapper: accumulated disturbance <= sum of sqrt(eps_i)", uni <= 1e-9,
                       fmt("max excess %.3e", uni)));
  out.push_back(result(fam, "k-copy wrapper: perfect adversary leaves the advice intact", exact_final <= 1e-9,
                       fmt("max distance %.3e", exact_final)));

  bool never_lower = true;
  for (double eta : {0.0, 0.1, 0.3, 0.5}) {
    const auto inner = noisy_owf_advice(2, 2, eta);
    const double base = estimate_win(run_multi_instance(owf_game(2, 2), inner, o)).mean;
    const double wrapped =
        estimate_win(run_multi_instance(owf_game(2, 2), public_verif_wrapper(inner, 1, owf_game(2, 2), 1), o)).mean;
    never_lower = never_lower && wrapped >= base - 1e-12;
  }
  out.push_back(result(fam, "k = 1 wrapper never wins less than the adversary it wraps", never_lower, "N = M = 2"));
  return out;
}

std::vector<CheckResult> hellman(Exec exec) {
  const std::string fam = "hellman";
  HellmanExperiment e;
  e.N = 4096;
  e.m = e.t = e.l = 16;
  e.trials = 1000;
  e.seed = 12;
  const Estimate big = hellman_success(e, exec);
  std::vector<CheckResult> out{result(fam, "N = 2^12, m = t = l = 16 inverts with probability >= 0.25", big.mean >= 0.25,
                                      fmt("%.4f [%.4f, %.4f] over 1000 trials", big.mean, big.ci_low, big.ci_high))};

  const std::vector<std::size_t> S_axis{16, 32, 64, 128, 256};
  const std::vector<std::size_t> T_axis{4, 16, 64, 256};
  std::vector<std::vector<Estimate>> grid(S_axis.size(), std::vector<Estimate>(T_axis.size()));
  for (std::size_t i = 0; i < S_axis.size(); ++i) {
    for (std::size_t j = 0; j < T_axis.size(); ++j) {
      HellmanExperiment p = hellman_for_budget(1024, S_axis[i], T_axis[j]);
      p.trials = 400;
      p.seed = 1000 + i * 10 + j;
      grid[i][j] = hellman_success(p, exec);
    }
  }
  std::size_t violations = 0;
  for (std::size_t i = 0; i < S_axis.size(); ++i) {
    for (std::size_t j = 0; j < T_axis.size(); ++j) {
      if (i + 1 < S_axis.size() && grid[i + 1][j].ci_high < grid[i][j].ci_low) ++violations;
      if (j + 1 < T_axis.size() && grid[i][j + 1].ci_high < grid[i][j].ci_low) ++violations;
    }
  }
  out.push_back(result(fam, "success monotone in S and T within CI at N = 2^10", violations == 0,
                       fmt("%zu significant decreases; corner values %.3f -> %.3f", violations, grid[0][0].mean,
                           grid.back().back().mean)));
  return out;
}

std::vector<CheckResult> arena(Exec exec) {
  const std::string fam = "arena";
  std::vector<CheckResult> out;
  RunOptions o;
  o.exec = exec;
  o.method = RunOptions::Method::Exact;

  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = make_rng(6060, i);
    const std::size_t N = 2 + uniform_index(rng, 2);
    const std::size_t M = 2 + uniform_index(rng, 2);
    const std::size_t T = uniform_index(rng, 3);
    RunOptions c = o;
    c.mode = static_cast<OracleMode>(uniform_index(rng, 4));
    GameSpec game;
    AdversaryProgram adv;
    switch (uniform_index(rng, 3)) {
      case 0:
        game = owf_y_game(N, M);
        adv = grover_invert(N, M, T);
        break;
      case 1:
        game = prediction_game(M);
        adv = random_guesser(game);
        c.mode = OracleMode::Exact;
        break;
      default:
        game = yaobox_game(N);
        adv = yaobox_store_first(N);
        c.mode = OracleMode::Exact;
        break;
    }
    const double multi = estimate_win(run_multi_instance(game, adv, c)).mean;
    const double single = single_win_probability(game, adv, c);
    worst = std::max(worst, std::abs(multi - single));
  }
  out.push_back(result(fam, "g = 1 multi-instance equals single-game semantics on 100 configs", worst <= 1e-9,
                       fmt("worst gap %.3e", worst)));

  const GameSpec owfy = owf_y_game(2, 2);
  AdversaryProgram indep;
  indep.name = "independent";
  indep.rounds = 2;
  indep.budget = 1;
  ClassicalBody body;
  body.coins = 2;
  body.online = [](ClassicalRound& ctx) -> std::size_t {
    if (ctx.round == 0) return ctx.coin;
    return *ctx.oracle.query(0) == static_cast<std::size_t>(ctx.challenge.at(0)) ? 0 : 1;
  };
  indep.body = body;
  const auto set = run_multi_instance(owfy, indep, o);
  const double w = estimate_win(set).mean;
  const double q1 = conditional_round_success(set, 2, [](std::uint32_t b) { return b == 1; }).mean;
  const double q0 = conditional_round_success(set, 2, [](std::uint32_t b) { return b == 0; }).mean;
  out.push_back(result(fam, "independent rounds multiply: p q = 1/2 * 3/4",
                       std::abs(w - 0.375) <= 1e-12 && std::abs(q1 - 0.75) <= 1e-12 && std::abs(q0 - 0.75) <= 1e-12,
                       fmt("win %.12f, round 2 | b1=1 %.12f, | b1=0 %.12f", w, q1, q0)));

  const double rep = estimate_win(run_multi_instance(owfy, repeat_per_instance(random_guesser(owfy), 2), o)).mean;
  bool per_h = true;
  for (std::uint64_t h = 0; h < 4; ++h) {
    RunOptions one = o;
    one.tables = std::vector<std::pair<TruthTable, double>>{{TruthTable::from_index(2, 2, h), 1.0}};
    const double s = estimate_win(run_multi_instance(yaobox_game(2), yaobox_store_first(2), one)).mean;
    const double d =
        estimate_win(run_multi_instance(yaobox_game(2), repeat_per_instance(yaobox_store_first(2), 2), one)).mean;
    per_h = per_h && std::abs(d - s * s) <= 1e-12;
  }
  out.push_back(result(fam, "repeat-per-instance: guesser wins (1/M)^2 and per-H rates square",
                       std::abs(rep - 0.25) <= 1e-12 && per_h, fmt("guesser %.12f", rep)));

  std::size_t classical_answers_mismatch = 0;
  for (const auto& adv : {repeat_per_instance(noisy_owf_advice(2, 2, 0.0), 2), repeat_per_instance(yaobox_store_first(2), 3)}) {
    const GameSpec& game = adv.is_quantum() ? owf_game(2, 2) : yaobox_game(2);
    RunOptions a = o;
    RunOptions b = o;
    b.return_answer_state = false;
    const auto sa = run_multi_instance(game, adv, a);
    const auto sb = run_multi_instance(game, adv, b);
    for (const auto& [k, v] : sa.patterns) {
      if (std::abs(v - (sb.patterns.contains(k) ? sb.patterns.at(k) : 0.0)) > 1e-12) ++classical_answers_mismatch;
    }
  }
  out.push_back(result(fam, "returning the answer state changes nothing for classical answers",
                       classical_answers_mismatch == 0, fmt("%zu pattern mismatches", classical_answers_mismatch)));

  std::size_t idempotence = 0;
  std::size_t checked = 0;
  for (std::uint64_t h = 0; h < 16; ++h) {
    const TruthTable table = TruthTable::from_index(2, 4, h % 16);
    const GameSpec game = owf_y_game(2, 4);
    const AdversaryProgram adv = grover_invert(2, 4, 1);
    QuantumWorld world{OracleSession(OracleMode::Exact, 2, 4, quantum_start(adv, table), table)};
    for (auto& next : play_round(world, game, adv, 0, h % 4, true)) {
      for (const auto& again : challenger_verify_superposed(next.session, "x0", game, h % 4)) {
        ++checked;
        if (again.bit != ((next.bits & 1U) != 0) || std::abs(again.probability - 1.0) > 1e-9) ++idempotence;
      }
    }
  }
  out.push_back(result(fam, "verifying twice gives the same bit with probability 1", idempotence == 0,
                       fmt("%zu re-verifications, %zu disagreements", checked, idempotence)));

  RunOptions mc = o;
  mc.method = RunOptions::Method::MonteCarlo;
  mc.trials = 200;
  mc.keep_transcripts = true;
  mc.mode = OracleMode::Compressed;
  const auto sampled = run_multi_instance(owf_y_game(4, 4), iterated_grover_multi(3, 1, 4, 4), mc);
  std::size_t order = 0;
  std::size_t over_budget = 0;
  for (const auto& t : sampled.samples) {
    for (std::size_t i = 0; i < t.rounds.size(); ++i) {
      if (t.rounds[i].measured_seq <= t.rounds[i].issued_seq) ++order;
      if (i + 1 < t.rounds.size() && t.rounds[i + 1].issued_seq <= t.rounds[i].measured_seq) ++order;
      if (t.rounds[i].queries > 2) ++over_budget;
    }
  }
  out.push_back(result(fam, "rounds are strictly sequential and within budget", order == 0 && over_budget == 0,
                       fmt("%zu ordering violations, %zu budget violations", order, over_budget)));
  return out;
}

}  // namespace

double oracle_equivalence_worst_tv(std::size_t programs, std::uint64_t seed, Exec exec) {
  return chunked_reduce(
      programs, exec, 0.0,
      [seed](double& acc, std::size_t i) {
        Rng rng = make_rng(seed, i);
        const std::size_t N = 2 + uniform_index(rng, 3);
        const std::size_t M = 2 + uniform_index(rng, 3);
        const QueryProgram p = random_program(N, M, 3, rng);
        DistributionOptions opt;
        opt.exec = Exec::Serial;
        std::vector<Distribution> d;
        for (auto mode : {OracleMode::Exact, OracleMode::Standard, OracleMode::Phase, OracleMode::Compressed}) {
          d.push_back(oracle_output_distribution(p, mode, N, M, opt));
        }
        for (std::size_t a = 0; a < d.size(); ++a) {
          for (std::size_t b = a + 1; b < d.size(); ++b) acc = std::max(acc, total_variation(d[a], d[b]));
        }
      },
      [](double& acc, double part) { acc = std::max(acc, part); });
}

WrapperDisturbance wrapper_disturbance(double eta, std::size_t k, std::size_t g) {
  const GameSpec game = owf_game(2, 2);
  const AdversaryProgram inner = noisy_owf_advice(2, 2, eta);
  const AdversaryProgram adv = public_verif_wrapper(inner, k, game, g);
  const auto advice = wrapper_advice_registers(inner, k);
  WrapperDisturbance out;
  for (std::uint64_t h = 0; h < table_count(2, 2); ++h) {
    const TruthTable table = TruthTable::from_index(2, 2, h);
    QuantumWorld start{OracleSession(OracleMode::Exact, 2, 2, quantum_start(adv, table), table)};
    const DensityMatrix original = reduced_density(start.session.state(), advice);
    std::function<void(const QuantumWorld&, std::size_t, double)> walk = [&](const QuantumWorld& world,
                                                                             std::size_t round, double budget) {
      if (round == g) {
        const double d = trace_distance(reduced_density(world.session.state(), advice), original);
        out.final_distance = std::max(out.final_distance, d);
        return;
      }
      const DensityMatrix before = reduced_density(world.session.state(), advice);
      for (std::size_t r = 0; r < game.randomness; ++r) {
        for (const auto& next : play_round(world, game, adv, round, r, true)) {
          if (((next.bits >> round) & 1U) == 0) continue;
          ++out.branches;
          const double eps = std::max(0.0, 1.0 - next.weight / world.weight);
          const DensityMatrix after = reduced_density(next.session.state(), advice);
          out.gentle_excess = std::max(out.gentle_excess, trace_distance(after, before) - std::sqrt(eps));
          const double total = budget + std::sqrt(eps);
          out.union_excess = std::max(out.union_excess, trace_distance(after, original) - total);
          QuantumWorld normalized = next;
          normalized.weight = 1.0;
          walk(normalized, round + 1, total);
        }
      }
    };
    walk(start, 0, 0.0);
  }
  if (out.branches == 0) {
    out.gentle_excess = 0.0;
    out.union_excess = 0.0;
  }
  return out;
}

const std::vector<std::string>& check_families() {
  static const std::vector<std::string> families{
      "oracle-equiv", "bounded-db", "conditioning-bound",         "known-values", "grover",     "salted-attack",
      "prgind",       "salting-bound", "multi-instance", "reductions",   "hellman",    "arena"};
  return families;
}

std::vector<CheckResult> run_family(const std::string& family, Exec exec) {
  if (family == "oracle-equiv") return oracle_equiv(exec);
  if (family == "bounded-db") return bounded_db(exec);
  if (family == "conditioning-bound") return conditioning_bound(exec);
  if (family == "known-values") return known_values(exec);
  if (family == "grover") return grover(exec);
  if (family == "salted-attack") return salted_attack(exec);
  if (family == "prgind") return prgind(exec);
  if (family == "salting-bound") return salting_bound(exec);
  if (family == "multi-instance") return multi_instance(exec);
  if (family == "reductions") return reductions(exec);
  if (family == "hellman") return hellman(exec);
  if (family == "arena") return arena(exec);
  throw std::invalid_argument("unknown check family '" + family + "'");
}

}  // namespace qtsl
