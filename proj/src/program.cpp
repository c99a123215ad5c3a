#include "qtsl/program.hpp"

#include <cmath>

namespace qtsl {

QStep QStep::unitary(std::vector<std::string> regs, Eigen::MatrixXcd matrix) {
  QStep s;
  s.kind = Kind::Unitary;
  s.regs = std::move(regs);
  s.matrix = std::move(matrix);
  return s;
}

QStep QStep::compute(std::vector<std::string> inputs, std::string out, std::function<std::size_t(Digits)> fn) {
  QStep s;
  s.kind = Kind::Compute;
  s.regs = std::move(inputs);
  s.out = std::move(out);
  s.fn = std::move(fn);
  return s;
}

QStep QStep::phase_step(std::vector<std::string> regs, std::function<Complex(Digits)> phase) {
  QStep s;
  s.kind = Kind::Phase;
  s.regs = std::move(regs);
  s.phase = std::move(phase);
  return s;
}

QStep QStep::query(std::string in, std::string out, int sign) {
  QStep s;
  s.kind = Kind::Query;
  s.regs = {std::move(in)};
  s.out = std::move(out);
  s.sign = sign;
  return s;
}

QStep inverse(const QStep& step) {
  QStep inv = step;
  switch (step.kind) {
    case QStep::Kind::Unitary: inv.matrix = step.matrix.adjoint(); break;
    case QStep::Kind::Compute:
    case QStep::Kind::Phase:
    case QStep::Kind::Query: inv.sign = -step.sign; break;
  }
  return inv;
}

std::vector<QStep> inverse(const std::vector<QStep>& steps) {
  std::vector<QStep> inv;
  inv.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) inv.push_back(inverse(*it));
  return inv;
}

QStep rename(const QStep& step, const std::function<std::string(const std::string&)>& map) {
  QStep r = step;
  for (auto& name : r.regs) name = map(name);
  if (!r.out.empty()) r.out = map(r.out);
  return r;
}

std::size_t count_queries(const std::vector<QStep>& steps) {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const QStep& s) { return s.kind == QStep::Kind::Query; }));
}

PureState apply_step(const PureState& state, const QStep& step) {
  const auto& layout = state.layout();
  switch (step.kind) {
    case QStep::Kind::Unitary: return apply_unitary(state, step.regs, step.matrix);
    case QStep::Kind::Compute: {
      std::vector<std::size_t> idx;
      for (const auto& name : step.regs) idx.push_back(layout.index(name));
      const std::size_t out = layout.index(step.out);
      if (std::find(idx.begin(), idx.end(), out) != idx.end()) {
        throw std::invalid_argument("compute step writes one of its inputs");
      }
      const std::size_t size = layout[out].size;
      std::vector<std::size_t> digits(idx.size());
      std::vector<PureState::Entry> entries;
      entries.reserve(state.support());
      for (const auto& [label, amp] : state.entries()) {
        for (std::size_t k = 0; k < idx.size(); ++k) digits[k] = layout.digit(label, idx[k]);
        const std::size_t v = step.fn(digits) % size;
        const std::size_t u = layout.digit(label, out);
        const std::size_t next = step.sign >= 0 ? (u + v) % size : (u + size - v) % size;
        entries.emplace_back(layout.with_digit(label, out, next), amp);
      }
      return finish_state(layout, std::move(entries));
    }
    case QStep::Kind::Phase: {
      std::vector<std::size_t> idx;
      for (const auto& name : step.regs) idx.push_back(layout.index(name));
      std::vector<std::size_t> digits(idx.size());
      return apply_diagonal(state, [&](Label label) {
        for (std::size_t k = 0; k < idx.size(); ++k) digits[k] = layout.digit(label, idx[k]);
        const Complex p = step.phase(digits);
        return step.sign >= 0 ? p : std::conj(p);
      });
    }
    case QStep::Kind::Query: throw std::logic_error("query steps need an oracle session");
  }
  return state;
}

void apply_steps(OracleSession& session, const std::vector<QStep>& steps, const QueryFilter* filter) {
  for (const auto& step : steps) {
    if (step.kind == QStep::Kind::Query) {
      session.query(step.regs.at(0), step.out, step.sign, filter);
    } else {
      session.set_state(apply_step(session.state(), step));
    }
  }
}

Distribution output_distribution(const PureState& state, std::span<const std::string> outputs) {
  const auto& layout = state.layout();
  std::vector<std::size_t> idx;
  for (const auto& name : outputs) idx.push_back(layout.index(name));
  Distribution dist;
  std::vector<std::size_t> key(idx.size());
  for (const auto& [label, amp] : state.entries()) {
    for (std::size_t k = 0; k < idx.size(); ++k) key[k] = layout.digit(label, idx[k]);
    dist[key] += std::norm(amp);
  }
  return dist;
}

double total_variation(const Distribution& a, const Distribution& b) {
  double tv = 0.0;
  for (const auto& [k, p] : a) {
    auto it = b.find(k);
    tv += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, p] : b) {
    if (!a.contains(k)) tv += p;
  }
  return 0.5 * tv;
}

namespace {

Distribution run_once(const QueryProgram& program, OracleMode mode, std::size_t N, std::size_t M,
                      std::optional<TruthTable> table) {
  const PureState start = PureState::zero(RegisterLayout(program.registers));
  OracleSession session(mode, N, M, start, std::move(table));
  apply_steps(session, program.steps);
  return output_distribution(session.state(), program.outputs);
}

void accumulate(Distribution& acc, const Distribution& d, double weight) {
  for (const auto& [k, p] : d) acc[k] += weight * p;
}

}  // namespace

Distribution oracle_output_distribution(const QueryProgram& program, OracleMode mode, std::size_t N, std::size_t M,
                                        const DistributionOptions& options) {
  if (mode != OracleMode::Exact) return run_once(program, mode, N, M, std::nullopt);

  std::uint64_t tables = 0;
  bool enumerable = true;
  try {
    tables = table_count(N, M);
    enumerable = tables <= options.max_tables;
  } catch (const std::overflow_error&) {
    enumerable = false;
  }
  if (enumerable) {
    const double w = 1.0 / static_cast<double>(tables);
    return chunked_reduce(
        static_cast<std::size_t>(tables), options.exec, Distribution{},
        [&](Distribution& acc, std::size_t t) {
          accumulate(acc, run_once(program, mode, N, M, TruthTable::from_index(N, M, t)), w);
        },
        [](Distribution& acc, const Distribution& part) { accumulate(acc, part, 1.0); });
  }
  if (!options.allow_monte_carlo) {
    throw GuardExceeded("M^N tables exceed the enumeration guard and Monte-Carlo fallback is disabled");
  }
  const double w = 1.0 / static_cast<double>(options.trials);
  return chunked_reduce(
      options.trials, options.exec, Distribution{},
      [&](Distribution& acc, std::size_t i) {
        Rng rng = make_rng(options.seed, i);
        accumulate(acc, run_once(program, mode, N, M, TruthTable::sample(N, M, rng)), w);
      },
      [](Distribution& acc, const Distribution& part) { accumulate(acc, part, 1.0); });
}

QueryProgram random_program(std::size_t N, std::size_t M, std::size_t max_queries, Rng& rng) {
  QueryProgram p;
  p.registers = {{"x", Role::Input, N}, {"u", Role::Output, M}, {"w", Role::Workspace, 2}};
  p.outputs = {"x", "u", "w"};
  const std::vector<std::string> all = {"x", "u", "w"};
  const std::size_t dim = N * M * 2;
  const std::size_t q = uniform_index(rng, max_queries + 1);
  p.steps.push_back(QStep::unitary(all, random_unitary(dim, rng)));
  for (std::size_t i = 0; i < q; ++i) {
    p.steps.push_back(QStep::query("x", "u", uniform_index(rng, 4) == 0 ? -1 : 1));
    p.steps.push_back(QStep::unitary(all, random_unitary(dim, rng)));
  }
  return p;
}

}  // namespace qtsl
