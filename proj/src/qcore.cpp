#include "qtsl/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qtsl {

std::size_t dimension_guard() {
  constexpr std::size_t kDefault = 4096;
  const char* raw = std::getenv("QTSL_GUARD_OVERRIDE");
  if (raw == nullptr || *raw == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) return kDefault;
  return static_cast<std::size_t>(value);
}

// ---------------------------------------------------------------------------
// RegisterLayout

RegisterLayout::RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
  std::unordered_set<std::string> names;
  for (const auto& reg : registers_) {
    if (reg.size < 1) throw std::invalid_argument("register '" + reg.name + "' has an empty alphabet");
    if (!names.insert(reg.name).second) throw std::invalid_argument("duplicate register name '" + reg.name + "'");
  }
  strides_.assign(registers_.size(), 1);
  Label dim = 1;
  for (std::size_t i = registers_.size(); i-- > 0;) {
    strides_[i] = dim;
    const Label size = registers_[i].size;
    if (dim > (Label{1} << 62) / size) throw std::overflow_error("register layout dimension overflows 2^62");
    dim *= size;
  }
  dimension_ = dim;
}

std::size_t RegisterLayout::index(std::string_view name) const {
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].name == name) return i;
  }
  throw std::invalid_argument("unknown register '" + std::string(name) + "'");
}

bool RegisterLayout::contains(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(), [&](const Register& r) { return r.name == name; });
}

Label RegisterLayout::encode(std::span<const std::size_t> digits) const {
  if (digits.size() != registers_.size()) throw std::invalid_argument("digit count does not match the layout");
  Label label = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= registers_[i].size) {
      throw std::invalid_argument("digit out of range for register '" + registers_[i].name + "'");
    }
    label += digits[i] * strides_[i];
  }
  return label;
}

std::vector<std::size_t> RegisterLayout::decode(Label label) const {
  std::vector<std::size_t> digits(registers_.size());
  for (std::size_t i = 0; i < registers_.size(); ++i) digits[i] = digit(label, i);
  return digits;
}

RegisterLayout RegisterLayout::append(Register reg) const {
  auto regs = registers_;
  regs.push_back(std::move(reg));
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::remove(std::string_view name) const {
  auto regs = registers_;
  regs.erase(regs.begin() + static_cast<std::ptrdiff_t>(index(name)));
  return RegisterLayout(std::move(regs));
}

std::string RegisterLayout::describe(Label label) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (i) out << ',';
    out << registers_[i].name << '=' << digit(label, i);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// PureState

PureState finish_state(RegisterLayout layout, std::vector<PureState::Entry> entries, bool check_norm) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<PureState::Entry> merged;
  merged.reserve(entries.size());
  for (const auto& [label, amp] : entries) {
    if (label >= layout.dimension()) throw std::invalid_argument("label outside the layout");
    if (!merged.empty() && merged.back().first == label) {
      merged.back().second += amp;
    } else {
      merged.emplace_back(label, amp);
    }
  }
  std::erase_if(merged, [](const auto& e) { return std::abs(e.second) < kPruneThreshold; });
  if (check_norm) {
    double norm = 0.0;
    for (const auto& e : merged) norm += std::norm(e.second);
    if (std::abs(norm - 1.0) > kNormTolerance) {
      throw std::domain_error("state is not normalized (norm^2 = " + std::to_string(norm) + ")");
    }
  }
  return PureState(PureState::Unchecked{}, std::move(layout), std::move(merged));
}

PureState::PureState(RegisterLayout layout, std::vector<Entry> entries) {
  *this = finish_state(std::move(layout), std::move(entries));
}

PureState PureState::normalized(RegisterLayout layout, std::vector<Entry> entries) {
  double norm = 0.0;
  for (const auto& e : entries) norm += std::norm(e.second);
  if (norm <= 0.0) throw std::domain_error("cannot normalize the zero vector");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& e : entries) e.second *= scale;
  return finish_state(std::move(layout), std::move(entries), false);
}

PureState PureState::basis(RegisterLayout layout, std::span<const std::size_t> digits) {
  const Label label = layout.encode(digits);
  return PureState(std::move(layout), {{label, Complex{1.0, 0.0}}});
}

PureState PureState::zero(RegisterLayout layout) { return PureState(std::move(layout), {{0, Complex{1.0, 0.0}}}); }

Complex PureState::amplitude(Label label) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                             [](const Entry& e, Label l) { return e.first < l; });
  if (it != entries_.end() && it->first == label) return it->second;
  return {};
}

double PureState::norm_squared() const {
  double norm = 0.0;
  for (const auto& e : entries_) norm += std::norm(e.second);
  return norm;
}

// ---------------------------------------------------------------------------
// Operations

PureState apply_classical(const PureState& state, std::string_view in, std::string_view out,
                          const std::function<std::size_t(std::size_t)>& f, int sign) {
  const auto& layout = state.layout();
  const std::size_t in_reg = layout.index(in);
  const std::size_t out_reg = layout.index(out);
  if (in_reg == out_reg) throw std::invalid_argument("input and output registers must differ");
  const std::size_t modulus = layout[out_reg].size;
  const std::size_t in_size = layout[in_reg].size;
  std::vector<std::size_t> table(in_size);
  for (std::size_t x = 0; x < in_size; ++x) {
    const std::size_t fx = f(x);
    if (fx >= modulus) throw std::invalid_argument("function value outside the output alphabet of '" + std::string(out) + "'");
    table[x] = sign >= 0 ? fx : (modulus - fx) % modulus;
  }
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support());
  for (const auto& [label, amp] : state.entries()) {
    const std::size_t x = layout.digit(label, in_reg);
    const std::size_t u = layout.digit(label, out_reg);
    entries.emplace_back(layout.with_digit(label, out_reg, (u + table[x]) % modulus), amp);
  }
  return finish_state(layout, std::move(entries));
}

PureState apply_permutation(const PureState& state, const std::function<Label(Label)>& map) {
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support());
  for (const auto& [label, amp] : state.entries()) entries.emplace_back(map(label), amp);
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first) throw std::logic_error("classical map is not reversible on the support");
  }
  return finish_state(state.layout(), std::move(entries));
}

PureState apply_unitary(const PureState& state, std::span<const std::string> regs, const Eigen::MatrixXcd& matrix) {
  const auto& layout = state.layout();
  std::vector<std::size_t> idx;
  std::size_t dim = 1;
  for (const auto& name : regs) {
    idx.push_back(layout.index(name));
    dim *= layout[idx.back()].size;
  }
  if (static_cast<std::size_t>(matrix.rows()) != dim || static_cast<std::size_t>(matrix.cols()) != dim) {
    throw std::invalid_argument("unitary dimension does not match the registers");
  }
  auto sub_index = [&](Label label) {
    std::size_t s = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) s = s * layout[idx[k]].size + layout.digit(label, idx[k]);
    return s;
  };
  auto rest_of = [&](Label label) {
    for (std::size_t k : idx) label -= layout.digit(label, k) * layout.stride(k);
    return label;
  };
  std::vector<Label> offset(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    std::size_t rem = s;
    Label off = 0;
    for (std::size_t k = idx.size(); k-- > 0;) {
      const std::size_t size = layout[idx[k]].size;
      off += (rem % size) * layout.stride(idx[k]);
      rem /= size;
    }
    offset[s] = off;
  }

  std::unordered_map<Label, std::size_t> group_of;
  std::vector<Label> group_rest;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> groups;
  for (const auto& [label, amp] : state.entries()) {
    const Label rest = rest_of(label);
    auto [it, inserted] = group_of.try_emplace(rest, groups.size());
    if (inserted) {
      group_rest.push_back(rest);
      groups.emplace_back();
    }
    groups[it->second].emplace_back(sub_index(label), amp);
  }

  std::vector<PureState::Entry> entries;
  Eigen::VectorXcd acc(dim);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    acc.setZero();
    for (const auto& [col, amp] : groups[g]) acc += matrix.col(static_cast<Eigen::Index>(col)) * amp;
    for (std::size_t row = 0; row < dim; ++row) {
      if (std::abs(acc[static_cast<Eigen::Index>(row)]) >= kPruneThreshold) {
        entries.emplace_back(group_rest[g] + offset[row], acc[static_cast<Eigen::Index>(row)]);
      }
    }
  }
  return finish_state(layout, std::move(entries));
}

PureState apply_unitary(const PureState& state, std::string_view reg, const Eigen::MatrixXcd& matrix) {
  const std::string name(reg);
  return apply_unitary(state, std::span<const std::string>(&name, 1), matrix);
}

PureState apply_diagonal(const PureState& state, const std::function<Complex(Label)>& phase) {
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support());
  for (const auto& [label, amp] : state.entries()) entries.emplace_back(label, amp * phase(label));
  return finish_state(state.layout(), std::move(entries));
}

Eigen::MatrixXcd qft_matrix(std::size_t n, bool inverse) {
  Eigen::MatrixXcd m(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double sign = inverse ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      // Reduce the exponent first so large n does not lose phase accuracy.
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = std::polar(scale, angle);
    }
  }
  return m;
}

PureState qft(const PureState& state, std::string_view reg) {
  const auto n = state.layout()[state.layout().index(reg)].size;
  if (n == 1) return state;
  return apply_unitary(state, reg, qft_matrix(n));
}

PureState inverse_qft(const PureState& state, std::string_view reg) {
  const auto n = state.layout()[state.layout().index(reg)].size;
  if (n == 1) return state;
  return apply_unitary(state, reg, qft_matrix(n, true));
}

std::vector<MeasurementRecord> measure(const PureState& state, const std::function<std::int64_t(Label)>& partition) {
  if (state.empty()) throw std::invalid_argument("cannot measure an empty state");
  std::map<std::int64_t, std::vector<PureState::Entry>> branches;
  for (const auto& e : state.entries()) branches[partition(e.first)].push_back(e);
  std::vector<MeasurementRecord> records;
  const double total = state.norm_squared();
  for (auto& [outcome, entries] : branches) {
    double p = 0.0;
    for (const auto& e : entries) p += std::norm(e.second);
    if (p <= 0.0) continue;
    records.push_back({outcome, p / total, PureState::normalized(state.layout(), std::move(entries))});
  }
  return records;
}

std::vector<MeasurementRecord> measure_register(const PureState& state, std::string_view reg) {
  const auto& layout = state.layout();
  const std::size_t r = layout.index(reg);
  return measure(state, [&](Label l) { return static_cast<std::int64_t>(layout.digit(l, r)); });
}

const MeasurementRecord& select_outcome(const std::vector<MeasurementRecord>& records, std::int64_t outcome) {
  for (const auto& rec : records) {
    if (rec.outcome == outcome) return rec;
  }
  throw std::domain_error("conditioning on a zero-probability outcome " + std::to_string(outcome));
}

Complex inner_product(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) throw std::invalid_argument("states have different layouts");
  Complex acc{};
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      acc += std::conj(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  return acc;
}

double trace_distance_pure(const PureState& a, const PureState& b) {
  const double overlap = std::norm(inner_product(a, b));
  return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, overlap)));
}

bool equal_up_to_phase(const PureState& a, const PureState& b) {
  return std::abs(std::abs(inner_product(a, b)) - 1.0) <= kNormTolerance;
}

PureState extend(const PureState& state, Register reg, std::size_t value) {
  if (value >= reg.size) throw std::invalid_argument("initial value outside register alphabet");
  const Label size = reg.size;
  auto layout = state.layout().append(std::move(reg));
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support());
  for (const auto& [label, amp] : state.entries()) entries.emplace_back(label * size + value, amp);
  return finish_state(std::move(layout), std::move(entries));
}

std::optional<std::size_t> definite_value(const PureState& state, std::string_view reg) {
  const auto& layout = state.layout();
  const std::size_t r = layout.index(reg);
  std::optional<std::size_t> value;
  for (const auto& e : state.entries()) {
    const std::size_t d = layout.digit(e.first, r);
    if (value && *value != d) return std::nullopt;
    value = d;
  }
  return value;
}

PureState discard(const PureState& state, std::string_view reg) {
  if (!definite_value(state, reg)) {
    throw std::logic_error("register '" + std::string(reg) + "' is not in a definite basis state");
  }
  const auto& layout = state.layout();
  const std::size_t r = layout.index(reg);
  const Label stride = layout.stride(r);
  const Label block = stride * layout[r].size;
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support());
  for (const auto& [label, amp] : state.entries()) entries.emplace_back((label / block) * stride + label % stride, amp);
  return finish_state(layout.remove(reg), std::move(entries));
}

// ---------------------------------------------------------------------------
// Mixed states

namespace {

struct Split {
  std::vector<std::size_t> keep_idx;
};

Split split_for(const RegisterLayout& layout, std::span<const std::string> keep) {
  Split s;
  for (const auto& name : keep) s.keep_idx.push_back(layout.index(name));
  return s;
}

}  // namespace

DensityMatrix reduced_density(const Ensemble& ensemble, std::span<const std::string> keep) {
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  const auto& layout = ensemble.front().state.layout();
  double total_weight = 0.0;
  for (const auto& w : ensemble) {
    if (!(w.state.layout() == layout)) throw std::invalid_argument("ensemble states have different layouts");
    if (w.weight < 0.0) throw std::invalid_argument("negative ensemble weight");
    total_weight += w.weight;
  }
  if (std::abs(total_weight - 1.0) > kNormTolerance) throw std::invalid_argument("ensemble weights do not sum to 1");
  const Split split = split_for(layout, keep);

  auto sub_label = [&](Label label) {
    Label s = 0;
    for (std::size_t k : split.keep_idx) s = s * layout[k].size + layout.digit(label, k);
    return s;
  };
  auto env_label = [&](Label label) {
    for (std::size_t k : split.keep_idx) label -= layout.digit(label, k) * layout.stride(k);
    return label;
  };

  std::vector<Label> basis;
  for (const auto& w : ensemble) {
    for (const auto& e : w.state.entries()) basis.push_back(sub_label(e.first));
  }
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  if (basis.size() > dimension_guard()) {
    throw GuardExceeded("reduced density dimension " + std::to_string(basis.size()) + " exceeds guard " +
                        std::to_string(dimension_guard()));
  }
  std::unordered_map<Label, Eigen::Index> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], static_cast<Eigen::Index>(i));

  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& w : ensemble) {
    if (w.weight == 0.0) continue;
    std::unordered_map<Label, std::vector<std::pair<Eigen::Index, Complex>>> by_env;
    for (const auto& [label, amp] : w.state.entries()) by_env[env_label(label)].emplace_back(pos.at(sub_label(label)), amp);
    for (const auto& [env, vec] : by_env) {
      for (const auto& [i, ai] : vec) {
        for (const auto& [j, aj] : vec) rho(i, j) += w.weight * ai * std::conj(aj);
      }
    }
  }
  return {std::move(basis), std::move(rho)};
}

DensityMatrix reduced_density(const PureState& state, std::span<const std::string> keep) {
  return reduced_density(Ensemble{{1.0, state}}, keep);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<Label> basis = a.basis;
  basis.insert(basis.end(), b.basis.begin(), b.basis.end());
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  if (basis.size() > dimension_guard()) {
    throw GuardExceeded("trace distance dimension " + std::to_string(basis.size()) + " exceeds guard " +
                        std::to_string(dimension_guard()));
  }
  std::unordered_map<Label, Eigen::Index> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], static_cast<Eigen::Index>(i));
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(dim, dim);
  auto embed = [&](const DensityMatrix& m, double sign) {
    for (std::size_t i = 0; i < m.basis.size(); ++i) {
      for (std::size_t j = 0; j < m.basis.size(); ++j) {
        diff(pos.at(m.basis[i]), pos.at(m.basis[j])) +=
            sign * m.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  };
  embed(a, 1.0);
  embed(b, -1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance_mixed(const Ensemble& a, const Ensemble& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty ensemble");
  const auto& layout = a.front().state.layout();
  if (!(b.front().state.layout() == layout)) throw std::invalid_argument("ensembles have different layouts");
  std::vector<std::string> all;
  for (const auto& reg : layout.registers()) all.push_back(reg.name);
  return trace_distance(reduced_density(a, all), reduced_density(b, all));
}

}  // namespace qtsl
