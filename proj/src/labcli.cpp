#include "qtsl/labcli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "qtsl/adversaries.hpp"
#include "qtsl/bruteforce.hpp"
#include "qtsl/checks.hpp"
#include "qtsl/hellman.hpp"
#include "qtsl/prgind.hpp"

namespace qtsl {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

std::string log_axis(std::size_t v, std::size_t N) {
  if (v == 0) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", std::log(static_cast<double>(v)) / std::log(static_cast<double>(N)));
  return buf;
}

std::size_t get_size(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<std::size_t> get_range(const json& sweep, const char* key) {
  if (!sweep.contains(key)) return {};
  const auto& v = sweep.at(key);
  std::vector<std::size_t> out;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 0) throw ConfigError(std::string("sweep.") + key + " must hold non-negative integers");
      out.push_back(e.get<std::size_t>());
    }
  } else if (v.is_object()) {
    const std::size_t from = get_size(v, "from", 0);
    const std::size_t to = get_size(v, "to", 0);
    const std::size_t step = get_size(v, "step", 1);
    const bool geometric = v.value("geometric", false);
    if (step == 0 || (geometric && (step < 2 || from == 0))) throw ConfigError(std::string("sweep.") + key + " has a bad step");
    for (std::size_t x = from; x <= to; x = geometric ? x * step : x + step) out.push_back(x);
  } else {
    throw ConfigError(std::string("sweep.") + key + " must be an array or {from, to, step}");
  }
  if (out.empty()) throw ConfigError(std::string("sweep.") + key + " is empty");
  return out;
}

void write_rows(const std::vector<ResultRow>& rows, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << r.to_csv() << '\n';
    return;
  }
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot open " + path);
  if (fresh) f << kCsvHeader << '\n';
  for (const auto& r : rows) f << r.to_csv() << '\n';
}

void write_lines(const std::vector<std::string>& lines, const std::string& path, const char* header) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  if (header) f << header << '\n';
  for (const auto& l : lines) f << l << '\n';
}

ExperimentConfig with_overrides(ExperimentConfig c, const CliOverrides& o) {
  if (o.seed) c.seed = o.seed;
  if (o.exact) c.exact = true;
  if (o.out) c.out = *o.out;
  if (!c.seed) throw ConfigError("a seed is required (config 'seed' or --seed)");
  return c;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& params) {
  std::map<std::string, double> out;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("bound-check parameter '" + p + "' is not key=value");
    try {
      std::size_t used = 0;
      out[p.substr(0, eq)] = std::stod(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1) throw std::invalid_argument(p);
    } catch (const std::logic_error&) {
      throw ConfigError("bound-check parameter '" + p + "' is not numeric");
    }
  }
  return out;
}

std::vector<std::size_t> axis(const std::map<std::string, double>& p, const std::string& key,
                              std::vector<std::size_t> fallback) {
  if (!p.contains(key)) return fallback;
  const double v = p.at(key);
  if (v < 0 || v != std::floor(v)) throw ConfigError(key + " must be a non-negative integer");
  return {static_cast<std::size_t>(v)};
}

void check_keys(const std::map<std::string, double>& p, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : p) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError("unknown bound-check parameter '" + k + "'");
    }
  }
}

double ratio(double observed, double shape) {
  if (shape > 0) return observed / shape;
  return observed > 1e-12 ? INFINITY : 0.0;
}

BoundReport owf_mis(const std::map<std::string, double>& p) {
  check_keys(p, {"N", "T", "g"});
  BoundReport rep;
  for (std::size_t N : axis(p, "N", {4, 8})) {
    for (std::size_t T : axis(p, "T", {1, 2})) {
      for (std::size_t g : axis(p, "g", {2})) {
        if (N < 2 || g < 1) throw ConfigError("owf-mis needs N >= 2 and g >= 1");
        RunOptions o;
        o.method = RunOptions::Method::Exact;
        o.tables = fiber_classes(N, N);
        const auto set = run_multi_instance(owf_y_game(N, N), iterated_grover_multi(g, T, N, N), o);
        for (std::size_t i = 1; i <= g; ++i) {
          const std::uint32_t mask = (std::uint32_t{1} << (i - 1)) - 1;
          const double c = conditional_round_success(set, i, [mask](std::uint32_t b) { return b == mask; }).mean;
          char label[96];
          std::snprintf(label, sizeof label, "N=%zu T=%zu g=%zu round %zu", N, T, g, i);
          rep.lines.push_back({label, c, static_cast<double>(i * T + T * T) / static_cast<double>(N), std::nullopt});
        }
      }
    }
  }
  return rep;
}

BoundReport yaobox_mis(const std::map<std::string, double>& p) {
  check_keys(p, {"N", "T", "g"});
  BoundReport rep;
  for (std::size_t N : axis(p, "N", {2, 3, 4})) {
    for (std::size_t T : axis(p, "T", {0, 1, 2})) {
      for (std::size_t g : axis(p, "g", {1, 2})) {
        BruteForceOptions o;
        o.T = T;
        o.g = g;
        const double value = brute_force_best(yaobox_game(N), o).value;
        const double per_round = std::pow(value, 1.0 / static_cast<double>(g)) - 0.5;
        char label[96];
        std::snprintf(label, sizeof label, "N=%zu T=%zu g=%zu advantage", N, T, g);
        rep.lines.push_back({label, per_round, std::sqrt(static_cast<double>(g * (T + 1)) / static_cast<double>(N)),
                             std::nullopt});
      }
    }
  }
  return rep;
}

BoundReport salt_mis(const std::map<std::string, double>& p) {
  check_keys(p, {"K", "M", "T", "g"});
  BoundReport rep;
  for (std::size_t K : axis(p, "K", {16})) {
    for (std::size_t M : axis(p, "M", {2})) {
      for (std::size_t T : axis(p, "T", {0, 1})) {
        for (std::size_t g : axis(p, "g", {1, 2})) {
          BruteForceOptions o;
          o.T = T;
          o.g = g;
          const double value = brute_force_best(salt_wrap(prediction_game(M), K), o).value;
          const double shape = std::sqrt(static_cast<double>(g * (T + 1)) / static_cast<double>(K));
          const double bound = std::pow(1.0 / static_cast<double>(M) + 3.0 * shape, static_cast<double>(g));
          const double per_round = std::pow(value, 1.0 / static_cast<double>(g)) - 1.0 / static_cast<double>(M);
          char label[96];
          std::snprintf(label, sizeof label, "K=%zu M=%zu T=%zu g=%zu", K, M, T, g);
          rep.lines.push_back({label, per_round, shape, bound});
          if (value > bound + 1e-12) rep.passed = false;
        }
      }
    }
  }
  return rep;
}

BoundReport prgind_family(const std::map<std::string, double>& p) {
  check_keys(p, {"N", "M", "q", "qp", "seed"});
  BoundReport rep;
  const auto seed = static_cast<std::uint64_t>(p.contains("seed") ? p.at("seed") : 31337);
  std::size_t index = 0;
  for (std::size_t N : axis(p, "N", {4, 9, 16})) {
    for (std::size_t M : axis(p, "M", {4, 8})) {
      for (std::size_t q : axis(p, "q", {0, 1, 2})) {
        for (std::size_t qp : axis(p, "qp", {0, 1, 2})) {
          Rng rng = make_rng(seed, index++);
          const auto r = prgind_advantage(N, M, q, qp, random_prgind_program(N, M, q, qp, 2, rng));
          char label[96];
          std::snprintf(label, sizeof label, "N=%zu M=%zu q=%zu q'=%zu", N, M, q, qp);
          const double shape = (std::sqrt(static_cast<double>(q)) + static_cast<double>(qp)) / std::sqrt(static_cast<double>(N));
          rep.lines.push_back({label, r.advantage, shape, r.bound});
          if (!r.holds()) rep.passed = false;
        }
      }
    }
  }
  return rep;
}

}  // namespace

std::string ResultRow::to_csv() const {
  std::ostringstream s;
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", wall_ms);
  s << game << ',' << N << ',' << M << ',' << K << ',' << S << ',' << T << ',' << g << ',' << mode << ',' << trials
    << ',' << num(win_rate) << ',' << num(ci_low) << ',' << num(ci_high) << ',' << (exact ? "true" : "false") << ','
    << seed << ',' << wall;
  return s.str();
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema")) throw ConfigError("config has no 'schema' field");
  if (j.at("schema") != kConfigSchema) {
    throw ConfigError("unsupported schema " + j.at("schema").dump() + ", expected \"" + kConfigSchema + "\"");
  }
  ExperimentConfig c;
  try {
    const auto& game = j.at("game");
    c.game = game.at("name").get<std::string>();
    c.game_params = game;
    const auto& adv = j.at("adversary");
    c.adversary = adv.at("name").get<std::string>();
    c.adversary_params = adv;
    c.mode = parse_mode(j.value("mode", std::string("exact")));
    c.curve = j.value("curve", std::string());
    c.out = j.value("out", std::string());
    c.transcripts = j.value("transcripts", std::string());
    c.curve_threshold = j.value("curve_threshold", 0.5);
    c.max_worlds = j.value("max_worlds", 1e6);
    c.exact = j.value("exact", false);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  c.g = get_size(j, "g", 1);
  c.S = get_size(j, "S", 0);
  c.T = get_size(j, "T", 0);
  if (j.contains("trials")) c.trials = get_size(j, "trials", 0);
  if (c.trials && *c.trials == 0) throw ConfigError("'trials' must be positive");
  if (j.contains("seed")) c.seed = get_size(j, "seed", 0);
  if (c.g == 0) throw ConfigError("'g' must be at least 1");
  if (j.contains("sweep")) {
    const auto& sweep = j.at("sweep");
    if (!sweep.is_object()) throw ConfigError("'sweep' must be an object");
    c.has_sweep = true;
    c.sweep_S = get_range(sweep, "S");
    c.sweep_T = get_range(sweep, "T");
    c.sweep_K = get_range(sweep, "K");
    c.sweep_g = get_range(sweep, "g");
    for (const auto& [k, v] : sweep.items()) {
      if (k != "S" && k != "T" && k != "K" && k != "g") throw ConfigError("unknown sweep axis '" + k + "'");
    }
    if (c.sweep_S.empty() && c.sweep_T.empty() && c.sweep_K.empty() && c.sweep_g.empty()) {
      throw ConfigError("sweep has no axes");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

ResultRow run_point(const ExperimentConfig& c, std::size_t S, std::size_t T, std::size_t K, std::size_t g,
                    std::vector<json>* transcripts) {
  const auto start = std::chrono::steady_clock::now();
  json game_params = c.game_params;
  if (K != 1 || game_params.contains("K")) game_params["K"] = K;
  GameSpec game;
  try {
    game = make_game(c.game, game_params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  ResultRow row;
  row.game = c.game;
  row.N = game.N;
  row.M = game.M;
  row.K = game.K;
  row.S = S;
  row.T = T;
  row.g = g;
  row.mode = to_string(c.mode);
  row.seed = *c.seed;

  Estimate est;
  if (c.adversary == "hellman") {
    if ((game.name != "owf" && game.name != "owf_y") || game.N != game.M) {
      throw ConfigError("hellman runs against owf or owf_y with N = M");
    }
    if (c.exact) throw ConfigError("hellman has no exact mode");
    if (g != 1) throw ConfigError("hellman is a single-instance attack (g = 1)");
    HellmanExperiment e = hellman_for_budget(game.N, S, T);
    e.trials = c.trials.value_or(1000);
    e.seed = *c.seed;
    est = hellman_success(e);
  } else {
    AdversaryProgram adv;
    try {
      adv = make_adversary(c.adversary, c.adversary_params, game, S, T, g);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    RunOptions o;
    o.mode = c.mode;
    o.seed = *c.seed;
    o.max_worlds = c.max_worlds;
    o.trials = c.trials.value_or(1000);
    o.keep_transcripts = transcripts != nullptr;
    if (c.exact) {
      const double size = enumeration_size(game, adv, o);
      if (size > c.max_worlds) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "exact enumeration needs %.3g worlds, above max_worlds %.3g", size, c.max_worlds);
        throw GuardExceeded(buf);
      }
      o.method = RunOptions::Method::Exact;
    } else if (c.trials) {
      o.method = RunOptions::Method::MonteCarlo;
    }
    const TranscriptSet set = run_multi_instance(game, adv, o);
    est = estimate_win(set);
    if (transcripts) {
      if (set.exact) {
        for (const auto& [bits, w] : set.patterns) {
          json pattern = json::array();
          for (std::size_t i = 0; i < set.rounds; ++i) pattern.push_back((bits >> i) & 1U);
          transcripts->push_back({{"S", S}, {"T", T}, {"K", K}, {"g", g}, {"bits", pattern}, {"weight", w}});
        }
      } else {
        for (std::size_t i = 0; i < set.samples.size(); ++i) {
          json t = set.samples[i].to_json();
          t["trial"] = i;
          t["S"] = S;
          t["T"] = T;
          t["K"] = K;
          t["g"] = g;
          transcripts->push_back(std::move(t));
        }
      }
    }
  }
  row.trials = est.trials;
  row.win_rate = est.mean;
  row.ci_low = est.exact ? est.mean : est.ci_low;
  row.ci_high = est.exact ? est.mean : est.ci_high;
  row.exact = est.exact;
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& c, std::vector<json>* transcripts) {
  const auto or_scalar = [](const std::vector<std::size_t>& v, std::size_t s) {
    return v.empty() ? std::vector<std::size_t>{s} : v;
  };
  const std::size_t K0 = c.game_params.contains("K") ? c.game_params.at("K").get<std::size_t>() : 1;
  std::vector<ResultRow> rows;
  for (std::size_t K : or_scalar(c.sweep_K, K0)) {
    for (std::size_t g : or_scalar(c.sweep_g, c.g)) {
      for (std::size_t S : or_scalar(c.sweep_S, c.S)) {
        for (std::size_t T : or_scalar(c.sweep_T, c.T)) {
          try {
            rows.push_back(run_point(c, S, T, K, g, transcripts));
          } catch (const GuardExceeded& e) {
            ResultRow r;
            r.game = c.game;
            r.K = K;
            r.S = S;
            r.T = T;
            r.g = g;
            r.mode = to_string(c.mode);
            r.seed = *c.seed;
            r.win_rate = r.ci_low = r.ci_high = NAN;
            r.error = e.what();
            rows.push_back(std::move(r));
          }
        }
      }
    }
  }
  return rows;
}

std::vector<std::string> curve_rows(const std::vector<ResultRow>& rows, double threshold) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> frontier;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.error.empty() || r.win_rate < threshold) continue;
    const auto key = std::make_tuple(r.K, r.g, r.S);
    if (!frontier.contains(key) || rows[frontier[key]].T > r.T) frontier[key] = i;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.error.empty()) continue;
    const auto it = frontier.find(std::make_tuple(r.K, r.g, r.S));
    const bool edge = it != frontier.end() && it->second == i;
    std::ostringstream s;
    s << r.game << ',' << r.N << ',' << r.K << ',' << r.g << ',' << r.S << ',' << r.T << ',' << log_axis(r.S, r.N)
      << ',' << log_axis(r.T, r.N) << ',' << num(r.win_rate) << ',' << (edge ? 1 : 0);
    out.push_back(s.str());
  }
  return out;
}

int cmd_verify(const std::string& filter, std::ostream& out, std::ostream& err) {
  std::vector<std::string> families;
  if (filter.empty()) {
    families = check_families();
  } else {
    std::stringstream ss(filter);
    for (std::string f; std::getline(ss, f, ',');) {
      const auto& known = check_families();
      if (std::find(known.begin(), known.end(), f) == known.end()) {
        err << "qtsl: unknown check family '" << f << "'\n";
        return 2;
      }
      families.push_back(f);
    }
  }
  std::size_t passed = 0;
  std::size_t total = 0;
  for (const auto& f : families) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> results;
    try {
      results = run_family(f);
    } catch (const std::exception& e) {
      results.push_back({f, "family raised", false, e.what()});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& r : results) {
      ++total;
      if (r.passed) ++passed;
      out << (r.passed ? "[PASS] " : "[FAIL] ") << r.family << ": " << r.name << " (" << r.detail << ")\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f s", secs);
    out << "       " << f << " done in " << buf << '\n';
    out.flush();
  }
  out << passed << '/' << total << " properties passed\n";
  return passed == total ? 0 : 1;
}

int cmd_run(const std::string& config_path, const CliOverrides& o, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig c = with_overrides(load_config(config_path), o);
    std::vector<json> transcripts;
    const ResultRow row = run_point(c, c.S, c.T, c.game_params.value("K", std::size_t{1}), c.g,
                                    c.transcripts.empty() ? nullptr : &transcripts);
    write_rows({row}, c.out, out);
    if (!c.transcripts.empty()) {
      std::vector<std::string> lines;
      for (const auto& t : transcripts) lines.push_back(t.dump());
      write_lines(lines, c.transcripts, nullptr);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "qtsl: config error: " << e.what() << '\n';
    return 2;
  } catch (const GuardExceeded& e) {
    err << "qtsl: guard exceeded: " << e.what() << " (raise QTSL_GUARD_OVERRIDE or drop --exact)\n";
    return 2;
  } catch (const std::exception& e) {
    err << "qtsl: " << e.what() << '\n';
    return 1;
  }
}

int cmd_sweep(const std::string& config_path, const CliOverrides& o, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig c = with_overrides(load_config(config_path), o);
    if (!c.has_sweep) throw ConfigError("sweep config needs a 'sweep' object");
    std::vector<json> transcripts;
    const auto rows = run_sweep(c, c.transcripts.empty() ? nullptr : &transcripts);
    std::vector<ResultRow> good;
    for (const auto& r : rows) {
      if (r.error.empty()) {
        good.push_back(r);
      } else {
        err << "qtsl: S=" << r.S << " T=" << r.T << " K=" << r.K << " g=" << r.g << " skipped: " << r.error << '\n';
      }
    }
    write_rows(good, c.out, out);
    std::string curve = c.curve;
    if (curve.empty() && !c.out.empty()) curve = std::filesystem::path(c.out).replace_extension(".curve.csv").string();
    if (!curve.empty()) write_lines(curve_rows(rows, c.curve_threshold), curve, kCurveHeader);
    if (!c.transcripts.empty()) {
      std::vector<std::string> lines;
      for (const auto& t : transcripts) lines.push_back(t.dump());
      write_lines(lines, c.transcripts, nullptr);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "qtsl: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qtsl: " << e.what() << '\n';
    return 1;
  }
}

BoundReport bound_check(const std::string& family, const std::vector<std::string>& params) {
  const auto p = parse_params(params);
  BoundReport rep;
  if (family == "owf-mis") {
    rep = owf_mis(p);
  } else if (family == "yaobox-mis") {
    rep = yaobox_mis(p);
  } else if (family == "salt-mis") {
    rep = salt_mis(p);
  } else if (family == "prgind") {
    rep = prgind_family(p);
  } else {
    throw ConfigError("unknown bound-check family '" + family + "' (owf-mis, yaobox-mis, salt-mis, prgind)");
  }
  rep.family = family;
  for (const auto& l : rep.lines) rep.fitted_constant = std::max(rep.fitted_constant, ratio(l.observed, l.shape));
  return rep;
}

int cmd_bound_check(const std::string& family, const std::vector<std::string>& params, std::ostream& out,
                    std::ostream& err) {
  BoundReport rep;
  try {
    rep = bound_check(family, params);
  } catch (const ConfigError& e) {
    err << "qtsl: config error: " << e.what() << '\n';
    return 2;
  } catch (const GuardExceeded& e) {
    err << "qtsl: guard exceeded: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qtsl: " << e.what() << '\n';
    return 1;
  }
  out << "label,observed,shape,ratio,explicit_bound\n";
  for (const auto& l : rep.lines) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.9f,%.9f,%.6f,%s", l.label.c_str(), l.observed, l.shape, ratio(l.observed, l.shape),
                  l.explicit_bound ? num(*l.explicit_bound).c_str() : "");
    out << buf << '\n';
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s: fitted C = %.6f, %s\n", family.c_str(), rep.fitted_constant,
                rep.passed ? "within bound" : "BOUND VIOLATED");
  out << buf;
  return rep.passed ? 0 : 1;
}

}  // namespace qtsl
