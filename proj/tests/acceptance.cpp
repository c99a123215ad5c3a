// One line per acceptance criterion. Usage: qtsl_acceptance <qtsl binary> <config dir>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "qtsl/checks.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  int id;
  const char* title;
  const char* family;
  double max_seconds;
};

const Criterion kCriteria[] = {
    {1, "oracle modes agree within TV 1e-9", "oracle-equiv", 60},
    {2, "database mass above T <= 1e-12", "bounded-db", 10},
    {3, "sqrt p <= sqrt p' + sqrt(1/M), slack >= -1e-9", "conditioning-bound", 0},
    {4, "exact values 0.625, 1/M, 9/25 within 1e-12", "known-values", 0},
    {5, "Grover equals sin^2((2T+1) asin(1/sqrt N)) within 1e-9", "grover", 0},
    {6, "salted sum attack equals c + (1-c)/M within 1e-12", "salted-attack", 0},
    {7, "PRG advantage <= 2(sqrt q + q')/sqrt N", "prgind", 300},
    {8, "salted multi-instance optimum <= (1/M + 3 sqrt(g(T+1)/K))^g", "salting-bound", 0},
    {9, "chain rule, round-2 CI, parallel search separation", "multi-instance", 0},
    {10, "remove_advice >= 2^-S, gentle and union bounds", "reductions", 0},
    {11, "Hellman N=2^12 success >= 0.25, monotone surface", "hellman", 300},
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> rows_without_timing(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream s(csv);
  for (std::string line; std::getline(s, line);) out.push_back(line.substr(0, line.rfind(',')));
  return out;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool criterion12(const std::string& qtsl, const std::string& configs, std::string& detail) {
  const auto tmp = std::filesystem::temp_directory_path() / "qtsl_acceptance";
  std::filesystem::create_directories(tmp);
  const std::string log = (tmp / "verify.log").string();
  const auto start = Clock::now();
  const int code = shell("\"" + qtsl + "\" verify > \"" + log + "\" 2>&1");
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();

  bool same = true;
  std::size_t compared = 0;
  for (const char* name : {"grover_mc.json", "salted_prediction.json", "hellman_sweep.json"}) {
    const bool sweep = std::string(name).find("sweep") != std::string::npos;
    std::vector<std::string> outs;
    for (const char* workers : {"1", "2"}) {
      const std::string out = (tmp / (std::string(name) + "." + workers + ".csv")).string();
      std::filesystem::remove(out);
      const std::string cmd = "cd \"" + tmp.string() + "\" && \"" + qtsl + "\" " + (sweep ? "sweep" : "run") + " \"" +
                              configs + "/" + name + "\" --seed 2024 --workers " + workers + " --out \"" + out +
                              "\" > /dev/null 2>&1";
      if (shell(cmd) != 0) same = false;
      outs.push_back(slurp(out));
    }
    const auto a = rows_without_timing(outs[0]);
    const auto b = rows_without_timing(outs[1]);
    same = same && a.size() > 1 && a == b;
    compared += a.size() > 0 ? a.size() - 1 : 0;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "verify exit %d in %.1f s (limit 300 s); %zu result rows byte-identical across runs: %s",
                code, secs, compared, same ? "yes" : "no");
  detail = buf;
  return code == 0 && secs <= 300 && same;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <qtsl binary> <config dir>\n", argv[0]);
    return 2;
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    const auto start = Clock::now();
    std::vector<qtsl::CheckResult> results;
    std::string error;
    try {
      results = qtsl::run_family(c.family);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    bool ok = error.empty() && !results.empty();
    std::string detail = error;
    for (const auto& r : results) {
      ok = ok && r.passed;
      if (!detail.empty()) detail += "; ";
      detail += r.detail;
    }
    if (c.max_seconds > 0) {
      ok = ok && secs <= c.max_seconds;
      char buf[64];
      std::snprintf(buf, sizeof buf, "; %.1f s (limit %.0f s)", secs, c.max_seconds);
      detail += buf;
    }
    std::printf("criterion %2d %s: %s [%s]\n", c.id, ok ? "PASS" : "FAIL", c.title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::string detail;
  const bool ok12 = criterion12(std::filesystem::absolute(argv[1]).string(), std::filesystem::absolute(argv[2]).string(),
                                detail);
  std::printf("criterion 12 %s: qtsl verify exit 0 within 5 min, reproducible rows [%s]\n", ok12 ? "PASS" : "FAIL",
              detail.c_str());
  if (!ok12) ++failures;
  return failures == 0 ? 0 : 1;
}
