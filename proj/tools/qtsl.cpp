#include <iostream>

#include "CLI11.hpp"
#include "qtsl/labcli.hpp"
#include "qtsl/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qtsl: query-algorithm lab for random oracles"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int workers = 0;
  bool exact = false;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for all sampling")->check(CLI::NonNegativeNumber);
  app.add_option("--workers", workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--exact", exact, "Require exact enumeration");
  auto* out_opt = app.add_option("--out", out, "Results CSV (appended; stdout when absent)");

  std::string filter;
  auto* verify = app.add_subcommand("verify", "Run the property and invariant suite");
  verify->add_option("--filter", filter, "Comma-separated check families");

  std::string config;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config, "JSON config")->required();
  auto* sweep = app.add_subcommand("sweep", "Run a config over its sweep grid");
  sweep->add_option("config", config, "JSON config")->required();

  std::string family;
  std::vector<std::string> params;
  auto* bound = app.add_subcommand("bound-check", "Compare exact values with a bound shape");
  bound->add_option("family", family, "owf-mis, yaobox-mis, salt-mis or prgind")->required();
  bound->add_option("params", params, "key=value overrides");

  for (auto* sub : {verify, run, sweep, bound}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  qtsl::set_worker_count(workers);
  qtsl::CliOverrides o;
  if (*seed_opt) o.seed = seed;
  o.exact = exact;
  if (*out_opt) o.out = out;

  if (*verify) return qtsl::cmd_verify(filter, std::cout, std::cerr);
  if (*run) return qtsl::cmd_run(config, o, std::cout, std::cerr);
  if (*sweep) return qtsl::cmd_sweep(config, o, std::cout, std::cerr);
  return qtsl::cmd_bound_check(family, params, std::cout, std::cerr);
}
