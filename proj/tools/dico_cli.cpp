// dico command line: runs one JSON-configured experiment and writes a report.
//
//   dico_cli run <config.json> [--out report.json] [--jobs N] [--budget N]
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 config or budget error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dico/experiments.hpp"

namespace {

std::optional<std::uint64_t> env_budget() {
  const char* s = std::getenv("DICO_BUDGET");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const auto v = std::strtoull(s, &end, 10);
  if (*end != '\0' || v == 0) throw dico::ConfigError(std::string("DICO_BUDGET is not a positive integer: ") + s);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dico: finite checks for strong dinatural transformations"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path, out_path;
  std::size_t jobs = 0;
  std::uint64_t budget = 0;
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_path, "Write the JSON report here instead of stdout");
  run->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  auto* budget_opt = run->add_option("--budget", budget, "Enumeration budget; overrides config and DICO_BUDGET")
                         ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ifstream in(config_path);
    if (!in) throw dico::ConfigError("cannot open config " + config_path);
    dico::json cfg;
    try {
      cfg = dico::json::parse(in);
    } catch (const dico::json::parse_error& e) {
      throw dico::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    dico::set_default_jobs(jobs);
    std::optional<std::uint64_t> limit = budget_opt->count() ? std::optional(budget) : env_budget();
    const auto report = dico::run_experiment(cfg, limit);
    const auto text = report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw dico::ConfigError("cannot write " + out_path);
      out << text;
      std::cout << dico::report_text(report);
    }
    return dico::report_passed(report) ? 0 : 1;
  } catch (const dico::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 2;
  } catch (const dico::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
