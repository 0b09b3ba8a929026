// ua_sim: reference tables, sweeps, single shots and the Fock cross-check.

#include "uacv/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

using namespace uacv;

int main(int argc, char** argv) {
  CLI::App app{"Unitary averaging of a two-mode squeezed vacuum arm"};
  report::RunConfig cfg;

  std::string convention = "paper";
  std::string weighting = "unweighted";
  std::string format = "csv";
  std::string engine;
  std::string out_path;

  const std::map<std::string, std::string> commands{{"table1", "table1"},
                                                    {"sweep", "sweep"},
                                                    {"shot", "shot"},
                                                    {"oracle-check", "oracle-check"},
                                                    {"asymptotic", "asymptotic"}};
  app.add_option("--command", cfg.command, "table1 | sweep | shot | oracle-check | asymptotic")
      ->check(CLI::IsMember(commands));
  app.add_option("--n", cfg.n, "redundancy, comma separated for sweeps")->delimiter(',');
  auto* r_opt = app.add_option("--r", cfg.r, "input squeezing parameter");
  auto* db_opt = app.add_option("--input-db", cfg.input_db, "input squeezing in dB");
  r_opt->excludes(db_opt);
  app.add_option("--variance", cfg.v, "phase-noise variance v, comma separated")->delimiter(',');
  app.add_option("--shots", cfg.shots, "Monte Carlo shots (selects the montecarlo engine)");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--convention", convention, "correlation angle: paper (2 phi) or derived (phi)")
      ->check(CLI::IsMember({"paper", "derived"}));
  app.add_option("--weighting", weighting, "ensemble weighting")
      ->check(CLI::IsMember({"unweighted", "heralded"}));
  app.add_option("--engine", engine, "analytic | montecarlo | asymptotic")
      ->check(CLI::IsMember({"analytic", "montecarlo", "asymptotic"}));
  auto* shards_opt = app.add_option("--shards", cfg.shards, "Monte Carlo worker threads");
  app.add_option("--cutoff", cfg.cutoff, "Fock cutoff for oracle-check (0: automatic)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "write output to PATH instead of stdout");
  app.add_option("--phases", cfg.phases, "explicit phases for the shot command")->delimiter(',');
  app.set_config("--config", "", "flat key=value configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report::kUsageError;
  }

  try {
    cfg.convention = angle_convention_from_string(convention);
    cfg.weighting = weighting_from_string(weighting);
    cfg.format = report::format_from_string(format);
    if (!engine.empty()) {
      cfg.engine = report::engine_from_string(engine);
    } else if (shards_opt->count() > 0) {
      cfg.engine = report::Engine::montecarlo;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return report::kUsageError;
  }

  if (out_path.empty()) return report::run(cfg, std::cout, std::cerr);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << "\n";
    return report::kUsageError;
  }
  return report::run(cfg, out, std::cerr);
}
