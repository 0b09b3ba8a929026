#include "uacv/report.hpp"

#include "uacv/analytic.hpp"
#include "uacv/fock.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace uacv::report {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) { return fmt::format("{:.12g}", x); }

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double wrap_angle(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> uniform_phases(std::uint64_t seed, int shot, int n) {
  auto gen = shot_stream(seed, shot);
  std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (double& p : phases) p = dist(gen);
  return phases;
}

}  // namespace

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::analytic: return "analytic";
    case Engine::montecarlo: return "montecarlo";
    case Engine::asymptotic: return "asymptotic";
  }
  return "analytic";
}

Engine engine_from_string(std::string_view s) {
  if (s == "analytic") return Engine::analytic;
  if (s == "montecarlo" || s == "mc") return Engine::montecarlo;
  if (s == "asymptotic") return Engine::asymptotic;
  throw std::invalid_argument("unknown engine: " + std::string(s));
}

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format format_from_string(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("unknown format: " + std::string(s));
}

void RunConfig::validate() const {
  static const std::array<std::string_view, 5> commands{"table1", "sweep", "shot", "oracle-check",
                                                        "asymptotic"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    throw std::invalid_argument("unknown command: " + command);
  }
  if (r && input_db) throw std::invalid_argument("give at most one of --r and --input-db");
  if (r && !(std::isfinite(*r) && *r >= 0.0)) throw std::invalid_argument("--r must be >= 0");
  if (input_db && !(std::isfinite(*input_db) && *input_db >= 0.0)) {
    throw std::invalid_argument("--input-db must be >= 0");
  }
  for (int k : n) {
    if (k < 1) throw std::invalid_argument("--n entries must be >= 1");
  }
  for (double x : v) {
    if (!(std::isfinite(x) && x >= 0.0)) throw std::invalid_argument("--variance must be >= 0");
  }
  if (shots && *shots < 1) throw std::invalid_argument("--shots must be >= 1");
  if (cutoff < 0) throw std::invalid_argument("--cutoff must be >= 0");
  if (shards < 1) throw std::invalid_argument("--shards must be >= 1");
  for (double p : phases) {
    if (!std::isfinite(p)) throw std::invalid_argument("--phases must be finite");
  }
}

double RunConfig::squeezing() const {
  if (r) return *r;
  if (input_db) return r_from_squeezing_db(*input_db);
  return kDefaultR;
}

Engine RunConfig::resolved_engine() const {
  if (engine) return *engine;
  return shots ? Engine::montecarlo : Engine::analytic;
}

std::vector<int> RunConfig::n_grid() const {
  if (!n.empty()) return n;
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

std::vector<double> RunConfig::v_grid() const {
  if (!v.empty()) return v;
  return {0.0, 0.005, 0.01, 0.02, 0.05};
}

// ---------------------------------------------------------------------------

std::vector<Table1Row> table1(const RunConfig& config) {
  const double v = config.v.empty() ? kTableVariance : config.v.front();
  const Engine engine = config.resolved_engine();
  std::vector<Table1Row> rows;
  for (const ReferenceRow& ref : kReferenceTable) {
    Table1Row row;
    row.reference = ref;
    row.input_db = squeezing_db_from_r(ref.r);
    if (engine == Engine::montecarlo) {
      EnsembleOptions opts;
      opts.shards = config.shards;
      for (int n : {1, 5}) {
        const ChannelParams params{n, ref.r, v, config.convention};
        const EnsembleStats stats = run_ensemble(params, config.resolved_shots(), config.seed, opts);
        const MonteCarloMetrics m = metrics_from_ensemble(stats, config.weighting);
        (n == 1 ? row.n1_db : row.n5_db) = m.metrics.squeezing_db;
        (n == 1 ? row.n1_stderr : row.n5_stderr) = m.stderr_squeezing_db;
      }
    } else {
      row.n1_db = ensemble_metrics(ref.r, v, 1, config.convention).squeezing_db;
      row.n5_db = ensemble_metrics(ref.r, v, 5, config.convention).squeezing_db;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_table1(std::ostream& os, const RunConfig& config, const std::vector<Table1Row>& rows) {
  const double v = config.v.empty() ? kTableVariance : config.v.front();
  const Engine engine = config.resolved_engine();
  const std::int64_t shots = engine == Engine::montecarlo ? config.resolved_shots() : 0;
  if (config.format == Format::csv) {
    os << "r,input_db,ref_input_db,delta_input_db,n1_db,ref_n1_db,delta_n1_db,n5_db,ref_n5_db,"
          "delta_n5_db,stderr_n1_db,stderr_n5_db,engine,v,shots,seed,convention,weighting\n";
    for (const Table1Row& row : rows) {
      fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(row.reference.r),
                 num(row.input_db), num(row.reference.input_db),
                 num(row.input_db - row.reference.input_db), num(row.n1_db),
                 num(row.reference.n1_db), num(row.n1_db - row.reference.n1_db), num(row.n5_db),
                 num(row.reference.n5_db), num(row.n5_db - row.reference.n5_db),
                 num(row.n1_stderr), num(row.n5_stderr), to_string(engine), num(v), shots,
                 config.seed, to_string(config.convention), to_string(config.weighting));
    }
    return;
  }
  json out = json::array();
  for (const Table1Row& row : rows) {
    json j;
    j["r"] = row.reference.r;
    j["input_db"] = row.input_db;
    j["ref_input_db"] = row.reference.input_db;
    j["delta_input_db"] = row.input_db - row.reference.input_db;
    j["n1_db"] = row.n1_db;
    j["ref_n1_db"] = row.reference.n1_db;
    j["delta_n1_db"] = row.n1_db - row.reference.n1_db;
    j["n5_db"] = row.n5_db;
    j["ref_n5_db"] = row.reference.n5_db;
    j["delta_n5_db"] = row.n5_db - row.reference.n5_db;
    j["stderr_n1_db"] = row.n1_stderr;
    j["stderr_n5_db"] = row.n5_stderr;
    j["engine"] = to_string(engine);
    j["v"] = v;
    j["shots"] = shots;
    j["seed"] = config.seed;
    j["convention"] = to_string(config.convention);
    j["weighting"] = to_string(config.weighting);
    out.push_back(j);
  }
  os << out.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

SweepRecord sweep_point(const RunConfig& config, Engine engine, int n, double v) {
  SweepRecord rec;
  rec.n = engine == Engine::asymptotic ? 0 : n;
  rec.v = v;
  rec.r = config.squeezing();
  rec.engine = engine;
  rec.seed = config.seed;
  rec.convention = config.convention;
  rec.weighting = config.weighting;
  EnsembleMetrics m;
  switch (engine) {
    case Engine::analytic:
      m = ensemble_metrics(rec.r, v, n, config.convention);
      break;
    case Engine::asymptotic:
      m = asymptotic_metrics(rec.r, v, config.convention);
      break;
    case Engine::montecarlo: {
      EnsembleOptions opts;
      opts.shards = config.shards;
      const EnsembleStats stats = run_ensemble(ChannelParams{n, rec.r, v, config.convention},
                                               config.resolved_shots(), config.seed, opts);
      const MonteCarloMetrics mc = metrics_from_ensemble(stats, config.weighting);
      m = mc.metrics;
      rec.shots = stats.shots;
      rec.stderr_squeezing_db = mc.stderr_squeezing_db;
      rec.stderr_purity = mc.stderr_purity;
      rec.stderr_eof_bits = mc.stderr_eof_bits;
      rec.stderr_probability = mc.stderr_probability;
      rec.clipped = mc.clipped;
      break;
    }
  }
  rec.squeezing_db = m.squeezing_db;
  rec.purity = m.purity;
  rec.eof_bits = m.eof_bits;
  rec.log_negativity = m.log_negativity;
  rec.probability = m.probability;
  return rec;
}

std::vector<SweepRecord> sweep(const RunConfig& config) {
  const Engine engine = config.command == "asymptotic" ? Engine::asymptotic : config.resolved_engine();
  const std::vector<double> vs = config.v_grid();
  if (vs.empty()) throw std::invalid_argument("sweep: empty variance grid");
  std::vector<SweepRecord> out;
  if (engine == Engine::asymptotic) {
    for (double v : vs) out.push_back(sweep_point(config, engine, 0, v));
    return out;
  }
  const std::vector<int> ns = config.n_grid();
  if (ns.empty()) throw std::invalid_argument("sweep: empty redundancy grid");
  for (double v : vs) {
    for (int n : ns) out.push_back(sweep_point(config, engine, n, v));
  }
  return out;
}

void write_sweep(std::ostream& os, Format format, const std::vector<SweepRecord>& records) {
  if (format == Format::csv) {
    for (std::size_t k = 0; k < kSweepColumns.size(); ++k) {
      os << (k ? "," : "") << kSweepColumns[k];
    }
    os << "\n";
    for (const SweepRecord& r : records) {
      fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                 r.n == 0 ? std::string("inf") : std::to_string(r.n), num(r.v), num(r.r),
                 to_string(r.engine), num(r.squeezing_db), num(r.purity), num(r.eof_bits),
                 num(r.log_negativity), num(r.probability), num(r.stderr_squeezing_db),
                 num(r.stderr_purity), num(r.stderr_eof_bits), num(r.stderr_probability), r.shots,
                 r.seed, to_string(r.convention), to_string(r.weighting),
                 num(kPhysicalityTolerance), r.clipped ? 1 : 0);
    }
    return;
  }
  json out = json::array();
  for (const SweepRecord& r : records) {
    json j;
    if (r.n == 0) {
      j["n"] = "inf";
    } else {
      j["n"] = r.n;
    }
    j["v"] = r.v;
    j["r"] = r.r;
    j["engine"] = to_string(r.engine);
    j["squeezing_db"] = r.squeezing_db;
    j["purity"] = r.purity;
    j["eof_bits"] = r.eof_bits;
    j["log_negativity"] = r.log_negativity;
    j["probability"] = r.probability;
    j["stderr_squeezing_db"] = r.stderr_squeezing_db;
    j["stderr_purity"] = r.stderr_purity;
    j["stderr_eof_bits"] = r.stderr_eof_bits;
    j["stderr_probability"] = r.stderr_probability;
    j["shots"] = r.shots;
    j["seed"] = r.seed;
    j["convention"] = to_string(r.convention);
    j["weighting"] = to_string(r.weighting);
    j["physicality_tol"] = kPhysicalityTolerance;
    j["clipped"] = r.clipped;
    out.push_back(j);
  }
  os << out.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

int auto_cutoff(double r) {
  const double t = std::tanh(r);
  int cutoff = 40;
  while (fock::geometric_tail_bound(t, cutoff) > 1e-12 && cutoff < 400) ++cutoff;
  return cutoff;
}

OracleReport oracle_check(const RunConfig& config) {
  OracleReport rep;
  rep.n = config.n.empty() ? 2 : config.n.front();
  if (rep.n < 1 || rep.n > fock::kMaxOpticsModes) {
    throw std::invalid_argument("oracle-check: n must lie in [1, 3]");
  }
  rep.shots = static_cast<int>(config.shots.value_or(50));
  rep.r = config.squeezing();
  rep.cutoff = config.cutoff > 0 ? config.cutoff : auto_cutoff(rep.r);
  rep.tail_bound = fock::geometric_tail_bound(std::tanh(rep.r), rep.cutoff);

  const ChannelParams params{rep.n, rep.r, 0.0, AngleConvention::derivation};
  const ChannelParams small{rep.n, kSmallR, 0.0, AngleConvention::derivation};
  for (int k = 0; k < rep.shots; ++k) {
    const std::vector<double> phases = uniform_phases(config.seed, k, rep.n);
    const ShotOutcome closed = shot_closed_form(params, phases);
    const ShotOutcome gauss = shot_gaussian_path(params, phases);
    rep.max_gaussian_vs_closed_cov =
        std::max(rep.max_gaussian_vs_closed_cov, max_abs_diff(closed.cov, gauss.cov));
    rep.max_gaussian_vs_closed_prob =
        std::max(rep.max_gaussian_vs_closed_prob, std::abs(closed.probability - gauss.probability));

    const fock::FockAmplitudes evolved =
        fock::heralded_amplitudes_evolved(rep.r, phases, fock::kMaxSectorPhotons);
    const fock::FockAmplitudes direct =
        fock::heralded_amplitudes_closed_form(rep.r, phases, fock::kMaxSectorPhotons);
    for (std::size_t i = 0; i < evolved.size(); ++i) {
      rep.max_evolved_vs_closed_amp = std::max(
          rep.max_evolved_vs_closed_amp, std::abs(evolved.data()[i] - direct.data()[i]));
    }

    const fock::FockAmplitudes full = fock::heralded_amplitudes_closed_form(rep.r, phases, rep.cutoff);
    rep.max_fock_vs_gaussian_cov =
        std::max(rep.max_fock_vs_gaussian_cov, max_abs_diff(fock::moments_to_covariance(full), gauss.cov));
    rep.max_fock_vs_gaussian_prob =
        std::max(rep.max_fock_vs_gaussian_prob, std::abs(full.norm_squared() - gauss.probability));

    const fock::FockAmplitudes evolved_small =
        fock::heralded_amplitudes_evolved(kSmallR, phases, fock::kMaxSectorPhotons);
    rep.max_evolved_vs_gaussian_cov_small_r =
        std::max(rep.max_evolved_vs_gaussian_cov_small_r,
                 max_abs_diff(fock::moments_to_covariance(evolved_small),
                              shot_gaussian_path(small, phases).cov));
  }

  bool derived = true;
  bool paper = true;
  for (int k = 0; k <= 6; ++k) {
    const double theta = 0.15 * k;
    const double phase[1] = {theta};
    const Matrix cov =
        fock::moments_to_covariance(fock::heralded_amplitudes_evolved(rep.r, phase, fock::kMaxSectorPhotons));
    const double measured = std::atan2(cov(0, 3), cov(0, 2));
    rep.angles.push_back({theta, measured});
    derived = derived && std::abs(wrap_angle(measured - theta)) < 1e-6;
    paper = paper && std::abs(wrap_angle(measured - 2.0 * theta)) < 1e-6;
  }
  rep.physical_convention = derived ? "derived" : paper ? "paper" : "neither";

  rep.pass = rep.max_gaussian_vs_closed_cov <= kTolGaussianCov &&
             rep.max_gaussian_vs_closed_prob <= kTolGaussianProb &&
             rep.max_evolved_vs_closed_amp <= kTolAmplitude &&
             rep.max_fock_vs_gaussian_cov <= kTolFockCov &&
             rep.max_fock_vs_gaussian_prob <= kTolFockProb &&
             rep.max_evolved_vs_gaussian_cov_small_r <= kTolFockCov &&
             rep.physical_convention != "neither";
  return rep;
}

void write_oracle_report(std::ostream& os, Format format, const OracleReport& rep) {
  struct Item {
    const char* name;
    double value;
    double tol;
  };
  const Item items[] = {
      {"gaussian_vs_closed_cov", rep.max_gaussian_vs_closed_cov, kTolGaussianCov},
      {"gaussian_vs_closed_prob", rep.max_gaussian_vs_closed_prob, kTolGaussianProb},
      {"evolved_vs_closed_amplitude", rep.max_evolved_vs_closed_amp, kTolAmplitude},
      {"fock_vs_gaussian_cov", rep.max_fock_vs_gaussian_cov, kTolFockCov},
      {"fock_vs_gaussian_prob", rep.max_fock_vs_gaussian_prob, kTolFockProb},
      {"evolved_vs_gaussian_cov_small_r", rep.max_evolved_vs_gaussian_cov_small_r, kTolFockCov},
  };
  if (format == Format::json) {
    json j;
    j["n"] = rep.n;
    j["shots"] = rep.shots;
    j["r"] = rep.r;
    j["cutoff"] = rep.cutoff;
    j["tail_bound"] = rep.tail_bound;
    json checks = json::array();
    for (const Item& it : items) {
      checks.push_back({{"check", it.name}, {"max_deviation", it.value}, {"tolerance", it.tol},
                        {"pass", it.value <= it.tol}});
    }
    j["checks"] = checks;
    json angles = json::array();
    for (const AngleArbitration& a : rep.angles) {
      angles.push_back({{"theta", a.theta}, {"measured_angle", a.measured_angle}});
    }
    j["angle_arbitration"] = angles;
    j["physical_convention"] = rep.physical_convention;
    j["pass"] = rep.pass;
    os << j.dump(2) << "\n";
    return;
  }
  fmt::print(os, "oracle-check n={} shots={} r={} cutoff={} tail_bound={}\n", rep.n, rep.shots,
             num(rep.r), rep.cutoff, num(rep.tail_bound));
  for (const Item& it : items) {
    fmt::print(os, "{:<34} max={:<14} tol={:<8} {}\n", it.name, num(it.value), num(it.tol),
               it.value <= it.tol ? "PASS" : "FAIL");
  }
  os << "correlation angle arbitration (n=1):\n";
  for (const AngleArbitration& a : rep.angles) {
    fmt::print(os, "  theta={:<8} measured={:<16} theta_diff={:<14} 2theta_diff={}\n", num(a.theta),
               num(a.measured_angle), num(wrap_angle(a.measured_angle - a.theta)),
               num(wrap_angle(a.measured_angle - 2.0 * a.theta)));
  }
  fmt::print(os, "physical convention: {}\n", rep.physical_convention);
  fmt::print(os, "result: {}\n", rep.pass ? "PASS" : "FAIL");
}

// ---------------------------------------------------------------------------

ShotReport shot(const RunConfig& config) {
  if (config.phases.empty()) throw std::invalid_argument("shot: --phases is required");
  const int n = static_cast<int>(config.phases.size());
  if (!config.n.empty() && (config.n.size() != 1 || config.n.front() != n)) {
    throw std::invalid_argument("shot: number of phases does not match --n");
  }
  ShotReport rep;
  rep.params = ChannelParams{n, config.squeezing(), 0.0, config.convention};
  rep.phases = config.phases;
  rep.closed_form = shot_closed_form(rep.params, rep.phases);
  rep.gaussian_path = shot_gaussian_path(rep.params, rep.phases);
  return rep;
}

void write_shot_report(std::ostream& os, Format format, const ShotReport& rep) {
  auto outcome_json = [](const ShotOutcome& o) {
    json j;
    j["alpha"] = o.alpha;
    j["phi_beta"] = o.phi_beta;
    j["r_prime"] = o.r_prime;
    j["probability"] = o.probability;
    j["degenerate"] = o.degenerate;
    j["cov"] = matrix_json(o.cov);
    return j;
  };
  if (format == Format::json) {
    json j;
    j["n"] = rep.params.n;
    j["r"] = rep.params.r;
    j["convention"] = to_string(rep.params.convention);
    j["phases"] = rep.phases;
    j["closed_form"] = outcome_json(rep.closed_form);
    j["gaussian_path"] = outcome_json(rep.gaussian_path);
    os << j.dump(2) << "\n";
    return;
  }
  fmt::print(os, "n={} r={} convention={}\n", rep.params.n, num(rep.params.r),
             to_string(rep.params.convention));
  auto dump = [&os](const char* label, const ShotOutcome& o) {
    fmt::print(os, "[{}]\nalpha={} phi_beta={} r_prime={} probability={}{}\n", label, num(o.alpha),
               num(o.phi_beta), num(o.r_prime), num(o.probability),
               o.degenerate ? " (degenerate phase)" : "");
    for (Eigen::Index i = 0; i < o.cov.rows(); ++i) {
      for (Eigen::Index j = 0; j < o.cov.cols(); ++j) {
        fmt::print(os, "{}{:>16}", j ? " " : "  ", num(o.cov(i, j)));
      }
      os << "\n";
    }
  };
  dump("closed-form", rep.closed_form);
  dump("gaussian-path (derived angle)", rep.gaussian_path);
}

// ---------------------------------------------------------------------------

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.command == "table1") {
      write_table1(out, config, table1(config));
      return kSuccess;
    }
    if (config.command == "sweep" || config.command == "asymptotic") {
      const std::vector<SweepRecord> records = sweep(config);
      write_sweep(out, config.format, records);
      for (const SweepRecord& r : records) {
        if (r.clipped) {
          err << "physicality violation: averaged covariance clipped at n=" << r.n
              << " v=" << r.v << "\n";
          return kPhysicalityViolation;
        }
      }
      return kSuccess;
    }
    if (config.command == "oracle-check") {
      const OracleReport rep = oracle_check(config);
      write_oracle_report(out, config.format, rep);
      return rep.pass ? kSuccess : kOracleFailure;
    }
    write_shot_report(out, config.format, shot(config));
    return kSuccess;
  } catch (const PhysicalityError& e) {
    err << "physicality violation: " << e.what() << "\n";
    return kPhysicalityViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace uacv::report
