#pragma once

// Command implementations behind the ua_sim CLI. Everything here writes to a
// caller-supplied stream so output can be diffed byte for byte.

#include "uacv/channel.hpp"
#include "uacv/montecarlo.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uacv::report {

enum class Engine { analytic, montecarlo, asymptotic };
enum class Format { csv, json };

std::string_view to_string(Engine e);
Engine engine_from_string(std::string_view s);
std::string_view to_string(Format f);
Format format_from_string(std::string_view s);

/// Exit codes of the CLI.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kOracleFailure = 2,
  kPhysicalityViolation = 3,
};

/// Published squeezing table (dB) that the table1 command is compared against.
struct ReferenceRow {
  double r;
  double input_db;
  double n1_db;
  double n5_db;
};
inline constexpr std::array<ReferenceRow, 5> kReferenceTable{{
    {0.5, 4.34, 4.09, 4.27},
    {1.0, 8.69, 6.84, 8.17},
    {1.2, 10.43, 6.87, 9.39},
    {1.5, 12.03, 6.16, 10.43},
    {2.0, 17.38, 2.49, 9.03},
}};

/// Phase variance at which the reference table is regenerated.
inline constexpr double kTableVariance = 0.01;

/// Squeezing parameter used for sweeps when none is given (10.4 dB input).
inline constexpr double kDefaultR = 1.2;

struct RunConfig {
  std::string command = "table1";
  std::vector<int> n;     ///< empty: command default
  std::optional<double> r;
  std::optional<double> input_db;
  std::vector<double> v;  ///< empty: command default
  std::optional<std::int64_t> shots;
  std::uint64_t seed = 20240607;
  AngleConvention convention = AngleConvention::paper;
  Weighting weighting = Weighting::unweighted;
  std::optional<Engine> engine;
  int cutoff = 0;  ///< 0 picks one from the truncation bound
  int shards = 1;
  Format format = Format::csv;
  std::vector<double> phases;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  /// r from --r or --input-db, else kDefaultR.
  double squeezing() const;
  /// Explicit engine, else montecarlo when shots were given, else analytic.
  Engine resolved_engine() const;
  std::int64_t resolved_shots() const { return shots.value_or(100000); }
  /// Redundancy grid for sweeps: --n, else 1..10.
  std::vector<int> n_grid() const;
  /// Variance grid for sweeps: --variance, else {0, 0.005, 0.01, 0.02, 0.05}.
  std::vector<double> v_grid() const;
};

// ---------------------------------------------------------------------------
// table1

struct Table1Row {
  ReferenceRow reference;
  double input_db = 0.0;
  double n1_db = 0.0;
  double n5_db = 0.0;
  double n1_stderr = 0.0;
  double n5_stderr = 0.0;
};

std::vector<Table1Row> table1(const RunConfig& config);
void write_table1(std::ostream& os, const RunConfig& config, const std::vector<Table1Row>& rows);

// ---------------------------------------------------------------------------
// sweep / asymptotic

struct SweepRecord {
  int n = 0;  ///< 0 for the n -> inf engine
  double v = 0.0;
  double r = 0.0;
  Engine engine = Engine::analytic;
  double squeezing_db = 0.0;
  double purity = 0.0;
  double eof_bits = 0.0;
  double log_negativity = 0.0;
  double probability = 0.0;
  double stderr_squeezing_db = 0.0;
  double stderr_purity = 0.0;
  double stderr_eof_bits = 0.0;
  double stderr_probability = 0.0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  AngleConvention convention = AngleConvention::paper;
  Weighting weighting = Weighting::unweighted;
  bool clipped = false;
};

/// CSV header in column order; JSON records use the same keys.
inline constexpr std::array<std::string_view, 19> kSweepColumns{
    "n",           "v",
    "r",           "engine",
    "squeezing_db", "purity",
    "eof_bits",    "log_negativity",
    "probability", "stderr_squeezing_db",
    "stderr_purity", "stderr_eof_bits",
    "stderr_probability", "shots",
    "seed",        "convention",
    "weighting",   "physicality_tol",
    "clipped"};

SweepRecord sweep_point(const RunConfig& config, Engine engine, int n, double v);
std::vector<SweepRecord> sweep(const RunConfig& config);
void write_sweep(std::ostream& os, Format format, const std::vector<SweepRecord>& records);

// ---------------------------------------------------------------------------
// oracle-check

struct AngleArbitration {
  double theta = 0.0;           ///< single-mode channel phase
  double measured_angle = 0.0;  ///< correlation angle from Fock moments
};

struct OracleReport {
  int n = 0;
  int shots = 0;
  double r = 0.0;
  int cutoff = 0;
  double tail_bound = 0.0;
  double max_gaussian_vs_closed_cov = 0.0;
  double max_gaussian_vs_closed_prob = 0.0;
  double max_evolved_vs_closed_amp = 0.0;
  double max_fock_vs_gaussian_cov = 0.0;
  double max_fock_vs_gaussian_prob = 0.0;
  double max_evolved_vs_gaussian_cov_small_r = 0.0;
  std::vector<AngleArbitration> angles;
  std::string physical_convention;  ///< "derived", "paper" or "neither"
  bool pass = false;
};

inline constexpr double kTolGaussianCov = 1e-8;
inline constexpr double kTolGaussianProb = 1e-9;
inline constexpr double kTolAmplitude = 1e-8;
inline constexpr double kTolFockCov = 1e-5;
inline constexpr double kTolFockProb = 1e-10;
/// Squeezing for the fully evolved Fock comparison, whose cutoff is capped.
inline constexpr double kSmallR = 0.3;

/// Smallest cutoff (at least 40) whose geometric tail bound is below 1e-12.
int auto_cutoff(double r);

OracleReport oracle_check(const RunConfig& config);
void write_oracle_report(std::ostream& os, Format format, const OracleReport& report);

// ---------------------------------------------------------------------------
// shot

struct ShotReport {
  ChannelParams params;
  std::vector<double> phases;
  ShotOutcome closed_form;
  ShotOutcome gaussian_path;
};

ShotReport shot(const RunConfig& config);
void write_shot_report(std::ostream& os, Format format, const ShotReport& report);

/// Dispatches config.command; returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace uacv::report
