#pragma once

// Config-driven experiment runner behind the command-line tool, plus the property suites
// shared with the acceptance battery.

#include <hypolab/error.hpp>
#include <hypolab/report.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hypolab::experiment {

/// Process exit codes.
enum Exit : int { exit_ok = 0, exit_internal = 1, exit_fails = 2, exit_under_resolved = 3 };

/// All validation problems of one config, one message per field.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;  // measured quantity
  double bound = 0.0;  // what it was compared with
  std::string detail;
};

report::Json checks_to_json(const std::vector<Check>& checks);
bool all_passed(const std::vector<Check>& checks);

struct NamedTable {
  std::string file;
  report::Table table;
};

struct NamedPlot {
  std::string file;
  report::Plot plot;
};

struct Outcome {
  std::string kind;
  report::Json report;  // includes schema_version, status, exit_code, checks, results, tables, plots
  std::vector<NamedTable> tables;
  std::vector<NamedPlot> plots;
  int exit_code = exit_ok;
};

inline constexpr const char* kinds[] = {"mp-check", "superlog-probe",  "profile-elliptic", "profile-parabolic",
                                        "lp-suite", "synthesis",       "interp-verify",    "table1"};

/// Validates and runs one experiment. Throws ConfigError listing every invalid field.
Outcome run(const report::Json& config, std::optional<std::uint64_t> seed_override = {});

/// The config's out_dir, or "hypolab-out/<name>".
std::filesystem::path output_dir(const report::Json& config);

/// Writes report.json and every table and plot; returns the written paths in order.
std::vector<std::filesystem::path> write_outputs(const Outcome& o, const std::filesystem::path& dir);

/// Regenerates the CSV tables and SVG plots stored in a report document.
std::vector<std::filesystem::path> render(const report::Json& report, const std::filesystem::path& dir);

// Property suites, each deterministic for a given seed.

struct LpSuiteParams {
  std::size_t size = 256;      // matrix rows of the Dirichlet Laplacian surrogate
  double R = 1.0;
  int samples = 10000;         // lambda samples for the partition of unity
  int vectors = 100;           // random vectors for reconstruction, orthogonality, sandwich, band sums
  std::uint64_t seed = 0;
};

std::vector<Check> lp_suite(const LpSuiteParams& p, report::Table* bands = nullptr);

struct InterpSuiteParams {
  int draws = 1000;            // split-point and tail draws
  int sequences = 1000;        // random coefficient sequences
  int sequence_length = 20;
  int grid_points = 50;
  double xi_max = 1e60;
  std::uint64_t seed = 0;
};

std::vector<Check> interp_suite(const InterpSuiteParams& p);

struct BarrierSuiteParams {
  int fields = 50;
  int grid = 41;               // per axis
  std::uint64_t seed = 0;
};

std::vector<Check> barrier_suite(const BarrierSuiteParams& p);

}  // namespace hypolab::experiment
