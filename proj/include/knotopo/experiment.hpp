#pragma once

// Experiment configuration (presets, strict JSON), validation and the
// orchestrator that writes the plot-ready output files.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knotopo/topology.hpp"
#include "knotopo/wigner.hpp"

namespace kno {

enum class Protocol { linear_response, sta, sweep, wigner_movie };
enum class OutputFormat { csv, json };

const char* to_string(Protocol p) noexcept;
const char* to_string(OutputFormat f) noexcept;

struct RunSettings {
  InitialState initial = InitialState::ket0;
  bool sta = false;
  int n_steps = 4000;
  int n_samples = 401;
  int max_refinements = 2;
  double convergence_tol = 1e-4;
};

struct SweepSettings {
  std::vector<double> chi;
  SweepProtocol protocol = SweepProtocol::sta;
};

struct WignerSettings {
  GridSpec grid;
  std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
  double leakage_threshold = 1e-6;
};

struct OutputSettings {
  // Empty: resolved at run time (--out, then KNOTOPO_OUTPUT_DIR, then "out").
  std::string dir;
  OutputFormat format = OutputFormat::csv;
};

struct ExperimentConfig {
  // Preset the config derives from, or "custom".
  std::string preset = "custom";
  Protocol protocol = Protocol::linear_response;
  ModelParams model;
  RunSettings run;
  SweepSettings sweep;
  WignerSettings wigner;
  OutputSettings output;
  // Concurrent sweep workers; 0 means hardware concurrency.
  int jobs = 0;
};

inline constexpr const char* kOutputDirEnv = "KNOTOPO_OUTPUT_DIR";

// "fig1" (linear response) or "fig2-4" (STA). Throws config for other names.
ExperimentConfig preset(std::string_view name);
std::vector<std::string> preset_names();

// Strict JSON: unknown keys, wrong types and malformed text throw config with
// the line number and key path in the message. "preset" selects the base that
// the remaining keys override.
ExperimentConfig parse_config(std::string_view text);
// A preset name or a path to a JSON file.
ExperimentConfig load_config(const std::string& preset_or_path);

// Serializes every resolved parameter; parse_config(to_json(c)) reproduces c.
std::string to_json(const ExperimentConfig& c);

struct Check {
  std::string name;
  bool ok;
  std::string message;
};

struct ValidationReport {
  std::vector<Check> checks;
  double stabilizer_ratio = 0.0;
  double truncation_leakage = 0.0;
  double estimated_seconds = 0.0;
  std::string resolved;  // pretty-printed resolved config

  bool ok() const;
  std::string text() const;
};

// Never throws for invalid physics; each problem becomes a failed check.
ValidationReport validate(const ExperimentConfig& c);

struct ExperimentResult {
  std::string output_dir;
  std::vector<std::string> files;
  // Chern number of single runs; absent for sweeps and failures.
  std::optional<double> c1;
  std::vector<std::string> warnings;
};

// Runs the configured protocol and writes its files into the resolved output
// directory. All simulations complete before the first file is written.
// Throws usage for an empty sweep list (nothing written), io on write failures.
ExperimentResult run_experiment(const ExperimentConfig& c);

// Output directory precedence: explicit config value, then the environment
// variable, then "out".
std::string resolve_output_dir(const ExperimentConfig& c);

}  // namespace kno
