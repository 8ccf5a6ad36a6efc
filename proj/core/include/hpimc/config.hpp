#pragma once

#include "hpimc/hamiltonian.hpp"
#include "hpimc/propagators.hpp"
#include "hpimc/tcf.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpimc {

// Raised for malformed input or a field that fails validation; `field` names the key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Flat `key = value` text, `#` starts a comment. Keys are unique.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& file);

  const std::string& text() const { return text_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  // Comma separated integers.
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

 private:
  std::string text_;
  std::map<std::string, std::string> values_;
};

double parse_double(const std::string& field, const std::string& value);
std::int64_t parse_int(const std::string& field, const std::string& value);

enum class PotentialKind { double_well, harmonic };

struct ExperimentConfig {
  std::string experiment = "fig1";
  std::string source_text;  // verbatim input, echoed into output headers

  // Physical parameters in input units.
  PotentialKind potential = PotentialKind::double_well;
  double mass = 1836.0;
  double barrier_frequency_cm = 500.0;
  double barrier_height_cm = 1500.0;
  double harmonic_frequency = 1.0;  // hartree
  double temperature_k = 350.0;
  double beta = 0.0;                // hartree^-1; overrides temperature when > 0
  double length = 30.0;

  // Numerical parameters. Sweeps run over the product of the three lists.
  std::vector<int> qubits{8};
  std::vector<int> steps{80};
  std::vector<int> ells{0};  // imaginary-time DVR diagonals; 0 keeps all
  int reference_qubits = 8;
  double t_max = 10000.0;
  int time_points = 200;
  SchemeOptions scheme;
  Normalization normalization = Normalization::max_magnitude;
  int threads = 0;

  // Monte Carlo.
  std::int64_t mc_iterations = 10000;
  std::vector<std::int64_t> mc_iteration_sweep;
  int mc_window = 0;
  int mc_batches = 32;
  int mc_chains = 1;
  std::uint64_t seed = 12345;
  double mc_time = 0.0;

  // Bounds.
  int bounds_points = 512;
  std::vector<double> bounds_k{1.0};

  double beta_value() const;
  PotentialSpec potential_spec() const;
};

// Starts from the panel or experiment defaults, applies the file, validates every field.
ExperimentConfig make_experiment_config(const KeyValueConfig& kv, const std::string& panel = "");
ExperimentConfig default_fig1_config(const std::string& panel);
void validate(const ExperimentConfig& config);

// Canonical `key = value` form of every field; parses back to the same config.
std::string serialize(const ExperimentConfig& config);

}  // namespace hpimc
