#include "hpimc/config.hpp"

#include "hpimc/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace hpimc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return "";
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(trim(item));
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment",      "potential",        "mass",           "barrier_frequency_cm",
      "barrier_height_cm", "harmonic_frequency", "temperature_k", "beta",
      "length",          "qubits",           "steps",          "ell",
      "reference_qubits", "t_max",           "time_points",    "real_kinetic",
      "real_ell",        "imag_kinetic",     "imag_method",    "pite_m0",
      "normalization",   "threads",          "mc_iterations",  "mc_iteration_sweep",
      "mc_window",       "mc_batches",       "mc_chains",      "seed",
      "mc_time",         "bounds_points",    "bounds_k"};
  return keys;
}

KineticMethod parse_kinetic(const std::string& field, const std::string& v) {
  if (v == "fourier") return KineticMethod::fourier;
  if (v == "dvr") return KineticMethod::dvr;
  throw ConfigError(field, "expected fourier or dvr, got '" + v + "'");
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

double parse_double(const std::string& field, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(field, "not a finite number: '" + value + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& field, const std::string& value) {
  std::int64_t out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(field, "not an integer: '" + value + "'");
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  cfg.text_ = text;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(key, "line " + std::to_string(lineno) + ": empty key or value");
    }
    if (!known_keys().count(key)) {
      throw ConfigError(key, "unknown key");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw ConfigError(key, "duplicate key");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw ConfigError("", "cannot read config file " + file.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(key, it->second);
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key,
                                              const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  std::vector<int> out;
  for (const auto& item : split_list(it->second)) {
    const auto v = parse_int(key, item);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ConfigError(key, "value out of range");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key,
                                                    const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) {
    out.push_back(parse_double(key, item));
  }
  return out;
}

double ExperimentConfig::beta_value() const {
  return beta > 0.0 ? beta : units::kelvin_to_beta(temperature_k);
}

PotentialSpec ExperimentConfig::potential_spec() const {
  if (potential == PotentialKind::harmonic) {
    return Harmonic{mass, harmonic_frequency};
  }
  return DoubleWell{mass, units::wavenumber_to_hartree(barrier_frequency_cm),
                    units::wavenumber_to_hartree(barrier_height_cm)};
}

ExperimentConfig default_fig1_config(const std::string& panel) {
  ExperimentConfig c;
  c.experiment = "fig1";
  if (panel == "a") {
    c.qubits = {8};
    c.steps = {10, 20, 40, 80};
  } else if (panel == "b") {
    c.qubits = {5, 6, 7, 8};
    c.steps = {80};
  } else if (panel == "c") {
    c.qubits = {7};
    c.steps = {80};
    c.ells = {128, 32, 16, 8, 4};
  } else if (panel == "d") {
    c.qubits = {6};
    c.steps = {40};
    c.ells = {4};
  } else if (!panel.empty()) {
    throw ConfigError("panel", "expected a, b, c or d, got '" + panel + "'");
  }
  return c;
}

ExperimentConfig make_experiment_config(const KeyValueConfig& kv, const std::string& panel) {
  ExperimentConfig c = default_fig1_config(panel);
  c.source_text = kv.text();
  c.experiment = kv.get_string("experiment", panel.empty() ? c.experiment : "fig1");

  const std::string pot = kv.get_string("potential", "double_well");
  if (pot == "double_well") {
    c.potential = PotentialKind::double_well;
  } else if (pot == "harmonic") {
    c.potential = PotentialKind::harmonic;
  } else {
    throw ConfigError("potential", "expected double_well or harmonic, got '" + pot + "'");
  }
  c.mass = kv.get_double("mass", c.mass);
  c.barrier_frequency_cm = kv.get_double("barrier_frequency_cm", c.barrier_frequency_cm);
  c.barrier_height_cm = kv.get_double("barrier_height_cm", c.barrier_height_cm);
  c.harmonic_frequency = kv.get_double("harmonic_frequency", c.harmonic_frequency);
  c.temperature_k = kv.get_double("temperature_k", c.temperature_k);
  c.beta = kv.get_double("beta", c.beta);
  c.length = kv.get_double("length", c.length);

  c.qubits = kv.get_int_list("qubits", c.qubits);
  c.steps = kv.get_int_list("steps", c.steps);
  c.ells = kv.get_int_list("ell", c.ells);
  c.reference_qubits = static_cast<int>(kv.get_int("reference_qubits", c.reference_qubits));
  c.t_max = kv.get_double("t_max", c.t_max);
  c.time_points = static_cast<int>(kv.get_int("time_points", c.time_points));

  c.scheme.real_kinetic = parse_kinetic("real_kinetic", kv.get_string("real_kinetic", "fourier"));
  c.scheme.real_ell = static_cast<int>(kv.get_int("real_ell", 0));
  c.scheme.imag_kinetic = parse_kinetic("imag_kinetic", kv.get_string("imag_kinetic", "dvr"));
  const std::string im = kv.get_string("imag_method", "trotter1");
  if (im == "trotter1") {
    c.scheme.imag_method = ImaginaryMethod::trotter1;
  } else if (im == "pite") {
    c.scheme.imag_method = ImaginaryMethod::pite;
  } else {
    throw ConfigError("imag_method", "expected trotter1 or pite, got '" + im + "'");
  }
  c.scheme.pite_m0 = kv.get_double("pite_m0", c.scheme.pite_m0);
  const std::string norm = kv.get_string("normalization", "max_magnitude");
  if (norm == "max_magnitude") {
    c.normalization = Normalization::max_magnitude;
  } else if (norm == "max_real") {
    c.normalization = Normalization::max_real;
  } else {
    throw ConfigError("normalization", "expected max_magnitude or max_real, got '" + norm + "'");
  }
  c.threads = static_cast<int>(kv.get_int("threads", c.threads));

  c.mc_iterations = kv.get_int("mc_iterations", c.mc_iterations);
  for (const int m : kv.get_int_list("mc_iteration_sweep", {})) {
    c.mc_iteration_sweep.push_back(m);
  }
  c.mc_window = static_cast<int>(kv.get_int("mc_window", c.mc_window));
  c.mc_batches = static_cast<int>(kv.get_int("mc_batches", c.mc_batches));
  c.mc_chains = static_cast<int>(kv.get_int("mc_chains", c.mc_chains));
  const auto seed = kv.get_int("seed", static_cast<std::int64_t>(c.seed));
  if (seed < 0) {
    throw ConfigError("seed", "must be non-negative");
  }
  c.seed = static_cast<std::uint64_t>(seed);
  c.mc_time = kv.get_double("mc_time", c.mc_time);

  c.bounds_points = static_cast<int>(kv.get_int("bounds_points", c.bounds_points));
  c.bounds_k = kv.get_double_list("bounds_k", c.bounds_k);

  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.experiment != "fig1" && c.experiment != "bounds" && c.experiment != "mc") {
    throw ConfigError("experiment", "expected fig1, bounds or mc");
  }
  if (!(c.mass > 0.0)) throw ConfigError("mass", "must be positive");
  if (!(c.barrier_frequency_cm > 0.0)) throw ConfigError("barrier_frequency_cm", "must be positive");
  if (!(c.barrier_height_cm > 0.0)) throw ConfigError("barrier_height_cm", "must be positive");
  if (!(c.harmonic_frequency > 0.0)) throw ConfigError("harmonic_frequency", "must be positive");
  if (!(c.temperature_k > 0.0)) throw ConfigError("temperature_k", "must be positive");
  if (c.beta < 0.0) throw ConfigError("beta", "must be positive (0 derives it from temperature_k)");
  if (!(c.length > 0.0)) throw ConfigError("length", "must be positive");

  const auto check_list = [](const std::vector<int>& list, const char* field, int lo, int hi) {
    if (list.empty()) throw ConfigError(field, "must not be empty");
    for (const int v : list) {
      if (v < lo || v > hi) {
        throw ConfigError(field, "value " + std::to_string(v) + " outside [" + std::to_string(lo) +
                                     ", " + std::to_string(hi) + "]");
      }
    }
  };
  check_list(c.qubits, "qubits", 2, 16);
  check_list(c.steps, "steps", 1, 1'000'000);
  check_list(c.ells, "ell", 0, 1 << 16);
  for (const int ell : c.ells) {
    for (const int n : c.qubits) {
      if (ell > (1 << n)) {
        throw ConfigError("ell", "ell = " + std::to_string(ell) + " exceeds D = 2^" +
                                     std::to_string(n));
      }
    }
  }
  if (c.scheme.real_ell < 0) throw ConfigError("real_ell", "must be >= 0");
  if (c.reference_qubits < 2 || c.reference_qubits > 12) {
    throw ConfigError("reference_qubits", "must lie in [2, 12]");
  }
  if (c.experiment == "fig1") {
    if (!(c.t_max > 0.0)) throw ConfigError("t_max", "must be positive");
    if (c.time_points < 2) throw ConfigError("time_points", "must be >= 2");
  }
  if (!(c.scheme.pite_m0 > 0.0 && c.scheme.pite_m0 < 1.0)) {
    throw ConfigError("pite_m0", "must lie in (0, 1)");
  }
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
  if (c.mc_iterations < 1) throw ConfigError("mc_iterations", "must be >= 1");
  for (const auto m : c.mc_iteration_sweep) {
    if (m < c.mc_batches) throw ConfigError("mc_iteration_sweep", "each entry must be >= mc_batches");
  }
  if (c.mc_window < 0) throw ConfigError("mc_window", "must be >= 0");
  if (c.mc_batches < 2) throw ConfigError("mc_batches", "must be >= 2");
  if (c.mc_iterations < c.mc_batches) throw ConfigError("mc_iterations", "must be >= mc_batches");
  if (c.mc_chains < 1) throw ConfigError("mc_chains", "must be >= 1");
  if (c.mc_time < 0.0) throw ConfigError("mc_time", "must be >= 0");
  if (c.bounds_points < 8 || !is_power_of_two(c.bounds_points)) {
    throw ConfigError("bounds_points", "must be a power of two >= 8");
  }
  if (c.bounds_k.empty()) throw ConfigError("bounds_k", "must not be empty");
  for (const double k : c.bounds_k) {
    if (!(k > 0.0)) throw ConfigError("bounds_k", "must be positive");
  }
}

namespace {

template <typename T>
std::string join(const std::vector<T>& values, std::string (*fmt)(T)) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? ", " : "") + fmt(values[i]);
  }
  return out;
}

std::string fmt_int(int v) { return std::to_string(v); }
std::string fmt_i64(std::int64_t v) { return std::to_string(v); }

std::string fmt_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

}  // namespace

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "experiment = " << c.experiment << "\n"
     << "potential = " << (c.potential == PotentialKind::harmonic ? "harmonic" : "double_well")
     << "\n"
     << "mass = " << fmt_double(c.mass) << "\n"
     << "barrier_frequency_cm = " << fmt_double(c.barrier_frequency_cm) << "\n"
     << "barrier_height_cm = " << fmt_double(c.barrier_height_cm) << "\n"
     << "harmonic_frequency = " << fmt_double(c.harmonic_frequency) << "\n"
     << "temperature_k = " << fmt_double(c.temperature_k) << "\n"
     << "beta = " << fmt_double(c.beta) << "\n"
     << "length = " << fmt_double(c.length) << "\n"
     << "qubits = " << join(c.qubits, fmt_int) << "\n"
     << "steps = " << join(c.steps, fmt_int) << "\n"
     << "ell = " << join(c.ells, fmt_int) << "\n"
     << "reference_qubits = " << c.reference_qubits << "\n"
     << "t_max = " << fmt_double(c.t_max) << "\n"
     << "time_points = " << c.time_points << "\n"
     << "real_kinetic = " << to_string(c.scheme.real_kinetic) << "\n"
     << "real_ell = " << c.scheme.real_ell << "\n"
     << "imag_kinetic = " << to_string(c.scheme.imag_kinetic) << "\n"
     << "imag_method = " << to_string(c.scheme.imag_method) << "\n"
     << "pite_m0 = " << fmt_double(c.scheme.pite_m0) << "\n"
     << "normalization = "
     << (c.normalization == Normalization::max_real ? "max_real" : "max_magnitude") << "\n"
     << "threads = " << c.threads << "\n"
     << "mc_iterations = " << c.mc_iterations << "\n";
  if (!c.mc_iteration_sweep.empty()) {
    os << "mc_iteration_sweep = " << join(c.mc_iteration_sweep, fmt_i64) << "\n";
  }
  os << "mc_window = " << c.mc_window << "\n"
     << "mc_batches = " << c.mc_batches << "\n"
     << "mc_chains = " << c.mc_chains << "\n"
     << "seed = " << c.seed << "\n"
     << "mc_time = " << fmt_double(c.mc_time) << "\n"
     << "bounds_points = " << c.bounds_points << "\n"
     << "bounds_k = " << join(c.bounds_k, fmt_double) << "\n";
  return os.str();
}

}  // namespace hpimc
