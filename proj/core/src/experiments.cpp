#include "hpimc/experiments.hpp"

#include "hpimc/dvr.hpp"
#include "hpimc/element_cache.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef HPIMC_VERSION
#define HPIMC_VERSION "0.0.0"
#endif

namespace hpimc {

std::string version() { return HPIMC_VERSION; }

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 17);
  if (ec != std::errc()) {
    throw std::runtime_error("number formatting failed");
  }
  return std::string(buf, ptr);
}

std::vector<std::string> provenance_header(const ExperimentConfig& config,
                                           const std::string& fingerprint_hex) {
  std::vector<std::string> lines;
  lines.push_back("hpimc " + version());
  lines.push_back("fingerprint: " + fingerprint_hex);
  std::istringstream canonical(serialize(config));
  for (std::string line; std::getline(canonical, line);) {
    lines.push_back("config: " + line);
  }
  if (!config.source_text.empty()) {
    std::istringstream source(config.source_text);
    for (std::string line; std::getline(source, line);) {
      lines.push_back("source: " + line);
    }
  }
  return lines;
}

namespace {

std::string config_fingerprint(const ExperimentConfig& config, const std::string& extra) {
  return to_hex(fingerprint_of(serialize(config) + "|" + extra));
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

void write_header(std::ofstream& out, const std::vector<std::string>& lines) {
  for (const auto& line : lines) {
    out << "# " << line << '\n';
  }
}

void write_series(const std::filesystem::path& path, const TcfSeries& series,
                  const ExperimentConfig& config, const std::string& fingerprint_hex) {
  auto out = open_output(path);
  write_header(out, provenance_header(config, fingerprint_hex));
  for (const auto& [key, value] : series.metadata) {
    out << "# meta " << key << ": " << value << '\n';
  }
  out << "t,re,im\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_double(series.times[i]) << ',' << format_double(series.values[i].real()) << ','
        << format_double(series.values[i].imag()) << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::optional<std::filesystem::path> env_cache_dir() {
  const char* env = std::getenv("HPIMC_CACHE_DIR");
  if (env == nullptr || *env == '\0') {
    return std::nullopt;
  }
  std::filesystem::path dir(env);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string member_label(int qubits, int steps, int ell) {
  return "n" + std::to_string(qubits) + "_N" + std::to_string(steps) + "_ell" +
         std::to_string(ell);
}

}  // namespace

Fig1Result compute_fig1(const std::string& panel, const ExperimentConfig& config) {
  validate(config);
  const std::vector<double> times = uniform_times(config.t_max, config.time_points);
  const double beta = config.beta_value();
  const PotentialSpec potential = config.potential_spec();

  Fig1Result result;
  result.panel = panel;
  {
    const UniformGrid grid(config.length, config.reference_qubits);
    const Spectrum spectrum = eigendecompose(assemble_dense(grid, potential, config.mass));
    const Eigen::VectorXd x = Observable::position().diagonal(grid);
    result.exact = normalize(exact_tcf(spectrum, x, x, beta, times), config.normalization);
    result.exact.metadata["reference_qubits"] = std::to_string(config.reference_qubits);
    result.exact.metadata["t_max"] = format_double(config.t_max);
  }

  struct Member {
    int qubits;
    int steps;
    int ell;
  };
  std::vector<Member> members;
  for (const int n : config.qubits) {
    for (const int steps : config.steps) {
      for (const int ell : config.ells) {
        members.push_back({n, steps, ell});
      }
    }
  }
  const auto cache_dir = env_cache_dir();
  result.approx.resize(members.size());
  const bool outer_parallel = members.size() > 1;
  parallel_for(static_cast<int>(members.size()), config.threads, [&](int i) {
    const Member& m = members[static_cast<std::size_t>(i)];
    SchemeOptions options = config.scheme;
    options.imag_ell = m.ell;
    TrotterSetup setup{UniformGrid(config.length, m.qubits),
                       potential,
                       config.mass,
                       options,
                       m.steps,
                       beta,
                       cache_dir,
                       outer_parallel ? 1 : config.threads};
    const Eigen::VectorXd x = Observable::position().diagonal(setup.grid);
    TcfSeries series = normalize(trotterized_tcf(setup, x, x, times), config.normalization);
    series.metadata["qubits"] = std::to_string(m.qubits);
    series.metadata["ell"] = std::to_string(m.ell);
    series.metadata["t_max"] = format_double(config.t_max);
    result.approx[static_cast<std::size_t>(i)] =
        LabeledSeries{member_label(m.qubits, m.steps, m.ell), m.qubits, m.steps, m.ell,
                      std::move(series)};
  });
  for (const auto& a : result.approx) {
    result.deviations.push_back(max_deviation(a.series, result.exact));
  }
  return result;
}

std::vector<std::filesystem::path> write_fig1(const Fig1Result& result,
                                              const ExperimentConfig& config,
                                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  const std::string prefix = "fig1" + result.panel + "_";

  const auto exact_path = out_dir / (prefix + "exact.csv");
  write_series(exact_path, result.exact, config, config_fingerprint(config, "exact"));
  written.push_back(exact_path);

  for (const auto& a : result.approx) {
    const auto path = out_dir / (prefix + "approx_" + a.label + ".csv");
    write_series(path, a.series, config, config_fingerprint(config, a.series.metadata.at("scheme")));
    written.push_back(path);
  }

  const auto summary_path = out_dir / (prefix + "summary.csv");
  auto out = open_output(summary_path);
  write_header(out, provenance_header(config, config_fingerprint(config, "summary")));
  out << "label,qubits,steps,ell,max_deviation\n";
  for (std::size_t i = 0; i < result.approx.size(); ++i) {
    const auto& a = result.approx[i];
    out << a.label << ',' << a.qubits << ',' << a.steps << ',' << a.ell << ','
        << format_double(result.deviations[i]) << '\n';
  }
  written.push_back(summary_path);
  return written;
}

std::vector<std::filesystem::path> run_fig1(const std::string& panel,
                                            const ExperimentConfig& config,
                                            const std::filesystem::path& out_dir) {
  return write_fig1(compute_fig1(panel, config), config, out_dir);
}

std::vector<BoundsRow> compute_bounds(double kinetic_scale, int num_points) {
  if (num_points < 8) {
    throw std::invalid_argument("bounds need D >= 8");
  }
  std::vector<BoundsRow> rows;
  double max_exact = 0.0;
  for (int ell = 1; ell <= num_points - 3; ++ell) {
    const BoundsRow row{ell, dvr::exact_truncation_error(ell, num_points, kinetic_scale),
                        dvr::error_lower_bound(ell, kinetic_scale),
                        dvr::error_upper_bound(ell, kinetic_scale)};
    max_exact = std::max(max_exact, row.exact);
    rows.push_back(row);
  }
  for (auto& r : rows) {
    r.exact /= max_exact;
    r.lower /= max_exact;
    r.upper /= max_exact;
  }
  return rows;
}

std::vector<std::filesystem::path> run_bounds(const ExperimentConfig& config,
                                              const std::filesystem::path& out_dir) {
  validate(config);
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const double k : config.bounds_k) {
    const auto rows = compute_bounds(k, config.bounds_points);
    const std::string tag = format_double(k);
    const auto path = out_dir / ("bounds_D" + std::to_string(config.bounds_points) + "_K" + tag + ".csv");
    auto out = open_output(path);
    write_header(out, provenance_header(config, config_fingerprint(config, "bounds K=" + tag)));
    out << "# meta K: " << tag << '\n';
    out << "# meta D: " << config.bounds_points << '\n';
    out << "ell,delta_exact,delta_lower,delta_upper\n";
    for (const auto& r : rows) {
      out << r.ell << ',' << format_double(r.exact) << ',' << format_double(r.lower) << ','
          << format_double(r.upper) << '\n';
    }
    written.push_back(path);
  }
  return written;
}

McProblem make_mc_problem(const ExperimentConfig& config, int qubits, int steps) {
  const UniformGrid grid(config.length, qubits);
  const PotentialSpec potential = config.potential_spec();
  const double beta = config.beta_value();
  const Spectrum spectrum = eigendecompose(assemble_dense(grid, potential, config.mass));
  const double shift = spectrum.eigenvalues[0];
  SchemeOptions options = config.scheme;
  options.imag_ell = config.ells.front();
  const PropagatorContext context(grid, potential, config.mass,
                                  StepScheme(options, config.mc_time, beta, steps), shift);
  const Eigen::VectorXd x = Observable::position().diagonal(grid);
  return McProblem{grid,
                   StepTables{context.step_matrix(PathDirection::forward),
                              context.step_matrix(PathDirection::backward), steps},
                   spectrum.partition_function(beta, shift), x, x};
}

std::vector<McRow> compute_mc(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::int64_t> sweep = config.mc_iteration_sweep;
  if (sweep.empty()) {
    sweep.push_back(config.mc_iterations);
  }
  std::vector<McRow> rows;
  for (const int steps : config.steps) {
    const McProblem p = make_mc_problem(config, config.qubits.front(), steps);
    const Complex reference = trotterized_trace(p.tables.forward, p.tables.backward, steps,
                                                p.a_diag, p.b_diag, p.partition_function);
    for (const auto m : sweep) {
      SamplerConfig sc;
      sc.iterations = m;
      sc.window = config.mc_window;
      sc.batches = config.mc_batches;
      sc.chains = config.mc_chains;
      sc.seed = config.seed;
      sc.threads = config.threads;
      rows.push_back(McRow{steps, m,
                           mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc),
                           reference});
    }
  }
  return rows;
}

std::vector<std::filesystem::path> run_mc(const ExperimentConfig& config,
                                          const std::filesystem::path& out_dir) {
  const auto rows = compute_mc(config);
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / "mc.csv";
  auto out = open_output(path);
  write_header(out, provenance_header(config, config_fingerprint(config, "mc")));
  out << "steps,iterations,re,im,standard_error,f_estimate,f_exact,acceptance,reference_re,"
         "reference_im\n";
  for (const auto& r : rows) {
    out << r.steps << ',' << r.iterations << ',' << format_double(r.result.estimate.real()) << ','
        << format_double(r.result.estimate.imag()) << ','
        << format_double(r.result.standard_error) << ',' << format_double(r.result.f_estimate)
        << ',' << (r.result.f_exact ? 1 : 0) << ',' << format_double(r.result.acceptance_rate)
        << ',' << format_double(r.reference.real()) << ',' << format_double(r.reference.imag())
        << '\n';
  }
  return {path};
}

}  // namespace hpimc
