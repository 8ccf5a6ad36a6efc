#include "hpimc/checks.hpp"
#include "hpimc/config.hpp"
#include "hpimc/experiments.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

namespace {

hpimc::ExperimentConfig load_config(const std::string& path, const std::string& panel) {
  return hpimc::make_experiment_config(hpimc::KeyValueConfig::load(path), panel);
}

void report_written(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) {
    std::cout << "wrote " << f.string() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid path-integral Monte Carlo toolkit"};
  app.set_version_flag("--version", hpimc::version());
  app.require_subcommand(1);

  std::string panel;
  std::string config_path;
  std::string out_dir;
  std::string suite;
  std::string report_path;

  auto* fig1 = app.add_subcommand("fig1", "double-well TCF panels as CSV");
  fig1->add_option("--panel", panel, "panel a, b, c or d")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c", "d"}));
  fig1->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
  fig1->add_option("--out", out_dir, "output directory")->required();

  auto* bounds = app.add_subcommand("bounds", "DVR truncation error and its bounds as CSV");
  bounds->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  bounds->add_option("--out", out_dir)->required();

  auto* check = app.add_subcommand("check", "run a validation suite");
  check->add_option("--suite", suite)->required()->check(CLI::IsMember(hpimc::check_suites()));
  check->add_option("--report", report_path, "also write the JSON report here");

  auto* mc = app.add_subcommand("mc", "Monte Carlo TCF estimate against quadrature");
  mc->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  mc->add_option("--out", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fig1->parsed()) {
      report_written(hpimc::run_fig1(panel, load_config(config_path, panel), out_dir));
    } else if (bounds->parsed()) {
      report_written(hpimc::run_bounds(load_config(config_path, ""), out_dir));
    } else if (mc->parsed()) {
      report_written(hpimc::run_mc(load_config(config_path, ""), out_dir));
    } else if (check->parsed()) {
      const auto report = hpimc::run_check(suite);
      const std::string json = hpimc::to_json(report);
      std::cout << json << '\n';
      if (!report_path.empty()) {
        std::ofstream(report_path) << json << '\n';
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const hpimc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
