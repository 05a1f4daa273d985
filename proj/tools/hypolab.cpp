// hypolab command-line tool: run one experiment, the acceptance battery, or re-render a report.

#include <hypolab/acceptance.hpp>
#include <hypolab/experiment.hpp>
#include <hypolab/report.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>

namespace {

using namespace hypolab;

int run_command(const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed) {
  report::Json config;
  try {
    config = report::Json::parse(report::read_file(config_path));
  } catch (const report::Json::parse_error& e) {
    std::cerr << "error: " << config_path << " is not valid JSON: " << e.what() << '\n';
    return experiment::exit_internal;
  }
  const auto outcome = experiment::run(config, seed);
  const auto dir = out.empty() ? experiment::output_dir(config) : std::filesystem::path(out);
  for (const auto& p : experiment::write_outputs(outcome, dir)) std::cout << "wrote " << p.string() << '\n';
  for (const auto& c : outcome.report["checks"]) {
    std::cout << (c["passed"].get<bool>() ? "  ok    " : "  FAIL  ") << c["name"].get<std::string>() << '\n';
  }
  std::cout << "status: " << outcome.report["status"].get<std::string>() << " (exit " << outcome.exit_code << ")\n";
  return outcome.exit_code;
}

int render_command(const std::string& report_path, const std::string& out) {
  const auto rep = report::Json::parse(report::read_file(report_path));
  const auto dir = out.empty() ? std::filesystem::path(report_path).parent_path() : std::filesystem::path(out);
  for (const auto& p : experiment::render(rep, dir)) std::cout << "wrote " << p.string() << '\n';
  return experiment::exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypolab: numerical experiments on superlogarithmic estimates and spectral profiles"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  std::string config_path, out;
  std::optional<std::uint64_t> seed;
  run->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory (default: the config's out_dir or hypolab-out/<name>)");
  run->add_option("--seed", seed, "override the config seed");

  auto* suite = app.add_subcommand("suite", "run the full acceptance battery");
  std::string only, red;
  suite->add_option("--only", only, "comma-separated criteria to run");
  suite->add_option("--known-red", red, "comma-separated criteria expected to fail");

  auto* render = app.add_subcommand("render", "regenerate CSV and SVG files from a report");
  std::string report_path, render_out;
  render->add_option("report", report_path, "report.json written by run")->required()->check(CLI::ExistingFile);
  render->add_option("--out", render_out, "output directory (default: next to the report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : experiment::exit_internal;
  }

  try {
    if (*run) return run_command(config_path, out, seed);
    if (*render) return render_command(report_path, render_out);
    acceptance::SuiteOptions opt;
    if (!only.empty()) opt.only = acceptance::parse_id_list(only);
    if (!red.empty()) opt.known_red = acceptance::parse_id_list(red);
    return acceptance::run_suite(std::cout, opt);
  } catch (const experiment::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return experiment::exit_internal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return experiment::exit_internal;
  }
}
