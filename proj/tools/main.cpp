#include <cstdio>
#include <fstream>
#include <sstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "qradar/errors.hpp"
#include "qradar/log.hpp"
#include "table.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

void write_file(const std::string& path, const std::string& what, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qradar::ConfigError(what + ": cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qradar;
  log::init_from_env();

  CLI::App app{"Angle-estimation bounds for quantum and classical bistatic radar"};
  app.require_subcommand(1);
  std::string config_path, out_path, svg_path;
  std::size_t workers = 0;
  bool workers_given = false;
  for (const auto& name : cli::subcommand_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "CSV output (default: output.csv from the config, else stdout)");
    sub->add_option("--svg", svg_path, "SVG rendering of the table");
    sub->add_option("--workers", workers, "worker threads (default: compute.workers, 0 = all cores)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  workers_given = app.get_subcommands().front()->count("--workers") > 0;

  try {
    const cli::RunConfig config = cli::load_config(config_path);
    const std::size_t threads = workers_given ? workers : config.compute.workers;
    spdlog::info("running {} with {} worker(s)", name, threads);
    const cli::CsvTable table = cli::run_subcommand(name, config, threads);

    std::ostringstream csv;
    cli::write_csv(csv, table);
    const std::string csv_target = out_path.empty() ? config.output.csv : out_path;
    if (csv_target.empty())
      std::cout << csv.str();
    else
      write_file(csv_target, "csv", csv.str());

    const std::string svg_target = svg_path.empty() ? config.output.svg : svg_path;
    if (!svg_target.empty()) write_file(svg_target, "svg", cli::render_svg(table));
  } catch (const ConfigError& e) {
    std::cerr << "qradar: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "qradar: invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "qradar: numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "qradar: numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}
