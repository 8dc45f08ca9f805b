// Batch front-end for the periodically pumped dot simulator.
//
//   ppd train  --config run.json --out results/
//   ppd laser  --config run.json --out results/
//   ppd sweep  --config run.json --out results/ --workers 4
//   ppd curves --config run.json --out results/
//
// Exit codes: 0 ok, 1 configuration error, 2 runtime failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ppd/config.hpp"
#include "ppd/runner.hpp"

namespace {

int execute(ppd::Mode mode, const std::string& config_path, const std::string& out_dir, std::optional<int> workers) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return ppd::exit_config_error;
  }
  std::ostringstream text;
  text << in.rdbuf();

  ppd::RunConfig config;
  try {
    config = ppd::parse_config(text.str(), mode);
  } catch (const ppd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ppd::exit_config_error;
  }

  const auto report = ppd::run(config, out_dir, workers);
  for (const auto& f : report.files) std::cout << f.string() << "\n";
  if (!report.message.empty()) std::cerr << (report.exit_code ? "error: " : "") << report.message << "\n";
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodically pumped quantum dot in a damped cavity"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int workers = 0;

  std::optional<ppd::Mode> mode;
  for (auto m : {ppd::Mode::train, ppd::Mode::laser, ppd::Mode::sweep, ppd::Mode::curves}) {
    const char* help = m == ppd::Mode::train    ? "periodic photon-train simulation"
                       : m == ppd::Mode::laser  ? "microlaser stroboscopic steady state"
                       : m == ppd::Mode::sweep  ? "steady-state statistics over a parameter grid"
                                                : "closed-form photon-train curves";
    auto* sub = app.add_subcommand(std::string(ppd::to_string(m)), help);
    sub->add_option("--config", config_path, "configuration document (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "sweep worker threads")->check(CLI::PositiveNumber);
    sub->callback([m, &mode] { mode = m; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ppd::exit_config_error;
  }
  return execute(*mode, config_path, out_dir, workers > 0 ? std::optional<int>(workers) : std::nullopt);
}
