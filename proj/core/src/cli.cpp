#include "svlab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "svlab/error.hpp"
#include "svlab/experiments.hpp"

namespace svlab {

namespace {

void deliver(const ExperimentOutcome& outcome, const std::string& path, std::ostream& out) {
  out << outcome.summary;
  if (path.empty()) {
    out << outcome.table;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) fail("cannot write output file: " + path);
  file << outcome.table;
  out << "report written to " << path << "\n";
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"statistical verification experiments"};
  app.name("svlab");

  std::string config_path;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::string output_path;
  std::string format;
  app.add_option("--config", config_path, "experiment config file (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* trials_opt = app.add_option("--trials", trials, "override the config trial count");
  app.add_option("--output", output_path, "write the report to this path");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));

  auto* prop = app.add_subcommand("prop", "run a named propositional method on a world pattern");
  prop->fallthrough();  // let --output/--format after "prop" reach the parent app
  std::string method_name;
  std::string pattern;
  int stages = 20;
  prop->add_option("--method", method_name, "method name (e.g. constant-zero, zero-solver)")
      ->required();
  prop->add_option("--world", pattern, "world pattern (e.g. \"11(0)\", \"0101...\", zeros)")
      ->required();
  prop->add_option("--stages", stages, "number of stages to simulate");

  try {
    std::reverse(args.begin(), args.end());  // CLI11's vector parse wants reversed args
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    ExperimentConfig config;
    if (prop->parsed()) {
      config.experiment = "prop";
      config.method = method_name;
      config.pattern = pattern;
      config.stages = stages;
    } else {
      if (config_path.empty()) fail("no config file given (use --config, or the prop subcommand)");
      config = load_config_file(config_path);
      if (seed_opt->count() > 0) config.seed = seed;
      if (trials_opt->count() > 0) {
        if (trials < 1) fail("--trials must be at least 1");
        config.trials = trials;
      }
    }

    std::string path = output_path;
    if (path.empty() && config.output) path = config.output->path;
    std::string fmt = format;
    if (fmt.empty()) fmt = config.output ? config.output->format : "csv";
    config.output = OutputSpec{path, fmt};

    ExperimentOutcome outcome = run_experiment(config);
    deliver(outcome, path, out);
    return outcome.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace svlab
