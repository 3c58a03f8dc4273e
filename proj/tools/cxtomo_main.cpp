#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "cxtomo/common.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string b_path;
  std::string ftrue_path;
  long long seed = -1;
};

cxtomo::ExperimentConfig resolve(const CommonArgs& args) {
  cxtomo::ExperimentConfig config = args.config_path.empty()
                                        ? cxtomo::ExperimentConfig{}
                                        : cxtomo::load_config(args.config_path);
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  if (args.seed >= 0) {
    config.phantom_seed = static_cast<std::uint64_t>(args.seed);
    config.noise_seed = static_cast<std::uint64_t>(args.seed);
  }
  return config;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_b) {
  cmd->add_option("--config", args.config_path, "Experiment config file (key = value lines)");
  cmd->add_option("--out", args.out_dir, "Output directory (overrides the config)");
  cmd->add_option("--seed", args.seed, "Override both phantom and noise seeds");
  if (needs_b) {
    cmd->add_option("--b", args.b_path, "Observation vector CSV")->required();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tomographic simulation and reconstruction of wave initial data from "
               "cone-beam light-ray observations"};
  app.require_subcommand(1);

  CommonArgs args;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a phantom and its noisy observations (f_true.csv, b.csv)");
  add_common(simulate, args, false);

  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "Reconstruct the initial image from observations (fhat.csv, history.csv)");
  add_common(reconstruct, args, true);
  reconstruct->add_option("--ftrue", args.ftrue_path,
                          "True image CSV; enables the error column of history.csv");

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Singular spectrum and condition number of the forward matrix");
  add_common(spectrum, args, false);

  CLI::App* picard =
      app.add_subcommand("picard", "Picard diagnostic triples for an observation vector");
  add_common(picard, args, true);

  CLI::App* visible =
      app.add_subcommand("visible", "Ray-coverage visibility mask of the detector set");
  add_common(visible, args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    const cxtomo::ExperimentConfig config = resolve(args);
    if (simulate->parsed()) {
      cxtomo::cmd_simulate(config);
    } else if (reconstruct->parsed()) {
      cxtomo::cmd_reconstruct(config, args.b_path, args.ftrue_path);
    } else if (spectrum->parsed()) {
      cxtomo::cmd_spectrum(config);
    } else if (picard->parsed()) {
      cxtomo::cmd_picard(config, args.b_path);
    } else if (visible->parsed()) {
      cxtomo::cmd_visible(config);
    }
  } catch (const cxtomo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
