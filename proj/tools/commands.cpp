#include "commands.hpp"

#include <filesystem>
#include <sstream>

#include "cxtomo/analysis.hpp"
#include "cxtomo/io.hpp"
#include "cxtomo/model.hpp"
#include "cxtomo/parallel.hpp"
#include "cxtomo/solvers.hpp"

namespace cxtomo {

namespace {

std::string out_path(const ExperimentConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return (std::filesystem::path(config.out_dir) / name).string();
}

ForwardModel build_model(const ExperimentConfig& config, const GridSpec& spec) {
  set_worker_threads(config.threads);
  return make_forward_model(spec, mask_from_label(spec, config.mask));
}

}  // namespace

void cmd_simulate(const ExperimentConfig& config) {
  const GridSpec spec = config.make_grid_spec();
  const ForwardModel model = build_model(config, spec);

  const Image f_true = make_phantom(config.make_phantom_spec(), spec);
  const Vector b_clean = model.apply(f_true.values);
  const auto [b, e] = add_noise(b_clean, config.make_noise_spec());

  write_image_csv(out_path(config, "f_true.csv"), f_true, spec.n);
  write_vector_csv(out_path(config, "b.csv"), b);

  std::ostringstream noise;
  noise << "m = " << b.size() << '\n';
  noise << "e_norm = " << format_double(e.norm()) << '\n';
  noise << "b_clean_norm = " << format_double(b_clean.norm()) << '\n';
  noise << "achieved_level = "
        << format_double(b_clean.norm() > 0.0 ? e.norm() / b_clean.norm() : 0.0) << '\n';
  write_text_file(out_path(config, "noise.txt"), noise.str());
}

void cmd_reconstruct(const ExperimentConfig& config, const std::string& b_path,
                     const std::string& ftrue_path) {
  const GridSpec spec = config.make_grid_spec();
  const ForwardModel model = build_model(config, spec);

  const Vector b = read_vector_csv(b_path);
  if (b.size() != model.rows()) {
    std::ostringstream msg;
    msg << "observation vector " << b_path << " has " << b.size() << " entries but the '"
        << config.mask << "' model expects " << model.rows();
    throw ConfigError(msg.str());
  }

  Image f_true;
  const Image* f_true_ptr = nullptr;
  if (!ftrue_path.empty()) {
    f_true = read_image_csv(ftrue_path);
    if (f_true.size() != spec.num_pixels()) {
      throw ConfigError("true image size does not match the grid: " + ftrue_path);
    }
    f_true_ptr = &f_true;
  }

  const SolveHistory history =
      run_solver(config.solver, model, b, f_true_ptr, config.keep_iterates);

  write_image_csv(out_path(config, "fhat.csv"), history.final, spec.n);
  write_image_pgm(out_path(config, "fhat.pgm"), history.final, spec.n);
  write_history_csv(out_path(config, "history.csv"), history);
  if (config.keep_iterates) {
    for (std::size_t k = 0; k < history.iterates.size(); ++k) {
      write_image_csv(out_path(config, "iterate_" + std::to_string(k + 1) + ".csv"),
                      history.iterates[k], spec.n);
    }
  }
}

void cmd_spectrum(const ExperimentConfig& config) {
  const GridSpec spec = config.make_grid_spec();
  const ForwardModel model = build_model(config, spec);
  const SpectrumData spectrum = singular_spectrum(model, config.rank_tolerance);

  write_spectrum_csv(out_path(config, "spectrum.csv"), spectrum);
  std::ostringstream kappa;
  kappa << "m = " << model.rows() << '\n';
  kappa << "rank = " << spectrum.rank << '\n';
  kappa << "kappa = " << (spectrum.kappa_is_finite ? format_double(spectrum.kappa) : "inf")
        << '\n';
  write_text_file(out_path(config, "kappa.txt"), kappa.str());
}

void cmd_picard(const ExperimentConfig& config, const std::string& b_path) {
  const GridSpec spec = config.make_grid_spec();
  const ForwardModel model = build_model(config, spec);
  const Vector b = read_vector_csv(b_path);
  if (b.size() != model.rows()) {
    throw ConfigError("observation vector does not match the '" + config.mask + "' model");
  }
  write_picard_csv(out_path(config, "picard.csv"),
                   picard_data(model, b, config.rank_tolerance));
}

void cmd_visible(const ExperimentConfig& config) {
  const GridSpec spec = config.make_grid_spec();
  set_worker_threads(config.threads);
  const DetectorMask mask = mask_from_label(spec, config.mask);
  const VisibleMask visible = visible_mask(spec, mask, config.visible_tolerance);
  write_mask_csv(out_path(config, "visible.csv"), visible.visible, spec.n);
}

}  // namespace cxtomo
