#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "cxtomo/config.hpp"
#include "cxtomo/io.hpp"
#include "test_support.hpp"

using namespace cxtomo;

namespace {

std::filesystem::path temp_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "cxtomo_tests" / name;
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("image CSV round-trips exactly") {
  const auto dir = temp_dir("io");
  const GridSpec g = testing::desk_grid();
  std::mt19937_64 rng(1);
  const Image img(testing::random_vector(g.num_pixels(), rng));
  const auto path = (dir / "img.csv").string();
  write_image_csv(path, img, g.n);
  const Image back = read_image_csv(path);
  REQUIRE(back.size() == img.size());
  CHECK(back.values == img.values);  // 17 significant digits round-trip doubles
}

TEST_CASE("vector CSV round-trips exactly") {
  const auto dir = temp_dir("io");
  std::mt19937_64 rng(2);
  const Vector v = testing::random_vector(137, rng);
  const auto path = (dir / "vec.csv").string();
  write_vector_csv(path, v);
  CHECK(read_vector_csv(path) == v);
}

TEST_CASE("pgm preview is a valid P2 grid with full dynamic range") {
  const auto dir = temp_dir("io");
  const GridSpec g = testing::desk_grid();
  Image img = Image::zero(g);
  img.values[0] = -1.0;
  img.values[1] = 3.0;
  const auto path = (dir / "img.pgm").string();
  write_image_pgm(path, img, g.n);

  std::ifstream in(path);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  CHECK(magic == "P2");
  CHECK(w == g.n);
  CHECK(h == g.n);
  CHECK(maxval == 255);
  int level, lo = 256, hi = -1, count = 0;
  while (in >> level) {
    REQUIRE(level >= 0);
    REQUIRE(level <= 255);
    lo = std::min(lo, level);
    hi = std::max(hi, level);
    ++count;
  }
  CHECK(count == g.num_pixels());
  CHECK(lo == 0);
  CHECK(hi == 255);
}

TEST_CASE("history CSV carries the header and the error column when present") {
  const auto dir = temp_dir("io");
  SolveHistory history;
  history.residual_norms = {0.5, 0.25};
  history.error_norms = {0.9, 0.8};
  const auto path = (dir / "history.csv").string();
  write_history_csv(path, history);
  const std::string text = slurp(path);
  CHECK(text.substr(0, 22) == "iter,res_rel,err_rel\n1");
  CHECK(text.find("1,0.5,0.90000000000000002\n") != std::string::npos);

  history.error_norms.clear();
  write_history_csv(path, history);
  CHECK(slurp(path).find("1,0.5,nan\n") != std::string::npos);
}

TEST_CASE("spectrum, picard, and mask writers emit their headers") {
  const auto dir = temp_dir("io");
  SpectrumData spectrum;
  spectrum.singular_values = Vector::LinSpaced(3, 3, 1);
  write_spectrum_csv((dir / "spectrum.csv").string(), spectrum);
  CHECK(slurp(dir / "spectrum.csv").substr(0, 8) == "i,sigma\n");

  PicardData picard;
  picard.sigma = Vector::Ones(2);
  picard.data_coef = Vector::Ones(2);
  picard.solution_coef = Vector::Ones(2);
  write_picard_csv((dir / "picard.csv").string(), picard);
  CHECK(slurp(dir / "picard.csv").substr(0, 21) == "i,sigma,coef,solcoef\n");

  write_mask_csv((dir / "mask.csv").string(), {1, 0, 0, 1}, 2);
  CHECK(slurp(dir / "mask.csv") == "1,0\n0,1\n");
}

TEST_CASE("config round-trips through serialize and parse") {
  ExperimentConfig config;
  config.n = 21;
  config.mask = "7x7";
  config.phantom = PhantomKind::lines;
  config.phantom_count = 3;
  config.phantom_box = {-2, 2, -1, 1};
  config.noise_level = 1e-4;
  config.noise_seed = 99;
  config.solver.method = SolverMethod::igmrf;
  config.solver.lambda_schedule = {1.5, 2.5};
  config.solver.cg_max = 60;
  config.keep_iterates = true;
  config.threads = 2;

  const ExperimentConfig back = parse_config_text(serialize_config(config));
  CHECK(back == config);
  CHECK(serialize_config(back) == serialize_config(config));
}

TEST_CASE("defaults reproduce the production experiment scale") {
  const ExperimentConfig config = parse_config_text("");
  CHECK(config.n == 51);
  CHECK(config.extent == 7.0);
  CHECK(config.t_final == 2.0);
  CHECK(config.n_slices == 40);
  CHECK(config.mask == "full");
  CHECK(config.noise_level == 0.02);
  CHECK(config.solver.lambda == 6.6e-5);
  CHECK(config.solver.beta == 1e-3);
  CHECK(config.solver.outer_iters == 5);
  CHECK(config.solver.cg_max == 100);
  const GridSpec g = config.make_grid_spec();
  CHECK(g.dx == doctest::Approx(0.28));
}

TEST_CASE("config parser reports bad input as ConfigError") {
  CHECK_THROWS_AS(parse_config_text("unknown_key = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n must be 51\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n = \n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n = fifty\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("phantom = blobs\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("method = cg\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("phantom_box = 1 2 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("keep_iterates = maybe\n"), ConfigError);
  // CFL-violating grids surface as ConfigError at spec construction
  CHECK_THROWS_AS(parse_config_text("n = 3\nextent = 1\nt_final = 1\nn_slices = 1\n")
                      .make_grid_spec(),
                  ConfigError);

  // comments and blank lines are fine
  const ExperimentConfig c = parse_config_text("# comment\n\nn = 9 # trailing\n");
  CHECK(c.n == 9);
}
