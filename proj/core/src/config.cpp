#include "cxtomo/config.hpp"

#include <fstream>
#include <sstream>

#include "cxtomo/io.hpp"

namespace cxtomo {

GridSpec ExperimentConfig::make_grid_spec() const {
  try {
    return make_grid(n, extent, t_final, n_slices);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

PhantomSpec ExperimentConfig::make_phantom_spec() const {
  PhantomSpec p;
  p.kind = phantom;
  p.count = phantom_count;
  p.support_box = phantom_box;
  p.amplitude = phantom_amplitude;
  p.seed = phantom_seed;
  return p;
}

NoiseSpec ExperimentConfig::make_noise_spec() const { return NoiseSpec{noise_level, noise_seed}; }

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number from '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer from '" + value + "'");
  }
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse seed from '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_schedule(const std::string& key, const std::string& value) {
  std::vector<double> schedule;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) schedule.push_back(parse_double(key, item));
  }
  return schedule;
}

std::string schedule_to_string(const std::vector<double>& schedule) {
  std::string out;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0) out += ",";
    out += format_double(schedule[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    }

    if (key == "n") {
      c.n = static_cast<int>(parse_int(key, value));
    } else if (key == "extent") {
      c.extent = parse_double(key, value);
    } else if (key == "t_final") {
      c.t_final = parse_double(key, value);
    } else if (key == "n_slices") {
      c.n_slices = static_cast<int>(parse_int(key, value));
    } else if (key == "mask") {
      c.mask = value;
    } else if (key == "phantom") {
      if (value == "dots") {
        c.phantom = PhantomKind::dots;
      } else if (value == "lines") {
        c.phantom = PhantomKind::lines;
      } else {
        throw ConfigError("config key 'phantom': expected dots or lines, got '" + value + "'");
      }
    } else if (key == "phantom_count") {
      c.phantom_count = static_cast<int>(parse_int(key, value));
    } else if (key == "phantom_box") {
      std::stringstream box(value);
      if (!(box >> c.phantom_box.xmin >> c.phantom_box.xmax >> c.phantom_box.ymin >>
            c.phantom_box.ymax)) {
        throw ConfigError("config key 'phantom_box': expected 'xmin xmax ymin ymax'");
      }
      std::string rest;
      if (box >> rest) throw ConfigError("config key 'phantom_box': too many values");
    } else if (key == "phantom_amplitude") {
      c.phantom_amplitude = parse_double(key, value);
    } else if (key == "phantom_seed") {
      c.phantom_seed = parse_seed(key, value);
    } else if (key == "noise_level") {
      c.noise_level = parse_double(key, value);
    } else if (key == "noise_seed") {
      c.noise_seed = parse_seed(key, value);
    } else if (key == "method") {
      if (value == "ls") {
        c.solver.method = SolverMethod::ls;
      } else if (value == "lsqr") {
        c.solver.method = SolverMethod::lsqr;
      } else if (value == "fista") {
        c.solver.method = SolverMethod::fista;
      } else if (value == "igmrf") {
        c.solver.method = SolverMethod::igmrf;
      } else {
        throw ConfigError("config key 'method': expected ls|lsqr|fista|igmrf, got '" + value +
                          "'");
      }
    } else if (key == "max_iters") {
      c.solver.max_iters = parse_int(key, value);
    } else if (key == "lambda") {
      c.solver.lambda = parse_double(key, value);
    } else if (key == "lambda_schedule") {
      c.solver.lambda_schedule = value == "exp" ? std::vector<double>{}
                                                : parse_schedule(key, value);
    } else if (key == "beta") {
      c.solver.beta = parse_double(key, value);
    } else if (key == "outer_iters") {
      c.solver.outer_iters = static_cast<int>(parse_int(key, value));
    } else if (key == "cg_max") {
      c.solver.cg_max = parse_int(key, value);
    } else if (key == "tol") {
      c.solver.tol = parse_double(key, value);
    } else if (key == "visible_tolerance") {
      c.visible_tolerance = parse_double(key, value);
    } else if (key == "rank_tolerance") {
      c.rank_tolerance = parse_double(key, value);
    } else if (key == "out_dir") {
      c.out_dir = value;
    } else if (key == "keep_iterates") {
      c.keep_iterates = parse_bool(key, value);
    } else if (key == "threads") {
      c.threads = static_cast<int>(parse_int(key, value));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "n = " << c.n << '\n';
  out << "extent = " << format_double(c.extent) << '\n';
  out << "t_final = " << format_double(c.t_final) << '\n';
  out << "n_slices = " << c.n_slices << '\n';
  out << "mask = " << c.mask << '\n';
  out << "phantom = " << (c.phantom == PhantomKind::dots ? "dots" : "lines") << '\n';
  out << "phantom_count = " << c.phantom_count << '\n';
  out << "phantom_box = " << format_double(c.phantom_box.xmin) << ' '
      << format_double(c.phantom_box.xmax) << ' ' << format_double(c.phantom_box.ymin) << ' '
      << format_double(c.phantom_box.ymax) << '\n';
  out << "phantom_amplitude = " << format_double(c.phantom_amplitude) << '\n';
  out << "phantom_seed = " << c.phantom_seed << '\n';
  out << "noise_level = " << format_double(c.noise_level) << '\n';
  out << "noise_seed = " << c.noise_seed << '\n';
  switch (c.solver.method) {
    case SolverMethod::ls: out << "method = ls\n"; break;
    case SolverMethod::lsqr: out << "method = lsqr\n"; break;
    case SolverMethod::fista: out << "method = fista\n"; break;
    case SolverMethod::igmrf: out << "method = igmrf\n"; break;
  }
  out << "max_iters = " << c.solver.max_iters << '\n';
  out << "lambda = " << format_double(c.solver.lambda) << '\n';
  out << "lambda_schedule = "
      << (c.solver.lambda_schedule.empty() ? "exp" : schedule_to_string(c.solver.lambda_schedule))
      << '\n';
  out << "beta = " << format_double(c.solver.beta) << '\n';
  out << "outer_iters = " << c.solver.outer_iters << '\n';
  out << "cg_max = " << c.solver.cg_max << '\n';
  out << "tol = " << format_double(c.solver.tol) << '\n';
  out << "visible_tolerance = " << format_double(c.visible_tolerance) << '\n';
  out << "rank_tolerance = " << format_double(c.rank_tolerance) << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  out << "keep_iterates = " << (c.keep_iterates ? "true" : "false") << '\n';
  out << "threads = " << c.threads << '\n';
  return out.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.n == b.n && a.extent == b.extent && a.t_final == b.t_final &&
         a.n_slices == b.n_slices && a.mask == b.mask && a.phantom == b.phantom &&
         a.phantom_count == b.phantom_count && a.phantom_box.xmin == b.phantom_box.xmin &&
         a.phantom_box.xmax == b.phantom_box.xmax && a.phantom_box.ymin == b.phantom_box.ymin &&
         a.phantom_box.ymax == b.phantom_box.ymax &&
         a.phantom_amplitude == b.phantom_amplitude && a.phantom_seed == b.phantom_seed &&
         a.noise_level == b.noise_level && a.noise_seed == b.noise_seed &&
         a.solver.method == b.solver.method && a.solver.max_iters == b.solver.max_iters &&
         a.solver.lambda == b.solver.lambda &&
         a.solver.lambda_schedule == b.solver.lambda_schedule && a.solver.beta == b.solver.beta &&
         a.solver.outer_iters == b.solver.outer_iters && a.solver.cg_max == b.solver.cg_max &&
         a.solver.tol == b.solver.tol && a.visible_tolerance == b.visible_tolerance &&
         a.rank_tolerance == b.rank_tolerance && a.out_dir == b.out_dir &&
         a.keep_iterates == b.keep_iterates && a.threads == b.threads;
}

}  // namespace cxtomo
