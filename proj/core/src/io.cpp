#include "cxtomo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace cxtomo {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_image_csv(const std::string& path, const Image& img, int n) {
  if (img.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("write_image_csv: size mismatch");
  }
  auto out = open_out(path);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i > 0) out << ',';
      out << format_double(img.values[static_cast<Eigen::Index>(j) * n + i]);
    }
    out << '\n';
  }
  finish(out, path);
}

Image read_image_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::string line;
  int n_cols = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int cols = 0;
    while (std::getline(row, cell, ',')) {
      values.push_back(std::stod(cell));
      ++cols;
    }
    if (n_cols < 0) {
      n_cols = cols;
    } else if (cols != n_cols) {
      throw std::runtime_error("read_image_csv: ragged rows in " + path);
    }
  }
  const auto count = static_cast<Eigen::Index>(values.size());
  if (n_cols <= 0 || count != static_cast<Eigen::Index>(n_cols) * n_cols) {
    throw std::runtime_error("read_image_csv: not a square grid in " + path);
  }
  return Image(Eigen::Map<const Vector>(values.data(), count));
}

void write_image_pgm(const std::string& path, const Image& img, int n) {
  if (img.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("write_image_pgm: size mismatch");
  }
  const double lo = img.values.minCoeff();
  const double hi = img.values.maxCoeff();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  auto out = open_out(path);
  out << "P2\n" << n << ' ' << n << "\n255\n";
  for (int j = n - 1; j >= 0; --j) {
    for (int i = 0; i < n; ++i) {
      const double v = img.values[static_cast<Eigen::Index>(j) * n + i];
      const int level = static_cast<int>(std::lround((v - lo) * scale));
      out << level << (i + 1 < n ? ' ' : '\n');
    }
  }
  finish(out, path);
}

void write_vector_csv(const std::string& path, const Vector& v) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
  finish(out, path);
}

Vector read_vector_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) values.push_back(std::stod(line));
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_history_csv(const std::string& path, const SolveHistory& history) {
  auto out = open_out(path);
  out << "iter,res_rel,err_rel\n";
  const bool have_err = !history.error_norms.empty();
  for (std::size_t k = 0; k < history.residual_norms.size(); ++k) {
    out << (k + 1) << ',' << format_double(history.residual_norms[k]) << ','
        << (have_err ? format_double(history.error_norms[k]) : std::string("nan")) << '\n';
  }
  finish(out, path);
}

void write_spectrum_csv(const std::string& path, const SpectrumData& spectrum) {
  auto out = open_out(path);
  out << "i,sigma\n";
  for (Eigen::Index i = 0; i < spectrum.singular_values.size(); ++i) {
    out << (i + 1) << ',' << format_double(spectrum.singular_values[i]) << '\n';
  }
  finish(out, path);
}

void write_picard_csv(const std::string& path, const PicardData& picard) {
  auto out = open_out(path);
  out << "i,sigma,coef,solcoef\n";
  for (Eigen::Index i = 0; i < picard.sigma.size(); ++i) {
    out << (i + 1) << ',' << format_double(picard.sigma[i]) << ','
        << format_double(picard.data_coef[i]) << ',' << format_double(picard.solution_coef[i])
        << '\n';
  }
  finish(out, path);
}

void write_mask_csv(const std::string& path, const std::vector<std::uint8_t>& flags, int n) {
  if (flags.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("write_mask_csv: size mismatch");
  }
  auto out = open_out(path);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i > 0) out << ',';
      out << (flags[static_cast<std::size_t>(j) * n + i] ? 1 : 0);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

}  // namespace cxtomo
