#pragma once

#include <string>

#include "cxtomo/analysis.hpp"
#include "cxtomo/common.hpp"
#include "cxtomo/grid.hpp"
#include "cxtomo/solvers.hpp"

namespace cxtomo {

/// Shortest round-trippable decimal (17 significant digits).
std::string format_double(double v);

/// Images as n rows x n columns CSV; row j holds the x-line at y_j.
void write_image_csv(const std::string& path, const Image& img, int n);
Image read_image_csv(const std::string& path);

/// 8-bit ASCII PGM preview with linear min-max scaling; row 0 is the largest y.
void write_image_pgm(const std::string& path, const Image& img, int n);

/// Observation vectors as one value per line.
void write_vector_csv(const std::string& path, const Vector& v);
Vector read_vector_csv(const std::string& path);

/// Headered "iter,res_rel,err_rel"; err_rel is "nan" when no reference image
/// was supplied.
void write_history_csv(const std::string& path, const SolveHistory& history);

/// Headered "i,sigma".
void write_spectrum_csv(const std::string& path, const SpectrumData& spectrum);

/// Headered "i,sigma,coef,solcoef".
void write_picard_csv(const std::string& path, const PicardData& picard);

/// 0/1 grid in the image CSV layout.
void write_mask_csv(const std::string& path, const std::vector<std::uint8_t>& flags, int n);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace cxtomo
