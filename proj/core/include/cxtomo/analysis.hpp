#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cxtomo/common.hpp"
#include "cxtomo/grid.hpp"
#include "cxtomo/model.hpp"
#include "cxtomo/raytrace.hpp"

namespace cxtomo {

/// Full singular spectrum of a forward matrix, computed from the
/// eigendecomposition of its Gram matrix A^T A (sigma_i = sqrt(eig_i),
/// descending). kappa = sigma_max / sigma_min when sigma_min exceeds
/// rank_tolerance * sigma_max, otherwise the spectrum is flagged numerically
/// rank deficient and kappa_is_finite is false. When the matrix has fewer rows
/// than columns the trailing singular values are exact zeros by rank count.
struct SpectrumData {
  Vector singular_values;  // descending
  double rank_tolerance = 1e-12;
  double kappa = 0.0;
  bool kappa_is_finite = false;
  std::int64_t rank = 0;
};

SpectrumData singular_spectrum(const Matrix& a, double rank_tolerance = 1e-12);
SpectrumData singular_spectrum(const ForwardModel& model, double rank_tolerance = 1e-12);
SpectrumData spectrum_from_gram(const Matrix& gram, std::int64_t row_count,
                                double rank_tolerance = 1e-12);

/// Picard triples (sigma_i, |u_i^T b|, |u_i^T b| / sigma_i) over the retained
/// rank, using u_i^T b = v_i^T A^T b / sigma_i.
struct PicardData {
  Vector sigma;
  Vector data_coef;      // |u_i^T b|
  Vector solution_coef;  // |u_i^T b| / sigma_i
};

PicardData picard_data(const Matrix& a, const Vector& b, double rank_tolerance = 1e-12);
PicardData picard_data(const ForwardModel& model, const Vector& b,
                       double rank_tolerance = 1e-12);
PicardData picard_from_gram(const Matrix& gram, const Vector& normal_rhs,
                            double rank_tolerance = 1e-12);

/// Nodes reachable by some null ray into the active detector set: x is visible
/// iff an active detector d satisfies | |x - d| - t_final | <= tolerance.
struct VisibleMask {
  int n = 0;
  std::vector<std::uint8_t> visible;
  double tolerance = 0.0;

  std::int64_t count() const;
};

/// tolerance <= 0 selects the default dx/2, matching the ray-pairing rule.
VisibleMask visible_mask(const GridSpec& spec, const DetectorMask& mask, double tolerance = 0.0);

/// Euclidean relative errors restricted to the visible nodes and to their
/// complement; a side whose reference restriction vanishes is reported absent.
struct MaskedError {
  std::optional<double> inside;
  std::optional<double> outside;
};

MaskedError masked_relative_error(const Image& fhat, const Image& ftrue, const VisibleMask& mask);

}  // namespace cxtomo
