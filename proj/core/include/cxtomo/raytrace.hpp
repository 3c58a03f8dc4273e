#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cxtomo/common.hpp"
#include "cxtomo/grid.hpp"

namespace cxtomo {

/// Which detector-plane nodes collect measurements.
struct DetectorMask {
  int n = 0;
  std::vector<std::uint8_t> active;  // n^2 flags, flat-indexed like Image
  std::string description;

  std::int64_t count() const;
};

DetectorMask full_mask(const GridSpec& spec);
/// Centered side x side sub-grid of active detectors (side odd, matching the
/// odd grid; description "7x7" etc.). Throws if side is out of range.
DetectorMask centered_square_mask(const GridSpec& spec, int side);
/// "full" or "KxK". Throws ConfigError on anything else.
DetectorMask mask_from_label(const GridSpec& spec, const std::string& label);

/// One bilinear deposition of a ray sample: slice is 0-based, index is the
/// flat pixel index within the slice, weight the bilinear coefficient.
struct RaySample {
  std::int32_t slice = 0;
  std::int32_t index = 0;
  double weight = 0.0;
};

/// Null ray between a t = 0 source node and a t = t_final detector node whose
/// spatial distance is within dx/2 of t_final.
struct Ray {
  std::int32_t source_index = 0;
  std::int32_t detector_index = 0;
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();  // unit vector
  std::vector<RaySample> samples;
  bool complete = false;  // every slice sampled inside the hull
};

/// All (source, active detector) null-ray pairs, ordered by source then
/// detector flat index. Samples are taken at the slice times (tau-1/2)*dt
/// along x_s + t*v; out-of-hull samples are dropped.
std::vector<Ray> enumerate_rays(const GridSpec& spec, const DetectorMask& mask);

/// Minimal CSR matrix; column indices fit in 32 bits (n^2 * n_slices is
/// guarded at construction).
struct SparseCsr {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::int64_t> row_ptr;  // size rows + 1
  std::vector<std::int32_t> col;
  std::vector<double> val;

  std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }
  Vector apply(const Vector& u) const;
  Vector apply_transpose(const Vector& b) const;
  double row_sum(std::int64_t r) const;
};

/// Discretized light ray transform: rays plus the m x (n^2 * n_slices)
/// observation matrix H whose row r integrates the space-time field along
/// rays[r] (midpoint quadrature, value dt * weight per deposition).
struct RaySystem {
  GridSpec spec;
  DetectorMask mask;
  std::vector<Ray> rays;
  SparseCsr matrix;
  std::vector<std::int32_t> rays_per_source;  // m_i, indexed by source flat index

  std::int64_t m() const { return matrix.rows; }
};

RaySystem build_ray_system(const GridSpec& spec, const DetectorMask& mask);
RaySystem build_ray_matrix(const GridSpec& spec, std::vector<Ray> rays, DetectorMask mask = {});

Vector ray_apply(const RaySystem& sys, const Vector& u);
Vector ray_apply_adjoint(const RaySystem& sys, const Vector& b);

/// Plain-text sparse triples: header "m n_cols nnz", then one "row col value"
/// line per entry with 17-significant-digit values.
void write_sparse_triples(std::ostream& out, const SparseCsr& h);
void write_sparse_triples(const std::string& path, const SparseCsr& h);
SparseCsr read_sparse_triples(std::istream& in);
SparseCsr read_sparse_triples(const std::string& path);

}  // namespace cxtomo
