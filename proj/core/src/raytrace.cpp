#include "cxtomo/raytrace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cxtomo/parallel.hpp"

namespace cxtomo {

std::int64_t DetectorMask::count() const {
  std::int64_t c = 0;
  for (auto a : active) c += a != 0;
  return c;
}

DetectorMask full_mask(const GridSpec& spec) {
  DetectorMask m;
  m.n = spec.n;
  m.active.assign(static_cast<std::size_t>(spec.num_pixels()), 1);
  m.description = "full";
  return m;
}

DetectorMask centered_square_mask(const GridSpec& spec, int side) {
  if (side < 1 || side > spec.n) {
    throw std::invalid_argument("centered_square_mask: side out of range");
  }
  if (side % 2 != spec.n % 2) {
    throw std::invalid_argument("centered_square_mask: side parity must match grid");
  }
  DetectorMask m;
  m.n = spec.n;
  m.active.assign(static_cast<std::size_t>(spec.num_pixels()), 0);
  const int lo = (spec.n - side) / 2;
  for (int j = lo; j < lo + side; ++j) {
    for (int i = lo; i < lo + side; ++i) {
      m.active[static_cast<std::size_t>(spec.flat_index(i, j))] = 1;
    }
  }
  m.description = std::to_string(side) + "x" + std::to_string(side);
  return m;
}

DetectorMask mask_from_label(const GridSpec& spec, const std::string& label) {
  if (label == "full") return full_mask(spec);
  const auto x = label.find('x');
  if (x != std::string::npos) {
    int a = 0, b = 0;
    auto ra = std::from_chars(label.data(), label.data() + x, a);
    auto rb = std::from_chars(label.data() + x + 1, label.data() + label.size(), b);
    if (ra.ec == std::errc() && rb.ec == std::errc() && ra.ptr == label.data() + x &&
        rb.ptr == label.data() + label.size() && a == b) {
      return centered_square_mask(spec, a);
    }
  }
  throw ConfigError("unknown detector mask label '" + label + "' (expected \"full\" or \"KxK\")");
}

namespace {

// Lattice offsets (di, dj) with | |(di, dj)|*dx - t_final | <= dx/2, i.e. the
// discrete annulus of node pairs satisfying the null-ray condition.
std::vector<std::pair<int, int>> annulus_offsets(const GridSpec& spec) {
  std::vector<std::pair<int, int>> offsets;
  const double r = spec.t_final / spec.dx;
  const double lo = r - 0.5;
  const double hi = r + 0.5;
  if (hi < 0.0) return offsets;
  const int reach = static_cast<int>(std::floor(hi)) + 1;
  const double lo2 = lo > 0.0 ? lo * lo : 0.0;
  const double hi2 = hi * hi;
  for (int dj = -reach; dj <= reach; ++dj) {
    for (int di = -reach; di <= reach; ++di) {
      const double d2 = static_cast<double>(di) * di + static_cast<double>(dj) * dj;
      if (d2 >= lo2 && d2 <= hi2 && d2 > 0.0) offsets.emplace_back(di, dj);
    }
  }
  return offsets;
}

Ray trace_ray(const GridSpec& spec, int si, int sj, int di, int dj) {
  Ray ray;
  ray.source_index = spec.flat_index(si, sj);
  ray.detector_index = spec.flat_index(di, dj);

  const double sx = spec.x(si);
  const double sy = spec.y(sj);
  Eigen::Vector2d disp(spec.x(di) - sx, spec.y(dj) - sy);
  ray.direction = disp / disp.norm();

  ray.samples.reserve(static_cast<std::size_t>(spec.n_slices) * 4);
  int slices_hit = 0;
  for (int tau = 1; tau <= spec.n_slices; ++tau) {
    const double t = spec.slice_time(tau);
    const BilinearWeights w =
        bilinear_weights(spec, sx + t * ray.direction.x(), sy + t * ray.direction.y());
    if (w.count > 0) ++slices_hit;
    for (const auto& p : w) {
      ray.samples.push_back(RaySample{tau - 1, static_cast<std::int32_t>(p.index), p.weight});
    }
  }
  ray.complete = slices_hit == spec.n_slices;
  return ray;
}

}  // namespace

std::vector<Ray> enumerate_rays(const GridSpec& spec, const DetectorMask& mask) {
  if (mask.n != spec.n) throw std::invalid_argument("enumerate_rays: mask grid mismatch");
  const auto offsets = annulus_offsets(spec);
  const int n = spec.n;

  // Per-source ray lists built independently, then concatenated in source
  // order so the result does not depend on the worker count.
  std::vector<std::vector<Ray>> per_source(static_cast<std::size_t>(spec.num_pixels()));
  parallel_for(0, spec.num_pixels(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t s = lo; s < hi; ++s) {
      const int si = static_cast<int>(s) % n;
      const int sj = static_cast<int>(s) / n;
      auto& list = per_source[static_cast<std::size_t>(s)];
      for (const auto& [oi, oj] : offsets) {
        const int di = si + oi;
        const int dj = sj + oj;
        if (di < 0 || di >= n || dj < 0 || dj >= n) continue;
        if (!mask.active[static_cast<std::size_t>(spec.flat_index(di, dj))]) continue;
        list.push_back(trace_ray(spec, si, sj, di, dj));
      }
      std::sort(list.begin(), list.end(),
                [](const Ray& a, const Ray& b) { return a.detector_index < b.detector_index; });
    }
  });

  std::size_t total = 0;
  for (const auto& list : per_source) total += list.size();
  std::vector<Ray> rays;
  rays.reserve(total);
  for (auto& list : per_source) {
    for (auto& r : list) rays.push_back(std::move(r));
  }
  return rays;
}

Vector SparseCsr::apply(const Vector& u) const {
  if (u.size() != cols) throw std::invalid_argument("SparseCsr::apply: size mismatch");
  Vector out(rows);
  for (std::int64_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * u[col[k]];
    out[r] = acc;
  }
  return out;
}

Vector SparseCsr::apply_transpose(const Vector& b) const {
  if (b.size() != rows) throw std::invalid_argument("SparseCsr::apply_transpose: size mismatch");
  Vector out = Vector::Zero(cols);
  for (std::int64_t r = 0; r < rows; ++r) {
    const double br = b[r];
    if (br == 0.0) continue;
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) out[col[k]] += val[k] * br;
  }
  return out;
}

double SparseCsr::row_sum(std::int64_t r) const {
  double acc = 0.0;
  for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k];
  return acc;
}

RaySystem build_ray_matrix(const GridSpec& spec, std::vector<Ray> rays, DetectorMask mask) {
  if (spec.num_voxels() > std::numeric_limits<std::int32_t>::max()) {
    throw std::invalid_argument("build_ray_matrix: n^2 * n_slices exceeds 32-bit column range");
  }
  RaySystem sys;
  sys.spec = spec;
  sys.mask = std::move(mask);
  sys.rays = std::move(rays);
  sys.rays_per_source.assign(static_cast<std::size_t>(spec.num_pixels()), 0);

  SparseCsr& h = sys.matrix;
  h.rows = static_cast<std::int64_t>(sys.rays.size());
  h.cols = spec.num_voxels();
  h.row_ptr.resize(sys.rays.size() + 1);
  std::size_t nnz = 0;
  for (const auto& ray : sys.rays) nnz += ray.samples.size();
  h.col.reserve(nnz);
  h.val.reserve(nnz);

  const int np = spec.num_pixels();
  h.row_ptr[0] = 0;
  for (std::size_t r = 0; r < sys.rays.size(); ++r) {
    const Ray& ray = sys.rays[r];
    ++sys.rays_per_source[static_cast<std::size_t>(ray.source_index)];
    for (const auto& s : ray.samples) {
      h.col.push_back(s.slice * np + s.index);
      h.val.push_back(spec.dt * s.weight);
    }
    h.row_ptr[r + 1] = static_cast<std::int64_t>(h.col.size());
  }
  return sys;
}

RaySystem build_ray_system(const GridSpec& spec, const DetectorMask& mask) {
  return build_ray_matrix(spec, enumerate_rays(spec, mask), mask);
}

Vector ray_apply(const RaySystem& sys, const Vector& u) { return sys.matrix.apply(u); }

Vector ray_apply_adjoint(const RaySystem& sys, const Vector& b) {
  return sys.matrix.apply_transpose(b);
}

void write_sparse_triples(std::ostream& out, const SparseCsr& h) {
  out << h.rows << ' ' << h.cols << ' ' << h.nnz() << '\n';
  char buf[40];
  for (std::int64_t r = 0; r < h.rows; ++r) {
    for (std::int64_t k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", h.val[k]);
      out << r << ' ' << h.col[k] << ' ' << buf << '\n';
    }
  }
}

void write_sparse_triples(const std::string& path, const SparseCsr& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_sparse_triples(out, h);
  if (!out) throw std::runtime_error("write failed: " + path);
}

SparseCsr read_sparse_triples(std::istream& in) {
  SparseCsr h;
  std::int64_t nnz = 0;
  if (!(in >> h.rows >> h.cols >> nnz) || h.rows < 0 || h.cols < 0 || nnz < 0) {
    throw std::runtime_error("read_sparse_triples: bad header");
  }
  h.row_ptr.assign(static_cast<std::size_t>(h.rows) + 1, 0);
  h.col.resize(static_cast<std::size_t>(nnz));
  h.val.resize(static_cast<std::size_t>(nnz));
  std::int64_t prev_row = 0;
  for (std::int64_t k = 0; k < nnz; ++k) {
    std::int64_t r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) throw std::runtime_error("read_sparse_triples: truncated entries");
    if (r < prev_row || r >= h.rows || c < 0 || c >= h.cols) {
      throw std::runtime_error("read_sparse_triples: entries out of range or not row-ordered");
    }
    prev_row = r;
    h.col[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(c);
    h.val[static_cast<std::size_t>(k)] = v;
    ++h.row_ptr[static_cast<std::size_t>(r) + 1];
  }
  for (std::int64_t r = 0; r < h.rows; ++r) {
    h.row_ptr[static_cast<std::size_t>(r) + 1] += h.row_ptr[static_cast<std::size_t>(r)];
  }
  return h;
}

SparseCsr read_sparse_triples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_sparse_triples(in);
}

}  // namespace cxtomo
