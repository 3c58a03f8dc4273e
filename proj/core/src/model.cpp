#include "cxtomo/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "cxtomo/parallel.hpp"

namespace cxtomo {

namespace {

// Fixed-algorithm RNG: mt19937_64 with an explicit Box-Muller transform, so
// draws do not depend on the standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    // 53-bit mantissa draw in [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(angle);
    have_spare_ = true;
    return mag * std::cos(angle);
  }

  // Unbiased draw from [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

ForwardModel::ForwardModel(WavePropagator p, RaySystem r)
    : propagator(std::move(p)), rays(std::move(r)) {
  if (rays.matrix.cols != propagator.spec().num_voxels()) {
    throw std::invalid_argument("ForwardModel: ray system does not match the propagator grid");
  }
}

Vector ForwardModel::apply(const Vector& f) const {
  if (f.size() != cols()) throw std::invalid_argument("ForwardModel::apply: size mismatch");
  return rays.matrix.apply(propagator.solve_forward(Image(f)).values);
}

Vector ForwardModel::apply_adjoint(const Vector& b) const {
  if (b.size() != rows()) {
    throw std::invalid_argument("ForwardModel::apply_adjoint: size mismatch");
  }
  return propagator.solve_adjoint(SpaceTimeField(rays.matrix.apply_transpose(b))).values;
}

ForwardModel make_forward_model(const GridSpec& spec, const DetectorMask& mask) {
  return ForwardModel(WavePropagator(spec), build_ray_system(spec, mask));
}

Image make_phantom(const PhantomSpec& phantom, const GridSpec& grid) {
  const Box2& box = phantom.support_box;
  if (box.xmin > box.xmax || box.ymin > box.ymax) {
    throw std::invalid_argument("make_phantom: empty support box");
  }
  if (box.xmin < -grid.extent || box.xmax > grid.extent || box.ymin < -grid.extent ||
      box.ymax > grid.extent) {
    throw std::invalid_argument("make_phantom: support box outside the domain");
  }
  if (phantom.count < 0) throw std::invalid_argument("make_phantom: negative count");

  Image img = Image::zero(grid);
  if (phantom.count == 0) return img;
  Rng rng(phantom.seed);

  if (phantom.kind == PhantomKind::dots) {
    std::vector<int> candidates;
    for (int j = 0; j < grid.n; ++j) {
      for (int i = 0; i < grid.n; ++i) {
        if (box.contains(grid.x(i), grid.y(j))) candidates.push_back(grid.flat_index(i, j));
      }
    }
    if (phantom.count > static_cast<int>(candidates.size())) {
      std::ostringstream msg;
      msg << "make_phantom: " << phantom.count << " dots requested but only "
          << candidates.size() << " nodes lie in the support box";
      throw std::invalid_argument(msg.str());
    }
    // Partial Fisher-Yates: draws count distinct nodes.
    for (int k = 0; k < phantom.count; ++k) {
      const auto pick = k + static_cast<int>(rng.below(candidates.size() - k));
      std::swap(candidates[k], candidates[pick]);
      img.values[candidates[k]] = phantom.amplitude;
    }
    return img;
  }

  // Lines: the pool is every (orientation, row-or-column) whose line meets the
  // box; a draw paints the 1-pixel-wide segment clipped to the box.
  struct Line {
    bool horizontal;
    int fixed;  // y index for horizontal lines, x index for vertical
  };
  std::vector<Line> pool;
  for (int j = 0; j < grid.n; ++j) {
    if (grid.y(j) >= box.ymin && grid.y(j) <= box.ymax) pool.push_back({true, j});
  }
  for (int i = 0; i < grid.n; ++i) {
    if (grid.x(i) >= box.xmin && grid.x(i) <= box.xmax) pool.push_back({false, i});
  }
  if (phantom.count > static_cast<int>(pool.size())) {
    std::ostringstream msg;
    msg << "make_phantom: " << phantom.count << " lines requested but only " << pool.size()
        << " axis-aligned lines meet the support box";
    throw std::invalid_argument(msg.str());
  }
  for (int k = 0; k < phantom.count; ++k) {
    const auto pick = k + static_cast<int>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[pick]);
    const Line line = pool[k];
    for (int a = 0; a < grid.n; ++a) {
      const int i = line.horizontal ? a : line.fixed;
      const int j = line.horizontal ? line.fixed : a;
      if (box.contains(grid.x(i), grid.y(j))) {
        img.values[grid.flat_index(i, j)] = phantom.amplitude;
      }
    }
  }
  return img;
}

std::pair<Vector, Vector> add_noise(const Vector& b_clean, const NoiseSpec& noise) {
  if (noise.level < 0.0) throw std::invalid_argument("add_noise: negative noise level");
  if (noise.level == 0.0) return {b_clean, Vector::Zero(b_clean.size())};

  const double clean_norm = b_clean.norm();
  if (clean_norm == 0.0) {
    throw NumericError("add_noise: zero clean data cannot carry a relative noise level");
  }
  Rng rng(noise.seed);
  Vector g(b_clean.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.gaussian();
  const double gn = g.norm();
  if (gn == 0.0) throw NumericError("add_noise: degenerate Gaussian draw");
  Vector e = (noise.level * clean_norm / gn) * g;
  return {b_clean + e, std::move(e)};
}

double relative_error(const Image& fhat, const Image& ftrue) {
  if (fhat.size() != ftrue.size()) throw std::invalid_argument("relative_error: size mismatch");
  const double tn = ftrue.values.norm();
  if (tn == 0.0) throw NumericError("relative_error: zero reference image");
  return (fhat.values - ftrue.values).norm() / tn;
}

Matrix assemble_forward_matrix(const ForwardModel& model, std::int64_t budget_bytes) {
  const std::int64_t bytes = model.rows() * model.cols() * static_cast<std::int64_t>(sizeof(double));
  if (bytes > budget_bytes) {
    std::ostringstream msg;
    msg << "assemble_forward_matrix: dense A needs " << bytes << " bytes, over the budget of "
        << budget_bytes << "; use the matrix-free operator (e.g. LSQR) instead";
    throw NumericError(msg.str());
  }
  Matrix a(model.rows(), model.cols());
  parallel_for(0, model.cols(), [&](std::int64_t lo, std::int64_t hi) {
    Vector unit = Vector::Zero(model.cols());
    for (std::int64_t j = lo; j < hi; ++j) {
      unit[j] = 1.0;
      a.col(j) = model.apply(unit);
      unit[j] = 0.0;
    }
  });
  return a;
}

Matrix assemble_gram(const ForwardModel& model) {
  const int nc = model.cols();
  Matrix gram(nc, nc);
  parallel_for(0, nc, [&](std::int64_t lo, std::int64_t hi) {
    Vector unit = Vector::Zero(nc);
    for (std::int64_t j = lo; j < hi; ++j) {
      unit[j] = 1.0;
      gram.col(j) = model.apply_adjoint(model.apply(unit));
      unit[j] = 0.0;
    }
  });
  // Symmetrize away the rounding asymmetry of the two matvec orders.
  gram = 0.5 * (gram + gram.transpose()).eval();
  return gram;
}

Vector assemble_normal_rhs(const ForwardModel& model, const Vector& b) {
  return model.apply_adjoint(b);
}

}  // namespace cxtomo
