#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cxtomo/analysis.hpp"
#include "test_support.hpp"

using namespace cxtomo;

namespace {

// Node-centric oracle for the visible set, structured differently from the
// production detector-centric annulus marking.
std::vector<std::uint8_t> visible_oracle(const GridSpec& g, const DetectorMask& mask,
                                         double tolerance) {
  std::vector<std::uint8_t> visible(static_cast<std::size_t>(g.num_pixels()), 0);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      bool reachable = false;
      for (int dj = 0; dj < g.n && !reachable; ++dj) {
        for (int di = 0; di < g.n && !reachable; ++di) {
          if (!mask.active[static_cast<std::size_t>(g.flat_index(di, dj))]) continue;
          const double dist = std::hypot(g.x(i) - g.x(di), g.y(j) - g.y(dj));
          reachable = std::abs(dist - g.t_final) <= tolerance;
        }
      }
      visible[static_cast<std::size_t>(g.flat_index(i, j))] = reachable ? 1 : 0;
    }
  }
  return visible;
}

}  // namespace

TEST_CASE("spectrum of the identity and of a singular diagonal") {
  const SpectrumData id = singular_spectrum(Matrix::Identity(5, 5));
  CHECK(id.kappa_is_finite);
  CHECK(id.kappa == doctest::Approx(1.0).epsilon(1e-12));
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(id.singular_values[i] == doctest::Approx(1.0).epsilon(1e-12));
  }

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 3.0;
  const SpectrumData sd = singular_spectrum(diag);
  CHECK(sd.singular_values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sd.singular_values[1] == doctest::Approx(0.0));
  CHECK(!sd.kappa_is_finite);
  CHECK(std::isinf(sd.kappa));
  CHECK(sd.rank == 1);
}

TEST_CASE("gram-eigen spectrum matches a direct SVD on random matrices") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 8; ++trial) {
    const Matrix a = testing::random_matrix(30, 12, rng);
    const SpectrumData s = singular_spectrum(a);
    Eigen::JacobiSVD<Matrix> svd(a);
    REQUIRE(s.singular_values.size() == 12);
    for (Eigen::Index i = 0; i < 12; ++i) {
      CHECK(std::abs(s.singular_values[i] - svd.singularValues()[i]) < 1e-10);
    }
    CHECK(s.kappa ==
          doctest::Approx(svd.singularValues()[0] / svd.singularValues()[11]).epsilon(1e-8));
  }
}

TEST_CASE("wide matrices are flagged rank deficient by row count") {
  std::mt19937_64 rng(11);
  const Matrix a = testing::random_matrix(6, 9, rng);
  const SpectrumData s = singular_spectrum(a);
  CHECK(!s.kappa_is_finite);
  CHECK(s.rank <= 6);
  for (Eigen::Index i = 6; i < 9; ++i) CHECK(s.singular_values[i] == 0.0);
}

TEST_CASE("picard triples: identity operator and ratio identity") {
  const Matrix a = Matrix::Identity(6, 6);
  std::mt19937_64 rng(5);
  const Vector b = testing::random_vector(6, rng);
  const PicardData p = picard_data(a, b);
  REQUIRE(p.sigma.size() == 6);

  // |u_i^T b| equals |b_i| up to the eigenvector ordering; compare sorted
  Vector coef = p.data_coef;
  Vector expected = b.cwiseAbs();
  std::sort(coef.data(), coef.data() + coef.size());
  std::sort(expected.data(), expected.data() + expected.size());
  CHECK((coef - expected).lpNorm<Eigen::Infinity>() < 1e-12);

  for (Eigen::Index i = 0; i < p.sigma.size(); ++i) {
    CHECK(p.solution_coef[i] ==
          doctest::Approx(p.data_coef[i] / p.sigma[i]).epsilon(1e-12));
  }
}

TEST_CASE("picard triples from the model route match the dense route") {
  const GridSpec g = testing::desk_grid();
  const ForwardModel model = make_forward_model(g, centered_square_mask(g, 5));
  std::mt19937_64 rng(31);
  const Vector b = testing::random_vector(model.rows(), rng);

  const PicardData via_model = picard_data(model, b);
  const PicardData via_dense = picard_data(assemble_forward_matrix(model), b);
  REQUIRE(via_model.sigma.size() == via_dense.sigma.size());
  for (Eigen::Index i = 0; i < via_model.sigma.size(); ++i) {
    CHECK(via_model.sigma[i] == doctest::Approx(via_dense.sigma[i]).epsilon(1e-9));
  }
}

TEST_CASE("single detector visibility is an annulus") {
  const GridSpec g = make_grid(41, 7, 2, 20);
  DetectorMask mask;
  mask.n = g.n;
  mask.active.assign(static_cast<std::size_t>(g.num_pixels()), 0);
  mask.active[static_cast<std::size_t>(g.flat_index(20, 20))] = 1;  // origin
  mask.description = "single";

  const VisibleMask vm = visible_mask(g, mask);
  CHECK(vm.tolerance == doctest::Approx(0.5 * g.dx));
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double r = std::hypot(g.x(i), g.y(j));
      const bool inside = std::abs(r - g.t_final) <= vm.tolerance;
      CHECK(vm.visible[static_cast<std::size_t>(g.flat_index(i, j))] == (inside ? 1 : 0));
    }
  }
}

TEST_CASE("visible mask equals the brute-force union oracle") {
  for (int n : {9, 21, 51}) {
    const GridSpec g = make_grid(n, 7, 2, 12);
    for (const char* label : {"full", "7x7", "3x3"}) {
      const DetectorMask mask = mask_from_label(g, label);
      const VisibleMask vm = visible_mask(g, mask);
      CHECK(vm.visible == visible_oracle(g, mask, vm.tolerance));
    }
  }
}

TEST_CASE("visible mask is reflection symmetric and monotone in the detector set") {
  const GridSpec g = make_grid(31, 7, 2, 10);
  const VisibleMask small = visible_mask(g, centered_square_mask(g, 5));
  const VisibleMask large = visible_mask(g, centered_square_mask(g, 15));
  std::int64_t extra = 0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const auto at = [&](int a, int b_) { return small.visible[g.flat_index(a, b_)]; };
      CHECK(at(i, j) == at(g.n - 1 - i, j));
      CHECK(at(i, j) == at(i, g.n - 1 - j));
      CHECK(large.visible[g.flat_index(i, j)] >= small.visible[g.flat_index(i, j)]);
      extra += large.visible[g.flat_index(i, j)] - small.visible[g.flat_index(i, j)];
    }
  }
  CHECK(extra > 0);
  CHECK(small.count() > 0);
}

TEST_CASE("masked relative error splits by visibility") {
  const GridSpec g = make_grid(21, 7, 2, 8);
  const VisibleMask vm = visible_mask(g, centered_square_mask(g, 3));
  REQUIRE(vm.count() > 0);
  REQUIRE(vm.count() < g.num_pixels());

  std::mt19937_64 rng(8);
  const Image ftrue(testing::random_vector(g.num_pixels(), rng));

  const MaskedError zero = masked_relative_error(ftrue, ftrue, vm);
  CHECK(zero.inside.value() == 0.0);
  CHECK(zero.outside.value() == 0.0);

  // reconstruct the visible part perfectly, miss everything else
  Image partial = Image::zero(g);
  for (int k = 0; k < g.num_pixels(); ++k) {
    if (vm.visible[static_cast<std::size_t>(k)]) partial.values[k] = ftrue.values[k];
  }
  const MaskedError split = masked_relative_error(partial, ftrue, vm);
  CHECK(split.inside.value() == 0.0);
  CHECK(split.outside.value() == doctest::Approx(1.0).epsilon(1e-14));

  // a reference image supported only on the visible set reports no outside value
  const MaskedError absent = masked_relative_error(partial, partial, vm);
  CHECK(absent.inside.has_value());
  CHECK(!absent.outside.has_value());
}
