#include <doctest.h>

#include <cmath>
#include <random>

#include "cxtomo/wave.hpp"
#include "test_support.hpp"

using namespace cxtomo;

TEST_CASE("propagator maps zero to zero and rejects bad sizes") {
  const WavePropagator w(testing::desk_grid());
  CHECK(w.apply(Image::zero(w.spec())).values.norm() == 0.0);
  CHECK(w.solve_forward(Image::zero(w.spec())).values.norm() == 0.0);
  CHECK(w.solve_adjoint(SpaceTimeField::zero(w.spec())).values.norm() == 0.0);
  CHECK_THROWS_AS(w.apply(Image(Vector::Zero(5))), std::invalid_argument);
  CHECK_THROWS_AS(w.solve_adjoint(SpaceTimeField(Vector::Zero(5))), std::invalid_argument);
}

TEST_CASE("unit spike spreads with the production stencil coefficients") {
  const GridSpec g = make_grid(51, 7, 2, 40);
  const WavePropagator w(g);
  Image u = Image::zero(g);
  const int c = 25;
  u.values[g.flat_index(c, c)] = 1.0;
  const Image tu = w.apply(u);

  const double sigma2 = g.courant * g.courant;
  CHECK(tu.values[g.flat_index(c, c)] == doctest::Approx(1.0 - 2.0 * sigma2).epsilon(1e-12));
  CHECK(tu.values[g.flat_index(c, c)] == doctest::Approx(0.93622).epsilon(1e-5));
  for (int d : {-1, 1}) {
    CHECK(tu.values[g.flat_index(c + d, c)] == doctest::Approx(0.0159439).epsilon(1e-5));
    CHECK(tu.values[g.flat_index(c, c + d)] == doctest::Approx(0.5 * sigma2).epsilon(1e-12));
  }
  // everything else exactly zero
  int nonzero = 0;
  for (int k = 0; k < g.num_pixels(); ++k) nonzero += tu.values[k] != 0.0;
  CHECK(nonzero == 5);
}

TEST_CASE("stencil preserves constants away from the boundary") {
  const GridSpec g = make_grid(15, 3, 1, 4);
  const WavePropagator w(g);
  const Image tu = w.apply(Image(Vector::Constant(g.num_pixels(), 3.25)));
  for (int j = 2; j < g.n - 2; ++j) {
    for (int i = 2; i < g.n - 2; ++i) {
      CHECK(tu.values[g.flat_index(i, j)] == doctest::Approx(3.25).epsilon(1e-15));
    }
  }
}

TEST_CASE("matrix-free forward and adjoint match the dense oracle") {
  const GridSpec g = testing::desk_grid();
  const WavePropagator w(g);
  const Matrix s = testing::dense_solution_matrix(g);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector f = testing::random_vector(g.num_pixels(), rng);
    const Vector r = testing::random_vector(g.num_voxels(), rng);
    CHECK((w.solve_forward(Image(f)).values - s * f).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((w.solve_adjoint(SpaceTimeField(r)).values - s.transpose() * r)
              .lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("assembled solution matrix equals the dense oracle columnwise") {
  const GridSpec g = testing::desk_grid();
  const Matrix assembled = WavePropagator(g).assemble_solution_matrix();
  const Matrix oracle = testing::dense_solution_matrix(g);
  REQUIRE(assembled.rows() == g.num_voxels());
  REQUIRE(assembled.cols() == g.num_pixels());
  CHECK((assembled - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("single-slice solution matrix is (I + T)/2") {
  const GridSpec g = make_grid(3, 1, 0.1, 1);
  const WavePropagator w(g);
  const Matrix s = w.assemble_solution_matrix();
  const Matrix expected =
      0.5 * (Matrix::Identity(9, 9) + testing::dense_step_matrix(g));
  REQUIRE(s.rows() == 9);
  REQUIRE(s.cols() == 9);
  CHECK((s - expected).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("adjoint identity <Sf, r> = <f, S^T r>") {
  const GridSpec g = testing::desk_grid();
  const WavePropagator w(g);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector f = testing::random_vector(g.num_pixels(), rng);
    const Vector r = testing::random_vector(g.num_voxels(), rng);
    const Vector sf = w.solve_forward(Image(f)).values;
    const Vector st = w.solve_adjoint(SpaceTimeField(r)).values;
    CHECK(std::abs(sf.dot(r) - f.dot(st)) / (sf.norm() * r.norm()) < 1e-13);
  }
}

TEST_CASE("forward solve is linear") {
  const GridSpec g = testing::desk_grid();
  const WavePropagator w(g);
  std::mt19937_64 rng(5);
  const Vector f1 = testing::random_vector(g.num_pixels(), rng);
  const Vector f2 = testing::random_vector(g.num_pixels(), rng);
  const Vector combined = w.solve_forward(Image(2.5 * f1 + f2)).values;
  const Vector split =
      2.5 * w.solve_forward(Image(f1)).values + w.solve_forward(Image(f2)).values;
  CHECK((combined - split).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("finite propagation speed: spike support stays inside the stencil cone") {
  const GridSpec g = make_grid(41, 7, 2, 16);
  const WavePropagator w(g);
  Image f = Image::zero(g);
  const int c = 20;
  f.values[g.flat_index(c, c)] = 1.0;
  const SpaceTimeField u = w.solve_forward(f);
  for (int tau = 1; tau <= g.n_slices; ++tau) {
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        // slice tau is built from tau stencil applications, so it vanishes
        // exactly beyond tau cells (a fortiori beyond tau+1 in sup distance)
        if (std::abs(i - c) + std::abs(j - c) > tau) {
          CHECK(u.values[static_cast<std::int64_t>(tau - 1) * g.num_pixels() +
                         g.flat_index(i, j)] == 0.0);
        }
      }
    }
  }
}

TEST_CASE("leapfrog recursion is reversible") {
  const GridSpec g = make_grid(21, 3, 1, 30);
  const WavePropagator w(g);
  std::mt19937_64 rng(31);
  Image f(testing::random_vector(g.num_pixels(), rng));

  Vector prev = f.values;
  Vector curr = w.apply(f).values;
  for (int step = 2; step <= g.n_slices; ++step) {
    Vector next = 2.0 * w.apply(Image(curr)).values - prev;
    prev.swap(curr);
    curr.swap(next);
  }
  // run backward from (u^N, u^{N-1})
  for (int step = g.n_slices; step >= 2; --step) {
    Vector before = 2.0 * w.apply(Image(prev)).values - curr;
    curr.swap(prev);
    prev.swap(before);
  }
  CHECK((prev - f.values).lpNorm<Eigen::Infinity>() < 1e-10);
}
