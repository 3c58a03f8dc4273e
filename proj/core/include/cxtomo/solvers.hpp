#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cxtomo/common.hpp"
#include "cxtomo/grid.hpp"
#include "cxtomo/model.hpp"

namespace cxtomo {

/// Matrix-free linear map with its adjoint.
struct LinearOperator {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> apply_adjoint;
};

LinearOperator dense_operator(const Matrix& a);
LinearOperator model_operator(const ForwardModel& model);

/// Per-iteration record of a reconstruction run. residual_norms holds
/// ||A f^(k) - b|| / ||b||; error_norms (when a reference image is supplied)
/// holds ||f^(k) - f_true|| / ||f_true||; best_index is the argmin of
/// error_norms. FISTA additionally records the penalized objective.
struct SolveHistory {
  std::vector<double> residual_norms;
  std::vector<double> error_norms;
  std::vector<double> objective_values;
  std::vector<Image> iterates;  // filled only when keep_iterates is set
  Image final;
  std::optional<std::int64_t> best_index;
  std::vector<std::string> warnings;
};

/// Minimum-norm least-squares solution of the dense system (rank-revealing
/// complete orthogonal decomposition).
Image solve_ls_direct(const Matrix& a, const Vector& b);

/// Least-squares solve against the composed model. Assembles A densely when it
/// fits the byte budget; otherwise goes through the normal equations
/// (Gram eigendecomposition, still the minimum-norm solution).
Image solve_ls_direct(const ForwardModel& model, const Vector& b,
                      std::int64_t dense_budget_bytes = std::int64_t{512} << 20);

/// Minimum-norm solve of the normal equations from a precomputed Gram matrix
/// and right-hand side A^T b. Eigenvalues below (rank_tol * sigma_max)^2 are
/// treated as zero.
Image solve_ls_normal(const Matrix& gram, const Vector& normal_rhs, double rank_tol = 1e-12);

/// Golub-Kahan LSQR started from zero. Residual norms come from the standard
/// recurrence (monotone non-increasing); a zero bidiagonalization vector stops
/// the iteration cleanly.
SolveHistory lsqr(const LinearOperator& op, const Vector& b, std::int64_t max_iters,
                  const Image* f_true = nullptr, bool keep_iterates = false);

/// FISTA with backtracking for min ||A f - b||^2 + lambda * ||f||_1, written
/// exactly with this objective: the smooth gradient is 2 A^T (A f - b) and the
/// proximal step soft-thresholds at lambda / L. The initial Lipschitz estimate
/// comes from one power-iteration step on A^T A and backtracking doubles it.
SolveHistory fista_l1(const LinearOperator& op, const Vector& b, double lambda,
                      std::int64_t max_iters, const Image* f_true = nullptr,
                      bool keep_iterates = false);

struct CgResult {
  Vector x;
  std::int64_t iterations = 0;
  bool converged = false;
  std::vector<double> residual_norms;
};

#ifdef NDEBUG
inline constexpr bool kCgSymmetryCheckDefault = false;
#else
inline constexpr bool kCgSymmetryCheckDefault = true;
#endif

/// Conjugate gradients on a symmetric positive semi-definite operator;
/// stops at tol on the relative residual or at max_iters. When check_symmetry
/// is set (default in debug builds), a <Ax, y> probe rejects non-symmetric
/// operators up front.
CgResult cg_spd(const std::function<Vector(const Vector&)>& apply_spd, const Vector& rhs,
                std::int64_t max_iters, double tol,
                bool check_symmetry = kCgSymmetryCheckDefault);

/// Circular forward differences on the n x n image grid: D has rows (-1, +1)
/// with wraparound, D_s = I (x) D acts along x, D_t = D (x) I along y. Both
/// annihilate constants exactly.
struct DifferenceOperators {
  int n = 0;

  explicit DifferenceOperators(int n_) : n(n_) {}

  Vector apply_ds(const Vector& f) const;
  Vector apply_dt(const Vector& f) const;
  Vector apply_ds_adjoint(const Vector& w) const;
  Vector apply_dt_adjoint(const Vector& w) const;

  /// Dense n x n circular difference matrix D (for tests and small problems).
  Matrix difference_matrix() const;
};

/// Edge-preserving reweighting: elementwise 1 / sqrt((D_s f)^2 + (D_t f)^2 + beta).
Vector igmrf_weights(const Vector& f, double beta, const DifferenceOperators& ops);

struct EdgeConfig {
  int outer_iters = 5;                  // K
  std::vector<double> lambda_schedule;  // lambda_k, k = 1..K; default e^k
  double beta = 1e-3;
  std::int64_t cg_max = 100;
  double cg_tol = 1e-8;
};

std::vector<double> default_lambda_schedule(int outer_iters);

/// Iteratively reweighted Tikhonov reconstruction: the first outer pass solves
/// (A^T A + lambda_1 L_1) f = A^T b with the unweighted penalty
/// L_1 = D_s^T D_s + D_t^T D_t; subsequent passes reweight with
/// L_k = D_s^T diag(w) D_s + D_t^T diag(w) D_t, w = igmrf_weights(f^(k-1)).
/// Every product is applied matrix-free; CG non-convergence is recorded as a
/// warning, not an error.
SolveHistory edge_preserving_reconstruct(const LinearOperator& op, const Vector& b,
                                         const EdgeConfig& config, const Image* f_true = nullptr,
                                         bool keep_iterates = false);

enum class SolverMethod { ls, lsqr, fista, igmrf };

struct SolverConfig {
  SolverMethod method = SolverMethod::lsqr;
  std::int64_t max_iters = 100;
  double lambda = 6.6e-5;               // FISTA regularization weight
  std::vector<double> lambda_schedule;  // IGMRF; empty selects e^k
  double beta = 1e-3;
  int outer_iters = 5;
  std::int64_t cg_max = 100;
  double tol = 1e-8;
};

/// Dispatches on method. The ls path has no per-iteration history beyond the
/// final residual/error entry.
SolveHistory run_solver(const SolverConfig& config, const ForwardModel& model, const Vector& b,
                        const Image* f_true = nullptr, bool keep_iterates = false);

}  // namespace cxtomo
