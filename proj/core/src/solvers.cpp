#include "cxtomo/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cxtomo {

namespace {

double safe_norm_scale(const Vector& b) {
  const double nb = b.norm();
  return nb > 0.0 ? nb : 1.0;
}

void record_iterate(SolveHistory& history, const Vector& x, double res_rel, const Image* f_true,
                    bool keep_iterates) {
  history.residual_norms.push_back(res_rel);
  if (f_true != nullptr) {
    history.error_norms.push_back(relative_error(Image(x), *f_true));
  }
  if (keep_iterates) history.iterates.emplace_back(x);
}

void finalize_history(SolveHistory& history, Vector x) {
  history.final = Image(std::move(x));
  if (!history.error_norms.empty()) {
    history.best_index = static_cast<std::int64_t>(
        std::min_element(history.error_norms.begin(), history.error_norms.end()) -
        history.error_norms.begin());
  }
}

}  // namespace

LinearOperator dense_operator(const Matrix& a) {
  LinearOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.apply = [&a](const Vector& x) -> Vector { return a * x; };
  op.apply_adjoint = [&a](const Vector& y) -> Vector { return a.transpose() * y; };
  return op;
}

LinearOperator model_operator(const ForwardModel& model) {
  LinearOperator op;
  op.rows = model.rows();
  op.cols = model.cols();
  op.apply = [&model](const Vector& x) { return model.apply(x); };
  op.apply_adjoint = [&model](const Vector& y) { return model.apply_adjoint(y); };
  return op;
}

Image solve_ls_direct(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_ls_direct: size mismatch");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  return Image(cod.solve(b));
}

Image solve_ls_normal(const Matrix& gram, const Vector& normal_rhs, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw NumericError("solve_ls_normal: eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const double lambda_max = lambda.size() > 0 ? std::max(lambda[lambda.size() - 1], 0.0) : 0.0;
  const double cutoff = lambda_max * rank_tol * rank_tol;
  Vector coeff = eig.eigenvectors().transpose() * normal_rhs;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    coeff[i] = lambda[i] > cutoff ? coeff[i] / lambda[i] : 0.0;
  }
  return Image(eig.eigenvectors() * coeff);
}

Image solve_ls_direct(const ForwardModel& model, const Vector& b,
                      std::int64_t dense_budget_bytes) {
  if (b.size() != model.rows()) throw std::invalid_argument("solve_ls_direct: size mismatch");
  const std::int64_t dense_bytes =
      model.rows() * model.cols() * static_cast<std::int64_t>(sizeof(double));
  if (dense_bytes <= dense_budget_bytes) {
    return solve_ls_direct(assemble_forward_matrix(model, dense_budget_bytes), b);
  }
  const std::int64_t gram_bytes =
      static_cast<std::int64_t>(model.cols()) * model.cols() * sizeof(double);
  if (gram_bytes > dense_budget_bytes) {
    std::ostringstream msg;
    msg << "solve_ls_direct: neither A (" << dense_bytes << " bytes) nor its Gram matrix ("
        << gram_bytes << " bytes) fits the budget of " << dense_budget_bytes
        << "; use LSQR instead";
    throw NumericError(msg.str());
  }
  return solve_ls_normal(assemble_gram(model), assemble_normal_rhs(model, b));
}

SolveHistory lsqr(const LinearOperator& op, const Vector& b, std::int64_t max_iters,
                  const Image* f_true, bool keep_iterates) {
  if (b.size() != op.rows) throw std::invalid_argument("lsqr: size mismatch");
  SolveHistory history;
  Vector x = Vector::Zero(op.cols);
  const double b_scale = safe_norm_scale(b);

  Vector u = b;
  double beta = u.norm();
  if (beta > 0.0) u /= beta;
  Vector v = beta > 0.0 ? Vector(op.apply_adjoint(u)) : Vector(Vector::Zero(op.cols));
  double alpha = v.norm();
  if (alpha > 0.0) v /= alpha;
  Vector w = v;
  double phibar = beta;
  double rhobar = alpha;

  for (std::int64_t k = 0; k < max_iters; ++k) {
    if (alpha == 0.0 || beta == 0.0) break;  // exact subspace solution reached

    u = op.apply(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) u /= beta;

    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double phi = c * phibar;
    phibar = s * phibar;

    x += (phi / rho) * w;
    record_iterate(history, x, phibar / b_scale, f_true, keep_iterates);

    if (beta == 0.0) break;
    v = op.apply_adjoint(u) - beta * v;
    alpha = v.norm();
    if (alpha > 0.0) v /= alpha;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    w = v - (theta / rho) * w;
  }

  finalize_history(history, std::move(x));
  return history;
}

SolveHistory fista_l1(const LinearOperator& op, const Vector& b, double lambda,
                      std::int64_t max_iters, const Image* f_true, bool keep_iterates) {
  if (b.size() != op.rows) throw std::invalid_argument("fista_l1: size mismatch");
  if (lambda < 0.0) throw std::invalid_argument("fista_l1: negative lambda");
  SolveHistory history;
  const double b_scale = safe_norm_scale(b);

  auto shrink = [](Vector z, double threshold) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double zi = z[i];
      z[i] = zi > threshold ? zi - threshold : (zi < -threshold ? zi + threshold : 0.0);
    }
    return z;
  };

  // One power-iteration step on A^T A estimates the gradient Lipschitz
  // constant 2*sigma_max^2; backtracking only ever grows it.
  double lipschitz = 0.0;
  {
    Vector probe = op.apply_adjoint(b);
    if (probe.norm() == 0.0) probe = Vector::Ones(op.cols);
    probe /= probe.norm();
    lipschitz = 2.0 * op.apply_adjoint(op.apply(probe)).norm();
    if (!(lipschitz > 0.0)) lipschitz = 1.0;
  }

  Vector x = Vector::Zero(op.cols);
  Vector y = x;
  double t = 1.0;

  for (std::int64_t k = 0; k < max_iters; ++k) {
    const Vector ry = op.apply(y) - b;
    const double gy = ry.squaredNorm();
    const Vector grad = 2.0 * op.apply_adjoint(ry);

    Vector z;
    double gz = 0.0;
    for (;;) {
      z = shrink(y - grad / lipschitz, lambda / lipschitz);
      gz = (op.apply(z) - b).squaredNorm();
      const Vector dz = z - y;
      const double upper = gy + grad.dot(dz) + 0.5 * lipschitz * dz.squaredNorm();
      if (gz <= upper + 1e-12 * std::max(1.0, std::abs(upper))) break;
      lipschitz *= 2.0;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = z + ((t - 1.0) / t_next) * (z - x);
    x = std::move(z);
    t = t_next;

    history.objective_values.push_back(gz + lambda * x.lpNorm<1>());
    record_iterate(history, x, std::sqrt(gz) / b_scale, f_true, keep_iterates);
  }

  finalize_history(history, std::move(x));
  return history;
}

CgResult cg_spd(const std::function<Vector(const Vector&)>& apply_spd, const Vector& rhs,
                std::int64_t max_iters, double tol, bool check_symmetry) {
  CgResult result;
  result.x = Vector::Zero(rhs.size());
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    result.converged = true;
    return result;
  }

  if (check_symmetry) {
    // Deterministic pseudo-random probe pair.
    Vector px(rhs.size()), py(rhs.size());
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    auto next = [&state]() {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    };
    for (Eigen::Index i = 0; i < rhs.size(); ++i) px[i] = next();
    for (Eigen::Index i = 0; i < rhs.size(); ++i) py[i] = next();
    const Vector ax = apply_spd(px);
    const Vector ay = apply_spd(py);
    const double lhs = ax.dot(py);
    const double rhs_ip = px.dot(ay);
    const double scale = std::max({std::abs(lhs), std::abs(rhs_ip), 1e-300});
    if (std::abs(lhs - rhs_ip) > 1e-8 * scale) {
      throw std::invalid_argument("cg_spd: operator failed the <Ax,y> symmetry probe");
    }
  }

  Vector r = rhs;
  Vector p = r;
  double rr = r.squaredNorm();
  for (std::int64_t k = 0; k < max_iters; ++k) {
    const Vector q = apply_spd(p);
    const double pq = p.dot(q);
    if (pq <= 0.0) break;  // null-space direction or loss of definiteness
    const double step = rr / pq;
    result.x += step * p;
    r -= step * q;
    const double rr_next = r.squaredNorm();
    ++result.iterations;
    result.residual_norms.push_back(std::sqrt(rr_next) / rhs_norm);
    if (std::sqrt(rr_next) <= tol * rhs_norm) {
      result.converged = true;
      break;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return result;
}

Vector DifferenceOperators::apply_ds(const Vector& f) const {
  if (f.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("DifferenceOperators: size mismatch");
  }
  Vector out(f.size());
  for (int j = 0; j < n; ++j) {
    const double* row = f.data() + static_cast<std::ptrdiff_t>(j) * n;
    double* orow = out.data() + static_cast<std::ptrdiff_t>(j) * n;
    for (int i = 0; i < n - 1; ++i) orow[i] = row[i + 1] - row[i];
    orow[n - 1] = row[0] - row[n - 1];
  }
  return out;
}

Vector DifferenceOperators::apply_dt(const Vector& f) const {
  if (f.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("DifferenceOperators: size mismatch");
  }
  Vector out(f.size());
  for (int j = 0; j < n; ++j) {
    const int jn = j < n - 1 ? j + 1 : 0;
    const double* row = f.data() + static_cast<std::ptrdiff_t>(j) * n;
    const double* rnext = f.data() + static_cast<std::ptrdiff_t>(jn) * n;
    double* orow = out.data() + static_cast<std::ptrdiff_t>(j) * n;
    for (int i = 0; i < n; ++i) orow[i] = rnext[i] - row[i];
  }
  return out;
}

Vector DifferenceOperators::apply_ds_adjoint(const Vector& w) const {
  if (w.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("DifferenceOperators: size mismatch");
  }
  Vector out(w.size());
  for (int j = 0; j < n; ++j) {
    const double* row = w.data() + static_cast<std::ptrdiff_t>(j) * n;
    double* orow = out.data() + static_cast<std::ptrdiff_t>(j) * n;
    orow[0] = row[n - 1] - row[0];
    for (int i = 1; i < n; ++i) orow[i] = row[i - 1] - row[i];
  }
  return out;
}

Vector DifferenceOperators::apply_dt_adjoint(const Vector& w) const {
  if (w.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("DifferenceOperators: size mismatch");
  }
  Vector out(w.size());
  for (int j = 0; j < n; ++j) {
    const int jp = j > 0 ? j - 1 : n - 1;
    const double* row = w.data() + static_cast<std::ptrdiff_t>(j) * n;
    const double* rprev = w.data() + static_cast<std::ptrdiff_t>(jp) * n;
    double* orow = out.data() + static_cast<std::ptrdiff_t>(j) * n;
    for (int i = 0; i < n; ++i) orow[i] = rprev[i] - row[i];
  }
  return out;
}

Matrix DifferenceOperators::difference_matrix() const {
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) {
    d(i, i) = -1.0;
    d(i, i + 1) = 1.0;
  }
  d(n - 1, 0) = 1.0;
  d(n - 1, n - 1) = -1.0;
  return d;
}

Vector igmrf_weights(const Vector& f, double beta, const DifferenceOperators& ops) {
  if (!(beta > 0.0)) throw std::invalid_argument("igmrf_weights: beta must be positive");
  const Vector ds = ops.apply_ds(f);
  const Vector dt = ops.apply_dt(f);
  Vector w(f.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    w[i] = 1.0 / std::sqrt(ds[i] * ds[i] + dt[i] * dt[i] + beta);
  }
  return w;
}

std::vector<double> default_lambda_schedule(int outer_iters) {
  std::vector<double> schedule(static_cast<std::size_t>(outer_iters));
  for (int k = 1; k <= outer_iters; ++k) {
    schedule[static_cast<std::size_t>(k - 1)] = std::exp(static_cast<double>(k));
  }
  return schedule;
}

SolveHistory edge_preserving_reconstruct(const LinearOperator& op, const Vector& b,
                                         const EdgeConfig& config, const Image* f_true,
                                         bool keep_iterates) {
  if (b.size() != op.rows) {
    throw std::invalid_argument("edge_preserving_reconstruct: size mismatch");
  }
  if (config.outer_iters < 1) {
    throw std::invalid_argument("edge_preserving_reconstruct: outer_iters must be >= 1");
  }
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(op.cols))));
  if (static_cast<std::int64_t>(n) * n != op.cols) {
    throw std::invalid_argument("edge_preserving_reconstruct: operator domain is not an image");
  }
  std::vector<double> schedule =
      config.lambda_schedule.empty() ? default_lambda_schedule(config.outer_iters)
                                     : config.lambda_schedule;
  if (static_cast<int>(schedule.size()) < config.outer_iters) {
    throw std::invalid_argument("edge_preserving_reconstruct: lambda schedule shorter than K");
  }

  SolveHistory history;
  const DifferenceOperators ops(n);
  const Vector normal_rhs = op.apply_adjoint(b);
  const double b_scale = safe_norm_scale(b);

  Vector f = Vector::Zero(op.cols);
  Vector weights;  // empty selects the unweighted first pass
  for (int k = 1; k <= config.outer_iters; ++k) {
    const double lambda_k = schedule[static_cast<std::size_t>(k - 1)];
    if (!(lambda_k > 0.0)) {
      throw std::invalid_argument("edge_preserving_reconstruct: lambda schedule must be positive");
    }
    auto normal_op = [&](const Vector& v) -> Vector {
      Vector out = op.apply_adjoint(op.apply(v));
      if (weights.size() == 0) {
        out += lambda_k * (ops.apply_ds_adjoint(ops.apply_ds(v)) +
                           ops.apply_dt_adjoint(ops.apply_dt(v)));
      } else {
        out += lambda_k *
               (ops.apply_ds_adjoint(weights.cwiseProduct(ops.apply_ds(v))) +
                ops.apply_dt_adjoint(weights.cwiseProduct(ops.apply_dt(v))));
      }
      return out;
    };
    const CgResult cg = cg_spd(normal_op, normal_rhs, config.cg_max, config.cg_tol,
                               /*check_symmetry=*/false);
    if (!cg.converged) {
      std::ostringstream msg;
      msg << "outer iteration " << k << ": CG stopped at " << cg.iterations
          << " iterations with relative residual "
          << (cg.residual_norms.empty() ? 1.0 : cg.residual_norms.back());
      history.warnings.push_back(msg.str());
    }
    f = cg.x;
    weights = igmrf_weights(f, config.beta, ops);
    record_iterate(history, f, (op.apply(f) - b).norm() / b_scale, f_true, keep_iterates);
  }

  finalize_history(history, std::move(f));
  return history;
}

SolveHistory run_solver(const SolverConfig& config, const ForwardModel& model, const Vector& b,
                        const Image* f_true, bool keep_iterates) {
  switch (config.method) {
    case SolverMethod::ls: {
      SolveHistory history;
      Image f = solve_ls_direct(model, b);
      const double b_scale = safe_norm_scale(b);
      record_iterate(history, f.values, (model.apply(f.values) - b).norm() / b_scale, f_true,
                     keep_iterates);
      finalize_history(history, std::move(f.values));
      return history;
    }
    case SolverMethod::lsqr:
      return lsqr(model_operator(model), b, config.max_iters, f_true, keep_iterates);
    case SolverMethod::fista:
      return fista_l1(model_operator(model), b, config.lambda, config.max_iters, f_true,
                      keep_iterates);
    case SolverMethod::igmrf: {
      EdgeConfig edge;
      edge.outer_iters = config.outer_iters;
      edge.lambda_schedule = config.lambda_schedule;
      edge.beta = config.beta;
      edge.cg_max = config.cg_max;
      edge.cg_tol = config.tol;
      return edge_preserving_reconstruct(model_operator(model), b, edge, f_true, keep_iterates);
    }
  }
  throw std::invalid_argument("run_solver: unknown method");
}

}  // namespace cxtomo
