#include "cxtomo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cxtomo {

namespace {

Vector gram_singular_values(const Matrix& gram, std::int64_t row_count) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericError("singular_spectrum: eigendecomposition failed");
  }
  const Eigen::Index nc = gram.cols();
  Vector sigma(nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const double lambda = eig.eigenvalues()[nc - 1 - i];
    sigma[i] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  // rank(A) <= row count, so trailing values are zero regardless of what the
  // squared-spectrum rounding produced.
  for (Eigen::Index i = row_count; i < nc; ++i) sigma[i] = 0.0;
  return sigma;
}

SpectrumData spectrum_from_values(Vector sigma, double rank_tolerance) {
  SpectrumData data;
  data.rank_tolerance = rank_tolerance;
  data.singular_values = std::move(sigma);
  const Eigen::Index nc = data.singular_values.size();
  const double sigma_max = nc > 0 ? data.singular_values[0] : 0.0;
  const double cutoff = rank_tolerance * sigma_max;
  data.rank = 0;
  for (Eigen::Index i = 0; i < nc; ++i) {
    if (data.singular_values[i] > cutoff) ++data.rank;
  }
  const double sigma_min = nc > 0 ? data.singular_values[nc - 1] : 0.0;
  data.kappa_is_finite = sigma_max > 0.0 && sigma_min > cutoff;
  data.kappa = data.kappa_is_finite ? sigma_max / sigma_min
                                    : std::numeric_limits<double>::infinity();
  return data;
}

}  // namespace

SpectrumData spectrum_from_gram(const Matrix& gram, std::int64_t row_count,
                                double rank_tolerance) {
  if (gram.rows() != gram.cols()) {
    throw std::invalid_argument("spectrum_from_gram: matrix must be square");
  }
  return spectrum_from_values(gram_singular_values(gram, row_count), rank_tolerance);
}

SpectrumData singular_spectrum(const Matrix& a, double rank_tolerance) {
  return spectrum_from_gram(a.transpose() * a, a.rows(), rank_tolerance);
}

SpectrumData singular_spectrum(const ForwardModel& model, double rank_tolerance) {
  return spectrum_from_gram(assemble_gram(model), model.rows(), rank_tolerance);
}

PicardData picard_from_gram(const Matrix& gram, const Vector& normal_rhs,
                            double rank_tolerance) {
  if (gram.rows() != gram.cols() || gram.rows() != normal_rhs.size()) {
    throw std::invalid_argument("picard_from_gram: size mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw NumericError("picard_data: eigendecomposition failed");
  }
  const Eigen::Index nc = gram.cols();
  const double lambda_max = nc > 0 ? std::max(eig.eigenvalues()[nc - 1], 0.0) : 0.0;
  const double sigma_max = std::sqrt(lambda_max);
  const double cutoff = rank_tolerance * sigma_max;

  std::vector<double> sigma, coef, sol;
  for (Eigen::Index i = nc - 1; i >= 0; --i) {  // descending sigma
    const double lambda = eig.eigenvalues()[i];
    const double s = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    if (s <= cutoff) break;
    const double u_dot_b = std::abs(eig.eigenvectors().col(i).dot(normal_rhs)) / s;
    sigma.push_back(s);
    coef.push_back(u_dot_b);
    sol.push_back(u_dot_b / s);
  }

  PicardData data;
  data.sigma = Eigen::Map<const Vector>(sigma.data(), static_cast<Eigen::Index>(sigma.size()));
  data.data_coef = Eigen::Map<const Vector>(coef.data(), static_cast<Eigen::Index>(coef.size()));
  data.solution_coef =
      Eigen::Map<const Vector>(sol.data(), static_cast<Eigen::Index>(sol.size()));
  return data;
}

PicardData picard_data(const Matrix& a, const Vector& b, double rank_tolerance) {
  if (b.size() != a.rows()) throw std::invalid_argument("picard_data: size mismatch");
  return picard_from_gram(a.transpose() * a, a.transpose() * b, rank_tolerance);
}

PicardData picard_data(const ForwardModel& model, const Vector& b, double rank_tolerance) {
  if (b.size() != model.rows()) throw std::invalid_argument("picard_data: size mismatch");
  return picard_from_gram(assemble_gram(model), assemble_normal_rhs(model, b), rank_tolerance);
}

std::int64_t VisibleMask::count() const {
  std::int64_t c = 0;
  for (auto v : visible) c += v != 0;
  return c;
}

VisibleMask visible_mask(const GridSpec& spec, const DetectorMask& mask, double tolerance) {
  if (mask.n != spec.n) throw std::invalid_argument("visible_mask: mask grid mismatch");
  VisibleMask out;
  out.n = spec.n;
  out.tolerance = tolerance > 0.0 ? tolerance : 0.5 * spec.dx;
  out.visible.assign(static_cast<std::size_t>(spec.num_pixels()), 0);

  const double r_lo = spec.t_final - out.tolerance;
  const double r_hi = spec.t_final + out.tolerance;
  const double lo2 = r_lo > 0.0 ? r_lo * r_lo : 0.0;
  const double hi2 = r_hi * r_hi;

  // Union of detector-centered annuli, marked detector by detector.
  for (int dj = 0; dj < spec.n; ++dj) {
    for (int di = 0; di < spec.n; ++di) {
      if (!mask.active[static_cast<std::size_t>(spec.flat_index(di, dj))]) continue;
      for (int j = 0; j < spec.n; ++j) {
        const double dy = spec.y(j) - spec.y(dj);
        for (int i = 0; i < spec.n; ++i) {
          const double dxv = spec.x(i) - spec.x(di);
          const double d2 = dxv * dxv + dy * dy;
          if (d2 >= lo2 && d2 <= hi2) {
            out.visible[static_cast<std::size_t>(spec.flat_index(i, j))] = 1;
          }
        }
      }
    }
  }
  return out;
}

MaskedError masked_relative_error(const Image& fhat, const Image& ftrue,
                                  const VisibleMask& mask) {
  const auto np = static_cast<Eigen::Index>(mask.visible.size());
  if (fhat.size() != np || ftrue.size() != np) {
    throw std::invalid_argument("masked_relative_error: size mismatch");
  }
  double diff_in = 0.0, ref_in = 0.0, diff_out = 0.0, ref_out = 0.0;
  for (Eigen::Index i = 0; i < np; ++i) {
    const double d = fhat.values[i] - ftrue.values[i];
    const double t = ftrue.values[i];
    if (mask.visible[static_cast<std::size_t>(i)]) {
      diff_in += d * d;
      ref_in += t * t;
    } else {
      diff_out += d * d;
      ref_out += t * t;
    }
  }
  MaskedError err;
  if (ref_in > 0.0) err.inside = std::sqrt(diff_in / ref_in);
  if (ref_out > 0.0) err.outside = std::sqrt(diff_out / ref_out);
  return err;
}

}  // namespace cxtomo
