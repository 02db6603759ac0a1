#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hollowfield/errors.hpp"
#include "hollowfield/solvers.hpp"

namespace hollowfield {

RegularizationSpec RegularizationSpec::discrepancy(double epsilon) {
  RegularizationSpec spec;
  spec.mode = RegularizationMode::Discrepancy;
  spec.epsilon = epsilon;
  return spec;
}

RegularizationSpec RegularizationSpec::fixed_lambda(double lambda) {
  RegularizationSpec spec;
  spec.mode = RegularizationMode::FixedLambda;
  spec.lambda = lambda;
  return spec;
}

RegularizationSpec RegularizationSpec::truncated_svd(double cutoff) {
  RegularizationSpec spec;
  spec.mode = RegularizationMode::TruncatedSvd;
  spec.svd_cutoff = cutoff;
  return spec;
}

void RegularizationSpec::validate() const {
  switch (mode) {
    case RegularizationMode::Discrepancy:
      if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("regularization: epsilon must be finite and non-negative");
      }
      break;
    case RegularizationMode::FixedLambda:
      if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("regularization: lambda must be finite and non-negative");
      }
      break;
    case RegularizationMode::TruncatedSvd:
      if (!(svd_cutoff >= 0.0 && svd_cutoff < 1.0)) {
        throw DomainError("regularization: svd_cutoff must lie in [0, 1)");
      }
      break;
  }
}

TikhonovFamily::TikhonovFamily(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& s) {
  if (h.rows() != s.size()) {
    throw ShapeMismatchError("solve_min_norm: matrix has " + std::to_string(h.rows()) +
                             " rows but data has " + std::to_string(s.size()) + " entries");
  }
  svd_ = svd_decompose(h);
  data_norm_ = s.norm();
  const Eigen::VectorXd& sigma = svd_.singular_values;
  if (sigma.size() > 0 && sigma(0) > 0.0) {
    const double threshold = static_cast<double>(std::max(h.rows(), h.cols())) *
                             std::numeric_limits<double>::epsilon() * sigma(0);
    while (rank_ < static_cast<std::size_t>(sigma.size()) &&
           sigma(static_cast<Eigen::Index>(rank_)) > threshold) {
      ++rank_;
    }
  }
  const auto r = static_cast<Eigen::Index>(rank_);
  beta_ = svd_.u.leftCols(r).adjoint() * s;
  const Eigen::VectorXcd perp = s - svd_.u.leftCols(r) * beta_;
  orthogonal_residual_sq_ = perp.squaredNorm();
}

Eigen::VectorXcd TikhonovFamily::solution(double lambda) const {
  const auto r = static_cast<Eigen::Index>(rank_);
  Eigen::VectorXcd scaled(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double s = svd_.singular_values(i);
    scaled(i) = beta_(i) * (s / (s * s + lambda));
  }
  return svd_.v.leftCols(r) * scaled;
}

double TikhonovFamily::residual_norm(double lambda) const {
  double sum = orthogonal_residual_sq_;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(rank_); ++i) {
    const double s = svd_.singular_values(i);
    const double f = lambda / (s * s + lambda);
    sum += f * f * std::norm(beta_(i));
  }
  return std::sqrt(sum);
}

double TikhonovFamily::solution_norm(double lambda) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(rank_); ++i) {
    const double s = svd_.singular_values(i);
    const double f = s / (s * s + lambda);
    sum += f * f * std::norm(beta_(i));
  }
  return std::sqrt(sum);
}

Eigen::VectorXcd TikhonovFamily::truncated(double cutoff, std::size_t* kept) const {
  Eigen::Index keep = 0;
  const auto r = static_cast<Eigen::Index>(rank_);
  while (keep < r && svd_.singular_values(keep) > cutoff * svd_.singular_values(0)) ++keep;
  if (kept != nullptr) *kept = static_cast<std::size_t>(keep);
  Eigen::VectorXcd scaled(keep);
  for (Eigen::Index i = 0; i < keep; ++i) scaled(i) = beta_(i) / svd_.singular_values(i);
  return svd_.v.leftCols(keep) * scaled;
}

double TikhonovFamily::truncated_residual_norm(double cutoff) const {
  double sum = orthogonal_residual_sq_;
  const auto r = static_cast<Eigen::Index>(rank_);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (!(svd_.singular_values(i) > cutoff * svd_.singular_values(0))) sum += std::norm(beta_(i));
  }
  return std::sqrt(sum);
}

namespace {

constexpr int kMaxBisection = 200;

MinNormSolution finish(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& s, Eigen::VectorXcd a,
                       SolveDiagnostics diag) {
  diag.residual = (s - h * a).norm();
  if (!a.allFinite()) throw NumericError("solve_min_norm: non-finite coefficients");
  return {std::move(a), diag};
}

}  // namespace

MinNormSolution solve_min_norm(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& s,
                               const RegularizationSpec& reg) {
  reg.validate();
  const TikhonovFamily family(h, s);
  SolveDiagnostics diag;
  diag.rank = family.rank();

  switch (reg.mode) {
    case RegularizationMode::FixedLambda:
      diag.lambda = reg.lambda;
      return finish(h, s, family.solution(reg.lambda), diag);
    case RegularizationMode::TruncatedSvd: {
      std::size_t kept = 0;
      Eigen::VectorXcd a = family.truncated(reg.svd_cutoff, &kept);
      diag.rank = kept;
      return finish(h, s, std::move(a), diag);
    }
    case RegularizationMode::Discrepancy:
      break;
  }

  const double eps = reg.epsilon;
  if (family.data_norm() <= eps) {
    diag.lambda = std::numeric_limits<double>::infinity();
    return finish(h, s, Eigen::VectorXcd::Zero(h.cols()), diag);
  }
  const double lo_target = 0.99 * eps;
  const double hi_target = 1.01 * eps;
  const double ls_residual = family.least_squares_residual();
  if (ls_residual > eps) {
    diag.infeasible = true;
    return finish(h, s, family.solution(0.0), diag);
  }
  if (ls_residual >= lo_target) {
    return finish(h, s, family.solution(0.0), diag);
  }

  // Bisection on log(lambda); residual(lambda) is increasing.
  const Eigen::VectorXd& sigma = family.singular_values();
  const double s_max = sigma(0);
  const double s_min = sigma(static_cast<Eigen::Index>(family.rank()) - 1);
  double log_lo = 2.0 * std::log(s_min) - 30.0 * std::log(10.0);
  double log_hi = 2.0 * std::log(s_max) + 30.0 * std::log(10.0);
  while (family.residual_norm(std::exp(log_lo)) >= lo_target && log_lo > -700.0) log_lo -= 10.0;
  if (family.residual_norm(std::exp(log_hi)) <= hi_target) {
    diag.lambda = std::exp(log_hi);
    return finish(h, s, family.solution(diag.lambda), diag);
  }

  for (int it = 1; it <= kMaxBisection; ++it) {
    const double mid = 0.5 * (log_lo + log_hi);
    const double lambda = std::exp(mid);
    const double r = family.residual_norm(lambda);
    diag.iterations = it;
    if (r >= lo_target && r <= hi_target) {
      diag.lambda = lambda;
      return finish(h, s, family.solution(lambda), diag);
    }
    if (r < lo_target) {
      log_lo = mid;
    } else {
      log_hi = mid;
    }
  }
  throw NumericError("solve_min_norm: discrepancy bisection did not converge; lambda bracket [" +
                     std::to_string(std::exp(log_lo)) + ", " + std::to_string(std::exp(log_hi)) +
                     "]");
}

MinNormSolution solve_min_norm(const ForwardMatrix& h, const ProjectionSet& s,
                               const RegularizationSpec& reg) {
  const Eigen::VectorXcd data =
      Eigen::Map<const Eigen::VectorXcd>(s.values.data(), static_cast<Eigen::Index>(s.values.size()));
  return solve_min_norm(h.entries, data, reg);
}

}  // namespace hollowfield
