#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hollowfield/field.hpp"
#include "hollowfield/geometry.hpp"
#include "hollowfield/projection.hpp"

namespace hollowfield {

// ---------------------------------------------------------------------------
// Singular value decomposition
// ---------------------------------------------------------------------------

/// Thin SVD H = U diag(sigma) V^H with sigma descending; U is rows x p and V
/// is cols x p with p = min(rows, cols).
struct SvdResult {
  Eigen::MatrixXcd u;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXcd v;
  int sweeps = 0;
};

/// One-sided (Hestenes) Jacobi on the triangular factor of a Householder QR.
/// Throws NumericError if the off-diagonal measure does not converge within
/// the sweep cap.
SvdResult svd_decompose(const Eigen::MatrixXcd& h);

// ---------------------------------------------------------------------------
// Regularized minimum-norm least squares
// ---------------------------------------------------------------------------

enum class RegularizationMode { Discrepancy, FixedLambda, TruncatedSvd };

struct RegularizationSpec {
  RegularizationMode mode = RegularizationMode::Discrepancy;
  /// Permitted residual norm (Pa m) in discrepancy mode.
  double epsilon = 0.0;
  /// Tikhonov weight in fixed-lambda mode: a = (H^H H + lambda I)^-1 H^H s.
  double lambda = 0.0;
  /// Relative singular-value threshold in truncated-svd mode.
  double svd_cutoff = 0.0;

  static RegularizationSpec discrepancy(double epsilon);
  static RegularizationSpec fixed_lambda(double lambda);
  static RegularizationSpec truncated_svd(double cutoff);
  void validate() const;
};

struct SolveDiagnostics {
  double lambda = 0.0;
  double residual = 0.0;
  /// Discrepancy target unreachable: even the least-squares residual exceeds epsilon.
  bool infeasible = false;
  int iterations = 0;
  std::size_t rank = 0;
};

struct MinNormSolution {
  Eigen::VectorXcd coefficients;
  SolveDiagnostics diagnostics;
};

/// Tikhonov family a(lambda) = V diag(sigma / (sigma^2 + lambda)) U^H s
/// evaluated in the SVD basis. Singular values below the numerical rank
/// threshold max(m, n) eps sigma_1 are treated as zero.
class TikhonovFamily {
 public:
  TikhonovFamily(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& s);

  Eigen::VectorXcd solution(double lambda) const;
  double residual_norm(double lambda) const;
  double solution_norm(double lambda) const;
  /// Truncated SVD solution keeping sigma_i > cutoff * sigma_1.
  Eigen::VectorXcd truncated(double cutoff, std::size_t* kept = nullptr) const;
  double truncated_residual_norm(double cutoff) const;

  double least_squares_residual() const { return std::sqrt(orthogonal_residual_sq_); }
  double data_norm() const { return data_norm_; }
  std::size_t rank() const { return rank_; }
  const Eigen::VectorXd& singular_values() const { return svd_.singular_values; }

 private:
  SvdResult svd_;
  Eigen::VectorXcd beta_;  // U^H s
  double orthogonal_residual_sq_ = 0.0;
  double data_norm_ = 0.0;
  std::size_t rank_ = 0;
};

/// Discrepancy mode: minimum-norm a with ||s - H a|| <= epsilon, found by
/// bisection on log(lambda) until the residual lies in [0.99, 1.01] epsilon.
MinNormSolution solve_min_norm(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& s,
                               const RegularizationSpec& reg);
MinNormSolution solve_min_norm(const ForwardMatrix& h, const ProjectionSet& s,
                               const RegularizationSpec& reg);

// ---------------------------------------------------------------------------
// Algebraic reconstruction (Kaczmarz)
// ---------------------------------------------------------------------------

/// One equation of a sparse real-coefficient system with complex right-hand side.
struct SparseRow {
  std::vector<std::int32_t> index;
  std::vector<double> weight;
  Complex value;
};

struct KaczmarzResult {
  Eigen::VectorXcd solution;
  int sweeps = 0;
  int skipped_rows = 0;
};

/// Classic Kaczmarz sweeps from zero in row order:
///   x <- x + relaxation (s_m - <h_m, x>) / ||h_m||^2 h_m.
/// Rows with zero norm are skipped and counted.
KaczmarzResult kaczmarz_art(std::span<const SparseRow> rows, std::size_t unknowns,
                            double relaxation, int sweeps);

/// Lengths of the chord's intersections with each grid pixel (exact clipping).
SparseRow chord_pixel_row(const TangentChord& chord, const GridShape& shape);

// ---------------------------------------------------------------------------
// Filtered back-projection
// ---------------------------------------------------------------------------

/// Parallel-beam data: values(a, t) for normal angle angles_deg[a] in [0, 180)
/// and signed offset offsets[t] on a uniform grid. Cells without data are
/// zero with filled(a, t) == 0.
struct Sinogram {
  std::vector<double> angles_deg;
  std::vector<double> offsets;
  Eigen::MatrixXcd values;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> filled;
  double frequency = 0.0;

  double offset_spacing() const;
};

/// The chord tangent to circle R at angle theta is the ray
/// x cos theta + y sin theta = R; rays with theta >= 180 deg fold onto
/// (theta - 180, -R).
Sinogram chords_to_sinogram(const ProjectionSet& projections);

/// Ram-Lak filtering via zero-padded FFT, then back-projection with linear
/// interpolation in offset. Complex data are filtered componentwise.
FieldGrid fbp_reconstruct(const Sinogram& sinogram, const GridShape& shape);

}  // namespace hollowfield
