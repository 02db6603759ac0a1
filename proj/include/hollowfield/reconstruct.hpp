#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "hollowfield/field.hpp"
#include "hollowfield/projection.hpp"
#include "hollowfield/solvers.hpp"

namespace hollowfield {

enum class Method { CHE, PWE, ART, FBP };

std::string_view method_name(Method method);
/// Case-insensitive; throws ConfigError for unknown names.
Method parse_method(std::string_view name);

struct ReconstructionDiagnostics {
  int order = 0;  // N for CHE, W for PWE, 0 otherwise
  double lambda = 0.0;
  double residual = 0.0;
  bool infeasible = false;
  int iterations = 0;
  std::size_t rank = 0;
  double runtime_s = 0.0;
};

struct ReconstructionResult {
  FieldGrid grid;
  Method method = Method::CHE;
  std::optional<Eigen::VectorXcd> coefficients;
  ReconstructionDiagnostics diagnostics;
};

enum class OrderTable { Paper, Lean };

/// Expansion order for a frequency: piecewise-linear in f through the table
/// points at 1, 2, 4, 8, 16 kHz, rounded up, held constant outside that range.
int order_for_frequency(double frequency, OrderTable table = OrderTable::Paper);

/// Default discrepancy target: 1e-3 ||s|| without noise, ||s|| / sqrt(1 + 10^(snr/10))
/// when the projections carry a known SNR.
RegularizationSpec default_regularization(const ProjectionSet& projections);

inline constexpr int kDefaultPlaneWaves = 200;
inline constexpr double kDefaultArtRelaxation = 0.25;
inline constexpr int kDefaultArtSweeps = 50;

ReconstructionResult che_reconstruct(const ProjectionSet& projections, int order,
                                     const RegularizationSpec& reg, const GridShape& shape);
ReconstructionResult pwe_reconstruct(const ProjectionSet& projections, int num_waves,
                                     const RegularizationSpec& reg, const GridShape& shape);
ReconstructionResult art_reconstruct(const ProjectionSet& projections, const GridShape& shape,
                                     double relaxation = kDefaultArtRelaxation,
                                     int sweeps = kDefaultArtSweeps);
ReconstructionResult fbp_pipeline(const ProjectionSet& projections, const GridShape& shape);

/// Evaluates sum_n a_n H_n^(2)(k r) e^{j n phi} on the grid; pixels inside the
/// radius floor 1e-3 / k are zeroed and masked.
FieldGrid synthesize_che_grid(const Eigen::VectorXcd& coefficients, double wavenumber,
                              const GridShape& shape, double frequency);

}  // namespace hollowfield
