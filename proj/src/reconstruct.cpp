#include "hollowfield/reconstruct.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "hollowfield/errors.hpp"
#include "hollowfield/specfun.hpp"
#include "parallel.hpp"

namespace hollowfield {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void copy_diagnostics(const SolveDiagnostics& d, ReconstructionDiagnostics& out) {
  out.lambda = d.lambda;
  out.residual = d.residual;
  out.infeasible = d.infeasible;
  out.iterations = d.iterations;
  out.rank = d.rank;
}

void mask_radius_floor(FieldGrid& grid, double wavenumber) {
  const double floor = specfun::kMinArgument / wavenumber;
  for (std::size_t idx = 0; idx < grid.values.size(); ++idx) {
    const Point2 p = grid.shape.pixel_center(idx);
    if (std::hypot(p.x, p.y) < floor) {
      if (grid.valid.empty()) grid.valid.assign(grid.values.size(), 1);
      grid.valid[idx] = 0;
      grid.values[idx] = Complex{};
    }
  }
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::CHE: return "che";
    case Method::PWE: return "pwe";
    case Method::ART: return "art";
    case Method::FBP: return "fbp";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "che") return Method::CHE;
  if (lower == "pwe") return Method::PWE;
  if (lower == "art") return Method::ART;
  if (lower == "fbp") return Method::FBP;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected che, pwe, art, fbp)");
}

int order_for_frequency(double frequency, OrderTable table) {
  if (!(frequency > 0.0)) throw DomainError("order_for_frequency: frequency must be positive");
  constexpr std::array<double, 5> kFreq{1000.0, 2000.0, 4000.0, 8000.0, 16000.0};
  constexpr std::array<double, 5> kPaper{10, 15, 20, 30, 40};
  constexpr std::array<double, 5> kLean{5, 10, 15, 20, 30};
  const auto& orders = table == OrderTable::Paper ? kPaper : kLean;
  if (frequency <= kFreq.front()) return static_cast<int>(orders.front());
  if (frequency >= kFreq.back()) return static_cast<int>(orders.back());
  std::size_t i = 0;
  while (frequency > kFreq[i + 1]) ++i;
  const double t = (frequency - kFreq[i]) / (kFreq[i + 1] - kFreq[i]);
  const double n = orders[i] + t * (orders[i + 1] - orders[i]);
  return static_cast<int>(std::ceil(n - 1e-9));
}

RegularizationSpec default_regularization(const ProjectionSet& projections) {
  double norm_sq = 0.0;
  for (const Complex& v : projections.values) norm_sq += std::norm(v);
  const double norm = std::sqrt(norm_sq);
  if (projections.snr_db) {
    return RegularizationSpec::discrepancy(
        norm / std::sqrt(1.0 + std::pow(10.0, *projections.snr_db / 10.0)));
  }
  return RegularizationSpec::discrepancy(1e-3 * norm);
}

FieldGrid synthesize_che_grid(const Eigen::VectorXcd& coefficients, double wavenumber,
                              const GridShape& shape, double frequency) {
  const auto order = static_cast<int>((coefficients.size() - 1) / 2);
  CheCoefficients coeffs(order,
                         std::vector<Complex>(coefficients.data(),
                                              coefficients.data() + coefficients.size()),
                         wavenumber);
  FieldGrid grid = synthesize_grid(
      [&](Point2 p) { return eval_che_field(coeffs, p); }, shape, frequency);
  mask_radius_floor(grid, wavenumber);
  return grid;
}

ReconstructionResult che_reconstruct(const ProjectionSet& projections, int order,
                                     const RegularizationSpec& reg, const GridShape& shape) {
  const auto start = Clock::now();
  projections.validate();
  shape.validate();
  const double k = projections.wavenumber();
  const ForwardMatrix h = assemble_che_matrix(projections.scheme, k, order);
  MinNormSolution sol = solve_min_norm(h, projections, reg);

  ReconstructionResult result;
  result.method = Method::CHE;
  result.grid = synthesize_che_grid(sol.coefficients, k, shape, projections.frequency);
  result.coefficients = std::move(sol.coefficients);
  copy_diagnostics(sol.diagnostics, result.diagnostics);
  result.diagnostics.order = order;
  result.diagnostics.runtime_s = seconds_since(start);
  return result;
}

ReconstructionResult pwe_reconstruct(const ProjectionSet& projections, int num_waves,
                                     const RegularizationSpec& reg, const GridShape& shape) {
  const auto start = Clock::now();
  projections.validate();
  shape.validate();
  const double k = projections.wavenumber();
  const ForwardMatrix h = assemble_pwe_matrix(projections.scheme, k, num_waves);
  MinNormSolution sol = solve_min_norm(h, projections, reg);

  std::vector<Complex> weights(sol.coefficients.data(),
                               sol.coefficients.data() + sol.coefficients.size());
  ReconstructionResult result;
  result.method = Method::PWE;
  result.grid = synthesize_grid(
      [&](Point2 p) { return eval_plane_wave_field(weights, k, p); }, shape,
      projections.frequency);
  mask_radius_floor(result.grid, k);
  result.coefficients = std::move(sol.coefficients);
  copy_diagnostics(sol.diagnostics, result.diagnostics);
  result.diagnostics.order = num_waves;
  result.diagnostics.runtime_s = seconds_since(start);
  return result;
}

ReconstructionResult art_reconstruct(const ProjectionSet& projections, const GridShape& shape,
                                     double relaxation, int sweeps) {
  const auto start = Clock::now();
  projections.validate();
  shape.validate();
  const SamplingScheme& scheme = projections.scheme;
  std::vector<SparseRow> rows(scheme.size());
  detail::parallel_for(static_cast<long long>(rows.size()), [&](long long m) {
    rows[static_cast<std::size_t>(m)] =
        chord_pixel_row(scheme.chord(static_cast<std::size_t>(m)), shape);
    rows[static_cast<std::size_t>(m)].value = projections.values[static_cast<std::size_t>(m)];
  });
  const KaczmarzResult kz = kaczmarz_art(rows, shape.size(), relaxation, sweeps);

  ReconstructionResult result;
  result.method = Method::ART;
  result.grid = FieldGrid(shape, projections.frequency);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    result.grid.values[i] = kz.solution(static_cast<Eigen::Index>(i));
  }
  result.diagnostics.iterations = kz.sweeps;
  double res_sq = 0.0;
  for (const SparseRow& row : rows) {
    Complex dot{};
    for (std::size_t j = 0; j < row.index.size(); ++j) dot += row.weight[j] * kz.solution(row.index[j]);
    res_sq += std::norm(row.value - dot);
  }
  result.diagnostics.residual = std::sqrt(res_sq);
  result.diagnostics.runtime_s = seconds_since(start);
  return result;
}

ReconstructionResult fbp_pipeline(const ProjectionSet& projections, const GridShape& shape) {
  const auto start = Clock::now();
  ReconstructionResult result;
  result.method = Method::FBP;
  result.grid = fbp_reconstruct(chords_to_sinogram(projections), shape);
  result.diagnostics.runtime_s = seconds_since(start);
  return result;
}

}  // namespace hollowfield
