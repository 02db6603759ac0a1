#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hollowfield/config.hpp"
#include "hollowfield/io.hpp"

namespace hollowfield::commands {

namespace fs = std::filesystem;

struct SimulateOutput {
  ProjectionSet projections;
  FieldGrid reference;
};

/// Reference field and (optionally noisy) projections for a config; no I/O.
SimulateOutput simulate(const ExperimentConfig& config);

/// Runs one pipeline on a projection set as configured.
ReconstructionResult reconstruct(const ExperimentConfig& config, const ProjectionSet& projections,
                                 Method method);

/// Writes reference.grid, projections.csv, projections.json and meta.json.
void cmd_simulate(const ExperimentConfig& config, const fs::path& out);

/// Writes recon_<method>.grid and diag_<method>.json; returns the result.
ReconstructionResult cmd_reconstruct(const ExperimentConfig& config, const fs::path& projections_csv,
                                     const fs::path& out);

struct EvaluateOutput {
  double nmse_db = 0.0;
  FieldGrid error_map;
};

/// Writes error_<stem>.grid and appends a row to nmse.csv.
EvaluateOutput cmd_evaluate(const ExperimentConfig& config, const fs::path& reference,
                            const fs::path& result, const fs::path& out,
                            std::optional<double> r_min = std::nullopt,
                            std::optional<double> r_max = std::nullopt);

struct SweepRow {
  double value = 0.0;
  Method method = Method::CHE;
  double frequency = 0.0;
  std::optional<double> snr_db;
  std::size_t n_circles = 0;
  std::optional<double> radius;
  std::optional<int> order;
  std::optional<double> nmse_db;
  std::string status = "ok";
  /// |a_n| for CHE rows of order sweeps.
  std::vector<double> coefficient_magnitudes;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
std::string sweep_csv(const ExperimentConfig& config, const std::vector<SweepRow>& rows);

/// Writes sweep_<kind>.csv (and sweep_order_coefficients.csv for order sweeps).
std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config, const fs::path& out);

/// Writes movie/ (frames + manifest), probe.csv and timedomain.json.
TimeDomainResult cmd_timedomain(const ExperimentConfig& config, const fs::path& out);

/// Renders one channel of a grid file; lo/hi default to the channel's natural range.
void cmd_render(const fs::path& grid, io::Channel channel, std::optional<double> lo,
                std::optional<double> hi, const fs::path& out);

}  // namespace hollowfield::commands
