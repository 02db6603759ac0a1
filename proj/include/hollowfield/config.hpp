#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hollowfield/field.hpp"
#include "hollowfield/geometry.hpp"
#include "hollowfield/projection.hpp"
#include "hollowfield/reconstruct.hpp"
#include "hollowfield/solvers.hpp"
#include "hollowfield/timedomain.hpp"

namespace hollowfield {

struct SchemeConfig {
  double first_radius = 0.30;
  double radius_step = 0.01;
  int circles = 31;
  /// Explicit radii; when non-empty they replace the uniform layout.
  std::vector<double> radii;
  double angular_step_deg = 5.0;
  double chord_half_length = SamplingScheme::kDefaultHalfLength;

  std::vector<double> resolved_radii() const;
  SamplingScheme build() const;
};

struct RegularizationConfig {
  RegularizationMode mode = RegularizationMode::Discrepancy;
  /// Discrepancy target; nullopt selects the noise-aware default.
  std::optional<double> epsilon;
  double lambda = 0.0;
  double svd_cutoff = 0.0;
};

struct MethodConfig {
  Method method = Method::CHE;
  /// CHE order; nullopt selects the order table.
  std::optional<int> order;
  OrderTable order_table = OrderTable::Paper;
  int plane_waves = kDefaultPlaneWaves;
  RegularizationConfig regularization;
  double art_relaxation = kDefaultArtRelaxation;
  int art_sweeps = kDefaultArtSweeps;
};

struct NoiseConfig {
  std::optional<double> snr_db;
  std::uint64_t seed = 1;
};

struct MaskConfig {
  double r_min = 0.30;
  double r_max = 0.60;
};

enum class SweepKind { Order, Circles, Snr, Frequency, Radius };
std::string_view sweep_kind_name(SweepKind kind);

struct SweepConfig {
  SweepKind kind = SweepKind::Order;
  /// Swept values; empty selects the defaults of the kind.
  std::vector<double> values;
  std::vector<Method> methods{Method::CHE};
  /// Noise seeds averaged per point when noise is active.
  std::vector<std::uint64_t> seeds{1};

  std::vector<double> resolved_values(const struct ExperimentConfig& config) const;
};

struct TimeDomainConfig {
  double carrier = 2000.0;
  double duration = 0.010;
  double sample_rate = 48000.0;
  std::size_t samples = 1536;
  double max_frequency = 6000.0;
  double band_low = 500.0;
  double band_high = 4000.0;
  std::optional<double> gate_db = -60.0;
  OrderTable order_table = OrderTable::Paper;
  std::vector<double> frame_times;
  Point2 probe{0.45, 0.0};
};

struct ExperimentConfig {
  std::string preset;
  ReferenceFieldSpec field;
  SchemeConfig scheme;
  MethodConfig method;
  GridShape grid;
  MaskConfig mask;
  NoiseConfig noise;
  int nodes_per_wavelength = kDefaultNodesPerWavelength;
  SweepConfig sweep;
  TimeDomainConfig timedomain;
  std::string output_dir = "out";

  /// Checks every module precondition reachable from the config; throws
  /// ConfigError naming the offending field.
  void validate() const;

  int order_for(double frequency) const;
  RegularizationSpec regularization_for(const ProjectionSet& projections) const;
  BurstSpec burst() const;
  TimeDomainOptions timedomain_options() const;
};

/// Base document of a preset: paper-centered-<f>, paper-offcenter-<f>,
/// paper-noise-2k, paper-timedomain, paper-single-circle. <f> accepts
/// "2000", "2k" or "2kHz".
nlohmann::json preset_document(std::string_view name);

/// Applies the preset named in `doc` (if any), merge-patches the remaining
/// keys over it, parses and validates.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved document; parse_config(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

}  // namespace hollowfield
