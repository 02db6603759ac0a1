#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hollowfield/field.hpp"
#include "hollowfield/geometry.hpp"
#include "hollowfield/reconstruct.hpp"

namespace hollowfield {

/// Real projection time series: samples(t, m) for chord m of `scheme`.
struct TimeSeriesProjectionSet {
  SamplingScheme scheme;
  double sample_rate = 48000.0;
  double sound_speed = kDefaultSoundSpeed;
  Eigen::MatrixXd samples;

  std::size_t length() const { return static_cast<std::size_t>(samples.rows()); }
  void validate() const;
};

/// Sinusoidal burst emitted by every source of the field:
///   s(t) = amplitude sin(2 pi f_c t) for 0 <= t < duration.
/// Each source additionally applies its own phase offset per bin, as in the
/// monochromatic model.
struct BurstSpec {
  std::vector<PointSource> sources;
  double amplitude = 1.0;
  double carrier = 2000.0;
  double duration = 0.010;
  double sample_rate = 48000.0;
  std::size_t length = 1536;
  double sound_speed = kDefaultSoundSpeed;
  /// Synthesis keeps bins 0 < f <= max_frequency (DC and Nyquist always zero).
  double max_frequency = 6000.0;

  void validate() const;
  std::vector<double> source_signal() const;
  double bin_frequency(std::size_t bin) const {
    return static_cast<double>(bin) * sample_rate / static_cast<double>(length);
  }
};

/// Forward DFT X_k = sum_t x_t exp(-2 pi j k t / T), no padding.
std::vector<Complex> dft(std::span<const double> signal);
/// Inverse of dft for a Hermitian spectrum; returns the real part and stores
/// the largest |imaginary| sample in `imag_residue` if given.
std::vector<double> idft_real(std::span<const Complex> spectrum, double* imag_residue = nullptr);

TimeSeriesProjectionSet synthesize_burst_projections(
    const BurstSpec& burst, const SamplingScheme& scheme,
    int nodes_per_wavelength = kDefaultNodesPerWavelength);

/// Pressure time series at a point computed directly from the synthesis spectrum.
std::vector<double> burst_point_signal(const BurstSpec& burst, Point2 point);

struct TimeDomainOptions {
  double band_low = 500.0;
  double band_high = 4000.0;
  /// Bins whose projection energy lies below peak + gate_db are zeroed; nullopt keeps all.
  std::optional<double> gate_db = -60.0;
  OrderTable order_table = OrderTable::Paper;
  /// Frame indices exported as grids.
  std::vector<std::size_t> frames;
  std::optional<Point2> probe;
};

struct FieldMovie {
  double sample_rate = 0.0;
  std::vector<std::size_t> frame_indices;
  /// Real pressure stored in the real part.
  std::vector<FieldGrid> frames;
};

struct TimeDomainResult {
  FieldMovie movie;
  std::vector<double> probe_signal;
  std::vector<double> active_frequencies;
  std::vector<std::string> skipped_bins;
};

TimeDomainResult reconstruct_time_domain(const TimeSeriesProjectionSet& data,
                                         const GridShape& shape, const TimeDomainOptions& options);

/// Zero-lag normalized cross-correlation sum(a b) / sqrt(sum(a^2) sum(b^2)).
double normalized_cross_correlation(std::span<const double> a, std::span<const double> b);

/// Frame indices at the given times (nearest sample).
std::vector<std::size_t> frames_at_times(std::span<const double> times_s, double sample_rate,
                                         std::size_t length);

}  // namespace hollowfield
