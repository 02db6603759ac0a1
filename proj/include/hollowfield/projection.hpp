#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hollowfield/field.hpp"
#include "hollowfield/geometry.hpp"

namespace hollowfield {

/// Complex line integrals s_m (Pa m), one per chord of `scheme`, in scheme order.
struct ProjectionSet {
  SamplingScheme scheme;
  double frequency = 0.0;
  double sound_speed = kDefaultSoundSpeed;
  std::vector<Complex> values;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;

  double wavenumber() const { return kTwoPi * frequency / sound_speed; }
  double wavelength() const { return sound_speed / frequency; }
  void validate() const;
};

enum class BasisKind { CircularHarmonic, PlaneWave };

/// Rows are chords; columns are n = -N..N (CHE) or directions w = 0..W-1 (PWE).
struct ForwardMatrix {
  Eigen::MatrixXcd entries;
  BasisKind basis = BasisKind::CircularHarmonic;
  double wavenumber = 0.0;
  /// N for CHE, W for PWE.
  int basis_size_parameter = 0;
};

/// Quadrature of an arbitrary field along each chord (the measurement model).
std::vector<Complex> project_chords(const FieldEvaluator& evaluator,
                                    std::span<const TangentChord> chords, double wavelength,
                                    int nodes_per_wavelength = kDefaultNodesPerWavelength);

ProjectionSet project_field(const FieldEvaluator& evaluator, const SamplingScheme& scheme,
                            double frequency, double sound_speed = kDefaultSoundSpeed,
                            int nodes_per_wavelength = kDefaultNodesPerWavelength);

/// h_{m,n} = integral over chord m of H_n^(2)(k r) exp(j n phi) dl.
ForwardMatrix assemble_che_matrix(std::span<const TangentChord> chords, double wavenumber,
                                  int order,
                                  int nodes_per_wavelength = kDefaultNodesPerWavelength);
ForwardMatrix assemble_che_matrix(const SamplingScheme& scheme, double wavenumber, int order,
                                  int nodes_per_wavelength = kDefaultNodesPerWavelength);

/// h_{m,w} = integral over chord m of exp(-j k (x cos a_w + y sin a_w)) dl,
/// a_w = 2 pi w / W.
ForwardMatrix assemble_pwe_matrix(std::span<const TangentChord> chords, double wavenumber,
                                  int num_waves,
                                  int nodes_per_wavelength = kDefaultNodesPerWavelength);
ForwardMatrix assemble_pwe_matrix(const SamplingScheme& scheme, double wavenumber, int num_waves,
                                  int nodes_per_wavelength = kDefaultNodesPerWavelength);

/// Noise variance sigma^2 = mean |s|^2 / 10^(snr/10) for a clean projection vector.
double noise_variance(std::span<const Complex> clean, double snr_db);

/// Adds circular complex Gaussian noise at the given SNR. Deterministic per seed.
ProjectionSet add_noise(const ProjectionSet& projections, double snr_db, std::uint64_t seed);

/// Wavelength used for the quadrature of a given wavenumber.
inline double wavelength_of(double wavenumber) { return kTwoPi / wavenumber; }

}  // namespace hollowfield
