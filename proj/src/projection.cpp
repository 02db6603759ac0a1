#include "hollowfield/projection.hpp"

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "hollowfield/errors.hpp"
#include "hollowfield/specfun.hpp"
#include "parallel.hpp"

namespace hollowfield {

void ProjectionSet::validate() const {
  if (!(frequency > 0.0)) throw DomainError("projection set: frequency must be positive");
  if (!(sound_speed > 0.0)) throw DomainError("projection set: sound speed must be positive");
  if (values.size() != scheme.size()) {
    throw ShapeMismatchError("projection set: " + std::to_string(values.size()) +
                             " values for a scheme of " + std::to_string(scheme.size()) +
                             " chords");
  }
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericError("projection set: non-finite value");
    }
  }
}

std::vector<Complex> project_chords(const FieldEvaluator& evaluator,
                                    std::span<const TangentChord> chords, double wavelength,
                                    int nodes_per_wavelength) {
  std::vector<Complex> out(chords.size());
  const long long count = static_cast<long long>(chords.size());
  detail::parallel_for(count, [&](long long m) {
    const TangentChord& chord = chords[static_cast<std::size_t>(m)];
    const PanelLayout layout = panel_layout(chord.half_length, wavelength, nodes_per_wavelength);
    Complex sum{};
    for (std::size_t i = 0; i < layout.arc.size(); ++i) {
      sum += layout.weight[i] * evaluator(chord_point(chord, layout.arc[i]));
    }
    out[static_cast<std::size_t>(m)] = sum;
  });
  return out;
}

ProjectionSet project_field(const FieldEvaluator& evaluator, const SamplingScheme& scheme,
                            double frequency, double sound_speed, int nodes_per_wavelength) {
  if (!(frequency > 0.0) || !(sound_speed > 0.0)) {
    throw DomainError("project_field: frequency and sound speed must be positive");
  }
  ProjectionSet set{scheme, frequency, sound_speed, {}, std::nullopt, std::nullopt};
  set.values = project_chords(evaluator, scheme.chords(), sound_speed / frequency,
                              nodes_per_wavelength);
  return set;
}

ForwardMatrix assemble_che_matrix(std::span<const TangentChord> chords, double wavenumber,
                                  int order, int nodes_per_wavelength) {
  if (order < 0 || order > specfun::kMaxOrder) {
    throw DomainError("assemble_che_matrix: order outside [0, 64]");
  }
  if (!(wavenumber > 0.0)) throw DomainError("assemble_che_matrix: wavenumber must be positive");

  ForwardMatrix fm;
  fm.basis = BasisKind::CircularHarmonic;
  fm.wavenumber = wavenumber;
  fm.basis_size_parameter = order;
  const long long rows = static_cast<long long>(chords.size());
  const int cols = 2 * order + 1;
  fm.entries.resize(rows, cols);
  const double wavelength = wavelength_of(wavenumber);

  detail::parallel_for(rows, [&](long long m) {
    const TangentChord& chord = chords[static_cast<std::size_t>(m)];
    const PanelLayout layout = panel_layout(chord.half_length, wavelength, nodes_per_wavelength);
    std::array<Complex, specfun::kMaxOrder + 1> h;
    std::array<Complex, 2 * specfun::kMaxOrder + 1> acc{};
    for (std::size_t i = 0; i < layout.arc.size(); ++i) {
      const Point2 p = chord_point(chord, layout.arc[i]);
      const Polar polar = polar_of(p);
      specfun::hankel2_sequence(order, wavenumber * polar.r, h);
      const double w = layout.weight[i];
      const Complex step = std::polar(1.0, polar.phi);
      Complex rot{1.0, 0.0};
      acc[order] += w * h[0];
      for (int n = 1; n <= order; ++n) {
        rot *= step;
        const Complex wh = w * h[n];
        acc[order + n] += wh * rot;
        acc[order - n] += ((n % 2 == 0) ? wh : -wh) * std::conj(rot);
      }
    }
    for (int c = 0; c < cols; ++c) fm.entries(m, c) = acc[c];
  });
  return fm;
}

ForwardMatrix assemble_che_matrix(const SamplingScheme& scheme, double wavenumber, int order,
                                  int nodes_per_wavelength) {
  return assemble_che_matrix(scheme.chords(), wavenumber, order, nodes_per_wavelength);
}

ForwardMatrix assemble_pwe_matrix(std::span<const TangentChord> chords, double wavenumber,
                                  int num_waves, int nodes_per_wavelength) {
  if (num_waves < 1) throw DomainError("assemble_pwe_matrix: need at least one plane wave");
  if (!(wavenumber > 0.0)) throw DomainError("assemble_pwe_matrix: wavenumber must be positive");

  ForwardMatrix fm;
  fm.basis = BasisKind::PlaneWave;
  fm.wavenumber = wavenumber;
  fm.basis_size_parameter = num_waves;
  const std::size_t rows = chords.size();
  fm.entries.resize(static_cast<Eigen::Index>(rows), num_waves);
  const double wavelength = wavelength_of(wavenumber);

  std::vector<double> cos_a(num_waves), sin_a(num_waves);
  for (int w = 0; w < num_waves; ++w) {
    const double alpha = kTwoPi * w / num_waves;
    cos_a[w] = std::cos(alpha);
    sin_a[w] = std::sin(alpha);
  }

  // Along a chord the kernel factors as exp(-j k p0.u) * exp(-j k l (d.u)); the
  // second factor's quadrature sum depends only on the chord direction and
  // extent, so chords sharing (tangent angle, half length) share it.
  std::map<std::pair<double, double>, std::size_t> group_of;
  std::vector<std::size_t> group(rows);
  std::vector<const TangentChord*> representative;
  for (std::size_t m = 0; m < rows; ++m) {
    const auto key = std::make_pair(chords[m].tangent_angle, chords[m].half_length);
    auto [it, inserted] = group_of.emplace(key, representative.size());
    if (inserted) representative.push_back(&chords[m]);
    group[m] = it->second;
  }

  Eigen::MatrixXcd along(static_cast<Eigen::Index>(representative.size()), num_waves);
  const long long groups = static_cast<long long>(representative.size());
#pragma omp parallel for schedule(dynamic)
  for (long long g = 0; g < groups; ++g) {
    const TangentChord& chord = *representative[static_cast<std::size_t>(g)];
    const PanelLayout layout = panel_layout(chord.half_length, wavelength, nodes_per_wavelength);
    const double dx = -std::sin(chord.tangent_angle);
    const double dy = std::cos(chord.tangent_angle);
    for (int w = 0; w < num_waves; ++w) {
      const double beta = dx * cos_a[w] + dy * sin_a[w];
      Complex sum{};
      for (std::size_t i = 0; i < layout.arc.size(); ++i) {
        sum += layout.weight[i] * std::polar(1.0, -wavenumber * layout.arc[i] * beta);
      }
      along(g, w) = sum;
    }
  }

  const long long nrows = static_cast<long long>(rows);
#pragma omp parallel for schedule(static)
  for (long long m = 0; m < nrows; ++m) {
    const TangentChord& chord = chords[static_cast<std::size_t>(m)];
    const double px = chord.circle_radius * std::cos(chord.tangent_angle);
    const double py = chord.circle_radius * std::sin(chord.tangent_angle);
    const auto g = static_cast<Eigen::Index>(group[static_cast<std::size_t>(m)]);
    for (int w = 0; w < num_waves; ++w) {
      fm.entries(m, w) = std::polar(1.0, -wavenumber * (px * cos_a[w] + py * sin_a[w])) * along(g, w);
    }
  }
  return fm;
}

ForwardMatrix assemble_pwe_matrix(const SamplingScheme& scheme, double wavenumber, int num_waves,
                                  int nodes_per_wavelength) {
  return assemble_pwe_matrix(scheme.chords(), wavenumber, num_waves, nodes_per_wavelength);
}

double noise_variance(std::span<const Complex> clean, double snr_db) {
  if (!std::isfinite(snr_db)) throw DomainError("add_noise: SNR must be finite");
  if (clean.empty()) return 0.0;
  double power = 0.0;
  for (const Complex& v : clean) power += std::norm(v);
  power /= static_cast<double>(clean.size());
  return power / std::pow(10.0, snr_db / 10.0);
}

ProjectionSet add_noise(const ProjectionSet& projections, double snr_db, std::uint64_t seed) {
  const double variance = noise_variance(projections.values, snr_db);
  const double sigma_component = std::sqrt(0.5 * variance);
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ProjectionSet noisy = projections;
  for (Complex& v : noisy.values) {
    const double re = normal(engine);
    const double im = normal(engine);
    v += Complex(sigma_component * re, sigma_component * im);
  }
  noisy.snr_db = snr_db;
  noisy.seed = seed;
  return noisy;
}

}  // namespace hollowfield
