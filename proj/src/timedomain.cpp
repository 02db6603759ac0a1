#include "hollowfield/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include "hollowfield/errors.hpp"
#include "hollowfield/projection.hpp"
#include "parallel.hpp"

namespace hollowfield {

void TimeSeriesProjectionSet::validate() const {
  if (samples.rows() < 2) throw DomainError("time series: need at least two samples");
  if (static_cast<std::size_t>(samples.cols()) != scheme.size()) {
    throw ShapeMismatchError("time series: " + std::to_string(samples.cols()) +
                             " chords, scheme has " + std::to_string(scheme.size()));
  }
  if (!(sample_rate > 0.0)) throw DomainError("time series: sample rate must be positive");
  if (!(sound_speed > 0.0)) throw DomainError("time series: sound speed must be positive");
  if (!samples.allFinite()) throw DomainError("time series: non-finite sample");
}

void BurstSpec::validate() const {
  if (sources.empty()) throw DomainError("burst: at least one source is required");
  if (!(carrier > 0.0)) throw DomainError("burst: carrier must be positive");
  if (sample_rate < 4.0 * carrier) {
    throw DomainError("burst: sample rate " + std::to_string(sample_rate) +
                      " Hz is below four times the carrier");
  }
  if (!(duration > 0.0)) throw DomainError("burst: duration must be positive");
  if (length < 2) throw DomainError("burst: record length must be at least 2");
  if (static_cast<double>(length) / sample_rate < duration) {
    throw DomainError("burst: record shorter than the burst");
  }
  if (!(sound_speed > 0.0)) throw DomainError("burst: sound speed must be positive");
  if (!(max_frequency > 0.0)) throw DomainError("burst: max frequency must be positive");
  if (!(amplitude >= 0.0)) throw DomainError("burst: amplitude must be non-negative");
}

std::vector<double> BurstSpec::source_signal() const {
  std::vector<double> s(length, 0.0);
  const auto active = static_cast<std::size_t>(std::llround(duration * sample_rate));
  for (std::size_t t = 0; t < std::min(active, length); ++t) {
    s[t] = amplitude * std::sin(kTwoPi * carrier * static_cast<double>(t) / sample_rate);
  }
  return s;
}

std::vector<Complex> dft(std::span<const double> signal) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> in(signal.begin(), signal.end());
  std::vector<Complex> half;
  fft.fwd(half, in);
  const std::size_t n = signal.size();
  std::vector<Complex> full(n);
  for (std::size_t k = 0; k < half.size() && k < n; ++k) full[k] = half[k];
  for (std::size_t k = 1; k < n; ++k) {
    if (k >= half.size()) full[k] = std::conj(full[n - k]);
  }
  return full;
}

std::vector<double> idft_real(std::span<const Complex> spectrum, double* imag_residue) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(spectrum.begin(), spectrum.end());
  std::vector<Complex> out;
  fft.inv(out, in);
  std::vector<double> real(out.size());
  double residue = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    real[t] = out[t].real();
    residue = std::max(residue, std::abs(out[t].imag()));
  }
  if (imag_residue) *imag_residue = residue;
  return real;
}

namespace {

struct SynthesisBins {
  std::size_t first = 1;
  std::size_t last = 0;  // inclusive; last < first means none
  std::vector<Complex> source_spectrum;
};

SynthesisBins synthesis_bins(const BurstSpec& burst) {
  SynthesisBins bins;
  bins.source_spectrum = dft(burst.source_signal());
  const std::size_t nyquist_exclusive = (burst.length + 1) / 2;  // bins strictly below Nyquist
  for (std::size_t b = 1; b < nyquist_exclusive; ++b) {
    if (burst.bin_frequency(b) > burst.max_frequency) break;
    bins.last = b;
  }
  return bins;
}

std::vector<double> hermitian_inverse(std::vector<Complex> half, std::size_t length) {
  std::vector<Complex> full(length, Complex{});
  for (std::size_t b = 1; b < half.size() && b < length; ++b) {
    if (2 * b >= length) break;
    full[b] = half[b];
    full[length - b] = std::conj(half[b]);
  }
  return idft_real(full);
}

}  // namespace

TimeSeriesProjectionSet synthesize_burst_projections(const BurstSpec& burst,
                                                     const SamplingScheme& scheme,
                                                     int nodes_per_wavelength) {
  burst.validate();
  const SynthesisBins bins = synthesis_bins(burst);
  const std::size_t nbins = bins.last >= bins.first ? bins.last + 1 : 0;
  const double dk = kTwoPi * (burst.sample_rate / static_cast<double>(burst.length)) /
                    burst.sound_speed;

  TimeSeriesProjectionSet out{scheme, burst.sample_rate, burst.sound_speed,
                              Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(burst.length),
                                                    static_cast<Eigen::Index>(scheme.size()))};
  if (nbins == 0) return out;

  // One quadrature, fine enough for the highest synthesized bin, shared by all bins.
  const double lambda_min = kTwoPi / (dk * static_cast<double>(bins.last));
  const PanelLayout layout = panel_layout(scheme.chord_half_length(), lambda_min,
                                          nodes_per_wavelength);
  const long long chords = static_cast<long long>(scheme.size());
  detail::parallel_for(chords, [&](long long m) {
    const TangentChord& chord = scheme.chord(static_cast<std::size_t>(m));
    std::vector<Complex> line(nbins, Complex{});
    for (std::size_t q = 0; q < layout.arc.size(); ++q) {
      const Point2 p = chord_point(chord, layout.arc[q]);
      for (const PointSource& src : burst.sources) {
        const double d = std::hypot(p.x - src.position.x, p.y - src.position.y);
        if (d < 1e-9) throw SingularPointError("burst synthesis: node coincides with a source");
        const Complex step = std::polar(1.0, -dk * d);
        const Complex base = std::polar(layout.weight[q] / d, src.phase);
        Complex z = std::polar(1.0, -dk * d * static_cast<double>(bins.first));
        for (std::size_t b = bins.first; b < nbins; ++b) {
          if ((b - bins.first) % 32 == 0) z = std::polar(1.0, -dk * d * static_cast<double>(b));
          line[b] += base * z;
          z *= step;
        }
      }
    }
    for (std::size_t b = bins.first; b < nbins; ++b) line[b] *= bins.source_spectrum[b];
    const std::vector<double> series = hermitian_inverse(std::move(line), burst.length);
    for (std::size_t t = 0; t < burst.length; ++t) {
      out.samples(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(m)) = series[t];
    }
  });
  return out;
}

std::vector<double> burst_point_signal(const BurstSpec& burst, Point2 point) {
  burst.validate();
  const SynthesisBins bins = synthesis_bins(burst);
  const std::size_t nbins = bins.last >= bins.first ? bins.last + 1 : 0;
  std::vector<Complex> spectrum(nbins, Complex{});
  for (std::size_t b = bins.first; b < nbins; ++b) {
    ReferenceFieldSpec spec;
    spec.sources = burst.sources;
    spec.frequency = burst.bin_frequency(b);
    spec.sound_speed = burst.sound_speed;
    spectrum[b] = bins.source_spectrum[b] * eval_point_source_field(spec, point);
  }
  return hermitian_inverse(std::move(spectrum), burst.length);
}

TimeDomainResult reconstruct_time_domain(const TimeSeriesProjectionSet& data,
                                         const GridShape& shape,
                                         const TimeDomainOptions& options) {
  data.validate();
  shape.validate();
  const double nyquist = data.sample_rate / 2.0;
  if (!(options.band_low > 0.0 && options.band_low < options.band_high &&
        options.band_high < nyquist)) {
    throw DomainError("time domain: band must satisfy 0 < f_lo < f_hi < sample_rate / 2");
  }
  const std::size_t length = data.length();
  for (std::size_t f : options.frames) {
    if (f >= length) throw OutOfRangeError("time domain: frame index " + std::to_string(f) +
                                           " beyond record length");
  }
  const auto chords = static_cast<Eigen::Index>(data.scheme.size());

  // Step 1: per-chord spectra.
  Eigen::MatrixXcd spectra(static_cast<Eigen::Index>(length), chords);
  for (Eigen::Index m = 0; m < chords; ++m) {
    std::vector<double> col(length);
    for (std::size_t t = 0; t < length; ++t) col[t] = data.samples(static_cast<Eigen::Index>(t), m);
    const std::vector<Complex> x = dft(col);
    for (std::size_t b = 0; b < length; ++b) spectra(static_cast<Eigen::Index>(b), m) = x[b];
  }

  const double df = data.sample_rate / static_cast<double>(length);
  std::vector<std::size_t> band;
  for (std::size_t b = 1; 2 * b < length; ++b) {
    const double f = static_cast<double>(b) * df;
    if (f >= options.band_low && f <= options.band_high) band.push_back(b);
  }
  double peak = 0.0;
  std::vector<double> energy(band.size());
  for (std::size_t i = 0; i < band.size(); ++i) {
    energy[i] = spectra.row(static_cast<Eigen::Index>(band[i])).squaredNorm();
    peak = std::max(peak, energy[i]);
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < band.size(); ++i) {
    if (energy[i] == 0.0) continue;
    if (options.gate_db && energy[i] < peak * std::pow(10.0, *options.gate_db / 10.0)) continue;
    active.push_back(band[i]);
  }

  // Step 2: independent reconstruction per bin.
  std::vector<std::vector<Complex>> bin_grids(active.size());
  std::vector<Complex> probe_values(active.size(), Complex{});
  std::vector<std::vector<std::uint8_t>> bin_masks(active.size());
  std::vector<std::string> errors(active.size());
  const long long nactive = static_cast<long long>(active.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < nactive; ++i) {
    const std::size_t b = active[static_cast<std::size_t>(i)];
    try {
      ProjectionSet ps{data.scheme, static_cast<double>(b) * df, data.sound_speed,
                       std::vector<Complex>(static_cast<std::size_t>(chords)), {}, {}};
      for (Eigen::Index m = 0; m < chords; ++m) {
        ps.values[static_cast<std::size_t>(m)] = spectra(static_cast<Eigen::Index>(b), m);
      }
      const int order = order_for_frequency(ps.frequency, options.order_table);
      ReconstructionResult r = che_reconstruct(ps, order, default_regularization(ps), shape);
      if (options.probe) {
        const Eigen::VectorXcd& a = *r.coefficients;
        CheCoefficients coeffs(order, std::vector<Complex>(a.data(), a.data() + a.size()),
                               ps.wavenumber());
        probe_values[static_cast<std::size_t>(i)] = eval_che_field(coeffs, *options.probe);
      }
      bin_grids[static_cast<std::size_t>(i)] = std::move(r.grid.values);
      bin_masks[static_cast<std::size_t>(i)] = std::move(r.grid.valid);
    } catch (const Error& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }

  TimeDomainResult result;
  result.movie.sample_rate = data.sample_rate;
  result.movie.frame_indices = options.frames;
  std::vector<std::size_t> used;
  std::vector<std::uint8_t> valid(shape.size(), 1);
  for (std::size_t i = 0; i < active.size(); ++i) {
    const double f = static_cast<double>(active[i]) * df;
    if (!errors[i].empty()) {
      result.skipped_bins.push_back(std::to_string(f) + " Hz: " + errors[i]);
      continue;
    }
    used.push_back(i);
    result.active_frequencies.push_back(f);
    for (std::size_t p = 0; p < bin_masks[i].size(); ++p) {
      if (!bin_masks[i][p]) valid[p] = 0;
    }
  }
  const bool any_masked = std::find(valid.begin(), valid.end(), 0) != valid.end();

  // Steps 3-4: Hermitian assembly and inverse transform at the requested frames.
  const auto T = static_cast<double>(length);
  for (std::size_t frame : options.frames) {
    FieldGrid grid(shape, 0.0);
    std::vector<Complex> phase(used.size());
    for (std::size_t u = 0; u < used.size(); ++u) {
      const auto bt = static_cast<double>((active[used[u]] * frame) % length);
      phase[u] = std::polar(1.0, kTwoPi * bt / T);
    }
    double peak_value = 0.0;
    double residue = 0.0;
    for (std::size_t p = 0; p < shape.size(); ++p) {
      Complex sum{};
      for (std::size_t u = 0; u < used.size(); ++u) {
        const Complex x = bin_grids[used[u]][p];
        sum += x * phase[u] + std::conj(x) * std::conj(phase[u]);
      }
      sum /= T;
      grid.values[p] = sum.real();
      peak_value = std::max(peak_value, std::abs(sum.real()));
      residue = std::max(residue, std::abs(sum.imag()));
    }
    if (residue > 1e-9 * peak_value && residue > 1e-300) {
      throw NumericError("time domain: imaginary residue " + std::to_string(residue) +
                         " in frame " + std::to_string(frame));
    }
    if (any_masked) grid.valid = valid;
    result.movie.frames.push_back(std::move(grid));
  }

  if (options.probe) {
    std::vector<Complex> spectrum(length, Complex{});
    for (std::size_t u : used) {
      spectrum[active[u]] = probe_values[u];
      spectrum[length - active[u]] = std::conj(probe_values[u]);
    }
    result.probe_signal = idft_real(spectrum);
  }
  return result;
}

double normalized_cross_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeMismatchError("cross-correlation: length mismatch");
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw NumericError("cross-correlation: zero-energy signal");
  return ab / std::sqrt(aa * bb);
}

std::vector<std::size_t> frames_at_times(std::span<const double> times_s, double sample_rate,
                                         std::size_t length) {
  std::vector<std::size_t> frames;
  for (double t : times_s) {
    const long long idx = std::llround(t * sample_rate);
    if (idx < 0 || static_cast<std::size_t>(idx) >= length) {
      throw OutOfRangeError("frame time " + std::to_string(t) + " s outside the record");
    }
    frames.push_back(static_cast<std::size_t>(idx));
  }
  return frames;
}

}  // namespace hollowfield
