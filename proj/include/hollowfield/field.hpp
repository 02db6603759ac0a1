#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hollowfield/types.hpp"

namespace hollowfield {

inline constexpr double kDefaultSoundSpeed = 343.0;

/// Monochromatic point source; phase in [0, 2 pi).
struct PointSource {
  Point2 position;
  double phase = 0.0;
};

/// Superposition of point sources
///   p(r) = A sum_i exp(j (theta_i - k |r - r_i|)) / |r - r_i|
/// (outgoing waves under the exp(j omega t) convention used throughout).
struct ReferenceFieldSpec {
  double amplitude = 1.0;
  std::vector<PointSource> sources;
  double frequency = 1000.0;
  double sound_speed = kDefaultSoundSpeed;

  double wavenumber() const { return kTwoPi * frequency / sound_speed; }
  /// Throws DomainError naming the offending field.
  void validate() const;
};

/// Five-source cluster (centre plus four 5 cm satellites, phases pi/6 .. 5 pi/6)
/// translated by `offset`.
std::vector<PointSource> paper_default_sources(Point2 offset = {});

/// Coefficients a_{-N..N}; values[n + N] holds a_n.
struct CheCoefficients {
  int order = 0;
  std::vector<Complex> values;
  double wavenumber = 1.0;

  CheCoefficients() = default;
  CheCoefficients(int order, std::vector<Complex> values, double wavenumber);

  Complex at(int n) const { return values[static_cast<std::size_t>(n + order)]; }
  Complex& at(int n) { return values[static_cast<std::size_t>(n + order)]; }
  void validate() const;
};

/// Regular Cartesian grid: pixel (i, j) is centred at
/// (xmin + (i + 1/2) dx, ymin + (j + 1/2) dy), stored row-major with x fastest.
struct GridShape {
  int nx = 141;
  int ny = 141;
  double xmin = -0.7;
  double xmax = 0.7;
  double ymin = -0.7;
  double ymax = 0.7;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double dx() const { return (xmax - xmin) / nx; }
  double dy() const { return (ymax - ymin) / ny; }
  Point2 pixel_center(int i, int j) const {
    return {xmin + (i + 0.5) * dx(), ymin + (j + 0.5) * dy()};
  }
  Point2 pixel_center(std::size_t index) const {
    return pixel_center(static_cast<int>(index % static_cast<std::size_t>(nx)),
                        static_cast<int>(index / static_cast<std::size_t>(nx)));
  }
  void validate() const;
  bool operator==(const GridShape&) const = default;
};

/// Complex pressure on a grid at one frequency. `valid` is either empty (all
/// pixels valid) or holds one 0/1 flag per pixel.
struct FieldGrid {
  GridShape shape;
  double frequency = 0.0;
  std::vector<Complex> values;
  std::vector<std::uint8_t> valid;

  FieldGrid() = default;
  FieldGrid(const GridShape& shape, double frequency);

  bool has_mask() const { return !valid.empty(); }
  bool is_valid(std::size_t index) const { return valid.empty() || valid[index] != 0; }
  Complex& at(int i, int j) { return values[static_cast<std::size_t>(j) * shape.nx + i]; }
  const Complex& at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * shape.nx + i];
  }
};

using FieldEvaluator = std::function<Complex(Point2)>;

Complex eval_point_source_field(const ReferenceFieldSpec& spec, Point2 point);

/// Truncated circular harmonic sum; throws SingularPointError when the point
/// lies inside the radius floor 1e-3 / k.
Complex eval_che_field(const CheCoefficients& coeffs, Point2 point);

/// Plane-wave sum with directions alpha_w = 2 pi w / W:
///   p = sum_w b_w exp(-j k (x cos alpha_w + y sin alpha_w)).
Complex eval_plane_wave_field(const std::vector<Complex>& weights, double wavenumber, Point2 point);

/// Evaluates at every pixel centre. Pixels where the evaluator throws
/// SingularPointError become zero and are flagged invalid; the mask is only
/// attached when at least one pixel was rejected.
FieldGrid synthesize_grid(const FieldEvaluator& evaluator, const GridShape& shape,
                          double frequency);

}  // namespace hollowfield
