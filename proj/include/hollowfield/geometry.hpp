#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hollowfield/types.hpp"

namespace hollowfield {

/// One measurement path: the segment tangent to the circle of radius
/// `circle_radius` at polar angle `tangent_angle`, extending `half_length`
/// to either side of the tangency point.
struct TangentChord {
  double circle_radius = 0.0;
  double tangent_angle = 0.0;
  double half_length = 0.0;
};

/// Point at signed arc parameter `l` along the chord: p0 + l d with
/// p0 = R (cos t, sin t) and d = (-sin t, cos t).
Point2 chord_point(const TangentChord& chord, double l);

/// Polar coordinates with phi on (-pi, pi]; throws SingularPointError at the origin.
Polar polar_of(Point2 p);

/// Concentric-circle measurement layout. Chords are stored circle-major with
/// tangent angles j * angular_step, j = 0 .. 360/angular_step - 1.
class SamplingScheme {
 public:
  static constexpr double kDefaultHalfLength = 1.5;

  static SamplingScheme build(std::vector<double> radii, double angular_step_deg,
                              double chord_half_length = kDefaultHalfLength);

  /// radii = start, start + step, ... (count entries).
  static SamplingScheme uniform(double first_radius, double radius_step, std::size_t count,
                                double angular_step_deg,
                                double chord_half_length = kDefaultHalfLength);

  /// The 31 x 72 layout: radii 0.30 .. 0.60 m in 1 cm steps, 5 degree rotation.
  static SamplingScheme paper_default();

  const std::vector<double>& radii() const { return radii_; }
  double angular_step_deg() const { return angular_step_deg_; }
  double chord_half_length() const { return chord_half_length_; }
  std::size_t chords_per_circle() const { return chords_per_circle_; }
  std::size_t size() const { return chords_.size(); }
  std::span<const TangentChord> chords() const { return chords_; }
  const TangentChord& chord(std::size_t m) const { return chords_[m]; }

  /// Angle index j of chord m within its circle.
  std::size_t angle_index(std::size_t m) const { return m % chords_per_circle_; }
  std::size_t circle_index(std::size_t m) const { return m / chords_per_circle_; }

  bool operator==(const SamplingScheme& other) const;

 private:
  SamplingScheme() = default;

  std::vector<double> radii_;
  double angular_step_deg_ = 0.0;
  double chord_half_length_ = 0.0;
  std::size_t chords_per_circle_ = 0;
  std::vector<TangentChord> chords_;
};

struct QuadratureNode {
  Point2 point;
  double arc_parameter = 0.0;
  double weight = 0.0;
};

struct ChordQuadrature {
  std::vector<QuadratureNode> nodes;
  double total_weight = 0.0;
};

/// Gauss-Legendre abscissae and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> abscissae;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int points);

/// Panel layout shared by every chord integral: ceil(2 h / (wavelength / npw))
/// equal panels with `points_per_panel` Gauss-Legendre nodes each.
struct PanelLayout {
  std::size_t panels = 0;
  int points_per_panel = 0;
  /// Arc parameters and weights of all nodes, panel-major.
  std::vector<double> arc;
  std::vector<double> weight;
};

inline constexpr int kDefaultNodesPerWavelength = 8;
inline constexpr int kDefaultPointsPerPanel = 5;

PanelLayout panel_layout(double half_length, double wavelength, int nodes_per_wavelength,
                         int points_per_panel = kDefaultPointsPerPanel);

ChordQuadrature quadrature_nodes(const TangentChord& chord, double wavelength,
                                 int nodes_per_wavelength,
                                 int points_per_panel = kDefaultPointsPerPanel);

}  // namespace hollowfield
