#include "hollowfield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hollowfield/errors.hpp"

namespace hollowfield {

Point2 chord_point(const TangentChord& chord, double l) {
  if (std::abs(l) > chord.half_length * (1.0 + 1e-12)) {
    throw OutOfRangeError("chord_point: |l| = " + std::to_string(std::abs(l)) +
                          " exceeds half length " + std::to_string(chord.half_length));
  }
  const double c = std::cos(chord.tangent_angle);
  const double s = std::sin(chord.tangent_angle);
  return {chord.circle_radius * c - l * s, chord.circle_radius * s + l * c};
}

Polar polar_of(Point2 p) {
  if (p.x == 0.0 && p.y == 0.0) {
    throw SingularPointError("polar_of: point is the origin");
  }
  double phi = std::atan2(p.y, p.x);
  if (phi == -kPi) phi = kPi;
  return {std::hypot(p.x, p.y), phi};
}

SamplingScheme SamplingScheme::build(std::vector<double> radii, double angular_step_deg,
                                     double chord_half_length) {
  if (radii.empty()) throw InvalidSchemeError("sampling scheme: no radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) {
      throw InvalidSchemeError("sampling scheme: radius " + std::to_string(i) +
                               " is not strictly positive");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw InvalidSchemeError("sampling scheme: radii must be strictly increasing");
    }
  }
  if (!(angular_step_deg > 0.0) || angular_step_deg > 360.0) {
    throw InvalidSchemeError("sampling scheme: angular step must lie in (0, 360]");
  }
  const double ratio = 360.0 / angular_step_deg;
  const double count = std::round(ratio);
  if (std::abs(ratio - count) > 1e-9 * ratio) {
    throw InvalidSchemeError("sampling scheme: angular step " + std::to_string(angular_step_deg) +
                             " does not divide 360");
  }
  if (!(chord_half_length > 0.0) || !std::isfinite(chord_half_length)) {
    throw InvalidSchemeError("sampling scheme: chord half length must be positive");
  }

  SamplingScheme scheme;
  scheme.radii_ = std::move(radii);
  scheme.angular_step_deg_ = angular_step_deg;
  scheme.chord_half_length_ = chord_half_length;
  scheme.chords_per_circle_ = static_cast<std::size_t>(count);
  scheme.chords_.reserve(scheme.radii_.size() * scheme.chords_per_circle_);
  for (double r : scheme.radii_) {
    for (std::size_t j = 0; j < scheme.chords_per_circle_; ++j) {
      const double angle = degrees_to_radians(static_cast<double>(j) * angular_step_deg);
      scheme.chords_.push_back({r, angle, chord_half_length});
    }
  }
  return scheme;
}

SamplingScheme SamplingScheme::uniform(double first_radius, double radius_step, std::size_t count,
                                       double angular_step_deg, double chord_half_length) {
  std::vector<double> radii(count);
  for (std::size_t i = 0; i < count; ++i) {
    radii[i] = first_radius + radius_step * static_cast<double>(i);
  }
  return build(std::move(radii), angular_step_deg, chord_half_length);
}

SamplingScheme SamplingScheme::paper_default() { return uniform(0.30, 0.01, 31, 5.0); }

bool SamplingScheme::operator==(const SamplingScheme& other) const {
  return radii_ == other.radii_ && angular_step_deg_ == other.angular_step_deg_ &&
         chord_half_length_ == other.chord_half_length_;
}

GaussLegendreRule gauss_legendre(int points) {
  if (points < 1) throw DomainError("gauss_legendre: need at least one point");
  GaussLegendreRule rule;
  rule.abscissae.resize(points);
  rule.weights.resize(points);
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= points; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = points * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.abscissae[i] = -z;
    rule.abscissae[points - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[points - 1 - i] = w;
  }
  return rule;
}

PanelLayout panel_layout(double half_length, double wavelength, int nodes_per_wavelength,
                         int points_per_panel) {
  if (!(wavelength > 0.0)) throw DomainError("panel_layout: wavelength must be positive");
  if (nodes_per_wavelength < 2) {
    throw DomainError("panel_layout: nodes_per_wavelength must be at least 2");
  }
  if (!(half_length > 0.0)) throw DomainError("panel_layout: half length must be positive");

  const double max_width = wavelength / nodes_per_wavelength;
  PanelLayout layout;
  layout.panels = static_cast<std::size_t>(std::ceil(2.0 * half_length / max_width));
  layout.points_per_panel = points_per_panel;
  const GaussLegendreRule rule = gauss_legendre(points_per_panel);
  const double width = 2.0 * half_length / static_cast<double>(layout.panels);
  layout.arc.reserve(layout.panels * points_per_panel);
  layout.weight.reserve(layout.panels * points_per_panel);
  for (std::size_t p = 0; p < layout.panels; ++p) {
    const double centre = -half_length + (static_cast<double>(p) + 0.5) * width;
    for (int q = 0; q < points_per_panel; ++q) {
      layout.arc.push_back(centre + 0.5 * width * rule.abscissae[q]);
      layout.weight.push_back(0.5 * width * rule.weights[q]);
    }
  }
  return layout;
}

ChordQuadrature quadrature_nodes(const TangentChord& chord, double wavelength,
                                 int nodes_per_wavelength, int points_per_panel) {
  const PanelLayout layout =
      panel_layout(chord.half_length, wavelength, nodes_per_wavelength, points_per_panel);
  ChordQuadrature quad;
  quad.nodes.reserve(layout.arc.size());
  for (std::size_t i = 0; i < layout.arc.size(); ++i) {
    const double l = std::clamp(layout.arc[i], -chord.half_length, chord.half_length);
    quad.nodes.push_back({chord_point(chord, l), l, layout.weight[i]});
    quad.total_weight += layout.weight[i];
  }
  return quad;
}

}  // namespace hollowfield
