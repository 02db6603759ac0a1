#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hollowfield/errors.hpp"
#include "hollowfield/geometry.hpp"
#include "oracles.hpp"

using namespace hollowfield;

TEST_CASE("scheme sizes") {
  const SamplingScheme paper = SamplingScheme::paper_default();
  CHECK(paper.size() == 2232);
  CHECK(paper.radii().size() == 31);
  CHECK(paper.chords_per_circle() == 72);
  CHECK(paper.radii().front() == Catch::Approx(0.30));
  CHECK(paper.radii().back() == Catch::Approx(0.60));
  CHECK(paper == SamplingScheme::uniform(0.30, 0.01, 31, 5.0, 1.5));

  CHECK(SamplingScheme::build({0.3}, 5.0, 1.5).size() == 72);

  const SamplingScheme three = SamplingScheme::build({0.3}, 120.0, 1.0);
  REQUIRE(three.size() == 3);
  CHECK(three.chord(0).tangent_angle == Catch::Approx(0.0).margin(1e-15));
  CHECK(three.chord(1).tangent_angle == Catch::Approx(degrees_to_radians(120.0)));
  CHECK(three.chord(2).tangent_angle == Catch::Approx(degrees_to_radians(240.0)));
  CHECK(three.chord(2).half_length == 1.0);
}

TEST_CASE("scheme ordering is circle-major") {
  const SamplingScheme s = SamplingScheme::build({0.3, 0.4}, 90.0, 1.5);
  REQUIRE(s.size() == 8);
  for (std::size_t m = 0; m < s.size(); ++m) {
    CHECK(s.chord(m).circle_radius == s.radii()[s.circle_index(m)]);
    CHECK(s.chord(m).tangent_angle ==
          Catch::Approx(degrees_to_radians(90.0 * s.angle_index(m))).margin(1e-15));
  }
}

TEST_CASE("invalid schemes") {
  CHECK_THROWS_AS(SamplingScheme::build({}, 5.0, 1.5), InvalidSchemeError);
  CHECK_THROWS_AS(SamplingScheme::build({0.0}, 5.0, 1.5), InvalidSchemeError);
  CHECK_THROWS_AS(SamplingScheme::build({0.4, 0.3}, 5.0, 1.5), InvalidSchemeError);
  CHECK_THROWS_AS(SamplingScheme::build({0.3}, 7.0, 1.5), InvalidSchemeError);
  CHECK_THROWS_AS(SamplingScheme::build({0.3}, 0.0, 1.5), InvalidSchemeError);
  CHECK_THROWS_AS(SamplingScheme::build({0.3}, 5.0, 0.0), InvalidSchemeError);
}

TEST_CASE("chord points") {
  const TangentChord a{0.3, 0.0, 1.5};
  Point2 p = chord_point(a, 0.0);
  CHECK(p.x == Catch::Approx(0.3));
  CHECK(p.y == Catch::Approx(0.0).margin(1e-15));

  p = chord_point(a, 0.4);
  CHECK(p.x == Catch::Approx(0.3));
  CHECK(p.y == Catch::Approx(0.4));
  CHECK(polar_of(p).r == Catch::Approx(0.5).epsilon(1e-15));

  const TangentChord b{0.4, kPi / 2.0, 1.5};
  p = chord_point(b, -0.4);
  CHECK(p.x == Catch::Approx(0.4));
  CHECK(p.y == Catch::Approx(0.4));

  CHECK_THROWS_AS(chord_point(a, 1.6), OutOfRangeError);
  CHECK_NOTHROW(chord_point(a, -1.5));
}

TEST_CASE("every chord point stays outside its circle") {
  const SamplingScheme s = SamplingScheme::build({0.3, 0.45}, 15.0, 1.5);
  for (const TangentChord& c : s.chords()) {
    for (double l = -1.5; l <= 1.5; l += 0.01) {
      CHECK(polar_of(chord_point(c, l)).r >= c.circle_radius * (1.0 - 1e-14));
    }
  }
}

TEST_CASE("polar coordinates") {
  Polar q = polar_of({0.3, 0.0});
  CHECK(q.r == Catch::Approx(0.3));
  CHECK(q.phi == 0.0);
  q = polar_of({0.0, -2.0});
  CHECK(q.r == Catch::Approx(2.0));
  CHECK(q.phi == Catch::Approx(-kPi / 2.0));
  q = polar_of({-1.0, 0.0});
  CHECK(q.phi == kPi);
  q = polar_of({-1.0, -0.0});
  CHECK(q.phi == kPi);
  CHECK_THROWS_AS(polar_of({0.0, 0.0}), SingularPointError);
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int points : {1, 2, 3, 5, 8, 12}) {
    const GaussLegendreRule rule = gauss_legendre(points);
    REQUIRE(rule.abscissae.size() == static_cast<std::size_t>(points));
    for (int degree = 0; degree <= 2 * points - 1; ++degree) {
      double sum = 0.0;
      for (int i = 0; i < points; ++i) sum += rule.weights[i] * std::pow(rule.abscissae[i], degree);
      const double exact = (degree % 2 == 1) ? 0.0 : 2.0 / (degree + 1);
      CHECK(std::abs(sum - exact) <= 1e-14);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("panel layout") {
  const PanelLayout layout = panel_layout(1.5, 0.343, 8);
  CHECK(layout.panels == static_cast<std::size_t>(std::ceil(3.0 / (0.343 / 8))));
  CHECK(layout.arc.size() == layout.panels * 5);
  double total = 0.0;
  for (double w : layout.weight) total += w;
  CHECK(total == Catch::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(panel_layout(1.5, 0.0, 8), DomainError);
  CHECK_THROWS_AS(panel_layout(1.5, 0.343, 1), DomainError);
}

TEST_CASE("chord quadrature") {
  const TangentChord c{0.3, 0.7, 1.5};
  const ChordQuadrature q = quadrature_nodes(c, 0.343, 8);
  CHECK(q.total_weight == Catch::Approx(3.0).epsilon(1e-14));

  double odd = 0.0;
  for (const QuadratureNode& n : q.nodes) odd += n.weight * n.arc_parameter;
  CHECK(std::abs(odd) <= 1e-12);

  const double lambda = 0.343;
  oracle::cplx sum{};
  for (const QuadratureNode& n : q.nodes) sum += n.weight * std::cos(kTwoPi * n.arc_parameter / lambda);
  const oracle::cplx ref = oracle::romberg(
      [&](double l) { return oracle::cplx(std::cos(kTwoPi * l / lambda), 0.0); }, -1.5, 1.5, 16);
  CHECK(std::abs(sum - ref) <= 1e-9 * std::abs(ref));

  for (const QuadratureNode& n : q.nodes) {
    const Point2 p = chord_point(c, n.arc_parameter);
    CHECK(n.point.x == p.x);
    CHECK(n.point.y == p.y);
  }
}
