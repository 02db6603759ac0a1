#include <catch_amalgamated.hpp>

#include <cmath>

#include "hollowfield/errors.hpp"
#include "hollowfield/metrics.hpp"

using namespace hollowfield;

namespace {

FieldGrid ramp(const GridShape& shape) {
  FieldGrid g(shape, 1000.0);
  for (std::size_t i = 0; i < shape.size(); ++i) g.values[i] = Complex(1.0 + i, 0.5 * i);
  return g;
}

}  // namespace

TEST_CASE("annulus mask") {
  const GridShape shape;
  const AnnulusMask all = annulus_mask(shape, 0.0, 1e9);
  CHECK(all.count() == shape.size());

  const AnnulusMask ring = annulus_mask(shape, 0.3, 0.6);
  std::size_t brute = 0;
  for (int j = 0; j < shape.ny; ++j)
    for (int i = 0; i < shape.nx; ++i) {
      const Point2 p = shape.pixel_center(i, j);
      const double r = std::sqrt(p.x * p.x + p.y * p.y);
      if (r >= 0.3 && r <= 0.6) ++brute;
    }
  CHECK(ring.count() == brute);
  CHECK(brute > 0);

  CHECK_THROWS_AS(annulus_mask(shape, 0.5, 0.4), DomainError);
  CHECK_THROWS_AS(annulus_mask(shape, -0.1, 0.4), DomainError);

  const GridShape coarse{4, 4, -1.0, 1.0, -1.0, 1.0};
  const AnnulusMask empty = annulus_mask(coarse, 0.2, 0.2 + 1e-9);
  CHECK(empty.count() == 0);
  const FieldGrid g = ramp(coarse);
  CHECK_THROWS_AS(nmse_db(g, g, empty), DomainError);
}

TEST_CASE("pixel error map") {
  const GridShape shape{5, 4, 0.0, 1.0, 0.0, 1.0};
  const FieldGrid p = ramp(shape);
  FieldGrid same = pixel_error_db(p, p);
  for (const Complex& v : same.values) CHECK(v.real() == -kDbClamp);

  FieldGrid zero(shape, 1000.0);
  for (const Complex& v : pixel_error_db(zero, p).values) CHECK(v.real() == Catch::Approx(0.0).margin(1e-12));

  FieldGrid scaled = p;
  for (Complex& v : scaled.values) v *= 1.1;
  for (const Complex& v : pixel_error_db(scaled, p).values) CHECK(v.real() == Catch::Approx(-20.0).epsilon(1e-9));

  FieldGrid with_zero = p;
  with_zero.values[3] = Complex{};
  const FieldGrid e = pixel_error_db(p, with_zero);
  REQUIRE(e.has_mask());
  CHECK_FALSE(e.is_valid(3));
  CHECK(e.is_valid(2));

  const FieldGrid other(GridShape{4, 4, 0.0, 1.0, 0.0, 1.0}, 1000.0);
  CHECK_THROWS_AS(pixel_error_db(other, p), ShapeMismatchError);
}

TEST_CASE("NMSE") {
  const GridShape shape{9, 9, -1.0, 1.0, -1.0, 1.0};
  const AnnulusMask mask = annulus_mask(shape, 0.0, 10.0);
  const FieldGrid p = ramp(shape);
  CHECK(nmse_db(p, p, mask) == -kDbClamp);
  const FieldGrid zero(shape, 1000.0);
  CHECK(nmse_db(zero, p, mask) == Catch::Approx(0.0).margin(1e-12));
  FieldGrid doubled = p;
  for (Complex& v : doubled.values) v *= 2.0;
  CHECK(nmse_db(doubled, p, mask) == Catch::Approx(0.0).margin(1e-12));

  FieldGrid off = p;
  off.values[0] += Complex(3.0, 4.0);
  double ref = 0.0;
  for (const Complex& v : p.values) ref += std::norm(v);
  CHECK(nmse_db(off, p, mask) == Catch::Approx(20.0 * std::log10(5.0 / std::sqrt(ref))));

  // A masked reference pixel is excluded from both norms.
  FieldGrid masked = p;
  masked.valid.assign(shape.size(), 1);
  masked.valid[0] = 0;
  CHECK(nmse_db(off, masked, mask) == -kDbClamp);

  CHECK_THROWS_AS(nmse_db(p, zero, mask), NumericError);
  CHECK_THROWS_AS(nmse_db(p, p, annulus_mask(GridShape{}, 0.3, 0.6)), ShapeMismatchError);
}
