#include "hollowfield/field.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hollowfield/errors.hpp"
#include "hollowfield/geometry.hpp"
#include "hollowfield/specfun.hpp"
#include "parallel.hpp"

namespace hollowfield {

void ReferenceFieldSpec::validate() const {
  if (!(amplitude > 0.0)) throw DomainError("field spec: amplitude must be positive");
  if (!(frequency > 0.0)) throw DomainError("field spec: frequency must be positive");
  if (!(sound_speed > 0.0)) throw DomainError("field spec: sound speed must be positive");
  if (sources.empty()) throw DomainError("field spec: at least one source is required");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const double ph = sources[i].phase;
    if (!(ph >= 0.0 && ph < kTwoPi)) {
      throw DomainError("field spec: phase of source " + std::to_string(i) +
                        " outside [0, 2 pi)");
    }
  }
}

std::vector<PointSource> paper_default_sources(Point2 offset) {
  constexpr std::array<Point2, 5> kPositions{
      {{0.0, 0.0}, {-0.05, 0.0}, {0.0, -0.05}, {0.05, 0.0}, {0.0, 0.05}}};
  std::vector<PointSource> sources;
  sources.reserve(kPositions.size());
  for (std::size_t i = 0; i < kPositions.size(); ++i) {
    sources.push_back({{offset.x + kPositions[i].x, offset.y + kPositions[i].y},
                       static_cast<double>(i + 1) * kPi / 6.0});
  }
  return sources;
}

CheCoefficients::CheCoefficients(int order_, std::vector<Complex> values_, double wavenumber_)
    : order(order_), values(std::move(values_)), wavenumber(wavenumber_) {
  validate();
}

void CheCoefficients::validate() const {
  if (order < 0 || order > specfun::kMaxOrder) {
    throw DomainError("CHE order " + std::to_string(order) + " outside [0, " +
                      std::to_string(specfun::kMaxOrder) + "]");
  }
  if (values.size() != static_cast<std::size_t>(2 * order + 1)) {
    throw DomainError("CHE coefficients: expected 2N+1 = " + std::to_string(2 * order + 1) +
                      " values, got " + std::to_string(values.size()));
  }
  if (!(wavenumber > 0.0)) throw DomainError("CHE coefficients: wavenumber must be positive");
}

void GridShape::validate() const {
  if (nx < 2 || ny < 2) throw DomainError("grid: nx and ny must be at least 2");
  if (!(xmin < xmax) || !(ymin < ymax)) throw DomainError("grid: empty extent");
}

FieldGrid::FieldGrid(const GridShape& shape_, double frequency_)
    : shape(shape_), frequency(frequency_), values(shape_.size(), Complex{}) {
  shape.validate();
}

Complex eval_point_source_field(const ReferenceFieldSpec& spec, Point2 point) {
  const double k = spec.wavenumber();
  Complex sum{};
  for (const PointSource& src : spec.sources) {
    const double d = std::hypot(point.x - src.position.x, point.y - src.position.y);
    if (d < 1e-9) {
      throw SingularPointError("point-source field evaluated at a source position");
    }
    sum += std::polar(1.0 / d, src.phase - k * d);
  }
  return spec.amplitude * sum;
}

Complex eval_che_field(const CheCoefficients& coeffs, Point2 point) {
  const double k = coeffs.wavenumber;
  const double r = std::hypot(point.x, point.y);
  if (r < specfun::kMinArgument / k) {
    throw SingularPointError("CHE field evaluated inside the Hankel radius floor");
  }
  const Polar polar = polar_of(point);
  const int order = coeffs.order;
  std::array<Complex, specfun::kMaxOrder + 1> h;
  specfun::hankel2_sequence(order, k * polar.r, h);

  const Complex step = std::polar(1.0, polar.phi);
  Complex rot{1.0, 0.0};  // exp(j n phi)
  Complex sum = coeffs.at(0) * h[0];
  for (int n = 1; n <= order; ++n) {
    rot *= step;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum += coeffs.at(n) * h[n] * rot + coeffs.at(-n) * (sign * h[n]) * std::conj(rot);
  }
  return sum;
}

Complex eval_plane_wave_field(const std::vector<Complex>& weights, double wavenumber,
                              Point2 point) {
  const std::size_t count = weights.size();
  Complex sum{};
  for (std::size_t w = 0; w < count; ++w) {
    const double alpha = kTwoPi * static_cast<double>(w) / static_cast<double>(count);
    const double proj = point.x * std::cos(alpha) + point.y * std::sin(alpha);
    sum += weights[w] * std::polar(1.0, -wavenumber * proj);
  }
  return sum;
}

FieldGrid synthesize_grid(const FieldEvaluator& evaluator, const GridShape& shape,
                          double frequency) {
  FieldGrid grid(shape, frequency);
  std::vector<std::uint8_t> valid(shape.size(), 1);
  const long long rows = shape.ny;
  detail::parallel_for(rows, [&](long long j) {
    for (int i = 0; i < shape.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * shape.nx + i;
      try {
        grid.values[idx] = evaluator(shape.pixel_center(i, static_cast<int>(j)));
      } catch (const SingularPointError&) {
        grid.values[idx] = Complex{};
        valid[idx] = 0;
      }
    }
  });
  for (std::uint8_t v : valid) {
    if (v == 0) {
      grid.valid = std::move(valid);
      break;
    }
  }
  return grid;
}

}  // namespace hollowfield
