#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <unsupported/Eigen/FFT>

#include "hollowfield/errors.hpp"
#include "hollowfield/solvers.hpp"

namespace hollowfield {

double Sinogram::offset_spacing() const {
  return offsets.size() < 2 ? 0.0 : offsets[1] - offsets[0];
}

Sinogram chords_to_sinogram(const ProjectionSet& projections) {
  projections.validate();
  const SamplingScheme& scheme = projections.scheme;
  const std::vector<double>& radii = scheme.radii();
  const double r_min = radii.front();
  const double r_max = radii.back();

  Sinogram sino;
  sino.frequency = projections.frequency;

  // Angle bins: tangent angle folded into [0, 180).
  struct Sample {
    double offset;
    Complex value;
  };
  std::map<long long, std::vector<Sample>> by_angle;
  std::map<long long, double> angle_of_key;
  for (std::size_t m = 0; m < scheme.size(); ++m) {
    double deg = static_cast<double>(scheme.angle_index(m)) * scheme.angular_step_deg();
    double sign = 1.0;
    if (deg >= 180.0 - 1e-9) {
      deg -= 180.0;
      sign = -1.0;
    }
    const auto key = static_cast<long long>(std::llround(deg * 1e6));
    angle_of_key.emplace(key, deg);
    by_angle[key].push_back({sign * scheme.chord(m).circle_radius, projections.values[m]});
  }

  double spacing;
  if (radii.size() == 1) {
    spacing = 2.0 * r_max;
  } else {
    spacing = radii[1] - radii[0];
    for (std::size_t i = 2; i < radii.size(); ++i) spacing = std::min(spacing, radii[i] - radii[i - 1]);
  }
  const auto n_off = static_cast<std::size_t>(std::llround(2.0 * r_max / spacing)) + 1;
  sino.offsets.resize(n_off);
  for (std::size_t t = 0; t < n_off; ++t) sino.offsets[t] = -r_max + static_cast<double>(t) * spacing;

  sino.angles_deg.reserve(by_angle.size());
  for (const auto& [key, deg] : angle_of_key) sino.angles_deg.push_back(deg);
  const auto n_ang = static_cast<Eigen::Index>(sino.angles_deg.size());
  sino.values = Eigen::MatrixXcd::Zero(n_ang, static_cast<Eigen::Index>(n_off));
  sino.filled = decltype(sino.filled)::Zero(n_ang, static_cast<Eigen::Index>(n_off));

  const double tol = 1e-6 * spacing;
  Eigen::Index a = 0;
  for (auto& [key, samples] : by_angle) {
    std::sort(samples.begin(), samples.end(),
              [](const Sample& x, const Sample& y) { return x.offset < y.offset; });
    for (std::size_t t = 0; t < n_off; ++t) {
      const double tg = sino.offsets[t];
      if (std::abs(tg) < r_min - tol) continue;  // hollow core
      const auto upper = std::lower_bound(samples.begin(), samples.end(), tg - tol,
                                          [](const Sample& s, double v) { return s.offset < v; });
      if (upper != samples.end() && std::abs(upper->offset - tg) <= tol) {
        sino.values(a, static_cast<Eigen::Index>(t)) = upper->value;
        sino.filled(a, static_cast<Eigen::Index>(t)) = 1;
        continue;
      }
      if (upper == samples.begin() || upper == samples.end()) continue;
      const Sample& hi = *upper;
      const Sample& lo = *(upper - 1);
      if ((lo.offset < 0.0) != (hi.offset < 0.0)) continue;  // do not bridge the core
      const double w = (tg - lo.offset) / (hi.offset - lo.offset);
      sino.values(a, static_cast<Eigen::Index>(t)) = (1.0 - w) * lo.value + w * hi.value;
      sino.filled(a, static_cast<Eigen::Index>(t)) = 1;
    }
    ++a;
  }
  return sino;
}

FieldGrid fbp_reconstruct(const Sinogram& sinogram, const GridShape& shape) {
  shape.validate();
  const auto n_ang = static_cast<Eigen::Index>(sinogram.angles_deg.size());
  if (n_ang < 2) throw DomainError("fbp_reconstruct: need at least two projection angles");
  const auto n_off = static_cast<Eigen::Index>(sinogram.offsets.size());
  if (n_off < 2) throw DomainError("fbp_reconstruct: need at least two offsets");
  const double tau = sinogram.offset_spacing();
  for (Eigen::Index t = 1; t < n_off; ++t) {
    const double step = sinogram.offsets[static_cast<std::size_t>(t)] -
                        sinogram.offsets[static_cast<std::size_t>(t - 1)];
    if (std::abs(step - tau) > 1e-9 * std::abs(tau)) {
      throw DomainError("fbp_reconstruct: offsets are not uniformly spaced");
    }
  }

  Eigen::Index padded = 1;
  while (padded < 2 * n_off) padded *= 2;

  // Spatial Ram-Lak kernel, wrapped circularly.
  std::vector<Complex> kernel(static_cast<std::size_t>(padded), Complex{});
  for (Eigen::Index k = -padded / 2; k < padded / 2; ++k) {
    double h = 0.0;
    if (k == 0) {
      h = 1.0 / (4.0 * tau * tau);
    } else if (k % 2 != 0) {
      h = -1.0 / (kPi * kPi * static_cast<double>(k * k) * tau * tau);
    }
    kernel[static_cast<std::size_t>((k + padded) % padded)] = h;
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> kernel_hat;
  fft.fwd(kernel_hat, kernel);

  Eigen::MatrixXcd filtered(n_ang, n_off);
  for (Eigen::Index a = 0; a < n_ang; ++a) {
    std::vector<Complex> row(static_cast<std::size_t>(padded), Complex{});
    for (Eigen::Index t = 0; t < n_off; ++t) row[static_cast<std::size_t>(t)] = sinogram.values(a, t);
    std::vector<Complex> row_hat;
    fft.fwd(row_hat, row);
    for (std::size_t i = 0; i < row_hat.size(); ++i) row_hat[i] *= kernel_hat[i];
    std::vector<Complex> back;
    fft.inv(back, row_hat);
    for (Eigen::Index t = 0; t < n_off; ++t) filtered(a, t) = tau * back[static_cast<std::size_t>(t)];
  }

  std::vector<double> cos_a(static_cast<std::size_t>(n_ang));
  std::vector<double> sin_a(static_cast<std::size_t>(n_ang));
  for (Eigen::Index a = 0; a < n_ang; ++a) {
    const double th = degrees_to_radians(sinogram.angles_deg[static_cast<std::size_t>(a)]);
    cos_a[static_cast<std::size_t>(a)] = std::cos(th);
    sin_a[static_cast<std::size_t>(a)] = std::sin(th);
  }

  FieldGrid grid(shape, sinogram.frequency);
  const double t0 = sinogram.offsets.front();
  const double scale = kPi / static_cast<double>(n_ang);
  const long long rows = shape.ny;
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < rows; ++j) {
    for (int i = 0; i < shape.nx; ++i) {
      const Point2 p = shape.pixel_center(i, static_cast<int>(j));
      Complex sum{};
      for (Eigen::Index a = 0; a < n_ang; ++a) {
        const double t = p.x * cos_a[static_cast<std::size_t>(a)] + p.y * sin_a[static_cast<std::size_t>(a)];
        const double u = (t - t0) / tau;
        if (u < 0.0 || u > static_cast<double>(n_off - 1)) continue;
        const auto lo = std::min(static_cast<Eigen::Index>(u), n_off - 2);
        const double w = u - static_cast<double>(lo);
        sum += (1.0 - w) * filtered(a, lo) + w * filtered(a, lo + 1);
      }
      grid.at(i, static_cast<int>(j)) = scale * sum;
    }
  }
  return grid;
}

}  // namespace hollowfield
