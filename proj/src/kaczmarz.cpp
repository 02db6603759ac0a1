#include <algorithm>
#include <cmath>
#include <string>

#include "hollowfield/errors.hpp"
#include "hollowfield/solvers.hpp"

namespace hollowfield {

KaczmarzResult kaczmarz_art(std::span<const SparseRow> rows, std::size_t unknowns,
                            double relaxation, int sweeps) {
  if (!(relaxation > 0.0 && relaxation < 2.0)) {
    throw DomainError("kaczmarz_art: relaxation must lie in (0, 2)");
  }
  if (sweeps < 1) throw DomainError("kaczmarz_art: need at least one sweep");

  std::vector<double> norm_sq(rows.size(), 0.0);
  KaczmarzResult result;
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const SparseRow& row = rows[m];
    if (row.index.size() != row.weight.size()) {
      throw ShapeMismatchError("kaczmarz_art: row index/weight length mismatch");
    }
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      if (row.index[k] < 0 || static_cast<std::size_t>(row.index[k]) >= unknowns) {
        throw OutOfRangeError("kaczmarz_art: row references unknown " +
                              std::to_string(row.index[k]));
      }
      norm_sq[m] += row.weight[k] * row.weight[k];
    }
    if (norm_sq[m] == 0.0) ++result.skipped_rows;
  }

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(unknowns));
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t m = 0; m < rows.size(); ++m) {
      if (norm_sq[m] == 0.0) continue;
      const SparseRow& row = rows[m];
      Complex dot{};
      for (std::size_t k = 0; k < row.index.size(); ++k) dot += row.weight[k] * x(row.index[k]);
      const Complex step = relaxation * (row.value - dot) / norm_sq[m];
      for (std::size_t k = 0; k < row.index.size(); ++k) x(row.index[k]) += step * row.weight[k];
    }
  }
  result.sweeps = sweeps;
  result.solution = std::move(x);
  return result;
}

SparseRow chord_pixel_row(const TangentChord& chord, const GridShape& shape) {
  SparseRow row;
  const Point2 a = chord_point(chord, -chord.half_length);
  const Point2 b = chord_point(chord, chord.half_length);
  const double ddx = b.x - a.x;
  const double ddy = b.y - a.y;
  const double length = std::hypot(ddx, ddy);

  // Liang-Barsky clip of a + t (b - a), t in [0, 1], to the grid box.
  double t0 = 0.0;
  double t1 = 1.0;
  const auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double t = q / p;
    if (p < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    return t0 < t1;
  };
  if (!clip(-ddx, a.x - shape.xmin) || !clip(ddx, shape.xmax - a.x) ||
      !clip(-ddy, a.y - shape.ymin) || !clip(ddy, shape.ymax - a.y)) {
    return row;
  }

  std::vector<double> cuts{t0, t1};
  if (ddx != 0.0) {
    for (int i = 0; i <= shape.nx; ++i) {
      const double t = (shape.xmin + i * shape.dx() - a.x) / ddx;
      if (t > t0 && t < t1) cuts.push_back(t);
    }
  }
  if (ddy != 0.0) {
    for (int j = 0; j <= shape.ny; ++j) {
      const double t = (shape.ymin + j * shape.dy() - a.y) / ddy;
      if (t > t0 && t < t1) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double seg = (cuts[k + 1] - cuts[k]) * length;
    if (seg <= 1e-15 * length) continue;
    const double tm = 0.5 * (cuts[k] + cuts[k + 1]);
    const double xm = a.x + tm * ddx;
    const double ym = a.y + tm * ddy;
    const int i = std::clamp(static_cast<int>(std::floor((xm - shape.xmin) / shape.dx())), 0,
                             shape.nx - 1);
    const int j = std::clamp(static_cast<int>(std::floor((ym - shape.ymin) / shape.dy())), 0,
                             shape.ny - 1);
    const auto idx = static_cast<std::int32_t>(j * shape.nx + i);
    if (!row.index.empty() && row.index.back() == idx) {
      row.weight.back() += seg;
    } else {
      row.index.push_back(idx);
      row.weight.push_back(seg);
    }
  }
  return row;
}

}  // namespace hollowfield
