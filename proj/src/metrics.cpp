#include "hollowfield/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hollowfield/errors.hpp"

namespace hollowfield {

std::size_t AnnulusMask::count() const {
  return static_cast<std::size_t>(std::count(included.begin(), included.end(), 1));
}

AnnulusMask annulus_mask(const GridShape& shape, double r_min, double r_max) {
  if (!(r_min >= 0.0 && r_min < r_max)) {
    throw DomainError("annulus_mask: need 0 <= r_min < r_max");
  }
  shape.validate();
  AnnulusMask mask{r_min, r_max, shape, std::vector<std::uint8_t>(shape.size(), 0)};
  for (std::size_t idx = 0; idx < shape.size(); ++idx) {
    const Point2 p = shape.pixel_center(idx);
    const double r = std::hypot(p.x, p.y);
    mask.included[idx] = (r >= r_min && r <= r_max) ? 1 : 0;
  }
  return mask;
}

namespace {

void require_same_shape(const FieldGrid& a, const FieldGrid& b, const char* what) {
  if (!(a.shape == b.shape) || a.values.size() != b.values.size()) {
    throw ShapeMismatchError(std::string(what) + ": grids differ in shape or extent");
  }
}

}  // namespace

FieldGrid pixel_error_db(const FieldGrid& reconstructed, const FieldGrid& reference) {
  require_same_shape(reconstructed, reference, "pixel_error_db");
  double peak = 0.0;
  for (std::size_t i = 0; i < reference.values.size(); ++i) {
    if (reference.is_valid(i)) peak = std::max(peak, std::abs(reference.values[i]));
  }
  FieldGrid out(reference.shape, reference.frequency);
  out.valid.assign(out.values.size(), 1);
  bool any_invalid = false;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double ref = std::abs(reference.values[i]);
    if (!reference.is_valid(i) || !reconstructed.is_valid(i) || ref < kReferenceFloor * peak ||
        ref == 0.0) {
      out.valid[i] = 0;
      any_invalid = true;
      continue;
    }
    const double ratio = std::norm(reconstructed.values[i] - reference.values[i]) / (ref * ref);
    const double db = ratio > 0.0 ? 10.0 * std::log10(ratio) : -kDbClamp;
    out.values[i] = std::clamp(db, -kDbClamp, kDbClamp);
  }
  if (!any_invalid) out.valid.clear();
  return out;
}

double nmse_db(const FieldGrid& reconstructed, const FieldGrid& reference,
               const AnnulusMask& mask) {
  require_same_shape(reconstructed, reference, "nmse_db");
  if (!(mask.shape == reference.shape) || mask.included.size() != reference.values.size()) {
    throw ShapeMismatchError("nmse_db: mask does not match the grid");
  }
  double err = 0.0;
  double ref = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < reference.values.size(); ++i) {
    if (!mask.included[i] || !reference.is_valid(i) || !reconstructed.is_valid(i)) continue;
    err += std::norm(reconstructed.values[i] - reference.values[i]);
    ref += std::norm(reference.values[i]);
    ++used;
  }
  if (used == 0) throw DomainError("nmse_db: mask selects no pixels");
  if (ref == 0.0) throw NumericError("nmse_db: reference norm is zero over the mask");
  if (err == 0.0) return -kDbClamp;
  return std::max(10.0 * std::log10(err / ref), -kDbClamp);
}

}  // namespace hollowfield
