#pragma once

#include <cstdint>
#include <vector>

#include "hollowfield/field.hpp"

namespace hollowfield {

inline constexpr double kDbClamp = 300.0;
inline constexpr double kReferenceFloor = 1e-12;

struct AnnulusMask {
  double r_min = 0.0;
  double r_max = 0.0;
  GridShape shape;
  std::vector<std::uint8_t> included;

  std::size_t count() const;
};

AnnulusMask annulus_mask(const GridShape& shape, double r_min, double r_max);

/// 10 log10(|p~ - p|^2 / |p|^2) per pixel, clamped to [-300, 300]. Pixels where
/// |p| < 1e-12 max|p| or either grid is masked are zero and flagged invalid.
FieldGrid pixel_error_db(const FieldGrid& reconstructed, const FieldGrid& reference);

/// 20 log10(||p~ - p|| / ||p||) over the mask, floored at -300 dB. Masked-out
/// pixels of either grid are excluded.
double nmse_db(const FieldGrid& reconstructed, const FieldGrid& reference,
               const AnnulusMask& mask);

}  // namespace hollowfield
