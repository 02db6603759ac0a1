#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hollowfield/field.hpp"
#include "hollowfield/projection.hpp"
#include "hollowfield/reconstruct.hpp"
#include "hollowfield/timedomain.hpp"

namespace hollowfield::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// Shortest text with 17 significant digits, '.' separator, locale independent.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Text grid: '#' header lines (nx, ny, extent, frequency_hz, mask), then one
/// `re,im` (or `re,im,valid` when masked) line per pixel, x fastest.
void write_grid(const fs::path& path, const FieldGrid& grid);
FieldGrid read_grid(const fs::path& path);

json scheme_to_json(const SamplingScheme& scheme);
SamplingScheme scheme_from_json(const json& j);

/// CSV `circle_radius_m,angle_deg,re,im` plus a JSON sidecar with frequency,
/// sound speed, scheme and optional noise settings.
void write_projections(const fs::path& csv, const fs::path& sidecar, const ProjectionSet& set);
ProjectionSet read_projections(const fs::path& csv, const fs::path& sidecar);

json diagnostics_to_json(const ReconstructionResult& result);

/// Directory of frame_<index>.grid files plus manifest.json.
void write_movie(const fs::path& dir, const FieldMovie& movie);

enum class Channel { Magnitude, Phase, ErrorDb };
Channel parse_channel(std::string_view name);

/// Binary PGM (P5, maxval 65535, big-endian samples) mapping [lo, hi] linearly
/// onto [0, 65535]; rows are written top (max y) first. Masked pixels are 0.
void write_pgm(const fs::path& path, const FieldGrid& grid, Channel channel, double lo, double hi);

/// Writes text atomically enough for our purposes; throws IoError on failure.
void write_text(const fs::path& path, std::string_view text);
std::string read_text(const fs::path& path);

/// Pretty JSON with a trailing newline; non-finite numbers become null.
std::string dump_json(const json& j);

}  // namespace hollowfield::io
