#include "hollowfield/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hollowfield/errors.hpp"

namespace hollowfield::io {

std::string format_double(double value) {
  if (!std::isfinite(value)) throw NumericError("cannot format non-finite value");
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw IoError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

void write_grid(const fs::path& path, const FieldGrid& grid) {
  const GridShape& s = grid.shape;
  std::string out;
  out.reserve(grid.values.size() * 48 + 256);
  out += "# hollowfield grid\n";
  out += "# nx " + std::to_string(s.nx) + "\n";
  out += "# ny " + std::to_string(s.ny) + "\n";
  out += "# extent " + format_double(s.xmin) + " " + format_double(s.xmax) + " " +
         format_double(s.ymin) + " " + format_double(s.ymax) + "\n";
  out += "# frequency_hz " + format_double(grid.frequency) + "\n";
  out += std::string("# mask ") + (grid.has_mask() ? "1" : "0") + "\n";
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    out += format_double(grid.values[i].real());
    out += ',';
    out += format_double(grid.values[i].imag());
    if (grid.has_mask()) out += grid.valid[i] ? ",1" : ",0";
    out += '\n';
  }
  write_text(path, out);
}

FieldGrid read_grid(const fs::path& path) {
  const std::string text = read_text(path);
  GridShape shape;
  double frequency = 0.0;
  bool masked = false;
  std::vector<std::string_view> rows;
  for (std::string_view line : lines_of(text)) {
    if (line.front() != '#') {
      rows.push_back(line);
      continue;
    }
    line.remove_prefix(1);
    std::vector<std::string_view> tok;
    for (std::string_view t : split(line, ' ')) {
      if (!t.empty()) tok.push_back(t);
    }
    if (tok.size() < 2) continue;
    if (tok[0] == "nx") shape.nx = static_cast<int>(parse_double(tok[1]));
    else if (tok[0] == "ny") shape.ny = static_cast<int>(parse_double(tok[1]));
    else if (tok[0] == "frequency_hz") frequency = parse_double(tok[1]);
    else if (tok[0] == "mask") masked = tok[1] == "1";
    else if (tok[0] == "extent") {
      if (tok.size() != 5) throw IoError(path.string() + ": extent needs four numbers");
      shape.xmin = parse_double(tok[1]);
      shape.xmax = parse_double(tok[2]);
      shape.ymin = parse_double(tok[3]);
      shape.ymax = parse_double(tok[4]);
    }
  }
  try {
    shape.validate();
  } catch (const DomainError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (rows.size() != shape.size()) {
    throw IoError(path.string() + ": expected " + std::to_string(shape.size()) +
                  " pixel rows, found " + std::to_string(rows.size()));
  }
  FieldGrid grid(shape, frequency);
  if (masked) grid.valid.assign(shape.size(), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto parts = split(rows[i], ',');
    if (parts.size() != (masked ? 3u : 2u)) {
      throw IoError(path.string() + ": malformed pixel row " + std::to_string(i));
    }
    grid.values[i] = Complex(parse_double(parts[0]), parse_double(parts[1]));
    if (masked) grid.valid[i] = parts[2] == "1" ? 1 : 0;
  }
  return grid;
}

json scheme_to_json(const SamplingScheme& scheme) {
  return json{{"radii_m", scheme.radii()},
              {"angular_step_deg", scheme.angular_step_deg()},
              {"chord_half_length_m", scheme.chord_half_length()}};
}

SamplingScheme scheme_from_json(const json& j) {
  try {
    return SamplingScheme::build(j.at("radii_m").get<std::vector<double>>(),
                                 j.at("angular_step_deg").get<double>(),
                                 j.value("chord_half_length_m", SamplingScheme::kDefaultHalfLength));
  } catch (const json::exception& e) {
    throw IoError(std::string("scheme JSON: ") + e.what());
  }
}

void write_projections(const fs::path& csv, const fs::path& sidecar, const ProjectionSet& set) {
  set.validate();
  std::string out = "circle_radius_m,angle_deg,re,im\n";
  const SamplingScheme& scheme = set.scheme;
  for (std::size_t m = 0; m < scheme.size(); ++m) {
    out += format_double(scheme.chord(m).circle_radius) + "," +
           format_double(static_cast<double>(scheme.angle_index(m)) * scheme.angular_step_deg()) +
           "," + format_double(set.values[m].real()) + "," + format_double(set.values[m].imag()) +
           "\n";
  }
  write_text(csv, out);

  json meta{{"frequency_hz", set.frequency},
            {"sound_speed_mps", set.sound_speed},
            {"scheme", scheme_to_json(scheme)}};
  if (set.snr_db) meta["snr_db"] = *set.snr_db;
  if (set.seed) meta["seed"] = *set.seed;
  write_text(sidecar, dump_json(meta));
}

ProjectionSet read_projections(const fs::path& csv, const fs::path& sidecar) {
  json meta;
  try {
    meta = json::parse(read_text(sidecar));
  } catch (const json::exception& e) {
    throw IoError(sidecar.string() + ": " + e.what());
  }
  ProjectionSet set{scheme_from_json(meta.at("scheme")), 0.0, kDefaultSoundSpeed, {}, {}, {}};
  try {
    set.frequency = meta.at("frequency_hz").get<double>();
    set.sound_speed = meta.value("sound_speed_mps", kDefaultSoundSpeed);
    if (meta.contains("snr_db") && !meta["snr_db"].is_null()) set.snr_db = meta["snr_db"].get<double>();
    if (meta.contains("seed") && !meta["seed"].is_null()) set.seed = meta["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw IoError(sidecar.string() + ": " + e.what());
  }

  const std::string text = read_text(csv);
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != "circle_radius_m,angle_deg,re,im") {
    throw IoError(csv.string() + ": missing header circle_radius_m,angle_deg,re,im");
  }
  if (lines.size() - 1 != set.scheme.size()) {
    throw IoError(csv.string() + ": " + std::to_string(lines.size() - 1) +
                  " rows but the scheme has " + std::to_string(set.scheme.size()) + " chords");
  }
  set.values.resize(set.scheme.size());
  for (std::size_t m = 0; m < set.scheme.size(); ++m) {
    const auto parts = split(lines[m + 1], ',');
    if (parts.size() != 4) throw IoError(csv.string() + ": malformed row " + std::to_string(m + 1));
    const double radius = parse_double(parts[0]);
    const double angle = parse_double(parts[1]);
    const double expect_angle =
        static_cast<double>(set.scheme.angle_index(m)) * set.scheme.angular_step_deg();
    if (std::abs(radius - set.scheme.chord(m).circle_radius) > 1e-9 ||
        std::abs(angle - expect_angle) > 1e-9) {
      throw IoError(csv.string() + ": row " + std::to_string(m + 1) +
                    " does not match the scheme order");
    }
    set.values[m] = Complex(parse_double(parts[2]), parse_double(parts[3]));
  }
  try {
    set.validate();
  } catch (const Error& e) {
    throw IoError(csv.string() + ": " + e.what());
  }
  return set;
}

json diagnostics_to_json(const ReconstructionResult& result) {
  const auto& d = result.diagnostics;
  const auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{{"method", std::string(method_name(result.method))},
              {"order", d.order},
              {"lambda", finite_or_null(d.lambda)},
              {"residual", finite_or_null(d.residual)},
              {"infeasible", d.infeasible},
              {"iterations", d.iterations},
              {"rank", d.rank},
              {"runtime_s", d.runtime_s}};
}

void write_movie(const fs::path& dir, const FieldMovie& movie) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
  json frames = json::array();
  for (std::size_t i = 0; i < movie.frames.size(); ++i) {
    const std::size_t index = movie.frame_indices[i];
    const std::string name = "frame_" + std::to_string(index) + ".grid";
    write_grid(dir / name, movie.frames[i]);
    frames.push_back({{"index", index},
                      {"time_s", static_cast<double>(index) / movie.sample_rate},
                      {"file", name}});
  }
  write_text(dir / "manifest.json",
             dump_json(json{{"sample_rate_hz", movie.sample_rate}, {"frames", frames}}));
}

Channel parse_channel(std::string_view name) {
  if (name == "magnitude") return Channel::Magnitude;
  if (name == "phase") return Channel::Phase;
  if (name == "error_db") return Channel::ErrorDb;
  throw ConfigError("unknown channel '" + std::string(name) +
                    "' (expected magnitude, phase, error_db)");
}

void write_pgm(const fs::path& path, const FieldGrid& grid, Channel channel, double lo,
               double hi) {
  if (!(hi > lo)) throw ConfigError("render range must satisfy lo < hi");
  const char* name = channel == Channel::Magnitude ? "magnitude"
                     : channel == Channel::Phase   ? "phase"
                                                   : "error_db";
  const int nx = grid.shape.nx;
  const int ny = grid.shape.ny;
  std::string out = "P5\n# channel " + std::string(name) + " range " + format_double(lo) + " " +
                    format_double(hi) + "\n" + std::to_string(nx) + " " + std::to_string(ny) +
                    "\n65535\n";
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
      std::uint16_t level = 0;
      if (grid.is_valid(idx)) {
        const Complex v = grid.values[idx];
        const double x = channel == Channel::Magnitude ? std::abs(v)
                         : channel == Channel::Phase   ? std::arg(v)
                                                       : v.real();
        const double t = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
        level = static_cast<std::uint16_t>(std::lround(t * 65535.0));
      }
      out += static_cast<char>(level >> 8);
      out += static_cast<char>(level & 0xff);
    }
  }
  write_text(path, out);
}

}  // namespace hollowfield::io
