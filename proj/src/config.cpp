#include "hollowfield/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "hollowfield/errors.hpp"
#include "hollowfield/io.hpp"
#include "hollowfield/specfun.hpp"

namespace hollowfield {

using nlohmann::json;

std::vector<double> SchemeConfig::resolved_radii() const {
  if (!radii.empty()) return radii;
  std::vector<double> out(static_cast<std::size_t>(std::max(circles, 0)));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = first_radius + radius_step * static_cast<double>(i);
  }
  return out;
}

SamplingScheme SchemeConfig::build() const {
  return SamplingScheme::build(resolved_radii(), angular_step_deg, chord_half_length);
}

std::string_view sweep_kind_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::Order: return "order";
    case SweepKind::Circles: return "circles";
    case SweepKind::Snr: return "snr";
    case SweepKind::Frequency: return "frequency";
    case SweepKind::Radius: return "radius";
  }
  return "unknown";
}

std::vector<double> SweepConfig::resolved_values(const ExperimentConfig& config) const {
  if (!values.empty()) return values;
  std::vector<double> out;
  switch (kind) {
    case SweepKind::Order:
      for (int n = 0; n <= 40; n += 5) out.push_back(n);
      break;
    case SweepKind::Circles:
      for (std::size_t c = 1; c <= config.scheme.resolved_radii().size(); ++c) {
        out.push_back(static_cast<double>(c));
      }
      break;
    case SweepKind::Snr: out = {15.0, 20.0, 25.0, 30.0}; break;
    case SweepKind::Frequency: out = {1000.0, 2000.0, 4000.0, 8000.0, 16000.0}; break;
    case SweepKind::Radius:
      for (int i = 0; i <= 6; ++i) out.push_back(0.30 + 0.05 * i);
      break;
  }
  return out;
}

int ExperimentConfig::order_for(double frequency) const {
  return method.order ? *method.order : order_for_frequency(frequency, method.order_table);
}

RegularizationSpec ExperimentConfig::regularization_for(const ProjectionSet& projections) const {
  const RegularizationConfig& r = method.regularization;
  switch (r.mode) {
    case RegularizationMode::Discrepancy:
      return r.epsilon ? RegularizationSpec::discrepancy(*r.epsilon)
                       : default_regularization(projections);
    case RegularizationMode::FixedLambda: return RegularizationSpec::fixed_lambda(r.lambda);
    case RegularizationMode::TruncatedSvd: return RegularizationSpec::truncated_svd(r.svd_cutoff);
  }
  return default_regularization(projections);
}

BurstSpec ExperimentConfig::burst() const {
  BurstSpec b;
  b.sources = field.sources;
  b.amplitude = field.amplitude;
  b.carrier = timedomain.carrier;
  b.duration = timedomain.duration;
  b.sample_rate = timedomain.sample_rate;
  b.length = timedomain.samples;
  b.sound_speed = field.sound_speed;
  b.max_frequency = timedomain.max_frequency;
  return b;
}

TimeDomainOptions ExperimentConfig::timedomain_options() const {
  TimeDomainOptions o;
  o.band_low = timedomain.band_low;
  o.band_high = timedomain.band_high;
  o.gate_db = timedomain.gate_db;
  o.order_table = timedomain.order_table;
  o.frames = frames_at_times(timedomain.frame_times, timedomain.sample_rate, timedomain.samples);
  o.probe = timedomain.probe;
  return o;
}

namespace {

std::string_view table_name(OrderTable t) { return t == OrderTable::Paper ? "paper" : "lean"; }

std::string_view mode_name(RegularizationMode m) {
  switch (m) {
    case RegularizationMode::Discrepancy: return "discrepancy";
    case RegularizationMode::FixedLambda: return "fixed-lambda";
    case RegularizationMode::TruncatedSvd: return "truncated-svd";
  }
  return "unknown";
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// Strict reader: every key of an object must be consumed, types are checked,
// and errors name the dotted path of the offending field.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        throw ConfigError("config: unknown field '" + join(key) + "'");
      }
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config: field '" + join(key) + "' has the wrong type");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(out)) throw ConfigError("config: field '" + join(key) + "' must be finite");
    }
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!has(key)) {
      out.reset();
      return;
    }
    T value{};
    get(key, value);
    out = value;
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    if (!j_.contains(key) || j_.at(key).is_null()) return Reader(kEmpty, join(key));
    return Reader(j_.at(key), join(key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config: field '" + path_ + "': " + msg);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

OrderTable parse_table(const std::string& s, const std::string& path) {
  if (s == "paper") return OrderTable::Paper;
  if (s == "lean") return OrderTable::Lean;
  throw ConfigError("config: field '" + path + "': expected 'paper' or 'lean'");
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

double parse_frequency_token(std::string token) {
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  double scale = 1.0;
  for (const std::string suffix : {"khz", "k", "hz"}) {
    if (token.size() > suffix.size() &&
        token.compare(token.size() - suffix.size(), suffix.size(), suffix) == 0) {
      token.resize(token.size() - suffix.size());
      scale = suffix == "hz" ? 1.0 : 1000.0;
      break;
    }
  }
  try {
    const double f = io::parse_double(token) * scale;
    if (f > 0.0) return f;
  } catch (const IoError&) {
  }
  throw ConfigError("config: preset frequency '" + token + "' is not a positive number");
}

json sources_json(const std::vector<PointSource>& sources) {
  json out = json::array();
  for (const auto& s : sources) {
    out.push_back({{"x_m", s.position.x}, {"y_m", s.position.y}, {"phase_rad", s.phase}});
  }
  return out;
}

Point2 offcenter_offset(double frequency) {
  const auto near = [&](double f) { return std::abs(frequency - f) < 1e-6; };
  if (near(1000.0)) return {0.0, 0.12};
  if (near(2000.0)) return {0.2, 0.0};
  if (near(4000.0)) return {-0.2, 0.0};
  if (near(8000.0)) return {-0.2, 0.1};
  if (near(16000.0)) return {0.2, -0.1};
  throw ConfigError("config: off-centre presets exist for 1k, 2k, 4k, 8k and 16k only");
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["output_dir"] = c.output_dir;
  j["field"] = {{"amplitude", c.field.amplitude},
                {"frequency_hz", c.field.frequency},
                {"sound_speed_mps", c.field.sound_speed},
                {"sources", sources_json(c.field.sources)}};
  j["scheme"] = {{"first_radius_m", c.scheme.first_radius},
                 {"radius_step_m", c.scheme.radius_step},
                 {"circles", c.scheme.circles},
                 {"radii_m", c.scheme.radii},
                 {"angular_step_deg", c.scheme.angular_step_deg},
                 {"chord_half_length_m", c.scheme.chord_half_length}};
  const auto& r = c.method.regularization;
  j["method"] = {{"name", std::string(method_name(c.method.method))},
                 {"order", optional_json(c.method.order)},
                 {"order_table", std::string(table_name(c.method.order_table))},
                 {"plane_waves", c.method.plane_waves},
                 {"regularization",
                  {{"mode", std::string(mode_name(r.mode))},
                   {"epsilon", optional_json(r.epsilon)},
                   {"lambda", r.lambda},
                   {"svd_cutoff", r.svd_cutoff}}},
                 {"art_relaxation", c.method.art_relaxation},
                 {"art_sweeps", c.method.art_sweeps}};
  j["grid"] = {{"nx", c.grid.nx},
               {"ny", c.grid.ny},
               {"extent_m", {c.grid.xmin, c.grid.xmax, c.grid.ymin, c.grid.ymax}}};
  j["mask"] = {{"r_min_m", c.mask.r_min}, {"r_max_m", c.mask.r_max}};
  j["noise"] = {{"snr_db", optional_json(c.noise.snr_db)}, {"seed", c.noise.seed}};
  j["quadrature"] = {{"nodes_per_wavelength", c.nodes_per_wavelength}};
  json methods = json::array();
  for (Method m : c.sweep.methods) methods.push_back(std::string(method_name(m)));
  j["sweep"] = {{"kind", std::string(sweep_kind_name(c.sweep.kind))},
                {"values", c.sweep.values},
                {"methods", methods},
                {"seeds", c.sweep.seeds}};
  const auto& t = c.timedomain;
  j["timedomain"] = {{"carrier_hz", t.carrier},
                     {"duration_s", t.duration},
                     {"sample_rate_hz", t.sample_rate},
                     {"samples", t.samples},
                     {"max_frequency_hz", t.max_frequency},
                     {"band_hz", {t.band_low, t.band_high}},
                     {"gate_db", optional_json(t.gate_db)},
                     {"order_table", std::string(table_name(t.order_table))},
                     {"frame_times_s", t.frame_times},
                     {"probe_m", {t.probe.x, t.probe.y}}};
  return j;
}

std::string serialize_config(const ExperimentConfig& config) {
  return io::dump_json(config_to_json(config));
}

json preset_document(std::string_view name_view) {
  const std::string name(name_view);
  const auto field_patch = [](double f, Point2 offset) {
    return json{{"frequency_hz", f}, {"sources", sources_json(paper_default_sources(offset))}};
  };
  const std::string centered = "paper-centered-";
  const std::string offcenter = "paper-offcenter-";
  if (name.rfind(centered, 0) == 0) {
    const double f = parse_frequency_token(name.substr(centered.size()));
    return json{{"field", field_patch(f, {})},
                {"sweep", {{"kind", "frequency"}, {"methods", {"che", "fbp", "art", "pwe"}}}}};
  }
  if (name.rfind(offcenter, 0) == 0) {
    const double f = parse_frequency_token(name.substr(offcenter.size()));
    return json{{"field", field_patch(f, offcenter_offset(f))}};
  }
  if (name == "paper-noise-2k") {
    return json{{"field", field_patch(2000.0, {})},
                {"noise", {{"snr_db", 20.0}}},
                {"sweep",
                 {{"kind", "snr"},
                  {"values", {15.0, 20.0, 25.0, 30.0}},
                  {"methods", {"che", "fbp", "art", "pwe"}},
                  {"seeds", {1, 2, 3, 4, 5}}}}};
  }
  if (name == "paper-timedomain") {
    return json{{"field",
                 {{"frequency_hz", 2000.0},
                  {"sources", json::array({{{"x_m", 0.0}, {"y_m", 0.0}, {"phase_rad", 0.0}}})}}},
                {"timedomain",
                 {{"frame_times_s", {0.0011, 0.00136, 0.0015, 0.002, 0.0026}}}}};
  }
  if (name == "paper-single-circle") {
    return json{{"field", field_patch(2000.0, {})},
                {"scheme", {{"radii_m", {0.3}}}},
                {"sweep", {{"kind", "radius"}}}};
  }
  throw ConfigError("config: unknown preset '" + name + "'");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  json merged = config_to_json(ExperimentConfig{});
  merged["field"]["sources"] = sources_json(paper_default_sources());
  if (doc.contains("preset") && doc["preset"].is_string() &&
      !doc["preset"].get<std::string>().empty()) {
    merged.merge_patch(preset_document(doc["preset"].get<std::string>()));
  }
  merged.merge_patch(doc);

  ExperimentConfig c;
  c.field.sources.clear();
  {
    Reader top(merged, "");
    top.get("preset", c.preset);
    top.get("output_dir", c.output_dir);
    {
      Reader f = top.child("field");
      f.get("amplitude", c.field.amplitude);
      f.get("frequency_hz", c.field.frequency);
      f.get("sound_speed_mps", c.field.sound_speed);
      if (f.has("sources")) {
        const json& arr = f.raw("sources");
        if (!arr.is_array()) f.fail("sources must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
          Reader s(arr[i], f.join("sources[" + std::to_string(i) + "]"));
          PointSource src;
          s.get("x_m", src.position.x);
          s.get("y_m", src.position.y);
          s.get("phase_rad", src.phase);
          c.field.sources.push_back(src);
        }
      }
    }
    {
      Reader s = top.child("scheme");
      s.get("first_radius_m", c.scheme.first_radius);
      s.get("radius_step_m", c.scheme.radius_step);
      s.get("circles", c.scheme.circles);
      s.get("radii_m", c.scheme.radii);
      s.get("angular_step_deg", c.scheme.angular_step_deg);
      s.get("chord_half_length_m", c.scheme.chord_half_length);
    }
    {
      Reader m = top.child("method");
      std::string name = "che";
      m.get("name", name);
      c.method.method = parse_method(name);
      m.get("order", c.method.order);
      std::string table = "paper";
      m.get("order_table", table);
      c.method.order_table = parse_table(table, m.join("order_table"));
      m.get("plane_waves", c.method.plane_waves);
      m.get("art_relaxation", c.method.art_relaxation);
      m.get("art_sweeps", c.method.art_sweeps);
      Reader r = m.child("regularization");
      std::string mode = "discrepancy";
      r.get("mode", mode);
      if (mode == "discrepancy") c.method.regularization.mode = RegularizationMode::Discrepancy;
      else if (mode == "fixed-lambda") c.method.regularization.mode = RegularizationMode::FixedLambda;
      else if (mode == "truncated-svd") c.method.regularization.mode = RegularizationMode::TruncatedSvd;
      else r.fail("mode must be discrepancy, fixed-lambda or truncated-svd");
      r.get("epsilon", c.method.regularization.epsilon);
      r.get("lambda", c.method.regularization.lambda);
      r.get("svd_cutoff", c.method.regularization.svd_cutoff);
    }
    {
      Reader g = top.child("grid");
      g.get("nx", c.grid.nx);
      g.get("ny", c.grid.ny);
      std::vector<double> extent{c.grid.xmin, c.grid.xmax, c.grid.ymin, c.grid.ymax};
      g.get("extent_m", extent);
      if (extent.size() != 4) g.fail("extent_m needs [xmin, xmax, ymin, ymax]");
      c.grid.xmin = extent[0];
      c.grid.xmax = extent[1];
      c.grid.ymin = extent[2];
      c.grid.ymax = extent[3];
    }
    {
      Reader m = top.child("mask");
      m.get("r_min_m", c.mask.r_min);
      m.get("r_max_m", c.mask.r_max);
    }
    {
      Reader n = top.child("noise");
      n.get("snr_db", c.noise.snr_db);
      n.get("seed", c.noise.seed);
    }
    {
      Reader q = top.child("quadrature");
      q.get("nodes_per_wavelength", c.nodes_per_wavelength);
    }
    {
      Reader s = top.child("sweep");
      std::string kind = "order";
      s.get("kind", kind);
      if (kind == "order") c.sweep.kind = SweepKind::Order;
      else if (kind == "circles") c.sweep.kind = SweepKind::Circles;
      else if (kind == "snr") c.sweep.kind = SweepKind::Snr;
      else if (kind == "frequency") c.sweep.kind = SweepKind::Frequency;
      else if (kind == "radius") c.sweep.kind = SweepKind::Radius;
      else s.fail("kind must be order, circles, snr, frequency or radius");
      s.get("values", c.sweep.values);
      std::vector<std::string> methods{"che"};
      s.get("methods", methods);
      c.sweep.methods = parse_methods(methods);
      s.get("seeds", c.sweep.seeds);
    }
    {
      Reader t = top.child("timedomain");
      auto& td = c.timedomain;
      t.get("carrier_hz", td.carrier);
      t.get("duration_s", td.duration);
      t.get("sample_rate_hz", td.sample_rate);
      t.get("samples", td.samples);
      t.get("max_frequency_hz", td.max_frequency);
      std::vector<double> band{td.band_low, td.band_high};
      t.get("band_hz", band);
      if (band.size() != 2) t.fail("band_hz needs [low, high]");
      td.band_low = band[0];
      td.band_high = band[1];
      t.get("gate_db", td.gate_db);
      std::string table = "paper";
      t.get("order_table", table);
      td.order_table = parse_table(table, t.join("order_table"));
      t.get("frame_times_s", td.frame_times);
      std::vector<double> probe{td.probe.x, td.probe.y};
      t.get("probe_m", probe);
      if (probe.size() != 2) t.fail("probe_m needs [x, y]");
      td.probe = {probe[0], probe[1]};
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = io::read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(doc);
}

void ExperimentConfig::validate() const {
  const auto check = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("config: field '") + field + "': " + e.what());
    }
  };
  const auto require = [](bool ok, const char* field, const char* msg) {
    if (!ok) throw ConfigError(std::string("config: field '") + field + "': " + msg);
  };

  check("field", [&] { field.validate(); });
  check("scheme", [&] { (void)scheme.build(); });
  require(scheme.radii.empty() ? scheme.circles >= 1 : true, "scheme.circles", "must be at least 1");
  check("grid", [&] { grid.validate(); });
  require(mask.r_min >= 0.0 && mask.r_min < mask.r_max, "mask", "need 0 <= r_min_m < r_max_m");
  if (method.order) {
    require(*method.order >= 0 && *method.order <= specfun::kMaxOrder, "method.order",
            "must lie in [0, 64]");
  }
  require(method.plane_waves >= 1, "method.plane_waves", "must be at least 1");
  require(method.art_relaxation > 0.0 && method.art_relaxation < 2.0, "method.art_relaxation",
          "must lie in (0, 2)");
  require(method.art_sweeps >= 1, "method.art_sweeps", "must be at least 1");
  const auto& r = method.regularization;
  if (r.epsilon) require(*r.epsilon >= 0.0, "method.regularization.epsilon", "must be >= 0");
  require(r.lambda >= 0.0, "method.regularization.lambda", "must be >= 0");
  require(r.svd_cutoff >= 0.0 && r.svd_cutoff < 1.0, "method.regularization.svd_cutoff",
          "must lie in [0, 1)");
  require(nodes_per_wavelength >= 1, "quadrature.nodes_per_wavelength", "must be at least 1");
  require(!sweep.methods.empty(), "sweep.methods", "must not be empty");
  require(!sweep.seeds.empty(), "sweep.seeds", "must not be empty");
  const std::size_t n_circles = scheme.resolved_radii().size();
  for (double v : sweep.values) {
    switch (sweep.kind) {
      case SweepKind::Order:
        require(v == std::floor(v) && v >= 0 && v <= specfun::kMaxOrder, "sweep.values",
                "orders must be integers in [0, 64]");
        break;
      case SweepKind::Circles:
        require(v == std::floor(v) && v >= 1 && v <= static_cast<double>(n_circles),
                "sweep.values", "circle counts must be integers in [1, scheme circles]");
        break;
      case SweepKind::Snr: break;
      case SweepKind::Frequency:
      case SweepKind::Radius:
        require(v > 0.0, "sweep.values", "must be positive");
        break;
    }
  }
  check("timedomain", [&] { burst().validate(); });
  require(timedomain.band_low > 0.0 && timedomain.band_low < timedomain.band_high &&
              timedomain.band_high < timedomain.sample_rate / 2.0,
          "timedomain.band_hz", "need 0 < low < high < sample_rate / 2");
  check("timedomain.frame_times_s", [&] { (void)timedomain_options(); });
  require(!output_dir.empty(), "output_dir", "must not be empty");
}

}  // namespace hollowfield
