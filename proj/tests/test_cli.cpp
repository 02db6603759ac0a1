#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "hollowfield/commands.hpp"
#include "hollowfield/errors.hpp"
#include "oracles.hpp"

using namespace hollowfield;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Small configuration that keeps the end-to-end runs quick.
json small_doc() {
  return json{{"preset", "paper-centered-1k"},
              {"scheme", {{"circles", 4}, {"radius_step_m", 0.1}, {"angular_step_deg", 10.0}}},
              {"grid", {{"nx", 31}, {"ny", 31}}}};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HOLLOWFIELD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config round trip is byte-identical") {
  for (const char* preset : {"paper-centered-1kHz", "paper-centered-16k", "paper-offcenter-4k",
                             "paper-noise-2k", "paper-timedomain", "paper-single-circle"}) {
    const ExperimentConfig c = parse_config(json{{"preset", preset}});
    const std::string first = serialize_config(c);
    const std::string second = serialize_config(parse_config(json::parse(first)));
    CHECK(first == second);
  }
  CHECK(serialize_config(parse_config(small_doc())) ==
        serialize_config(parse_config(json::parse(serialize_config(parse_config(small_doc()))))));
}

TEST_CASE("presets") {
  const ExperimentConfig c1 = parse_config(json{{"preset", "paper-centered-1kHz"}});
  CHECK(c1.field.frequency == 1000.0);
  CHECK(c1.scheme.build().size() == 2232);
  CHECK(c1.field.sources.size() == 5);
  CHECK(parse_config(json{{"preset", "paper-centered-2000"}}).field.frequency == 2000.0);

  const ExperimentConfig off = parse_config(json{{"preset", "paper-offcenter-1k"}});
  CHECK(off.field.sources[0].position.y == Catch::Approx(0.12));
  const ExperimentConfig off16 = parse_config(json{{"preset", "paper-offcenter-16k"}});
  CHECK(off16.field.sources[0].position.x == Catch::Approx(0.2));
  CHECK(off16.field.sources[0].position.y == Catch::Approx(-0.1));

  const ExperimentConfig noise = parse_config(json{{"preset", "paper-noise-2k"}});
  CHECK(noise.noise.snr_db == 20.0);
  CHECK(noise.sweep.seeds.size() == 5);

  CHECK(parse_config(json{{"preset", "paper-single-circle"}}).scheme.build().size() == 72);

  CHECK_THROWS_AS(parse_config(json{{"preset", "paper-offcenter-3k"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"preset", "paper-sideways"}}), ConfigError);
}

TEST_CASE("config validation names the field") {
  try {
    parse_config(json{{"grid", {{"nx", 1}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("grid") != std::string::npos);
  }
  try {
    parse_config(json{{"method", {{"colour", "red"}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("method.colour") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(json{{"field", {{"frequency_hz", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"method", {{"name", "mle"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"scheme", {{"angular_step_deg", 7.0}}}}), ConfigError);
}

TEST_CASE("simulate is deterministic and evaluate handles the trivial cases") {
  const fs::path dir = oracle::temp_dir("simulate");
  json doc = small_doc();
  doc["noise"] = {{"snr_db", 25.0}, {"seed", 4}};
  const ExperimentConfig c = parse_config(doc);
  commands::cmd_simulate(c, dir / "a");
  commands::cmd_simulate(c, dir / "b");
  for (const char* f : {"reference.grid", "projections.csv", "projections.json", "meta.json"}) {
    CHECK(io::read_text(dir / "a" / f) == io::read_text(dir / "b" / f));
  }
  const std::string csv = io::read_text(dir / "a" / "projections.csv");
  CHECK(count_lines(csv) == 1 + 4 * 36);

  const ProjectionSet back =
      io::read_projections(dir / "a" / "projections.csv", dir / "a" / "projections.json");
  const commands::SimulateOutput direct = commands::simulate(c);
  CHECK(back.values == direct.projections.values);
  CHECK(back.snr_db == 25.0);

  const fs::path ref = dir / "a" / "reference.grid";
  const auto same = commands::cmd_evaluate(c, ref, ref, dir / "a");
  CHECK(same.nmse_db == -300.0);
  FieldGrid zero = io::read_grid(ref);
  for (Complex& v : zero.values) v = Complex{};
  io::write_grid(dir / "a" / "zero.grid", zero);
  const auto z = commands::cmd_evaluate(c, ref, dir / "a" / "zero.grid", dir / "a");
  CHECK(z.nmse_db == Catch::Approx(0.0).margin(1e-12));
  CHECK(count_lines(io::read_text(dir / "a" / "nmse.csv")) == 3);

  for (Method m : {Method::CHE, Method::FBP}) {
    ExperimentConfig rc = c;
    rc.method.method = m;
    commands::cmd_reconstruct(rc, dir / "a" / "projections.csv", dir / "a");
    const std::string name(method_name(m));
    CHECK(fs::exists(dir / "a" / ("recon_" + name + ".grid")));
    const json diag = json::parse(io::read_text(dir / "a" / ("diag_" + name + ".json")));
    CHECK(diag.contains("runtime_s"));
  }
}

TEST_CASE("single circle writes 72 projections") {
  const fs::path dir = oracle::temp_dir("single");
  ExperimentConfig c = parse_config(json{{"preset", "paper-single-circle"},
                                         {"grid", {{"nx", 21}, {"ny", 21}}}});
  commands::cmd_simulate(c, dir);
  CHECK(count_lines(io::read_text(dir / "projections.csv")) == 73);
}

TEST_CASE("grid text round trip") {
  const fs::path dir = oracle::temp_dir("grid");
  FieldGrid g(GridShape{3, 2, -1.0, 1.0, 0.0, 2.0}, 1234.5);
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = Complex(0.1 * i, -1.0 / (i + 3));
  g.valid = {1, 1, 0, 1, 1, 1};
  io::write_grid(dir / "g.grid", g);
  const FieldGrid back = io::read_grid(dir / "g.grid");
  CHECK(back.shape == g.shape);
  CHECK(back.frequency == g.frequency);
  CHECK(back.values == g.values);
  CHECK(back.valid == g.valid);
  CHECK_THROWS_AS(io::read_grid(dir / "missing.grid"), IoError);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::parse_double(io::format_double(kPi)) == kPi);
}

TEST_CASE("sweeps produce one row per value") {
  const fs::path dir = oracle::temp_dir("sweep");
  json doc = small_doc();
  doc["sweep"] = {{"kind", "circles"}, {"methods", {"che", "fbp"}}};
  const ExperimentConfig c = parse_config(doc);
  const auto rows = commands::cmd_sweep(c, dir);
  CHECK(rows.size() == 8);
  const std::string csv = io::read_text(dir / "sweep_circles.csv");
  CHECK(count_lines(csv) == 9);
  CHECK(csv.rfind("sweep,value,method,frequency_hz,snr_db,n_circles,radius_m,order,nmse_db,status\n", 0) == 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].value == static_cast<double>(i / 2 + 1));
    CHECK(rows[i].status == "ok");
  }

  json odoc = small_doc();
  odoc["sweep"] = {{"kind", "order"}, {"values", {2, 6}}, {"methods", {"che"}}};
  const auto orows = commands::cmd_sweep(parse_config(odoc), dir);
  REQUIRE(orows.size() == 2);
  CHECK(orows[1].coefficient_magnitudes.size() == 13);
  CHECK(count_lines(io::read_text(dir / "sweep_order_coefficients.csv")) == 1 + 5 + 13);

  json bad = small_doc();
  bad["sweep"] = {{"kind", "order"}, {"values", {3, 70}}, {"methods", {"che"}}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("render writes a 16-bit PGM") {
  const fs::path dir = oracle::temp_dir("render");
  FieldGrid g(GridShape{4, 3, 0.0, 1.0, 0.0, 1.0}, 1000.0);
  for (Complex& v : g.values) v = Complex(0.0, 2.0);
  io::write_grid(dir / "c.grid", g);
  commands::cmd_render(dir / "c.grid", io::Channel::Magnitude, 0.0, 4.0, dir / "c.pgm");
  std::ifstream in(dir / "c.pgm", std::ios::binary);
  std::string magic, comment_line;
  in >> magic;
  CHECK(magic == "P5");
  in.get();
  std::getline(in, comment_line);
  CHECK(comment_line.rfind("# channel magnitude range 0 4", 0) == 0);
  int w = 0, h = 0, maxval = 0;
  in >> w >> h >> maxval;
  in.get();
  CHECK(w == 4);
  CHECK(h == 3);
  CHECK(maxval == 65535);
  for (int i = 0; i < 12; ++i) {
    const int hi = in.get();
    const int lo = in.get();
    CHECK(hi * 256 + lo == 32768);
  }

  // Phase wraps: pi and -pi map to the two ends of the default range.
  FieldGrid p(GridShape{2, 2, 0.0, 1.0, 0.0, 1.0}, 1000.0);
  p.values = {Complex(-1.0, 1e-300), Complex(-1.0, -1e-300), Complex(1.0, 0.0), Complex(0.0, 1.0)};
  io::write_grid(dir / "p.grid", p);
  commands::cmd_render(dir / "p.grid", io::Channel::Phase, std::nullopt, std::nullopt, dir / "p.pgm");
  const std::string bytes = io::read_text(dir / "p.pgm");
  const std::string px = bytes.substr(bytes.size() - 8);
  auto sample = [&](int k) {
    return static_cast<unsigned char>(px[2 * k]) * 256 + static_cast<unsigned char>(px[2 * k + 1]);
  };
  // Bottom row (y small) is written last: pixels 0 and 1.
  CHECK(sample(2) == 65535);
  CHECK(sample(3) == 0);

  CHECK_THROWS_AS(io::parse_channel("colour"), ConfigError);
  CHECK_THROWS_AS(commands::cmd_render(dir / "p.grid", io::Channel::Magnitude, 1.0, 1.0, dir / "x.pgm"),
                  Error);
}

TEST_CASE("time-domain command on a zero burst") {
  const fs::path dir = oracle::temp_dir("timedomain");
  ExperimentConfig c = parse_config(json{{"preset", "paper-timedomain"},
                                         {"scheme", {{"circles", 2}, {"angular_step_deg", 30.0}}},
                                         {"grid", {{"nx", 11}, {"ny", 11}}}});
  c.field.amplitude = 0.0;
  const TimeDomainResult r = commands::cmd_timedomain(c, dir);
  REQUIRE(r.movie.frames.size() == 5);
  for (const FieldGrid& g : r.movie.frames)
    for (const Complex& v : g.values) CHECK(v == Complex{});
  CHECK(fs::exists(dir / "movie" / "manifest.json"));
  CHECK(fs::exists(dir / "probe.csv"));
  const json manifest = json::parse(io::read_text(dir / "movie" / "manifest.json"));
  CHECK(manifest["frames"].size() == 5);
  CHECK(manifest["sample_rate_hz"] == 48000.0);
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = oracle::temp_dir("exit");
  io::write_text(dir / "bad.json", R"({"grid": {"nx": 1}})");
  io::write_text(dir / "ok.json", small_doc().dump());
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("simulate --config " + (dir / "bad.json").string()) == 2);
  CHECK(run_cli("simulate --config " + (dir / "missing.json").string()) == 4);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("simulate --config " + (dir / "ok.json").string() + " --out " + (dir / "run").string()) == 0);
  CHECK(run_cli("reconstruct --config " + (dir / "ok.json").string() + " --out " + (dir / "run").string() +
                " --method che") == 0);
  CHECK(run_cli("reconstruct --config " + (dir / "ok.json").string() + " --out " + (dir / "run").string() +
                " --method mle") == 2);
  CHECK(run_cli("render --grid " + (dir / "run" / "reference.grid").string() + " --channel hue --out " +
                (dir / "run").string()) == 2);
  CHECK(fs::exists(dir / "run" / "recon_che.grid"));
}
