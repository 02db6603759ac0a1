#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "hollowfield/commands.hpp"
#include "hollowfield/errors.hpp"
#include "hollowfield/metrics.hpp"

namespace hf = hollowfield;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("HOLLOWFIELD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool config_required = true) {
  auto* opt = cmd->add_option("--config", c.config, "Experiment configuration (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", c.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", c.seed, "Noise seed (overrides noise.seed)");
}

hf::ExperimentConfig resolve(const Common& c) {
  hf::ExperimentConfig config =
      c.config.empty() ? hf::parse_config(nlohmann::json::object()) : hf::load_config(c.config);
  if (!c.out.empty()) config.output_dir = c.out;
  if (c.seed) config.noise.seed = *c.seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"Exterior sound-field tomography: simulation, reconstruction and evaluation"};
  app.require_subcommand(1);

  Common sim_opts;
  auto* sim = app.add_subcommand("simulate", "Reference field and chord projections");
  add_common(sim, sim_opts);

  Common rec_opts;
  std::string projections;
  std::string method;
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct the field from projections");
  add_common(rec, rec_opts);
  rec->add_option("--projections", projections, "Projections CSV (default <out>/projections.csv)");
  rec->add_option("--method", method, "che, pwe, art or fbp (overrides method.name)");

  Common eval_opts;
  std::string reference;
  std::string result;
  std::optional<double> r_min;
  std::optional<double> r_max;
  auto* eval = app.add_subcommand("evaluate", "Error map and NMSE of a reconstruction");
  add_common(eval, eval_opts);
  eval->add_option("--reference", reference, "Reference grid")->required();
  eval->add_option("--result", result, "Reconstructed grid")->required();
  eval->add_option("--r-min", r_min, "Inner mask radius (m)");
  eval->add_option("--r-max", r_max, "Outer mask radius (m)");

  Common sweep_opts;
  std::string kind;
  auto* sweep = app.add_subcommand("sweep", "Order, circle, SNR, frequency or radius study");
  add_common(sweep, sweep_opts);
  sweep->add_option("--kind", kind, "order, circles, snr, frequency or radius (overrides sweep.kind)");

  Common td_opts;
  auto* td = app.add_subcommand("timedomain", "Burst simulation and time-domain reconstruction");
  add_common(td, td_opts);

  Common render_opts;
  std::string grid;
  std::string channel = "magnitude";
  std::vector<double> range;
  std::string image;
  auto* render = app.add_subcommand("render", "Render a grid channel as a 16-bit PGM");
  add_common(render, render_opts, false);
  render->add_option("--grid", grid, "Grid file")->required();
  render->add_option("--channel", channel, "magnitude, phase or error_db");
  render->add_option("--range", range, "Mapped range LO HI")->expected(2);
  render->add_option("--image", image, "Output image (default <out>/<grid stem>_<channel>.pgm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) {
      const auto config = resolve(sim_opts);
      hf::commands::cmd_simulate(config, config.output_dir);
    } else if (*rec) {
      auto config = resolve(rec_opts);
      if (!method.empty()) config.method.method = hf::parse_method(method);
      const fs::path in = projections.empty() ? fs::path(config.output_dir) / "projections.csv"
                                              : fs::path(projections);
      const auto r = hf::commands::cmd_reconstruct(config, in, config.output_dir);
      if (r.diagnostics.infeasible) {
        std::cerr << "note: discrepancy target unreachable; returned the least-squares solution\n";
      }
    } else if (*eval) {
      const auto config = resolve(eval_opts);
      const auto e = hf::commands::cmd_evaluate(config, reference, result, config.output_dir,
                                                r_min, r_max);
      std::cout << "nmse_db " << hf::io::format_double(e.nmse_db) << "\n";
    } else if (*sweep) {
      auto doc = nlohmann::json::object();
      if (!sweep_opts.config.empty()) doc = nlohmann::json::parse(hf::io::read_text(sweep_opts.config));
      if (!kind.empty()) doc["sweep"]["kind"] = kind;
      auto config = hf::parse_config(doc);
      if (!sweep_opts.out.empty()) config.output_dir = sweep_opts.out;
      if (sweep_opts.seed) config.noise.seed = *sweep_opts.seed;
      const auto rows = hf::commands::cmd_sweep(config, config.output_dir);
      std::cout << hf::commands::sweep_csv(config, rows);
    } else if (*td) {
      const auto config = resolve(td_opts);
      const auto r = hf::commands::cmd_timedomain(config, config.output_dir);
      for (const auto& s : r.skipped_bins) std::cerr << "skipped bin " << s << "\n";
    } else if (*render) {
      const fs::path out_dir = render_opts.out.empty() ? fs::path(".") : fs::path(render_opts.out);
      const fs::path target =
          image.empty() ? out_dir / (fs::path(grid).stem().string() + "_" + channel + ".pgm")
                        : fs::path(image);
      std::optional<double> lo;
      std::optional<double> hi;
      if (range.size() == 2) {
        lo = range[0];
        hi = range[1];
      }
      hf::commands::cmd_render(grid, hf::io::parse_channel(channel), lo, hi, target);
    }
  } catch (const hf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hf::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hf::Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
