#include "hollowfield/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hollowfield/errors.hpp"
#include "hollowfield/metrics.hpp"
#include "parallel.hpp"

namespace hollowfield::commands {

using nlohmann::json;

namespace {

FieldEvaluator reference_evaluator(const ReferenceFieldSpec& spec) {
  return [spec](Point2 p) { return eval_point_source_field(spec, p); };
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? io::format_double(*v) : std::string();
}

}  // namespace

SimulateOutput simulate(const ExperimentConfig& config) {
  const FieldEvaluator ev = reference_evaluator(config.field);
  SimulateOutput out{project_field(ev, config.scheme.build(), config.field.frequency,
                                   config.field.sound_speed, config.nodes_per_wavelength),
                     synthesize_grid(ev, config.grid, config.field.frequency)};
  if (config.noise.snr_db) {
    out.projections = add_noise(out.projections, *config.noise.snr_db, config.noise.seed);
  }
  return out;
}

ReconstructionResult reconstruct(const ExperimentConfig& config, const ProjectionSet& projections,
                                 Method method) {
  switch (method) {
    case Method::CHE:
      return che_reconstruct(projections, config.order_for(projections.frequency),
                             config.regularization_for(projections), config.grid);
    case Method::PWE:
      return pwe_reconstruct(projections, config.method.plane_waves,
                             config.regularization_for(projections), config.grid);
    case Method::ART:
      return art_reconstruct(projections, config.grid, config.method.art_relaxation,
                             config.method.art_sweeps);
    case Method::FBP: return fbp_pipeline(projections, config.grid);
  }
  throw ConfigError("unknown method");
}

void cmd_simulate(const ExperimentConfig& config, const fs::path& out) {
  const SimulateOutput sim = simulate(config);
  io::write_grid(out / "reference.grid", sim.reference);
  io::write_projections(out / "projections.csv", out / "projections.json", sim.projections);
  json meta{{"config", config_to_json(config)},
            {"measurements", sim.projections.values.size()},
            {"circles", sim.projections.scheme.radii().size()},
            {"chords_per_circle", sim.projections.scheme.chords_per_circle()},
            {"wavenumber_rad_per_m", sim.projections.wavenumber()}};
  io::write_text(out / "meta.json", io::dump_json(meta));
}

ReconstructionResult cmd_reconstruct(const ExperimentConfig& config, const fs::path& projections_csv,
                                     const fs::path& out) {
  fs::path sidecar = projections_csv;
  sidecar.replace_extension(".json");
  const ProjectionSet ps = io::read_projections(projections_csv, sidecar);
  ReconstructionResult result = reconstruct(config, ps, config.method.method);
  const std::string name(method_name(result.method));
  io::write_grid(out / ("recon_" + name + ".grid"), result.grid);
  io::write_text(out / ("diag_" + name + ".json"), io::dump_json(io::diagnostics_to_json(result)));
  return result;
}

EvaluateOutput cmd_evaluate(const ExperimentConfig& config, const fs::path& reference,
                            const fs::path& result, const fs::path& out,
                            std::optional<double> r_min, std::optional<double> r_max) {
  const FieldGrid ref = io::read_grid(reference);
  const FieldGrid rec = io::read_grid(result);
  const AnnulusMask mask =
      annulus_mask(ref.shape, r_min.value_or(config.mask.r_min), r_max.value_or(config.mask.r_max));
  EvaluateOutput eval{nmse_db(rec, ref, mask), pixel_error_db(rec, ref)};
  io::write_grid(out / ("error_" + result.stem().string() + ".grid"), eval.error_map);

  const fs::path table = out / "nmse.csv";
  const bool fresh = !fs::exists(table);
  std::ofstream csv(table, std::ios::app | std::ios::binary);
  if (!csv) throw IoError("cannot open " + table.string());
  if (fresh) csv << "method,frequency_hz,snr_db,n_circles,order,nmse_db\n";
  const Method m = config.method.method;
  std::string order;
  if (m == Method::CHE) order = std::to_string(config.order_for(config.field.frequency));
  if (m == Method::PWE) order = std::to_string(config.method.plane_waves);
  csv << method_name(m) << ',' << io::format_double(config.field.frequency) << ','
      << fmt_opt(config.noise.snr_db) << ',' << config.scheme.resolved_radii().size() << ','
      << order << ',' << io::format_double(eval.nmse_db) << '\n';
  if (!csv) throw IoError("write failed: " + table.string());
  return eval;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  const std::vector<double> values = config.sweep.resolved_values(config);
  const std::size_t n_methods = config.sweep.methods.size();
  std::vector<SweepRow> rows(values.size() * n_methods);

  detail::parallel_for(static_cast<long long>(values.size()), [&](long long vi) {
    const double value = values[static_cast<std::size_t>(vi)];
    ExperimentConfig point = config;
    std::optional<int> forced_order;
    switch (config.sweep.kind) {
      case SweepKind::Order: forced_order = static_cast<int>(value); break;
      case SweepKind::Circles: {
        auto radii = config.scheme.resolved_radii();
        radii.resize(static_cast<std::size_t>(value));
        point.scheme.radii = radii;
        break;
      }
      case SweepKind::Snr: point.noise.snr_db = value; break;
      case SweepKind::Frequency: point.field.frequency = value; break;
      case SweepKind::Radius: point.scheme.radii = {value}; break;
    }
    if (forced_order) point.method.order = forced_order;

    std::vector<SweepRow> local(n_methods);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      SweepRow& row = local[mi];
      row.value = value;
      row.method = config.sweep.methods[mi];
      row.frequency = point.field.frequency;
      row.snr_db = point.noise.snr_db;
      row.n_circles = point.scheme.resolved_radii().size();
      if (config.sweep.kind == SweepKind::Radius) row.radius = value;
    }

    try {
      point.validate();
      const FieldEvaluator ev = reference_evaluator(point.field);
      const ProjectionSet clean =
          project_field(ev, point.scheme.build(), point.field.frequency, point.field.sound_speed,
                        point.nodes_per_wavelength);
      const FieldGrid ref = synthesize_grid(ev, point.grid, point.field.frequency);
      const AnnulusMask mask = annulus_mask(point.grid, point.mask.r_min, point.mask.r_max);
      std::vector<std::uint64_t> seeds{point.noise.seed};
      if (point.noise.snr_db) seeds = config.sweep.seeds;

      for (std::size_t mi = 0; mi < n_methods; ++mi) {
        SweepRow& row = local[mi];
        try {
          double total = 0.0;
          for (std::uint64_t seed : seeds) {
            const ProjectionSet ps =
                point.noise.snr_db ? add_noise(clean, *point.noise.snr_db, seed) : clean;
            const ReconstructionResult r = reconstruct(point, ps, row.method);
            total += nmse_db(r.grid, ref, mask);
            if (row.method == Method::CHE || row.method == Method::PWE) row.order = r.diagnostics.order;
            if (config.sweep.kind == SweepKind::Order && row.method == Method::CHE &&
                row.coefficient_magnitudes.empty()) {
              for (Eigen::Index i = 0; i < r.coefficients->size(); ++i) {
                row.coefficient_magnitudes.push_back(std::abs((*r.coefficients)(i)));
              }
            }
          }
          row.nmse_db = total / static_cast<double>(seeds.size());
        } catch (const Error& e) {
          row.status = std::string("error: ") + e.what();
        }
      }
    } catch (const Error& e) {
      for (SweepRow& row : local) row.status = std::string("error: ") + e.what();
    }
    std::copy(local.begin(), local.end(), rows.begin() + vi * static_cast<long long>(n_methods));
  });
  return rows;
}

std::string sweep_csv(const ExperimentConfig& config, const std::vector<SweepRow>& rows) {
  std::string out = "sweep,value,method,frequency_hz,snr_db,n_circles,radius_m,order,nmse_db,status\n";
  for (const SweepRow& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out += std::string(sweep_kind_name(config.sweep.kind)) + "," + io::format_double(r.value) + "," +
           std::string(method_name(r.method)) + "," + io::format_double(r.frequency) + "," +
           fmt_opt(r.snr_db) + "," + std::to_string(r.n_circles) + "," + fmt_opt(r.radius) + "," +
           (r.order ? std::to_string(*r.order) : std::string()) + "," + fmt_opt(r.nmse_db) + "," +
           status + "\n";
  }
  return out;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config, const fs::path& out) {
  std::vector<SweepRow> rows = run_sweep(config);
  const std::string kind(sweep_kind_name(config.sweep.kind));
  io::write_text(out / ("sweep_" + kind + ".csv"), sweep_csv(config, rows));
  if (config.sweep.kind == SweepKind::Order) {
    std::string coeffs = "order,n,abs_coefficient\n";
    for (const SweepRow& r : rows) {
      if (r.coefficient_magnitudes.empty()) continue;
      const int order = static_cast<int>(r.coefficient_magnitudes.size() / 2);
      for (std::size_t i = 0; i < r.coefficient_magnitudes.size(); ++i) {
        coeffs += std::to_string(order) + "," + std::to_string(static_cast<int>(i) - order) + "," +
                  io::format_double(r.coefficient_magnitudes[i]) + "\n";
      }
    }
    io::write_text(out / "sweep_order_coefficients.csv", coeffs);
  }
  return rows;
}

TimeDomainResult cmd_timedomain(const ExperimentConfig& config, const fs::path& out) {
  const BurstSpec burst = config.burst();
  const TimeSeriesProjectionSet data = synthesize_burst_projections(
      burst, config.scheme.build(), config.nodes_per_wavelength);
  TimeDomainResult result = reconstruct_time_domain(data, config.grid, config.timedomain_options());
  io::write_movie(out / "movie", result.movie);

  const std::vector<double> oracle = burst_point_signal(burst, config.timedomain.probe);
  std::string probe = "time_s,reconstructed,oracle\n";
  for (std::size_t t = 0; t < oracle.size(); ++t) {
    probe += io::format_double(static_cast<double>(t) / burst.sample_rate) + "," +
             io::format_double(result.probe_signal.empty() ? 0.0 : result.probe_signal[t]) + "," +
             io::format_double(oracle[t]) + "\n";
  }
  io::write_text(out / "probe.csv", probe);

  json summary{{"sample_rate_hz", burst.sample_rate},
               {"samples", burst.length},
               {"active_bins", result.active_frequencies.size()},
               {"skipped_bins", result.skipped_bins},
               {"probe_m", {config.timedomain.probe.x, config.timedomain.probe.y}}};
  double energy = 0.0;
  for (double v : oracle) energy += v * v;
  double rec_energy = 0.0;
  for (double v : result.probe_signal) rec_energy += v * v;
  if (energy > 0.0 && rec_energy > 0.0) {
    summary["probe_ncc"] = normalized_cross_correlation(result.probe_signal, oracle);
  } else {
    summary["probe_ncc"] = nullptr;
  }
  io::write_text(out / "timedomain.json", io::dump_json(summary));
  return result;
}

void cmd_render(const fs::path& grid_path, io::Channel channel, std::optional<double> lo,
                std::optional<double> hi, const fs::path& out) {
  const FieldGrid grid = io::read_grid(grid_path);
  double dlo = 0.0;
  double dhi = 1.0;
  switch (channel) {
    case io::Channel::Magnitude: {
      double peak = 0.0;
      for (std::size_t i = 0; i < grid.values.size(); ++i) {
        if (grid.is_valid(i)) peak = std::max(peak, std::abs(grid.values[i]));
      }
      dhi = peak > 0.0 ? peak : 1.0;
      break;
    }
    case io::Channel::Phase:
      dlo = -kPi;
      dhi = kPi;
      break;
    case io::Channel::ErrorDb:
      dlo = -40.0;
      dhi = 0.0;
      break;
  }
  io::write_pgm(out, grid, channel, lo.value_or(dlo), hi.value_or(dhi));
}

}  // namespace hollowfield::commands
