#include <optional>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hollowfield/commands.hpp"
#include "hollowfield/errors.hpp"
#include "hollowfield/metrics.hpp"
#include "hollowfield/specfun.hpp"

namespace py = pybind11;
namespace hf = hollowfield;

namespace {

using ComplexArray = py::array_t<std::complex<double>>;

ComplexArray grid_array(const hf::FieldGrid& grid) {
  ComplexArray out({grid.shape.ny, grid.shape.nx});
  auto view = out.mutable_unchecked<2>();
  for (int j = 0; j < grid.shape.ny; ++j) {
    for (int i = 0; i < grid.shape.nx; ++i) view(j, i) = grid.at(i, j);
  }
  return out;
}

py::array_t<bool> mask_array(const hf::FieldGrid& grid) {
  py::array_t<bool> out({grid.shape.ny, grid.shape.nx});
  auto view = out.mutable_unchecked<2>();
  for (int j = 0; j < grid.shape.ny; ++j) {
    for (int i = 0; i < grid.shape.nx; ++i) {
      view(j, i) = grid.is_valid(static_cast<std::size_t>(j) * grid.shape.nx + i);
    }
  }
  return out;
}

hf::FieldGrid grid_from(const ComplexArray& values, const hf::GridShape& shape) {
  if (values.ndim() != 2 || values.shape(0) != shape.ny || values.shape(1) != shape.nx) {
    throw hf::ShapeMismatchError("array shape does not match the configured grid (ny, nx)");
  }
  hf::FieldGrid grid(shape, 0.0);
  auto view = values.unchecked<2>();
  for (int j = 0; j < shape.ny; ++j) {
    for (int i = 0; i < shape.nx; ++i) grid.at(i, j) = view(j, i);
  }
  return grid;
}

hf::ExperimentConfig config_from(const std::string& text) {
  return hf::parse_config(text.empty() ? nlohmann::json::object() : nlohmann::json::parse(text));
}

py::dict diagnostics_dict(const hf::ReconstructionResult& r) {
  py::dict d;
  d["method"] = std::string(hf::method_name(r.method));
  d["order"] = r.diagnostics.order;
  d["lambda"] = r.diagnostics.lambda;
  d["residual"] = r.diagnostics.residual;
  d["infeasible"] = r.diagnostics.infeasible;
  d["runtime_s"] = r.diagnostics.runtime_s;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exterior sound-field tomography core";

  // Translators run newest first, so the base class goes first.
  py::register_exception<hf::Error>(m, "HollowfieldError", PyExc_RuntimeError);
  py::register_exception<hf::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<hf::DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("bessel_j", py::vectorize(&hf::specfun::bessel_j), py::arg("n"), py::arg("x"));
  m.def("bessel_y", py::vectorize(&hf::specfun::bessel_y), py::arg("n"), py::arg("x"));
  m.def("hankel2", py::vectorize(&hf::specfun::hankel2), py::arg("n"), py::arg("x"));

  m.def("order_for_frequency",
        [](double f, const std::string& table) {
          return hf::order_for_frequency(f, table == "lean" ? hf::OrderTable::Lean
                                                            : hf::OrderTable::Paper);
        },
        py::arg("frequency"), py::arg("table") = "paper");

  m.def("resolve_config",
        [](const std::string& text) { return hf::serialize_config(config_from(text)); },
        py::arg("config_json") = "", "Fully resolved configuration as JSON text.");

  m.def("simulate",
        [](const std::string& text) {
          const hf::ExperimentConfig config = config_from(text);
          std::optional<hf::commands::SimulateOutput> result;
          {
            py::gil_scoped_release release;
            result.emplace(hf::commands::simulate(config));
          }
          const hf::commands::SimulateOutput& sim = *result;
          py::dict out;
          out["projections"] = py::array_t<std::complex<double>>(
              static_cast<py::ssize_t>(sim.projections.values.size()), sim.projections.values.data());
          out["reference"] = grid_array(sim.reference);
          out["reference_valid"] = mask_array(sim.reference);
          out["frequency"] = sim.projections.frequency;
          return out;
        },
        py::arg("config_json") = "");

  m.def("reconstruct",
        [](const std::string& text, const ComplexArray& projections, const std::string& method) {
          const hf::ExperimentConfig config = config_from(text);
          hf::ProjectionSet ps{config.scheme.build(), config.field.frequency,
                               config.field.sound_speed, {}, config.noise.snr_db, std::nullopt};
          auto view = projections.unchecked<1>();
          ps.values.assign(view.data(0), view.data(0) + view.shape(0));
          const hf::Method which = method.empty() ? config.method.method : hf::parse_method(method);
          hf::ReconstructionResult r;
          {
            py::gil_scoped_release release;
            r = hf::commands::reconstruct(config, ps, which);
          }
          py::dict out;
          out["grid"] = grid_array(r.grid);
          out["valid"] = mask_array(r.grid);
          out["diagnostics"] = diagnostics_dict(r);
          if (r.coefficients) {
            out["coefficients"] = py::array_t<std::complex<double>>(r.coefficients->size(),
                                                                    r.coefficients->data());
          } else {
            out["coefficients"] = py::none();
          }
          return out;
        },
        py::arg("config_json"), py::arg("projections"), py::arg("method") = "");

  m.def("nmse_db",
        [](const std::string& text, const ComplexArray& reconstructed, const ComplexArray& reference) {
          const hf::ExperimentConfig config = config_from(text);
          const hf::FieldGrid rec = grid_from(reconstructed, config.grid);
          const hf::FieldGrid ref = grid_from(reference, config.grid);
          return hf::nmse_db(rec, ref, hf::annulus_mask(config.grid, config.mask.r_min,
                                                        config.mask.r_max));
        },
        py::arg("config_json"), py::arg("reconstructed"), py::arg("reference"));
}
