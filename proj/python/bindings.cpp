#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oir/interaction.h"
#include "oir/io.h"
#include "oir/simulate.h"

namespace py = pybind11;
using namespace oir;

namespace {

Criterion parse_criterion(const std::string& name) {
  if (name == "aic" || name == "AIC") return Criterion::kAic;
  if (name == "bic" || name == "BIC") return Criterion::kBic;
  throw Error(ErrorCode::kInvalidArgument, "criterion must be 'aic' or 'bic'");
}

std::optional<Band> to_band(const std::optional<std::pair<double, double>>& b) {
  if (!b) return std::nullopt;
  return Band{b->first, b->second};
}

std::vector<NamedBand> to_bands(const std::map<std::string, std::pair<double, double>>& bands) {
  std::vector<NamedBand> out;
  for (const auto& [label, range] : bands) out.push_back({label, {range.first, range.second}});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian VAR interaction measures: MIR, transfer entropy and O-information rate.";

  static py::exception<Error> oir_error(m, "OirError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(oir_error.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<TimeSeriesData>(m, "TimeSeriesData")
      .def(py::init<>())
      .def_readwrite("samples", &TimeSeriesData::samples)
      .def_readwrite("fs", &TimeSeriesData::fs)
      .def_readwrite("channel_names", &TimeSeriesData::channel_names);

  py::class_<VarModel>(m, "VarModel")
      .def(py::init<>())
      .def_readwrite("q", &VarModel::q)
      .def_readwrite("p", &VarModel::p)
      .def_readwrite("coeffs", &VarModel::coeffs)
      .def_readwrite("sigma_u", &VarModel::sigma_u)
      .def_readwrite("fs", &VarModel::fs)
      .def("to_json", [](const VarModel& v) { return io::model_to_json(v).dump(); })
      .def_static("from_json", [](const std::string& s) { return io::model_from_json(io::Json::parse(s)); });

  py::class_<BlockPartition>(m, "BlockPartition")
      .def(py::init<>())
      .def(py::init([](std::vector<IndexSet> blocks, std::vector<std::string> labels) {
             return BlockPartition{std::move(blocks), std::move(labels)};
           }),
           py::arg("blocks"), py::arg("labels") = std::vector<std::string>{})
      .def_readwrite("blocks", &BlockPartition::blocks)
      .def_readwrite("labels", &BlockPartition::labels)
      .def("__len__", &BlockPartition::size);

  py::class_<StateSpaceModel>(m, "StateSpaceModel")
      .def_readonly("a", &StateSpaceModel::a)
      .def_readonly("c", &StateSpaceModel::c)
      .def_readonly("k", &StateSpaceModel::k)
      .def_readonly("v", &StateSpaceModel::v)
      .def_readonly("fs", &StateSpaceModel::fs);

  py::class_<ReducedStateSpaceModel>(m, "ReducedStateSpaceModel")
      .def_readonly("a_t", &ReducedStateSpaceModel::a_t)
      .def_readonly("c_t", &ReducedStateSpaceModel::c_t)
      .def_readonly("k_t", &ReducedStateSpaceModel::k_t)
      .def_readonly("v_t", &ReducedStateSpaceModel::v_t)
      .def_readonly("indices", &ReducedStateSpaceModel::indices)
      .def_readonly("iterations", &ReducedStateSpaceModel::iterations);

  py::class_<FrequencyGrid>(m, "FrequencyGrid")
      .def(py::init(&FrequencyGrid::uniform), py::arg("fs"), py::arg("n") = FrequencyGrid::kDefaultPoints)
      .def_readonly("freqs_hz", &FrequencyGrid::freqs_hz)
      .def_readonly("fs", &FrequencyGrid::fs);

  py::class_<SpectralProfile>(m, "SpectralProfile")
      .def_readonly("values", &SpectralProfile::values)
      .def_readonly("grid", &SpectralProfile::grid)
      .def_readonly("label", &SpectralProfile::label);

  py::class_<MirDecomposition>(m, "MirDecomposition")
      .def_readonly("total", &MirDecomposition::total)
      .def_readonly("te_1to2", &MirDecomposition::te_1to2)
      .def_readonly("te_2to1", &MirDecomposition::te_2to1)
      .def_readonly("inst", &MirDecomposition::inst)
      .def_property_readonly("profiles", [](const MirDecomposition& d) -> py::object {
        if (!d.profiles) return py::none();
        py::dict out;
        out["total"] = d.profiles->total;
        out["te_1to2"] = d.profiles->te_1to2;
        out["te_2to1"] = d.profiles->te_2to1;
        out["inst"] = d.profiles->inst;
        return out;
      });

  py::class_<OirIncrement>(m, "OirIncrement")
      .def_readonly("target", &OirIncrement::target)
      .def_readonly("multiplet", &OirIncrement::multiplet)
      .def_readonly("total", &OirIncrement::total)
      .def_readonly("to_target", &OirIncrement::to_target)
      .def_readonly("from_target", &OirIncrement::from_target)
      .def_readonly("inst", &OirIncrement::inst)
      .def_property_readonly("delta", [](const OirIncrement& i) { return i.profiles.total; });

  py::class_<OirResult>(m, "OirResult")
      .def_readonly("multiplet", &OirResult::multiplet)
      .def_readonly("omega", &OirResult::omega)
      .def_readonly("nu", &OirResult::nu)
      .def_readonly("increments", &OirResult::increments)
      .def_readonly("band_table", &OirResult::band_table);

  m.def("fit_var", &fit_var, py::arg("data"), py::arg("p"));
  m.def("select_order",
        [](const TimeSeriesData& d, int max_p, const std::string& c) { return select_order(d, max_p, parse_criterion(c)); },
        py::arg("data"), py::arg("max_p"), py::arg("criterion") = "bic");
  m.def("spectral_radius", py::overload_cast<const VarModel&>(&spectral_radius));
  m.def("var_to_ss", &var_to_ss);
  m.def("reduce", [](const StateSpaceModel& ss, const IndexSet& r) { return reduce(ss, r); }, py::arg("ss"), py::arg("r"));
  m.def("integrate",
        [](const SpectralProfile& p, std::optional<std::pair<double, double>> band) { return integrate(p, to_band(band)); },
        py::arg("profile"), py::arg("band") = py::none());

  m.def("mir", py::overload_cast<const StateSpaceModel&, const IndexSet&, const IndexSet&, const FrequencyGrid&>(&mir),
        py::arg("ss"), py::arg("z1"), py::arg("z2"), py::arg("grid"));
  m.def("mir_oracle", py::overload_cast<const StateSpaceModel&, const IndexSet&, const IndexSet&>(&mir_oracle),
        py::arg("ss"), py::arg("z1"), py::arg("z2"));
  m.def("oir_increment",
        py::overload_cast<const StateSpaceModel&, const BlockPartition&, const std::vector<int>&, int,
                          const FrequencyGrid&, bool>(&oir_increment),
        py::arg("ss"), py::arg("partition"), py::arg("multiplet"), py::arg("target"), py::arg("grid"),
        py::arg("merge_inst") = false);
  m.def("oir",
        [](const StateSpaceModel& ss, const BlockPartition& part, const std::vector<int>& multiplet,
           const FrequencyGrid& grid, const std::map<std::string, std::pair<double, double>>& bands) {
          return oir::oir(ss, part, multiplet, grid, to_bands(bands));
        },
        py::arg("ss"), py::arg("partition"), py::arg("multiplet"), py::arg("grid"),
        py::arg("bands") = std::map<std::string, std::pair<double, double>>{});
  m.def("oir_scan",
        [](const StateSpaceModel& ss, const BlockPartition& part, const std::vector<int>& orders,
           const FrequencyGrid& grid, const std::map<std::string, std::pair<double, double>>& bands, int threads) {
          py::list out;
          for (auto& rec : oir_scan(ss, part, orders, grid, to_bands(bands), {false, threads})) {
            if (!rec.result) throw Error(*rec.error, rec.message);
            out.append(std::move(*rec.result));
          }
          return out;
        },
        py::arg("ss"), py::arg("partition"), py::arg("orders"), py::arg("grid"),
        py::arg("bands") = std::map<std::string, std::pair<double, double>>{}, py::arg("threads") = 1);
  m.def("interaction_info_check",
        py::overload_cast<const StateSpaceModel&, const BlockPartition&, const std::vector<int>&, const FrequencyGrid&>(
            &interaction_info_check));

  m.def("ar2_coeffs", [](double rho, double f_hz, double fs) { return ar2_coeffs({rho, f_hz, fs}); });
  m.def("fir_design", [](int order, double cutoff_hz, const std::string& kind, double fs) {
    return fir_design({order, cutoff_hz, kind == "highpass" ? FirKind::kHighpass : FirKind::kLowpass, fs});
  }, py::arg("order"), py::arg("cutoff_hz"), py::arg("kind") = "lowpass", py::arg("fs") = 1.0);
  m.def("build_sim1", [](bool swap) {
    auto b = build_sim1({swap});
    return py::make_tuple(b.model, b.partition);
  }, py::arg("swap_filters") = false);
  m.def("build_sim2", [] {
    auto b = build_sim2();
    return py::make_tuple(b.model, b.partition);
  });
  m.def("realize", &realize, py::arg("model"), py::arg("n_samples"), py::arg("seed"), py::arg("burn_in") = 1000);
  m.def("load_csv", [](const std::string& path) { return io::load_csv(path).data; });
}
