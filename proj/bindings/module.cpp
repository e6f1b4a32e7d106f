#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "regemp/diagnostics.hpp"
#include "regemp/errors.hpp"
#include "regemp/features.hpp"
#include "regemp/model_spec.hpp"
#include "regemp/panel.hpp"
#include "regemp/report.hpp"
#include "regemp/solver.hpp"
#include "regemp/synth.hpp"

namespace py = pybind11;
using namespace regemp;

namespace {

ModelSpec spec_from_json(const std::string& text) {
  return text.empty() ? ModelSpec{} : ModelSpec::from_json_text(text);
}

std::vector<Method> methods_from_names(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) {
    if (name == "lsdv") methods.push_back(Method::LSDV);
    else if (name == "fd") methods.push_back(Method::FD);
    else if (name == "re") methods.push_back(Method::RE);
    else throw Error(ErrorKind::ConfigError, "unknown estimator '" + name + "'");
  }
  return methods;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regional employment growth panel estimator (C++ core)";

  py::register_exception<Error>(m, "RegempError");

  py::class_<PanelDataset>(m, "PanelDataset")
      .def_property_readonly("n_regions", &PanelDataset::n_regions)
      .def_property_readonly("n_industries", &PanelDataset::n_industries)
      .def_property_readonly("n_years", &PanelDataset::n_years)
      .def_property_readonly("n_observations", &PanelDataset::n_observations)
      .def_property_readonly("years", &PanelDataset::years)
      .def_property_readonly("regions",
                             [](const PanelDataset& ds) {
                               std::vector<std::string> codes;
                               for (const auto& region : ds.regions()) codes.push_back(region.code);
                               return codes;
                             })
      .def_property_readonly("industries",
                             [](const PanelDataset& ds) {
                               std::vector<std::string> codes;
                               for (const auto& industry : ds.industries())
                                 codes.push_back(industry.code);
                               return codes;
                             })
      .def_property_readonly("core_region",
                             [](const PanelDataset& ds) { return ds.core_region().code; })
      .def_property_readonly("warnings", &PanelDataset::warnings)
      .def("employment", &PanelDataset::employment, py::arg("region"), py::arg("industry"),
           py::arg("year_index"))
      .def("region_total", &PanelDataset::region_total, py::arg("region"), py::arg("year_index"))
      .def("national_total", &PanelDataset::national_total, py::arg("year_index"))
      .def("__repr__", [](const PanelDataset& ds) {
        return "<PanelDataset " + std::to_string(ds.n_regions()) + "x" +
               std::to_string(ds.n_industries()) + "x" + std::to_string(ds.n_years()) + ">";
      });

  m.def(
      "load_panel",
      [](const std::string& panel_path, const std::string& totals_path,
         const std::string& schema_path) {
        SchemaMapping schema;
        if (!schema_path.empty()) schema = SchemaMapping::from_json_file(schema_path);
        return load_panel(panel_path, totals_path, schema);
      },
      py::arg("panel_path"), py::arg("totals_path"), py::arg("schema_path") = "",
      "Load and validate a panel from observation and totals CSV files.");

  m.def(
      "save_panel",
      [](const PanelDataset& ds, const std::string& panel_path, const std::string& totals_path) {
        save_panel(ds, panel_path, totals_path);
      },
      py::arg("dataset"), py::arg("panel_path"), py::arg("totals_path"));

  m.def(
      "validate",
      [](const PanelDataset& ds) {
        std::vector<std::string> lines;
        for (const auto& v : validate(ds))
          lines.push_back(v.invariant + " at " + v.cell + ": " + v.detail);
        return lines;
      },
      py::arg("dataset"), "Invariant scan; empty list means the dataset is valid.");

  m.def(
      "generate",
      [](const std::string& config_json) {
        return generate(SyntheticConfig::from_json_text(config_json));
      },
      py::arg("config_json"),
      "Simulate a panel whose growth equation has known coefficients.");

  m.def("default_synthetic_config", [] { return SyntheticConfig{}.to_json_text(); });

  m.def(
      "build_features",
      [](const PanelDataset& ds, const std::string& spec_json) {
        ModelSpec spec = spec_from_json(spec_json);
        FeatureTable table = build_features(ds, FeatureOptions::from_spec(spec));
        const auto n = static_cast<py::ssize_t>(table.rows.size());
        py::dict out;
        std::vector<std::string> region(n), industry(n);
        Eigen::VectorXi year(n);
        Eigen::MatrixXd values(n, 6);
        for (py::ssize_t i = 0; i < n; ++i) {
          const FeatureRow& row = table.rows[i];
          region[i] = row.region;
          industry[i] = row.industry;
          year(i) = row.year;
          values(i, 0) = row.dep;
          values(i, 1) = row.x1_wage;
          values(i, 2) = row.x2_transport;
          values(i, 3) = row.x3_linkages;
          values(i, 4) = row.x4_agglomeration;
          values(i, 5) = row.x5_concentration;
        }
        out["region"] = region;
        out["industry"] = industry;
        out["year"] = year;
        out["columns"] = std::vector<std::string>{"dep", "x1", "x2", "x3", "x4", "x5"};
        out["values"] = values;
        return out;
      },
      py::arg("dataset"), py::arg("spec_json") = "",
      "Dependent variable and regressors as an (n, 6) array plus row labels.");

  m.def(
      "estimate",
      [](const PanelDataset& ds, const std::string& spec_json,
         const std::vector<std::string>& estimators) {
        ReportInput report = run_pipeline(ds, spec_from_json(spec_json),
                                          methods_from_names(estimators));
        return render_json(report);
      },
      py::arg("dataset"), py::arg("spec_json") = "",
      py::arg("estimators") = std::vector<std::string>{"lsdv", "fd", "re"},
      "Run the pipeline and return the full report as a JSON string.");

  m.def(
      "monte_carlo",
      [](const std::string& config_json, int replications) {
        return render_montecarlo_json(
            monte_carlo(SyntheticConfig::from_json_text(config_json), replications));
      },
      py::arg("config_json"), py::arg("replications"),
      "Replicated generate + estimate; returns the summary as a JSON string.");

  m.def(
      "solve_ols",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double tol) {
        LsqSolution sol = solve_ols(X, y, tol);
        py::dict out;
        out["beta"] = sol.beta;
        out["cov"] = sol.cov;
        out["residuals"] = sol.residuals;
        out["sigma2"] = sol.sigma2;
        out["retained"] = sol.retained;
        out["dropped"] = sol.dropped_columns;
        out["n"] = sol.n;
        out["p"] = sol.p;
        return out;
      },
      py::arg("X"), py::arg("y"), py::arg("tol") = -1.0);

  m.def("adjusted_r2", &adjusted_r2, py::arg("residuals"), py::arg("y"), py::arg("p"));
  m.def("durbin_watson", &durbin_watson_panel, py::arg("residuals"), py::arg("unit_index"));
  m.def("hausman_critical_95", &chi_square_critical_95, py::arg("dof"));

  m.attr("__version__") = "0.1.0";
}
