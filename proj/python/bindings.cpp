#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conteq/config.hpp"
#include "conteq/diagnostics.hpp"
#include "conteq/model_ot.hpp"
#include "conteq/runner.hpp"

namespace py = pybind11;
using namespace conteq;

namespace {

ot::ModelPoint make_point(int n, const RVec& coords) {
  ot::ModelPoint p;
  p.n = n;
  p.coords = coords;
  if (!p.valid()) throw std::invalid_argument("model point needs Im z_j > 0");
  return p;
}

py::dict row_to_dict(const DiagnosticsRow& r) {
  py::dict d;
  d["t"] = r.t;
  d["sup_abs_phi_scaled"] = r.sup_abs_phi_scaled;
  d["det_log_ratio_scaled"] = r.det_log_ratio_scaled;
  d["trace_gap_fwd"] = r.trace_gap_fwd;
  d["trace_gap_bwd"] = r.trace_gap_bwd;
  d["equivalence_eps"] = r.equivalence_eps;
  d["calabi_sup"] = r.calabi_sup;
  d["scalar_R_sup"] = r.scalar_R_sup;
  d["ricci_min"] = r.ricci_min;
  d["ricci_max"] = r.ricci_max;
  d["gh_proxy"] = r.gh_proxy;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "continuity-equation laboratory for Hermitian metrics";

  // --- model geometry ---
  m.def(
      "ot_forms",
      [](int n, const RVec& coords) {
        const auto p = make_point(n, coords);
        py::dict d;
        d["alpha"] = ot::alpha_form(n).eval(p.coords);
        d["beta"] = ot::beta_form(n).eval(p.coords);
        d["gamma"] = ot::gamma_form(n).eval(p.coords);
        d["omega_ot"] = ot::ot_metric(n).eval(p.coords);
        d["omega_density"] = ot::omega_density(n, p);
        return d;
      },
      py::arg("n"), py::arg("coords"),
      "Model (1,1)-forms and the volume density at a point "
      "[Re z_1, Im z_1, ..., Re w, Im w].");

  m.def(
      "omega_hat",
      [](int n, double t, const RVec& coords) {
        return ot::omega_hat(n, t).eval(make_point(n, coords).coords);
      },
      py::arg("n"), py::arg("t"), py::arg("coords"),
      "Reference-family metric (omega_OT + t alpha)/(t+1) at a point.");

  m.def(
      "explicit_solution_residual",
      [](int n, double t, const RVec& coords) {
        return ot::explicit_solution_residual(n, t, make_point(n, coords));
      },
      py::arg("n"), py::arg("t"), py::arg("coords"));

  m.def(
      "ddbar_log_omega_residual",
      [](int n, const RVec& coords) {
        return ot::ddbar_log_omega_residual(n, make_point(n, coords));
      },
      py::arg("n"), py::arg("coords"));

  // --- estimates ---
  m.def(
      "maclaurin_residuals",
      [](const Mat& omega, const Mat& omega_hat) {
        const auto r = maclaurin_residuals(omega, omega_hat);
        return py::make_tuple(r.residual_fwd, r.residual_bwd);
      },
      py::arg("omega"), py::arg("omega_hat"));

  m.def("equivalence_eps", &equivalence_eps, py::arg("omega"), py::arg("reference"));

  // --- identity suite ---
  m.def(
      "verify_identities",
      [](int n, std::uint64_t seed, int count) {
        py::list out;
        for (const auto& c : run_identity_suite(n, seed, count)) {
          py::dict d;
          d["id"] = c.id;
          d["ref"] = c.ref;
          d["passed"] = c.passed;
          d["value"] = c.value;
          d["threshold"] = c.threshold;
          out.append(d);
        }
        return out;
      },
      py::arg("n") = 2, py::arg("seed") = 1, py::arg("count") = 25);

  // --- experiments ---
  m.def("catalog", []() {
    py::list names;
    for (const auto& c : catalog()) names.append(c.name);
    return names;
  });

  m.def(
      "run_preset",
      [](const std::string& name, const std::string& output_root) {
        const auto c = preset(name);
        if (!c) throw std::invalid_argument("unknown preset '" + name + "'");
        const RunResult r = run_experiment(*c, output_root);
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["output_dir"] = r.output_dir;
        d["report"] = r.report.dump();
        return d;
      },
      py::arg("name"), py::arg("output_root") = "runs");

  m.def(
      "torus_continuation",
      [](int n, int N, const std::string& variant, double phi0_amplitude, double t_end,
         int t_count) {
        ExperimentConfig c;
        c.kind = RunKind::torus;
        c.n = n;
        c.grid_n = N;
        c.variant = variant == "normalized" ? Variant::normalized : Variant::unnormalized;
        c.phi0_preset = phi0_amplitude == 0.0 ? "zero" : "cos";
        c.phi0_amplitude = phi0_amplitude;
        c.t_end = t_end;
        c.t_count = t_count;
        c.solver.t_schedule = c.schedule();

        TorusGrid grid;
        grid.n_complex = n;
        grid.N = N;
        grid.re_slice = n >= 2;
        AnalyticScalar phi0(2 * n);
        if (phi0_amplitude != 0.0) {
          Term t1;
          t1.coeff = phi0_amplitude;
          t1.factors = unit_factors(2 * n);
          t1.factors[0] = Factor{Factor::COS, 1.0, 0.0};
          if (!grid.re_slice) t1.factors[1] = Factor{Factor::COS, 1.0, 0.3};
          phi0.add(t1);
        }
        TorusSolver solver(grid, c.variant, TorusSolver::sample(grid, phi0), Mat::Identity(n, n),
                           c.solver);
        py::list rows;
        class B : public ContinuationBackend {
         public:
          explicit B(TorusSolver& s) : s_(s) {}
          bool solve_at(double t) override { return s_.solve_at(t); }
          void accept() override { s_.accept(); }
          void rollback() override { s_.rollback(); }
          TorusSolver& s_;
        } backend(solver);
        continue_in_t(backend, c.solver, [&](double) {
          rows.append(row_to_dict(torus_row(solver, nullptr)));
        });
        return rows;
      },
      py::arg("n") = 1, py::arg("N") = 64, py::arg("variant") = "normalized",
      py::arg("phi0_amplitude") = 0.3, py::arg("t_end") = 100.0, py::arg("t_count") = 10,
      "Run a torus continuation and return the diagnostics rows.");

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
