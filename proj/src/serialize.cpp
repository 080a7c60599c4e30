#include "conteq/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace conteq {

namespace {

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int k = 0; k < m.rows(); ++k)
    for (int j = 0; j < m.cols(); ++j)
      rows.push_back({m(k, j).real(), m(k, j).imag()});
  return rows;
}

Mat matrix_from_json(const json& j, int n) {
  Mat m(n, n);
  int idx = 0;
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c) {
      m(k, c) = cplx{j[idx][0].get<double>(), j[idx][1].get<double>()};
      ++idx;
    }
  return m;
}

}  // namespace

json field_to_json(const MatrixGridField& f) {
  json domain = {
      {"type", "periodic-grid"},
      {"N", f.grid.N},
      {"axes", 2},
      {"spacing", f.grid.spacing()},
      {"coords", f.grid.re_slice ? "re-slice" : "full"},
  };
  json values = json::array();
  for (size_t i = 0; i < f.grid.size(); ++i) values.push_back(matrix_to_json(f.at(i)));
  return json{{"dim", f.n}, {"domain", domain}, {"values", values}};
}

MatrixGridField field_from_json(const json& j) {
  MatrixGridField f;
  f.n = j.at("dim").get<int>();
  f.grid.N = j.at("domain").at("N").get<int>();
  f.grid.re_slice = j.at("domain").at("coords").get<std::string>() == "re-slice";
  f.grid.n_complex = f.n;
  f.entries.assign(static_cast<size_t>(f.n) * f.n, ComplexField(f.grid.size()));
  const auto& vals = j.at("values");
  for (size_t i = 0; i < f.grid.size(); ++i) f.set(i, matrix_from_json(vals[i], f.n));
  return f;
}

json state_to_json(const MatrixGridField& omega, double t, double residual_norm, int newton_iters) {
  json j = field_to_json(omega);
  j["t"] = t;
  j["residual_norm"] = residual_norm;
  j["newton_iters"] = newton_iters;
  return j;
}

json points_field_to_json(int n, const std::vector<ot::ModelPoint>& points,
                          const std::vector<Mat>& values) {
  json pts = json::array();
  for (const auto& p : points) {
    json c = json::array();
    for (int i = 0; i < p.coords.size(); ++i) c.push_back(p.coords[i]);
    pts.push_back(c);
  }
  json vals = json::array();
  for (const auto& m : values) vals.push_back(matrix_to_json(m));
  return json{{"dim", n}, {"domain", {{"type", "points"}, {"points", pts}}}, {"values", vals}};
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
  std::ostringstream os;
  os << "t,sup_abs_phi_scaled,det_log_ratio_scaled,trace_gap_fwd,trace_gap_bwd,"
        "equivalence_eps,calabi_sup,scalar_R_sup,ricci_min,ricci_max,gh_proxy\n";
  for (const auto& r : rows) {
    os << format_g17(r.t) << ',' << format_g17(r.sup_abs_phi_scaled) << ','
       << format_g17(r.det_log_ratio_scaled) << ',' << format_g17(r.trace_gap_fwd) << ','
       << format_g17(r.trace_gap_bwd) << ',' << format_g17(r.equivalence_eps) << ','
       << format_g17(r.calabi_sup) << ',' << format_g17(r.scalar_R_sup) << ','
       << format_g17(r.ricci_min) << ',' << format_g17(r.ricci_max) << ','
       << format_g17(r.gh_proxy) << '\n';
  }
  return os.str();
}

}  // namespace conteq
