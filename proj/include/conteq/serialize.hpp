#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conteq/diagnostics.hpp"
#include "conteq/grid.hpp"

namespace conteq {

using json = nlohmann::json;

/// Snapshot schema: {"dim", "domain", "values"} with per-point row-major
/// complex matrices encoded as [re, im] pairs.
json field_to_json(const MatrixGridField& f);
MatrixGridField field_from_json(const json& j);

json state_to_json(const MatrixGridField& omega, double t, double residual_norm, int newton_iters);

/// Point-set snapshot for model-geometry fields.
json points_field_to_json(int n, const std::vector<ot::ModelPoint>& points,
                          const std::vector<Mat>& values);

/// run.csv writer: fixed header, 17 significant digits, deterministic order.
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);

std::string format_g17(double v);

}  // namespace conteq
