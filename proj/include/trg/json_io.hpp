#pragma once

#include <json.hpp>

#include "trg/configurations.hpp"
#include "trg/probe.hpp"

namespace trg {

using json = nlohmann::json;

json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j);

json tolerances_to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const json& j);

// {n, symmetric, N, M1, M2, M3, lambda: [...]} (lambda optional).
json config_to_json(const Config6Normal& c,
                    const std::optional<std::array<double, 3>>& lambda = std::nullopt);
Config6Normal config_from_json(const json& j, const Tolerances& tol = {});

json rep_summary_json(const Rep& rep);
json probe_report_json(const Rep& rep, const ProbeParams& params,
                       const ProbeReport& report);

}  // namespace trg
