#include "trg/json_io.hpp"

namespace trg {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw error(errc::construction_failed, "matrix JSON must be an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols)
      throw error(errc::construction_failed, "ragged matrix JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json tolerances_to_json(const Tolerances& tol) {
  return {{"rank_tol", tol.rank_tol},         {"scalar_tol", tol.scalar_tol},
          {"grid_tol", tol.grid_tol},         {"relation_tol", tol.relation_tol},
          {"conj_tol", tol.conj_tol},         {"cond_max", tol.cond_max}};
}

Tolerances tolerances_from_json(const json& j) {
  Tolerances tol;
  if (j.contains("rank_tol")) tol.rank_tol = j["rank_tol"].get<double>();
  if (j.contains("scalar_tol")) tol.scalar_tol = j["scalar_tol"].get<double>();
  if (j.contains("grid_tol")) tol.grid_tol = j["grid_tol"].get<double>();
  if (j.contains("relation_tol")) tol.relation_tol = j["relation_tol"].get<double>();
  if (j.contains("conj_tol")) tol.conj_tol = j["conj_tol"].get<double>();
  if (j.contains("cond_max")) tol.cond_max = j["cond_max"].get<double>();
  tol.validate();
  return tol;
}

json config_to_json(const Config6Normal& c,
                    const std::optional<std::array<double, 3>>& lambda) {
  json j = {{"n", c.n()},
            {"symmetric", c.symmetric()},
            {"N", mat_to_json(c.N())},
            {"M1", mat_to_json(c.M1())},
            {"M2", mat_to_json(c.M2())},
            {"M3", mat_to_json(c.M3())}};
  if (lambda) j["lambda"] = {(*lambda)[0], (*lambda)[1], (*lambda)[2]};
  return j;
}

Config6Normal config_from_json(const json& j, const Tolerances& tol) {
  for (const char* key : {"n", "symmetric", "N", "M1", "M2", "M3"})
    if (!j.contains(key))
      throw error(errc::construction_failed,
                  std::string("configuration JSON misses '") + key + "'");
  Config6Normal c(mat_from_json(j["N"]), mat_from_json(j["M1"]),
                  mat_from_json(j["M2"]), mat_from_json(j["M3"]),
                  j["symmetric"].get<bool>(), tol);
  if (c.n() != j["n"].get<int>())
    throw error(errc::dimension_mismatch, "configuration JSON 'n' disagrees with matrices");
  return c;
}

json rep_summary_json(const Rep& rep) {
  json j = {{"kind", rep_kind_name(rep.kind)},
            {"k", {rep.params.k1, rep.params.k2, rep.params.k3}},
            {"n", static_cast<int>(rep.half_dim())}};
  if (rep.signature)
    j["signature"] = {rep.signature->first, rep.signature->second};
  else
    j["signature"] = nullptr;
  return j;
}

json probe_report_json(const Rep& rep, const ProbeParams& params,
                       const ProbeReport& report) {
  json trials = json::array();
  for (const auto& t : report.trials)
    trials.push_back({{"seed_offset", t.seed_offset},
                      {"residual", t.residual},
                      {"conjugate", t.conjugate},
                      {"conj_residual", t.conj_residual},
                      {"witness_cond", t.witness_cond}});
  return {{"rep", rep_summary_json(rep)},
          {"params",
           {{"trials", params.trials},
            {"magnitude", params.magnitude},
            {"seed", params.seed},
            {"max_iter", params.max_iter},
            {"relation_tol", params.relation_tol},
            {"conj_tol", params.conj_tol}}},
          {"trials", std::move(trials)},
          {"summary",
           {{"trials_run", report.trials_run},
            {"converged", report.converged},
            {"conjugate_to_base", report.conjugate_to_base},
            {"max_invariant_drift", report.max_invariant_drift}}}};
}

}  // namespace trg
