#pragma once

// JSON views of analysis results.

#include <optional>
#include <vector>

#include "sphopt/degeneracy.hpp"
#include "sphopt/json_io.hpp"

namespace sphopt {

inline json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json to_json(const CriticalPair& p) {
  return {{"x", vector_json(p.x)},
          {"lambda", p.lambda},
          {"residual", p.residual},
          {"sphere_residual", p.sphere_residual}};
}

inline json to_json(const ClassifiedPoint& cp) {
  return {{"x", vector_json(cp.pair.x)},
          {"lambda", cp.pair.lambda},
          {"residual", cp.pair.residual},
          {"tangent_eigenvalues", vector_json(cp.spectrum.eigenvalues)},
          {"margin", cp.sosc_margin},
          {"verdict", to_string(cp.verdict)}};
}

inline json to_json(const OracleResult& r) {
  return {{"on_locus", r.on_locus},
          {"minors_identically_zero", r.minors_identically_zero},
          {"root_at_infinity", r.root_at_infinity},
          {"gcd_degree", r.gcd_degree},
          {"certificate", r.certificate}};
}

inline json to_json(const DegeneracyWitness& w, const std::optional<OracleResult>& oracle = std::nullopt) {
  json j = {{"x", vector_json(w.x)},
            {"y", vector_json(w.y)},
            {"mu", w.mu},
            {"lambda", w.lambda},
            {"third_singular_value", w.rank_defect_measure},
            {"largest_singular_value", w.largest_singular_value},
            {"rank_verified", w.rank_verified},
            {"bordered_det", w.bordered_det},
            {"det_scale", w.det_scale},
            {"bordered_residual", w.bordered_residual}};
  if (oracle) j["oracle_on_locus"] = oracle->on_locus;
  return j;
}

inline json to_json(const CertificationReport& r) {
  json a = json::array();
  json b = json::array();
  for (const auto& p : r.only_multistart) a.push_back(to_json(p));
  for (const auto& p : r.only_oracle) b.push_back(to_json(p));
  return {{"certified", r.certified},
          {"all_points_critical", r.all_points_critical},
          {"multistart_count", r.multistart_count},
          {"oracle_count", r.oracle_count},
          {"only_multistart", a},
          {"only_oracle", b}};
}

inline json to_json(const std::vector<ClassifiedPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

}  // namespace sphopt
