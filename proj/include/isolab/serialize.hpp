#ifndef ISOLAB_SERIALIZE_HPP
#define ISOLAB_SERIALIZE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isolab/error.hpp"
#include "isolab/family.hpp"
#include "isolab/prooftrace.hpp"
#include "isolab/select.hpp"
#include "isolab/subset.hpp"
#include "isolab/witness.hpp"

namespace isolab {

using json = nlohmann::json;

inline json mask_to_json(const SubsetMask& m) { return json(m.indices()); }

inline SubsetMask mask_from_json(const json& j, int n) {
  return SubsetMask::from_indices(n, j.get<std::vector<int>>());
}

inline json optional_to_json(const std::optional<double>& v) {
  if (!v || std::isnan(*v)) return nullptr;
  return *v;
}

inline json nan_to_json(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

inline json family_to_json(const IsoFamily& f) {
  json sets = json::array();
  for (const SubsetMask& m : f.maximal_sets) sets.push_back(mask_to_json(m));
  return json{
      {"n", f.n},
      {"kind", f.kind == FamilyKind::isomorphism ? "isomorphism" : "suppression"},
      {"epsilon_or_delta", f.param},
      {"maximal_sets", sets},
      {"free_indices", mask_to_json(f.free_indices)},
  };
}

inline IsoFamily family_from_json(const json& j) {
  IsoFamily f;
  f.n = j.at("n").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "isomorphism")
    f.kind = FamilyKind::isomorphism;
  else if (kind == "suppression")
    f.kind = FamilyKind::suppression;
  else
    throw Error(ErrorKind::invalid_input, "unknown family kind '" + kind + "'");
  f.param = j.at("epsilon_or_delta").get<double>();
  for (const json& s : j.at("maximal_sets")) f.maximal_sets.push_back(mask_from_json(s, f.n));
  f.free_indices = mask_from_json(j.at("free_indices"), f.n);
  return f;
}

inline json witness_to_json(const WitnessMeasure& w,
                            std::optional<double> empirical_c = std::nullopt) {
  json support = json::array();
  for (const auto& [set, p] : w.support)
    support.push_back(json{{"set", mask_to_json(set)}, {"prob", p}});
  return json{
      {"floor", w.floor},
      {"gap", w.gap},
      {"support", support},
      {"dual_lambda", w.dual_lambda},
      {"marginals", w.marginals},
      {"empirical_c", optional_to_json(empirical_c)},
  };
}

inline WitnessMeasure witness_from_json(const json& j) {
  WitnessMeasure w;
  w.floor = j.at("floor").get<double>();
  w.gap = j.at("gap").get<double>();
  w.dual_lambda = j.at("dual_lambda").get<std::vector<double>>();
  w.marginals = j.at("marginals").get<std::vector<double>>();
  const int n = static_cast<int>(w.marginals.size());
  for (const json& s : j.at("support"))
    w.support.emplace_back(mask_from_json(s.at("set"), n), s.at("prob").get<double>());
  return w;
}

inline json selection_to_json(const SelectionResult& r, const SelectionReports& rep) {
  json eq5 = nullptr;
  if (rep.eq5_confirmed) eq5 = *rep.eq5_confirmed;
  return json{
      {"method", r.method},
      {"chosen", mask_to_json(r.chosen)},
      {"mu_value", r.mu_value},
      {"bound_rhs", r.bound_rhs},
      {"empirical_c", nan_to_json(r.empirical_c)},
      {"reports",
       json{{"eq4", optional_to_json(rep.eq4)},
            {"eq6", optional_to_json(rep.eq6)},
            {"thm14", optional_to_json(rep.thm14)},
            {"cor15", optional_to_json(rep.cor15)},
            {"eq5_confirmed", eq5}}},
  };
}

inline json trace_to_json(const ProofTrace& t) {
  json checks = json::array();
  for (const LedgerEntry& e : t.checks)
    checks.push_back(json{{"label", e.label},
                          {"lhs", nan_to_json(e.lhs)},
                          {"rhs", nan_to_json(e.rhs)},
                          {"pass", e.pass}});
  return json{
      {"epsilon", t.epsilon},
      {"C", t.c_bound},
      {"scale", t.scale},
      {"short_circuited", t.short_circuited},
      {"free_indices", mask_to_json(t.zero_cols)},
      {"sigma1", mask_to_json(t.sigma1)},
      {"sigma2", mask_to_json(t.sigma2)},
      {"sigma_final", mask_to_json(t.sigma_final)},
      {"t2_norm", t.t2_norm},
      {"s_norm", t.s_norm},
      {"delta", nan_to_json(t.delta)},
      {"mu_final", t.mu_final},
      {"checks", checks},
      {"passed", t.passed()},
  };
}

}  // namespace isolab

#endif  // ISOLAB_SERIALIZE_HPP
