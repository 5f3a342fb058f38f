#pragma once

// Independent brute-force oracles. These deliberately avoid the ConfigSet
// machinery: satisfiability is decided by enumerating raw assignments and
// evaluating formulas directly.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pnpl/feature_model.hpp"
#include "pnpl/formula.hpp"

namespace testsupport {

// Every total assignment over the given variable names, in mask order.
inline std::vector<pnpl::Assignment> all_assignments(const std::vector<std::string>& names) {
  std::vector<pnpl::Assignment> out;
  const std::uint64_t end = 1ULL << names.size();
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    pnpl::Assignment a;
    for (std::size_t j = 0; j < names.size(); ++j) a[names[j]] = (mask >> j) & 1ULL;
    out.push_back(std::move(a));
  }
  return out;
}

// SAT(f) over the full 2^n assignment space of the named variables.
inline bool brute_force_sat(const pnpl::Formula& f, const std::vector<std::string>& names) {
  for (const auto& a : all_assignments(names))
    if (f.evaluate(a)) return true;
  return false;
}

// SAT(f && C) over the full 2^|F| assignment space of the feature model.
inline bool brute_force_sat_under(const pnpl::Formula& f, const pnpl::FeatureModel& fm) {
  for (const auto& a : all_assignments(fm.sorted_features()))
    if (fm.constraints().evaluate(a) && f.evaluate(a)) return true;
  return false;
}

// The satisfying valid configurations of f, found by direct evaluation.
inline std::set<std::size_t> brute_force_models(const pnpl::Formula& f,
                                                const pnpl::FeatureModel& fm) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < fm.valid_configurations().size(); ++i)
    if (f.evaluate(fm.valid_configurations()[i])) out.insert(i);
  return out;
}

inline std::set<std::size_t> as_index_set(const pnpl::ConfigSet& s) {
  const auto v = s.indices();
  return std::set<std::size_t>(v.begin(), v.end());
}

}  // namespace testsupport
