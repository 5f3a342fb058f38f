#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pnpl/derive.hpp"
#include "pnpl/errors.hpp"
#include "pnpl/feature_model.hpp"
#include "pnpl/frg.hpp"
#include "pnpl/net.hpp"

namespace pnpl {

// Per-marking answer to a behavioural query: the configurations for which the
// property holds, both extensionally and as a formula.
struct QueryAnswer {
  Marking marking;
  ConfigSet configs;
  Formula symbolic;
};

namespace detail {

inline void require_sound(const Frg& frg, const char* what) {
  if (frg.mode != BuildMode::Sound)
    throw Error(std::string(what) + " requires a graph built in sound mode");
}

}  // namespace detail

// For each reachable marking, the configurations under which no present
// transition is token-enabled. Markings that are live everywhere are omitted.
inline std::vector<QueryAnswer> deadlocks(const Frg& frg, const Net150& net,
                                          const FeatureModel& fm) {
  detail::require_sound(frg, "deadlock analysis");

  std::vector<ConfigSet> effective_configs;
  for (std::size_t t = 0; t < net.transitions().size(); ++t)
    effective_configs.push_back(fm.config_set(net.effective_pc(static_cast<int>(t))));

  // Group feature paths per marking, first-appearance order.
  std::vector<Marking> order;
  std::map<Marking, ConfigSet> reachable_under;
  for (const FrgState& st : frg.states) {
    auto it = reachable_under.find(st.marking);
    if (it == reachable_under.end()) {
      order.push_back(st.marking);
      reachable_under.emplace(st.marking, st.configs);
    } else {
      it->second = it->second | st.configs;
    }
  }

  std::vector<QueryAnswer> answers;
  for (const Marking& m : order) {
    const ConfigSet& candidates = reachable_under.at(m);
    ConfigSet dead = fm.empty_set();
    for (std::size_t rho : candidates.indices()) {
      bool live = false;
      for (std::size_t t = 0; t < net.transitions().size() && !live; ++t)
        live = effective_configs[t].test(rho) && enabled(net, m, static_cast<int>(t));
      if (!live) dead.set(rho);
    }
    if (dead.any()) answers.push_back({m, dead, fm.formula_for(dead)});
  }
  return answers;
}

// Configurations in which the target marking is reachable: the union of the
// feature paths of every state carrying that marking.
inline QueryAnswer reachable_in(const Frg& frg, const FeatureModel& fm, const Marking& target) {
  detail::require_sound(frg, "reachability analysis");
  ConfigSet configs = fm.empty_set();
  std::vector<Formula> paths;
  for (const FrgState& st : frg.states) {
    if (st.marking != target) continue;
    configs = configs | st.configs;
    paths.push_back(st.phi);
  }
  return {target, configs, Formula::disjoin_all(paths)};
}

struct ProductComparison {
  std::size_t config_index = 0;
  std::string label;
  bool match = false;
  std::size_t projected_states = 0;
  std::size_t projected_edges = 0;
  std::size_t oracle_states = 0;
  std::size_t oracle_edges = 0;
  std::vector<std::string> missing_states;  // in the oracle, not in the projection
  std::vector<std::string> extra_states;    // in the projection, not in the oracle
  std::vector<std::string> missing_edges;
  std::vector<std::string> extra_edges;
};

struct EquivalenceReport {
  BuildMode mode = BuildMode::Sound;
  bool pass = false;
  std::vector<ProductComparison> products;
};

namespace detail {

using EdgeTriple = std::tuple<Marking, std::string, Marking>;

inline std::set<Marking> state_set(const Rg& rg) {
  return std::set<Marking>(rg.states.begin(), rg.states.end());
}

inline std::set<EdgeTriple> edge_set(const Rg& rg) {
  std::set<EdgeTriple> out;
  for (const auto& e : rg.edges)
    out.insert({rg.states[e.from], rg.transition_names[e.transition], rg.states[e.to]});
  return out;
}

inline std::string render_edge(const std::vector<std::string>& place_order, const EdgeTriple& e) {
  return render_marking(place_order, std::get<0>(e)) + " --" + std::get<1>(e) + "--> " +
         render_marking(place_order, std::get<2>(e));
}

template <typename T, typename Render>
inline std::vector<std::string> render_difference(const std::set<T>& from, const std::set<T>& minus,
                                                  Render render) {
  std::vector<std::string> out;
  for (const T& item : from)
    if (!minus.contains(item)) out.push_back(render(item));
  return out;
}

}  // namespace detail

// The executable form of the soundness/completeness claim: for every valid
// configuration, the projection of the family-level graph must equal the
// reachability graph of the independently derived product net, state for
// state and edge for edge over marking identities.
inline EquivalenceReport oracle_equivalence(const Net150& net, const FeatureModel& fm,
                                            BuildMode mode = BuildMode::Sound,
                                            const Limits& limits = {}) {
  EquivalenceReport report;
  report.mode = mode;
  report.pass = true;

  const Frg frg = build_frg(net, fm, mode, limits);
  const std::vector<std::string> place_order = net.place_names();

  for (std::size_t i = 0; i < fm.valid_configurations().size(); ++i) {
    const Assignment& config = fm.valid_configurations()[i];
    const Rg projected = project(frg, net, fm, config);
    const Rg oracle = build_rg(derive_product(net, config, fm), limits);

    ProductComparison cmp;
    cmp.config_index = i;
    cmp.label = fm.config_label(i);
    cmp.projected_states = projected.states.size();
    cmp.projected_edges = projected.edges.size();
    cmp.oracle_states = oracle.states.size();
    cmp.oracle_edges = oracle.edges.size();

    const auto projected_states = detail::state_set(projected);
    const auto oracle_states = detail::state_set(oracle);
    const auto projected_edges = detail::edge_set(projected);
    const auto oracle_edges = detail::edge_set(oracle);

    const auto render_state = [&](const Marking& m) { return render_marking(place_order, m); };
    const auto render_edge = [&](const detail::EdgeTriple& e) {
      return detail::render_edge(place_order, e);
    };
    cmp.missing_states = detail::render_difference(oracle_states, projected_states, render_state);
    cmp.extra_states = detail::render_difference(projected_states, oracle_states, render_state);
    cmp.missing_edges = detail::render_difference(oracle_edges, projected_edges, render_edge);
    cmp.extra_edges = detail::render_difference(projected_edges, oracle_edges, render_edge);
    cmp.match = cmp.missing_states.empty() && cmp.extra_states.empty() &&
                cmp.missing_edges.empty() && cmp.extra_edges.empty();
    report.pass = report.pass && cmp.match;
    report.products.push_back(std::move(cmp));
  }
  return report;
}

struct ProductStats {
  std::size_t config_index = 0;
  std::string label;
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t inspections = 0;
};

// Family-level exploration cost against the sum over enumerated products.
struct FamilyStats {
  BuildStats family;
  std::vector<ProductStats> products;
  std::size_t sum_states = 0;
  std::size_t sum_edges = 0;
  std::size_t sum_inspections = 0;
  double states_ratio = 1.0;
  double inspections_ratio = 1.0;
  double family_ms = 0.0;       // wall clock, diagnostics only
  double enumeration_ms = 0.0;  // wall clock, diagnostics only
};

inline FamilyStats family_vs_enumeration_stats(const Net150& net, const FeatureModel& fm,
                                               const Limits& limits = {}) {
  using Clock = std::chrono::steady_clock;
  FamilyStats stats;

  const auto family_start = Clock::now();
  const Frg frg = build_frg(net, fm, BuildMode::Sound, limits);
  stats.family = frg.stats;
  stats.family_ms = std::chrono::duration<double, std::milli>(Clock::now() - family_start).count();

  const auto enum_start = Clock::now();
  for (std::size_t i = 0; i < fm.valid_configurations().size(); ++i) {
    const Rg rg = build_rg(derive_product(net, fm.valid_configurations()[i], fm), limits);
    ProductStats ps;
    ps.config_index = i;
    ps.label = fm.config_label(i);
    ps.states = rg.states.size();
    ps.edges = rg.edges.size();
    ps.inspections = rg.inspections;
    stats.sum_states += ps.states;
    stats.sum_edges += ps.edges;
    stats.sum_inspections += ps.inspections;
    stats.products.push_back(std::move(ps));
  }
  stats.enumeration_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - enum_start).count();

  stats.states_ratio = stats.sum_states > 0
                           ? static_cast<double>(stats.family.states) / stats.sum_states
                           : 1.0;
  stats.inspections_ratio =
      stats.sum_inspections > 0
          ? static_cast<double>(stats.family.inspections) / stats.sum_inspections
          : 1.0;
  return stats;
}

}  // namespace pnpl
