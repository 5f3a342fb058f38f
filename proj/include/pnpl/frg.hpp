#pragma once

#include <cstddef>
#include <deque>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pnpl/config_set.hpp"
#include "pnpl/derive.hpp"
#include "pnpl/errors.hpp"
#include "pnpl/feature_model.hpp"
#include "pnpl/net.hpp"

namespace pnpl {

// State identity during the family-level exploration.
//  - Sound: states are (marking, feature-path configuration set) pairs, so a
//    marking reached under incomparable feature contexts is kept once per
//    context and no successor is lost.
//  - PaperLiteral: states are markings alone; the feature path stored at
//    first arrival is never updated. Cheaper, but projections may miss
//    behaviour; provided for fidelity experiments.
enum class BuildMode { Sound, PaperLiteral };

inline const char* to_string(BuildMode mode) {
  return mode == BuildMode::Sound ? "sound" : "paper-literal";
}

// A reachable marking together with its feature path: the set of valid
// configurations compatible with every transition fired to reach it. The
// originating symbolic formula is retained for diagnostics.
struct FrgState {
  Marking marking;
  ConfigSet configs;
  Formula phi;
};

// Edge annotated with the fired transition's effective presence condition.
struct FrgEdge {
  int from;
  int transition;
  int to;
  Formula pc;
  ConfigSet configs;
};

// One (state, transition) pair rejected by the conflict-detection filter.
struct FilterRejection {
  int state;
  int transition;
  Formula phi_cand;
  std::string reason;
};

struct BuildStats {
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t inspections = 0;  // (dequeued state, transition) pairs examined
  std::size_t rejections = 0;
};

// Feature-annotated reachability graph of a Petri net product line.
struct Frg {
  BuildMode mode = BuildMode::Sound;
  std::vector<FrgState> states;
  std::vector<FrgEdge> edges;
  std::vector<FilterRejection> rejections;
  std::vector<std::string> transition_names;
  int initial = 0;
  BuildStats stats;
};

inline const std::vector<FilterRejection>& filter_report(const Frg& frg) { return frg.rejections; }

// Breadth-first family-level exploration from the initial marking. For each
// dequeued state and each transition in declaration order: check token
// enablement, fire, conjoin the transition's effective presence condition
// onto the state's feature path, and keep the edge only if the resulting path
// is satisfiable under the feature model constraints. An optional restriction
// formula narrows the explored feature space from the start.
inline Frg build_frg(const Net150& net, const FeatureModel& fm, BuildMode mode = BuildMode::Sound,
                     const Limits& limits = {}, const Formula* restriction = nullptr) {
  Frg frg;
  frg.mode = mode;
  frg.transition_names = net.transition_names();

  const std::size_t transition_count = net.transitions().size();
  std::vector<ConfigSet> effective_configs;
  effective_configs.reserve(transition_count);
  for (std::size_t t = 0; t < transition_count; ++t)
    effective_configs.push_back(fm.config_set(net.effective_pc(static_cast<int>(t))));

  ConfigSet initial_configs = fm.full_set();
  Formula initial_phi = Formula::truth();
  if (restriction != nullptr) {
    initial_configs = fm.config_set(*restriction);
    initial_phi = *restriction;
    if (initial_configs.none())
      throw ModelError("restriction formula excludes every valid configuration");
  }

  std::unordered_map<Marking, std::vector<int>, MarkingHash> by_marking;
  std::deque<int> queue;

  const auto check_tokens = [&](const Marking& m) {
    const int peak = m.max_count();
    if (peak > limits.max_tokens_per_place)
      throw LimitExceededError(LimitKind::TokensPerPlace, limits.max_tokens_per_place, peak);
  };

  // Returns the id of the state for (marking, configs) under the build mode,
  // creating and enqueueing it if new.
  const auto intern = [&](const Marking& m, const ConfigSet& configs, const Formula& phi) {
    std::vector<int>& bucket = by_marking[m];
    if (mode == BuildMode::Sound) {
      for (int id : bucket)
        if (frg.states[id].configs == configs) return id;
    } else if (!bucket.empty()) {
      return bucket.front();
    }
    if (frg.states.size() >= limits.max_states)
      throw LimitExceededError(LimitKind::States, limits.max_states, frg.states.size() + 1);
    const int id = static_cast<int>(frg.states.size());
    frg.states.push_back({m, configs, phi});
    bucket.push_back(id);
    queue.push_back(id);
    return id;
  };

  const Marking m0 = net.initial_marking();
  check_tokens(m0);
  frg.initial = intern(m0, initial_configs, initial_phi);

  while (!queue.empty()) {
    const int current = queue.front();
    queue.pop_front();
    const Marking marking = frg.states[current].marking;
    const ConfigSet source_configs = frg.states[current].configs;
    const Formula source_phi = frg.states[current].phi;

    for (std::size_t t = 0; t < transition_count; ++t) {
      ++frg.stats.inspections;
      if (!enabled(net, marking, static_cast<int>(t))) continue;
      Marking next = fire(net, marking, static_cast<int>(t));
      check_tokens(next);

      const Formula& pc = net.effective_pc(static_cast<int>(t));
      const ConfigSet candidate = source_configs & effective_configs[t];
      if (candidate.none()) {
        frg.rejections.push_back(
            {current, static_cast<int>(t), Formula::conjoin(source_phi, pc), "unsat under C"});
        continue;
      }
      const int target = intern(next, candidate, Formula::conjoin(source_phi, pc));
      frg.edges.push_back({current, static_cast<int>(t), target, pc, effective_configs[t]});
    }
  }

  frg.stats.states = frg.states.size();
  frg.stats.edges = frg.edges.size();
  frg.stats.rejections = frg.rejections.size();
  return frg;
}

// Projects the family-level graph onto one product: keeps states whose
// feature path contains the configuration and edges whose annotation holds
// there, restricting every marking to the places present in the product.
// States with equal restricted markings merge; the result is a plain
// reachability graph comparable with the per-product oracle.
inline Rg project(const Frg& frg, const Net150& net, const FeatureModel& fm,
                  const Assignment& config) {
  if (!fm.is_valid_configuration(config))
    throw InvalidConfigurationError("not a valid configuration of the feature model");
  const std::size_t rho = *fm.index_of(config);
  if (!frg.states[frg.initial].configs.test(rho))
    throw InvalidConfigurationError("configuration lies outside the build restriction");

  std::vector<char> keep_place(net.places().size(), 0);
  for (std::size_t i = 0; i < net.places().size(); ++i)
    keep_place[i] = net.places()[i].pc.evaluate(config) ? 1 : 0;
  const auto restrict_marking = [&](const Marking& m) {
    Marking out;
    for (const auto& [name, count] : m.entries()) {
      const int pi = net.place_index(name);
      if (pi >= 0 && keep_place[pi]) out.set(name, count);
    }
    return out;
  };

  Rg rg;
  rg.transition_names = frg.transition_names;
  std::unordered_map<Marking, int, MarkingHash> ids;
  std::vector<int> state_map(frg.states.size(), -1);
  for (std::size_t i = 0; i < frg.states.size(); ++i) {
    if (!frg.states[i].configs.test(rho)) continue;
    Marking restricted = restrict_marking(frg.states[i].marking);
    const auto it = ids.find(restricted);
    if (it != ids.end()) {
      state_map[i] = it->second;
    } else {
      const int id = static_cast<int>(rg.states.size());
      rg.states.push_back(std::move(restricted));
      ids.emplace(rg.states.back(), id);
      state_map[i] = id;
    }
  }
  rg.initial = state_map[frg.initial];

  std::set<std::tuple<int, int, int>> seen;
  for (const FrgEdge& e : frg.edges) {
    if (state_map[e.from] < 0 || state_map[e.to] < 0) continue;
    if (!e.configs.test(rho)) continue;
    const std::tuple<int, int, int> key{state_map[e.from], e.transition, state_map[e.to]};
    if (!seen.insert(key).second) continue;
    rg.edges.push_back({state_map[e.from], e.transition, state_map[e.to]});
  }
  return rg;
}

}  // namespace pnpl
