#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "pnpl/errors.hpp"
#include "pnpl/feature_model.hpp"
#include "pnpl/net.hpp"

namespace pnpl {

// Guards against unbounded or explosively large state spaces.
struct Limits {
  std::size_t max_states = 1'000'000;
  int max_tokens_per_place = 10'000;
};

// A derived product net: plain places, transitions and weighted arcs with no
// presence conditions. Kept index-based and self-contained so the per-product
// oracle shares no exploration code with the family-level builder.
struct PlainNet {
  struct PArc {
    int place;
    int transition;
    bool into_transition;  // place -> transition when true
    int weight;
  };

  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<PArc> arcs;
  std::vector<std::vector<int>> t_inputs;   // arc indices per transition
  std::vector<std::vector<int>> t_outputs;
  Marking initial;

  int place_index(const std::string& name) const {
    for (std::size_t i = 0; i < places.size(); ++i)
      if (places[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline bool enabled(const PlainNet& net, const Marking& m, int transition) {
  for (int ai : net.t_inputs[transition]) {
    const auto& a = net.arcs[ai];
    if (m.at(net.places[a.place]) < a.weight) return false;
  }
  return true;
}

inline Marking fire(const PlainNet& net, const Marking& m, int transition) {
  if (!enabled(net, m, transition))
    throw NotEnabledError("transition not enabled: " + net.transitions[transition]);
  Marking out = m;
  for (int ai : net.t_inputs[transition]) out.add(net.places[net.arcs[ai].place], -net.arcs[ai].weight);
  for (int ai : net.t_outputs[transition]) out.add(net.places[net.arcs[ai].place], net.arcs[ai].weight);
  return out;
}

namespace detail {

inline void link_arc(PlainNet& net, int place, int transition, bool into_transition, int weight) {
  net.arcs.push_back({place, transition, into_transition, weight});
  const int idx = static_cast<int>(net.arcs.size()) - 1;
  if (into_transition)
    net.t_inputs[transition].push_back(idx);
  else
    net.t_outputs[transition].push_back(idx);
}

}  // namespace detail

// Removes every element whose presence condition is false under the
// configuration; arcs also vanish with either endpoint. Initial tokens on
// removed places are dropped, reported through `warnings`.
inline PlainNet derive_product(const Net150& net, const Assignment& config,
                               const FeatureModel& fm,
                               std::vector<std::string>* warnings = nullptr) {
  if (!fm.is_valid_configuration(config))
    throw InvalidConfigurationError("not a valid configuration of the feature model");

  PlainNet out;
  std::vector<int> place_map(net.places().size(), -1);
  std::vector<int> trans_map(net.transitions().size(), -1);

  for (std::size_t i = 0; i < net.places().size(); ++i) {
    const Place& p = net.places()[i];
    if (p.pc.evaluate(config)) {
      place_map[i] = static_cast<int>(out.places.size());
      out.places.push_back(p.name);
      if (p.initial_tokens > 0) out.initial.set(p.name, p.initial_tokens);
    } else if (p.initial_tokens > 0 && warnings) {
      warnings->push_back("initial tokens dropped: place " + p.name + " (" +
                          std::to_string(p.initial_tokens) + ") is absent in this product");
    }
  }
  for (std::size_t i = 0; i < net.transitions().size(); ++i) {
    const Transition& t = net.transitions()[i];
    if (t.pc.evaluate(config)) {
      trans_map[i] = static_cast<int>(out.transitions.size());
      out.transitions.push_back(t.name);
    }
  }
  out.t_inputs.resize(out.transitions.size());
  out.t_outputs.resize(out.transitions.size());
  for (const Arc& a : net.arcs()) {
    if (!a.resolved || !a.pc.evaluate(config)) continue;
    const int p = place_map[a.place];
    const int t = trans_map[a.transition];
    if (p < 0 || t < 0) continue;
    detail::link_arc(out, p, t, a.from_place, a.weight);
  }
  return out;
}

// The full 150% structure with presence conditions ignored; the token game of
// this net is the unfiltered reachability graph (used for pruning overlays).
inline PlainNet strip_variability(const Net150& net) {
  PlainNet out;
  out.places = net.place_names();
  out.transitions = net.transition_names();
  out.initial = net.initial_marking();
  out.t_inputs.resize(out.transitions.size());
  out.t_outputs.resize(out.transitions.size());
  for (const Arc& a : net.arcs()) {
    if (!a.resolved) continue;
    detail::link_arc(out, a.place, a.transition, a.from_place, a.weight);
  }
  return out;
}

// Plain reachability graph; states in discovery order, edges in firing order.
struct Rg {
  struct Edge {
    int from;
    int transition;
    int to;
  };

  std::vector<Marking> states;
  std::vector<Edge> edges;
  std::vector<std::string> transition_names;
  int initial = 0;
  std::size_t inspections = 0;
};

enum class ExploreOrder { Bfs, Dfs };

// Explores exactly the reachable markings. BFS is the canonical order; the
// DFS variant exists to witness that the result is order-independent as a set.
inline Rg build_rg(const PlainNet& net, const Limits& limits = {},
                   ExploreOrder order = ExploreOrder::Bfs) {
  Rg rg;
  rg.transition_names = net.transitions;

  std::unordered_map<Marking, int, MarkingHash> visited;
  std::deque<int> frontier;

  const auto check_tokens = [&](const Marking& m) {
    const int peak = m.max_count();
    if (peak > limits.max_tokens_per_place)
      throw LimitExceededError(LimitKind::TokensPerPlace, limits.max_tokens_per_place, peak);
  };
  const auto intern = [&](const Marking& m) {
    const auto it = visited.find(m);
    if (it != visited.end()) return it->second;
    if (rg.states.size() >= limits.max_states)
      throw LimitExceededError(LimitKind::States, limits.max_states, rg.states.size() + 1);
    const int id = static_cast<int>(rg.states.size());
    rg.states.push_back(m);
    visited.emplace(m, id);
    frontier.push_back(id);
    return id;
  };

  check_tokens(net.initial);
  rg.initial = intern(net.initial);

  while (!frontier.empty()) {
    int current;
    if (order == ExploreOrder::Bfs) {
      current = frontier.front();
      frontier.pop_front();
    } else {
      current = frontier.back();
      frontier.pop_back();
    }
    const Marking m = rg.states[current];
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
      ++rg.inspections;
      if (!enabled(net, m, static_cast<int>(t))) continue;
      Marking next = fire(net, m, static_cast<int>(t));
      check_tokens(next);
      const int target = intern(next);
      rg.edges.push_back({current, static_cast<int>(t), target});
    }
  }
  return rg;
}

}  // namespace pnpl
