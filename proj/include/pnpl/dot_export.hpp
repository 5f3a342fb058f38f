#pragma once

#include <set>
#include <string>
#include <vector>

#include "pnpl/derive.hpp"
#include "pnpl/frg.hpp"
#include "pnpl/net.hpp"

namespace pnpl {

struct DotOptions {
  // Label edges whose presence condition is the constant true with the bare
  // transition name instead of "t/true".
  bool suppress_true_labels = false;
  // Draw the unfiltered 150%-net reachability graph and fill the markings the
  // conflict-detection filter removed.
  bool shade_pruned = false;
  Limits limits{};
};

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string edge_label(const std::string& transition, const Formula& pc,
                              bool suppress_true) {
  if (suppress_true && pc.is_true()) return transition;
  return transition + "/" + pc.to_string();
}

}  // namespace detail

// Plain reachability graph export; nodes carry rendered markings.
inline std::string export_dot(const Rg& rg, const std::vector<std::string>& place_order) {
  std::string out = "digraph rg {\n  rankdir=TB;\n  node [shape=ellipse];\n";
  for (std::size_t i = 0; i < rg.states.size(); ++i) {
    out += "  \"s" + std::to_string(i) + "\" [label=\"" +
           detail::dot_escape(render_marking(place_order, rg.states[i])) + "\"];\n";
  }
  for (const auto& e : rg.edges) {
    out += "  \"s" + std::to_string(e.from) + "\" -> \"s" + std::to_string(e.to) + "\" [label=\"" +
           detail::dot_escape(rg.transition_names[e.transition]) + "\"];\n";
  }
  out += "}\n";
  return out;
}

// Feature-annotated reachability graph export. Without shading the graph is
// drawn as built (one node per state, edges labelled "transition/pc"). With
// shading the unfiltered token game of the 150% net is drawn instead and the
// markings absent from the filtered graph are filled, mirroring the pruning.
inline std::string export_dot(const Frg& frg, const Net150& net, const DotOptions& options = {}) {
  const std::vector<std::string> place_order = net.place_names();

  if (!options.shade_pruned) {
    std::string out = "digraph frg {\n  rankdir=TB;\n  node [shape=ellipse];\n";
    for (std::size_t i = 0; i < frg.states.size(); ++i) {
      out += "  \"s" + std::to_string(i) + "\" [label=\"" +
             detail::dot_escape(render_marking(place_order, frg.states[i].marking)) + "\"];\n";
    }
    for (const auto& e : frg.edges) {
      out += "  \"s" + std::to_string(e.from) + "\" -> \"s" + std::to_string(e.to) +
             "\" [label=\"" +
             detail::dot_escape(detail::edge_label(frg.transition_names[e.transition], e.pc,
                                                   options.suppress_true_labels)) +
             "\"];\n";
    }
    out += "}\n";
    return out;
  }

  const Rg naive = build_rg(strip_variability(net), options.limits);
  std::set<Marking> kept;
  for (const auto& st : frg.states) kept.insert(st.marking);

  std::string out = "digraph frg {\n  rankdir=TB;\n  node [shape=ellipse];\n";
  for (std::size_t i = 0; i < naive.states.size(); ++i) {
    out += "  \"n" + std::to_string(i) + "\" [label=\"" +
           detail::dot_escape(render_marking(place_order, naive.states[i])) + "\"";
    if (!kept.contains(naive.states[i])) out += ", style=filled, fillcolor=lightblue";
    out += "];\n";
  }
  for (const auto& e : naive.edges) {
    const int t = net.transition_index(naive.transition_names[e.transition]);
    out += "  \"n" + std::to_string(e.from) + "\" -> \"n" + std::to_string(e.to) + "\" [label=\"" +
           detail::dot_escape(detail::edge_label(naive.transition_names[e.transition],
                                                 net.effective_pc(t),
                                                 options.suppress_true_labels)) +
           "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace pnpl
