#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pnpl/errors.hpp"
#include "pnpl/feature_model.hpp"
#include "pnpl/formula.hpp"

namespace pnpl {

// Token count per place, sparse: absent places hold 0 tokens. Entries are
// kept sorted by place name with zero counts erased, so equality and ordering
// are value-based over the full place set.
class Marking {
 public:
  Marking() = default;

  Marking(std::initializer_list<std::pair<std::string, int>> counts) {
    for (const auto& [name, value] : counts) set(name, value);
  }

  int at(const std::string& place) const {
    const auto it = find(place);
    return it != entries_.end() && it->first == place ? it->second : 0;
  }

  void set(const std::string& place, int count) {
    if (count < 0) throw Error("negative token count for place " + place);
    const auto it = find(place);
    if (it != entries_.end() && it->first == place) {
      if (count == 0)
        entries_.erase(it);
      else
        it->second = count;
    } else if (count != 0) {
      entries_.insert(it, {place, count});
    }
  }

  void add(const std::string& place, int delta) { set(place, at(place) + delta); }

  const std::vector<std::pair<std::string, int>>& entries() const { return entries_; }

  int total() const {
    int sum = 0;
    for (const auto& [name, count] : entries_) sum += count;
    return sum;
  }

  int max_count() const {
    int best = 0;
    for (const auto& [name, count] : entries_) best = std::max(best, count);
    return best;
  }

  bool operator==(const Marking&) const = default;
  auto operator<=>(const Marking&) const = default;

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& [name, count] : entries_) {
      h = (h ^ std::hash<std::string>{}(name)) * 1099511628211ULL;
      h = (h ^ static_cast<std::size_t>(count)) * 1099511628211ULL;
    }
    return h;
  }

 private:
  std::vector<std::pair<std::string, int>>::iterator find(const std::string& place) {
    return std::lower_bound(entries_.begin(), entries_.end(), place,
                            [](const auto& e, const std::string& p) { return e.first < p; });
  }
  std::vector<std::pair<std::string, int>>::const_iterator find(const std::string& place) const {
    return std::lower_bound(entries_.begin(), entries_.end(), place,
                            [](const auto& e, const std::string& p) { return e.first < p; });
  }

  std::vector<std::pair<std::string, int>> entries_;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const { return m.hash(); }
};

struct Place {
  std::string name;
  int initial_tokens = 0;
  Formula pc;  // defaults to true
};

struct Transition {
  std::string name;
  Formula pc;
};

struct Arc {
  std::string source;
  std::string target;
  int weight = 1;
  Formula pc;
  // Resolved against the element lists; unresolved arcs survive construction
  // so that validation can report them.
  bool resolved = false;
  bool from_place = false;
  int place = -1;
  int transition = -1;
};

// The 150% Petri net: every place, transition and arc of the whole family,
// each guarded by a presence condition. Immutable after construction.
class Net150 {
 public:
  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  Marking initial_marking() const {
    Marking m;
    for (const auto& p : places_)
      if (p.initial_tokens > 0) m.set(p.name, p.initial_tokens);
    return m;
  }

  int place_index(const std::string& name) const {
    const auto it = place_index_.find(name);
    return it == place_index_.end() ? -1 : it->second;
  }
  int transition_index(const std::string& name) const {
    const auto it = transition_index_.find(name);
    return it == transition_index_.end() ? -1 : it->second;
  }

  // Arc indices, in arc declaration order.
  std::span<const int> input_arcs(int transition) const { return t_inputs_[transition]; }
  std::span<const int> output_arcs(int transition) const { return t_outputs_[transition]; }

  // The conjunction of the transition's own presence condition with those of
  // all incident arcs and all adjacent places. A transition is structurally
  // present in a product exactly when this formula holds there.
  const Formula& effective_pc(int transition) const { return effective_pc_[transition]; }
  const Formula& effective_pc(const std::string& name) const {
    const int t = transition_index(name);
    if (t < 0) throw Error("unknown transition: " + name);
    return effective_pc_[t];
  }

  std::vector<std::string> place_names() const {
    std::vector<std::string> out;
    out.reserve(places_.size());
    for (const auto& p : places_) out.push_back(p.name);
    return out;
  }
  std::vector<std::string> transition_names() const {
    std::vector<std::string> out;
    out.reserve(transitions_.size());
    for (const auto& t : transitions_) out.push_back(t.name);
    return out;
  }

 private:
  friend class NetBuilder;
  Net150() = default;

  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  std::map<std::string, int> place_index_;       // first declaration wins
  std::map<std::string, int> transition_index_;
  std::vector<std::vector<int>> t_inputs_;
  std::vector<std::vector<int>> t_outputs_;
  std::vector<Formula> effective_pc_;
};

class NetBuilder {
 public:
  NetBuilder& place(std::string name, int tokens = 0, Formula pc = Formula::truth()) {
    places_.push_back({std::move(name), tokens, std::move(pc)});
    return *this;
  }

  NetBuilder& transition(std::string name, Formula pc = Formula::truth()) {
    transitions_.push_back({std::move(name), std::move(pc)});
    return *this;
  }

  NetBuilder& arc(std::string from, std::string to, int weight = 1, Formula pc = Formula::truth()) {
    Arc a;
    a.source = std::move(from);
    a.target = std::move(to);
    a.weight = weight;
    a.pc = std::move(pc);
    arcs_.push_back(std::move(a));
    return *this;
  }

  // Resolves names and precomputes adjacency and effective presence
  // conditions. Semantic problems (bad weights, duplicate names, ...) are
  // left for validate_net so they can be reported together.
  Net150 build() const {
    Net150 net;
    net.places_ = places_;
    net.transitions_ = transitions_;
    net.arcs_ = arcs_;
    for (std::size_t i = 0; i < net.places_.size(); ++i)
      net.place_index_.try_emplace(net.places_[i].name, static_cast<int>(i));
    for (std::size_t i = 0; i < net.transitions_.size(); ++i)
      net.transition_index_.try_emplace(net.transitions_[i].name, static_cast<int>(i));

    net.t_inputs_.resize(net.transitions_.size());
    net.t_outputs_.resize(net.transitions_.size());
    for (std::size_t i = 0; i < net.arcs_.size(); ++i) {
      Arc& a = net.arcs_[i];
      const int sp = net.place_index(a.source);
      const int st = net.transition_index(a.source);
      const int tp = net.place_index(a.target);
      const int tt = net.transition_index(a.target);
      if (sp >= 0 && st < 0 && tt >= 0 && tp < 0) {
        a.resolved = true;
        a.from_place = true;
        a.place = sp;
        a.transition = tt;
        net.t_inputs_[tt].push_back(static_cast<int>(i));
      } else if (st >= 0 && sp < 0 && tp >= 0 && tt < 0) {
        a.resolved = true;
        a.from_place = false;
        a.place = tp;
        a.transition = st;
        net.t_outputs_[st].push_back(static_cast<int>(i));
      }
      // anything else (unknown, ambiguous, or not bipartite) stays unresolved
    }

    net.effective_pc_.reserve(net.transitions_.size());
    for (std::size_t t = 0; t < net.transitions_.size(); ++t) {
      std::vector<Formula> parts;
      parts.push_back(net.transitions_[t].pc);
      const auto fold_arc = [&](int arc_index) {
        const Arc& a = net.arcs_[arc_index];
        parts.push_back(a.pc);
        parts.push_back(net.places_[a.place].pc);
      };
      for (int ai : net.t_inputs_[t]) fold_arc(ai);
      for (int ai : net.t_outputs_[t]) fold_arc(ai);
      net.effective_pc_.push_back(Formula::conjoin_all(parts));
    }
    return net;
  }

 private:
  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
};

// Token half of enabledness: every input arc is covered by the marking.
inline bool enabled(const Net150& net, const Marking& m, int transition) {
  for (int ai : net.input_arcs(transition)) {
    const Arc& a = net.arcs()[ai];
    if (m.at(net.places()[a.place].name) < a.weight) return false;
  }
  return true;
}

inline bool enabled(const Net150& net, const Marking& m, const std::string& transition) {
  const int t = net.transition_index(transition);
  if (t < 0) throw Error("unknown transition: " + transition);
  return enabled(net, m, t);
}

// Standard firing rule; the input marking is left untouched.
inline Marking fire(const Net150& net, const Marking& m, int transition) {
  if (!enabled(net, m, transition))
    throw NotEnabledError("transition not enabled: " + net.transitions()[transition].name);
  Marking out = m;
  for (int ai : net.input_arcs(transition)) {
    const Arc& a = net.arcs()[ai];
    out.add(net.places()[a.place].name, -a.weight);
  }
  for (int ai : net.output_arcs(transition)) {
    const Arc& a = net.arcs()[ai];
    out.add(net.places()[a.place].name, a.weight);
  }
  return out;
}

inline Marking fire(const Net150& net, const Marking& m, const std::string& transition) {
  const int t = net.transition_index(transition);
  if (t < 0) throw Error("unknown transition: " + transition);
  return fire(net, m, t);
}

// "Source(3)ItemA(1)" style rendering, places in declaration order; the
// all-zero marking renders as "empty".
inline std::string render_marking(const std::vector<std::string>& place_order, const Marking& m) {
  std::string out;
  for (const auto& name : place_order) {
    const int count = m.at(name);
    if (count > 0) out += name + "(" + std::to_string(count) + ")";
  }
  return out.empty() ? "empty" : out;
}

inline std::string render_marking(const Net150& net, const Marking& m) {
  return render_marking(net.place_names(), m);
}

enum class Severity { Error, Warning };

struct ValidationIssue {
  Severity severity;
  std::string category;
  std::string element;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const {
    for (const auto& i : issues)
      if (i.severity == Severity::Error) return false;
    return true;
  }
  bool empty() const { return issues.empty(); }

  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& i : issues) n += i.severity == Severity::Error;
    return n;
  }
  std::size_t warning_count() const { return issues.size() - error_count(); }

  std::string to_string() const {
    std::string out;
    for (const auto& i : issues) {
      out += i.severity == Severity::Error ? "error: " : "warning: ";
      out += i.element + ": " + i.category;
      if (!i.message.empty()) out += " (" + i.message + ")";
      out += '\n';
    }
    return out;
  }
};

// Structural and variability checks for a loaded net. Errors make the model
// unusable; warnings flag suspicious but derivable models.
inline ValidationReport validate_net(const Net150& net, const FeatureModel& fm) {
  ValidationReport report;
  const auto error = [&](std::string category, std::string element, std::string message = {}) {
    report.issues.push_back({Severity::Error, std::move(category), std::move(element), std::move(message)});
  };
  const auto warn = [&](std::string category, std::string element, std::string message = {}) {
    report.issues.push_back({Severity::Warning, std::move(category), std::move(element), std::move(message)});
  };

  std::set<std::string> seen;
  for (const auto& p : net.places())
    if (!seen.insert(p.name).second) error("duplicate name", "place " + p.name);
  seen.clear();
  for (const auto& t : net.transitions())
    if (!seen.insert(t.name).second) error("duplicate name", "transition " + t.name);

  const auto check_pc_vars = [&](const Formula& pc, const std::string& element) {
    for (const auto& v : pc.variables())
      if (!fm.is_declared(v)) error("undeclared feature", element, v);
  };
  const auto check_dead = [&](const Formula& pc, const std::string& element) {
    bool vars_ok = true;
    for (const auto& v : pc.variables())
      if (!fm.is_declared(v)) vars_ok = false;
    if (vars_ok && !fm.satisfiable_with(pc))
      warn("dead element", element, "presence condition unsatisfiable under the feature model");
  };

  for (const auto& p : net.places()) {
    if (p.initial_tokens < 0) error("negative tokens", "place " + p.name);
    check_pc_vars(p.pc, "place " + p.name);
    check_dead(p.pc, "place " + p.name);
    if (p.initial_tokens > 0 && !p.pc.is_true()) {
      bool vars_ok = true;
      for (const auto& v : p.pc.variables())
        if (!fm.is_declared(v)) vars_ok = false;
      if (vars_ok && fm.config_set(p.pc).count() != fm.config_count())
        warn("marked optional place", "place " + p.name,
             "initial tokens are dropped in products without it");
    }
  }
  for (const auto& t : net.transitions()) {
    check_pc_vars(t.pc, "transition " + t.name);
    check_dead(t.pc, "transition " + t.name);
  }

  std::set<std::pair<std::string, std::string>> arc_pairs;
  for (const auto& a : net.arcs()) {
    const std::string element = "arc " + a.source + " -> " + a.target;
    if (a.weight < 1) error("nonpositive weight", element, std::to_string(a.weight));
    check_pc_vars(a.pc, element);
    if (!arc_pairs.insert({a.source, a.target}).second) error("duplicate arc", element);
    if (!a.resolved) {
      const bool src_place = net.place_index(a.source) >= 0;
      const bool src_trans = net.transition_index(a.source) >= 0;
      const bool dst_place = net.place_index(a.target) >= 0;
      const bool dst_trans = net.transition_index(a.target) >= 0;
      if ((src_place && src_trans) || (dst_place && dst_trans)) {
        error("ambiguous endpoint", element, "name exists as both place and transition");
      } else if ((!src_place && !src_trans) || (!dst_place && !dst_trans)) {
        error("unknown endpoint", element);
      } else {
        error("not bipartite", element, "arcs connect places and transitions only");
      }
      continue;
    }
    check_dead(a.pc, element);
  }

  // A transition whose own presence condition can hold while its effective
  // one does not keeps firing in derived products that lost one of its arcs
  // or places; family-level results then diverge from per-product semantics.
  if (report.ok()) {
    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
      const auto& tr = net.transitions()[t];
      const ConfigSet own = fm.config_set(tr.pc);
      if (!own.is_subset_of(fm.config_set(net.effective_pc(static_cast<int>(t)))))
        warn("derivation divergence", "transition " + tr.name,
             "present in a product that removes one of its arcs or places");
    }
  }
  return report;
}

}  // namespace pnpl
