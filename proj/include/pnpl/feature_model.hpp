#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pnpl/config_set.hpp"
#include "pnpl/errors.hpp"
#include "pnpl/formula.hpp"

namespace pnpl {

struct FeatureDecl {
  std::string name;
  bool is_abstract = false;  // documentation only; abstract features are ordinary variables
};

enum class GroupKind { Or, Alternative };

namespace detail {

// Formula compiled against a feature -> bit-index map, evaluated on a packed
// assignment mask. Avoids per-variable string lookups during enumeration.
class MaskFormula {
 public:
  MaskFormula(const Formula& f, const std::map<std::string, std::size_t>& bit_of) {
    root_ = compile(f, bit_of);
  }

  bool eval(std::uint64_t mask) const { return eval_node(root_, mask); }

 private:
  struct N {
    FormulaKind kind;
    int var = -1;
    int a = -1;
    int b = -1;
  };

  int compile(const Formula& f, const std::map<std::string, std::size_t>& bit_of) {
    N n;
    n.kind = f.kind();
    switch (f.kind()) {
      case FormulaKind::True:
      case FormulaKind::False:
        break;
      case FormulaKind::Var: {
        auto it = bit_of.find(f.var_name());
        if (it == bit_of.end()) throw Error("undeclared feature: " + f.var_name());
        n.var = static_cast<int>(it->second);
        break;
      }
      case FormulaKind::Not:
        n.a = compile(f.lhs(), bit_of);
        break;
      default:
        n.a = compile(f.lhs(), bit_of);
        n.b = compile(f.rhs(), bit_of);
        break;
    }
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool eval_node(int i, std::uint64_t mask) const {
    const N& n = nodes_[i];
    switch (n.kind) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Var:
        return (mask >> n.var) & 1ULL;
      case FormulaKind::Not:
        return !eval_node(n.a, mask);
      case FormulaKind::And:
        return eval_node(n.a, mask) && eval_node(n.b, mask);
      case FormulaKind::Or:
        return eval_node(n.a, mask) || eval_node(n.b, mask);
      case FormulaKind::Implies:
        return !eval_node(n.a, mask) || eval_node(n.b, mask);
      case FormulaKind::Iff:
        return eval_node(n.a, mask) == eval_node(n.b, mask);
    }
    return false;
  }

  std::vector<N> nodes_;
  int root_ = -1;
};

}  // namespace detail

class FeatureModelBuilder;

// Feature-model tree: mandatory/optional children, OR and ALTERNATIVE groups,
// cross-tree constraints. Compiled at construction into the constraint formula
// C and the enumerated list of valid configurations. Immutable afterwards.
class FeatureModel {
 public:
  static constexpr std::size_t kDefaultEnumerationLimit = 20;

  const std::vector<FeatureDecl>& features() const { return features_; }
  const std::string& root() const { return root_; }
  std::size_t feature_count() const { return features_.size(); }

  bool is_declared(const std::string& name) const { return bit_of_.contains(name); }

  std::set<std::string> feature_name_set() const {
    std::set<std::string> out;
    for (const auto& f : features_) out.insert(f.name);
    return out;
  }

  // Feature names in the canonical (sorted) enumeration order; feature j is
  // bit j of an assignment mask.
  const std::vector<std::string>& sorted_features() const { return sorted_names_; }

  // The compiled constraint formula C: root, child->parent links, mandatory
  // children, group cardinalities, then cross-tree constraints.
  const Formula& constraints() const { return constraints_; }

  // Valid configurations in ascending mask order (deterministic across runs).
  const std::vector<Assignment>& valid_configurations() const { return valid_configs_; }
  std::size_t config_count() const { return valid_configs_.size(); }

  ConfigSet full_set() const { return ConfigSet(valid_configs_.size(), true); }
  ConfigSet empty_set() const { return ConfigSet(valid_configs_.size(), false); }

  // Exactly the valid configurations satisfying f.
  ConfigSet config_set(const Formula& f) const {
    detail::MaskFormula mf(f, bit_of_);
    ConfigSet out(valid_configs_.size());
    for (std::size_t i = 0; i < valid_masks_.size(); ++i)
      if (mf.eval(valid_masks_[i])) out.set(i);
    return out;
  }

  // SAT(f && C): true iff some valid configuration satisfies f.
  bool satisfiable_with(const Formula& f) const {
    detail::MaskFormula mf(f, bit_of_);
    for (std::uint64_t mask : valid_masks_)
      if (mf.eval(mask)) return true;
    return false;
  }

  bool is_valid_configuration(const Assignment& a) const {
    check_total(a);
    return constraints_.evaluate(a);
  }

  // Index of a valid configuration in the canonical list, nullopt otherwise.
  std::optional<std::size_t> index_of(const Assignment& a) const {
    check_total(a);
    const std::uint64_t mask = mask_of(a);
    const auto it = std::lower_bound(valid_masks_.begin(), valid_masks_.end(), mask);
    if (it == valid_masks_.end() || *it != mask) return std::nullopt;
    return static_cast<std::size_t>(it - valid_masks_.begin());
  }

  // Features true in every valid configuration, sorted.
  const std::vector<std::string>& core_features() const { return core_; }

  // Human label for a configuration: its non-core features, sorted and
  // comma-joined; "(none)" when the configuration is exactly the core.
  std::string config_label(std::size_t index) const {
    const std::uint64_t mask = valid_masks_.at(index);
    std::string out;
    for (std::size_t j = 0; j < sorted_names_.size(); ++j) {
      if (!((mask >> j) & 1ULL)) continue;
      if (core_mask_ & (1ULL << j)) continue;
      if (!out.empty()) out += ',';
      out += sorted_names_[j];
    }
    return out.empty() ? "(none)" : out;
  }

  std::string config_label(const Assignment& a) const {
    auto idx = index_of(a);
    if (!idx) throw InvalidConfigurationError("not a valid configuration");
    return config_label(*idx);
  }

  // Total assignment enabling the core features plus the listed ones.
  Assignment assignment_with(const std::vector<std::string>& enabled) const {
    Assignment a;
    for (const auto& f : features_) a[f.name] = false;
    for (const auto& name : core_) a[name] = true;
    for (const auto& name : enabled) {
      auto it = a.find(name);
      if (it == a.end()) throw Error("undeclared feature: " + name);
      it->second = true;
    }
    return a;
  }

  // Canonical symbolic form of a configuration set: a disjunction over its
  // configurations of the non-core literals. Exact but not minimal.
  Formula formula_for(const ConfigSet& set) const {
    if (set.none()) return Formula::falsity();
    if (set.count() == valid_configs_.size()) return Formula::truth();
    std::vector<Formula> terms;
    for (std::size_t i : set.indices()) {
      const std::uint64_t mask = valid_masks_[i];
      std::vector<Formula> lits;
      for (std::size_t j = 0; j < sorted_names_.size(); ++j) {
        if (core_mask_ & (1ULL << j)) continue;
        const Formula v = Formula::var(sorted_names_[j]);
        lits.push_back(((mask >> j) & 1ULL) ? v : !v);
      }
      terms.push_back(Formula::conjoin_all(lits));
    }
    return Formula::disjoin_all(terms);
  }

  std::uint64_t mask_of(const Assignment& a) const {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < sorted_names_.size(); ++j) {
      auto it = a.find(sorted_names_[j]);
      if (it != a.end() && it->second) mask |= 1ULL << j;
    }
    return mask;
  }

 private:
  friend class FeatureModelBuilder;
  FeatureModel() = default;

  void check_total(const Assignment& a) const {
    if (a.size() != features_.size()) throw Error("assignment domain does not equal the feature set");
    for (const auto& [name, unused] : a)
      if (!bit_of_.contains(name)) throw Error("assignment names undeclared feature: " + name);
  }

  std::vector<FeatureDecl> features_;  // declaration order
  std::string root_;
  std::vector<Formula> cross_constraints_;

  std::vector<std::string> sorted_names_;
  std::map<std::string, std::size_t> bit_of_;
  Formula constraints_;
  std::vector<std::uint64_t> valid_masks_;  // ascending
  std::vector<Assignment> valid_configs_;
  std::vector<std::string> core_;
  std::uint64_t core_mask_ = 0;
};

class FeatureModelBuilder {
 public:
  FeatureModelBuilder& feature(std::string name, bool is_abstract = false) {
    features_.push_back({std::move(name), is_abstract});
    return *this;
  }

  FeatureModelBuilder& root(std::string name) {
    root_ = std::move(name);
    return *this;
  }

  FeatureModelBuilder& mandatory(std::string parent, std::string child) {
    links_.push_back({std::move(parent), std::move(child), true});
    return *this;
  }

  FeatureModelBuilder& optional(std::string parent, std::string child) {
    links_.push_back({std::move(parent), std::move(child), false});
    return *this;
  }

  FeatureModelBuilder& group(std::string parent, GroupKind kind, std::vector<std::string> children) {
    groups_.push_back({std::move(parent), kind, std::move(children)});
    return *this;
  }

  FeatureModelBuilder& constraint(Formula f) {
    cross_.push_back(std::move(f));
    return *this;
  }

  // `a requires b` sugar: a -> b.
  FeatureModelBuilder& add_requires(const std::string& a, const std::string& b) {
    cross_.push_back(Formula::implication(Formula::var(a), Formula::var(b)));
    return *this;
  }

  // `a excludes b` sugar: !(a & b).
  FeatureModelBuilder& add_excludes(const std::string& a, const std::string& b) {
    cross_.push_back(!Formula::conjunction(Formula::var(a), Formula::var(b)));
    return *this;
  }

  FeatureModel build(std::size_t enumeration_limit = FeatureModel::kDefaultEnumerationLimit) const {
    std::vector<std::string> problems;
    const auto complain = [&](std::string msg) { problems.push_back(std::move(msg)); };

    std::set<std::string> declared;
    for (const auto& f : features_) {
      if (f.name.empty() || f.name == "true" || f.name == "false")
        complain("invalid feature name: '" + f.name + "'");
      if (!declared.insert(f.name).second) complain("duplicate feature: " + f.name);
    }
    if (features_.empty()) complain("no features declared");
    if (root_.empty())
      complain("no root feature declared");
    else if (!declared.contains(root_))
      complain("root is not a declared feature: " + root_);

    // Parent map; every non-root feature must be attached exactly once.
    std::map<std::string, std::string> parent;
    const auto attach = [&](const std::string& p, const std::string& c) {
      if (!declared.contains(p)) complain("undeclared parent feature: " + p);
      if (!declared.contains(c)) complain("undeclared child feature: " + c);
      if (c == root_) complain("root cannot be a child: " + c);
      if (parent.contains(c))
        complain("feature attached twice: " + c);
      else
        parent[c] = p;
    };
    for (const auto& link : links_) attach(link.parent, link.child);
    for (const auto& g : groups_) {
      if (g.children.size() < 2) complain("group under " + g.parent + " needs at least 2 children");
      std::set<std::string> seen;
      for (const auto& c : g.children) {
        if (!seen.insert(c).second) complain("repeated group child: " + c);
        attach(g.parent, c);
      }
    }
    for (const auto& f : features_) {
      if (f.name == root_) continue;
      if (!parent.contains(f.name)) complain("feature not attached to the tree: " + f.name);
    }
    // Cycle check: walk each parent chain; a chain longer than the feature
    // count cannot reach the root.
    for (const auto& f : features_) {
      std::string cur = f.name;
      std::size_t steps = 0;
      while (cur != root_ && steps <= features_.size()) {
        auto it = parent.find(cur);
        if (it == parent.end()) break;
        cur = it->second;
        ++steps;
      }
      if (steps > features_.size()) complain("parent links contain a cycle near " + f.name);
    }
    for (const auto& c : cross_) {
      for (const auto& v : c.variables())
        if (!declared.contains(v)) complain("constraint references undeclared feature: " + v);
    }
    if (!problems.empty()) {
      std::string msg = "invalid feature model:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw ModelError(msg);
    }

    FeatureModel fm;
    fm.features_ = features_;
    fm.root_ = root_;
    fm.cross_constraints_ = cross_;

    for (const auto& f : features_) fm.sorted_names_.push_back(f.name);
    std::sort(fm.sorted_names_.begin(), fm.sorted_names_.end());
    for (std::size_t j = 0; j < fm.sorted_names_.size(); ++j) fm.bit_of_[fm.sorted_names_[j]] = j;

    fm.constraints_ = compile_constraints();
    enumerate(fm, enumeration_limit);
    return fm;
  }

 private:
  struct Link {
    std::string parent, child;
    bool mandatory;
  };
  struct Group {
    std::string parent;
    GroupKind kind;
    std::vector<std::string> children;
  };

  Formula compile_constraints() const {
    std::vector<Formula> parts;
    parts.push_back(Formula::var(root_));
    // child -> parent for every attachment, in declaration order
    for (const auto& link : links_)
      parts.push_back(Formula::implication(Formula::var(link.child), Formula::var(link.parent)));
    for (const auto& g : groups_)
      for (const auto& c : g.children)
        parts.push_back(Formula::implication(Formula::var(c), Formula::var(g.parent)));
    // parent -> child for mandatory children
    for (const auto& link : links_)
      if (link.mandatory)
        parts.push_back(Formula::implication(Formula::var(link.parent), Formula::var(link.child)));
    // group cardinalities
    for (const auto& g : groups_) {
      std::vector<Formula> child_vars;
      for (const auto& c : g.children) child_vars.push_back(Formula::var(c));
      Formula any_child = Formula::disjoin_all(child_vars);
      if (g.kind == GroupKind::Or) {
        parts.push_back(Formula::implication(Formula::var(g.parent), any_child));
      } else {
        std::vector<Formula> exactly;
        exactly.push_back(any_child);
        for (std::size_t i = 0; i < child_vars.size(); ++i)
          for (std::size_t j = i + 1; j < child_vars.size(); ++j)
            exactly.push_back(!Formula::conjunction(child_vars[i], child_vars[j]));
        parts.push_back(
            Formula::implication(Formula::var(g.parent), Formula::conjoin_all(exactly)));
      }
    }
    for (const auto& c : cross_) parts.push_back(c);
    return Formula::conjoin_all(parts);
  }

  static void enumerate(FeatureModel& fm, std::size_t limit) {
    const std::size_t n = fm.sorted_names_.size();
    if (n > limit || n > 63)
      throw LimitExceededError(LimitKind::Features, std::min<std::size_t>(limit, 63), n);

    detail::MaskFormula mf(fm.constraints_, fm.bit_of_);
    const std::uint64_t end = 1ULL << n;
    for (std::uint64_t mask = 0; mask < end; ++mask)
      if (mf.eval(mask)) fm.valid_masks_.push_back(mask);
    if (fm.valid_masks_.empty())
      throw ModelError("feature model is unsatisfiable: no valid configuration exists");

    fm.valid_configs_.reserve(fm.valid_masks_.size());
    std::uint64_t core = ~0ULL;
    for (std::uint64_t mask : fm.valid_masks_) {
      core &= mask;
      Assignment a;
      for (std::size_t j = 0; j < n; ++j) a[fm.sorted_names_[j]] = (mask >> j) & 1ULL;
      fm.valid_configs_.push_back(std::move(a));
    }
    fm.core_mask_ = core;
    for (std::size_t j = 0; j < n; ++j)
      if ((core >> j) & 1ULL) fm.core_.push_back(fm.sorted_names_[j]);
  }

  std::vector<FeatureDecl> features_;
  std::string root_;
  std::vector<Link> links_;
  std::vector<Group> groups_;
  std::vector<Formula> cross_;
};

}  // namespace pnpl
