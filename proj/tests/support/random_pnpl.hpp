#pragma once

// Deterministic random product-line models for property and soundness tests.
// All randomness goes through `next() % n` so sequences are identical across
// standard libraries and runs.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pnpl/derive.hpp"
#include "pnpl/errors.hpp"
#include "pnpl/feature_model.hpp"
#include "pnpl/formula.hpp"
#include "pnpl/frg.hpp"
#include "pnpl/net.hpp"

namespace testsupport {

struct RandomModel {
  pnpl::Net150 net;
  pnpl::FeatureModel fm;
};

// Random formulas over a fixed variable pool; depth-bounded.
class FormulaGen {
 public:
  FormulaGen(std::uint64_t seed, std::vector<std::string> vars)
      : rng_(seed), vars_(std::move(vars)) {}

  pnpl::Formula next(int max_depth = 4) { return gen(max_depth); }

 private:
  std::size_t pick(std::size_t n) { return rng_() % n; }

  pnpl::Formula gen(int depth) {
    using F = pnpl::Formula;
    if (depth <= 0 || pick(5) == 0) {
      const std::size_t c = pick(vars_.size() + 2);
      if (c == vars_.size()) return F::truth();
      if (c == vars_.size() + 1) return F::falsity();
      return F::var(vars_[c]);
    }
    switch (pick(5)) {
      case 0:
        return !gen(depth - 1);
      case 1:
        return F::conjunction(gen(depth - 1), gen(depth - 1));
      case 2:
        return F::disjunction(gen(depth - 1), gen(depth - 1));
      case 3:
        return F::implication(gen(depth - 1), gen(depth - 1));
      default:
        return F::biconditional(gen(depth - 1), gen(depth - 1));
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

// Small product-line models: at most 6 places, 6 transitions, 4 features,
// arc weights up to 3, at most 6 initial tokens. Presence conditions are
// written so that a transition's own condition implies the conditions of its
// adjacent places, keeping per-product derivation aligned with the family
// semantics. Models whose sound-mode exploration trips the given limits are
// discarded and regenerated.
class ModelGen {
 public:
  explicit ModelGen(std::uint64_t seed) : rng_(seed) {}

  RandomModel next(const pnpl::Limits& limits = {50'000, 10'000}) {
    for (;;) {
      RandomModel candidate = generate();
      try {
        (void)pnpl::build_frg(candidate.net, candidate.fm, pnpl::BuildMode::Sound, limits);
        return candidate;
      } catch (const pnpl::LimitExceededError&) {
        // unbounded or explosive net; draw another
      }
    }
  }

 private:
  std::size_t pick(std::size_t n) { return rng_() % n; }
  bool chance(std::size_t percent) { return pick(100) < percent; }

  pnpl::Formula random_pc(const std::vector<std::string>& features) {
    using F = pnpl::Formula;
    const F lit = F::var(features[pick(features.size())]);
    switch (pick(6)) {
      case 0:
        return lit;
      case 1:
        return !lit;
      case 2:
        return F::conjunction(lit, F::var(features[pick(features.size())]));
      case 3:
        return F::disjunction(lit, F::var(features[pick(features.size())]));
      case 4:
        return F::disjunction(lit, !F::var(features[pick(features.size())]));
      default:
        return lit;
    }
  }

  pnpl::FeatureModel random_fm(std::vector<std::string>& leaves) {
    for (;;) {
      pnpl::FeatureModelBuilder b;
      b.feature("Root").root("Root");
      const std::size_t count = 1 + pick(3);  // 1..3 non-root features
      leaves.clear();
      for (std::size_t i = 0; i < count; ++i) leaves.push_back("F" + std::to_string(i + 1));
      for (const auto& name : leaves) b.feature(name);

      const std::size_t style = pick(4);
      if (style == 1 && count >= 2) {
        b.group("Root", pnpl::GroupKind::Or, leaves);
      } else if (style == 2 && count >= 2) {
        b.group("Root", pnpl::GroupKind::Alternative, leaves);
      } else {
        for (const auto& name : leaves) {
          if (style == 3 && chance(35))
            b.mandatory("Root", name);
          else
            b.optional("Root", name);
        }
      }
      if (count >= 2 && chance(30)) {
        const std::string& x = leaves[pick(leaves.size())];
        const std::string& y = leaves[pick(leaves.size())];
        if (x != y) {
          if (chance(50))
            b.add_requires(x, y);
          else
            b.add_excludes(x, y);
        }
      }
      try {
        return b.build();
      } catch (const pnpl::ModelError&) {
        // constraints collapsed to unsatisfiable; retry
      }
    }
  }

  RandomModel generate() {
    std::vector<std::string> leaves;
    pnpl::FeatureModel fm = random_fm(leaves);

    const std::size_t place_count = 1 + pick(6);
    const std::size_t transition_count = 1 + pick(6);

    std::vector<std::string> place_names;
    std::vector<pnpl::Formula> place_pcs(place_count, pnpl::Formula::truth());
    for (std::size_t i = 0; i < place_count; ++i) place_names.push_back("P" + std::to_string(i + 1));
    if (chance(25))
      for (std::size_t i = 0; i < place_count; ++i)
        if (chance(30)) place_pcs[i] = pnpl::Formula::var(leaves[pick(leaves.size())]);

    std::vector<int> tokens(place_count, 0);
    for (std::size_t budget = pick(7); budget > 0; --budget) ++tokens[pick(place_count)];

    struct RawArc {
      std::size_t place;
      int weight;
    };
    struct RawTransition {
      pnpl::Formula pc;
      std::vector<RawArc> inputs;
      std::vector<RawArc> outputs;
    };
    std::vector<RawTransition> raw(transition_count);

    for (auto& t : raw) {
      t.pc = chance(50) ? pnpl::Formula::truth() : random_pc(leaves);

      const std::size_t input_count = 1 + pick(2);
      std::vector<char> used(place_count, 0);
      for (std::size_t k = 0; k < input_count; ++k) {
        const std::size_t p = pick(place_count);
        if (used[p]) continue;
        used[p] = 1;
        t.inputs.push_back({p, 1 + static_cast<int>(pick(3))});
      }
      std::fill(used.begin(), used.end(), 0);
      const std::size_t output_count = pick(3);
      for (std::size_t k = 0; k < output_count; ++k) {
        const std::size_t p = pick(place_count);
        if (used[p]) continue;
        used[p] = 1;
        t.outputs.push_back({p, 1 + static_cast<int>(pick(3))});
      }
      // Mostly token-non-increasing transitions keep the state space finite.
      if (chance(80)) {
        int in_sum = 0;
        for (const auto& a : t.inputs) in_sum += a.weight;
        int out_sum = 0;
        for (const auto& a : t.outputs) out_sum += a.weight;
        while (out_sum > in_sum && !t.outputs.empty()) {
          if (t.outputs.back().weight > 1) {
            --t.outputs.back().weight;
            --out_sum;
          } else {
            out_sum -= t.outputs.back().weight;
            t.outputs.pop_back();
          }
        }
      }
      // The transition must imply the presence of every adjacent place.
      std::vector<pnpl::Formula> parts{t.pc};
      for (const auto& a : t.inputs) parts.push_back(place_pcs[a.place]);
      for (const auto& a : t.outputs) parts.push_back(place_pcs[a.place]);
      t.pc = pnpl::Formula::conjoin_all(parts);
    }

    pnpl::NetBuilder net;
    for (std::size_t i = 0; i < place_count; ++i) net.place(place_names[i], tokens[i], place_pcs[i]);
    for (std::size_t i = 0; i < transition_count; ++i) {
      const std::string name = "T" + std::to_string(i + 1);
      net.transition(name, raw[i].pc);
      for (const auto& a : raw[i].inputs) net.arc(place_names[a.place], name, a.weight);
      for (const auto& a : raw[i].outputs) net.arc(name, place_names[a.place], a.weight);
    }
    return {net.build(), std::move(fm)};
  }

  std::mt19937_64 rng_;
};

}  // namespace testsupport
