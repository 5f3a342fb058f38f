#include "pnpl/net.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "pnpl/errors.hpp"
#include "pnpl/feature_model.hpp"
#include "support/test_models.hpp"

using namespace pnpl;

namespace {

bool has_issue(const ValidationReport& report, const std::string& category, Severity severity) {
  for (const auto& i : report.issues)
    if (i.category == category && i.severity == severity) return true;
  return false;
}

}  // namespace

TEST(Marking, SparseValueSemantics) {
  Marking m{{"Source", 3}, {"ItemA", 1}};
  EXPECT_EQ(m.at("Source"), 3);
  EXPECT_EQ(m.at("Completed"), 0);
  EXPECT_EQ(m.total(), 4);

  m.set("Source", 0);
  EXPECT_EQ(m, (Marking{{"ItemA", 1}}));
  EXPECT_THROW(m.set("ItemA", -1), Error);
  EXPECT_THROW(m.add("ItemA", -2), Error);

  Marking a{{"P", 1}, {"Q", 0}};
  Marking b{{"P", 1}};
  EXPECT_EQ(a, b);  // explicit zeros do not distinguish markings
}

TEST(Validate, RunningExampleIsClean) {
  const auto report = validate_net(testsupport::assembly_net(), testsupport::assembly_fm());
  EXPECT_TRUE(report.empty()) << report.to_string();
}

TEST(Validate, NonpositiveWeight) {
  const Net150 net = NetBuilder()
                         .place("P", 1)
                         .transition("T")
                         .arc("P", "T", 0)
                         .build();
  const auto report = validate_net(net, testsupport::trivial_fm());
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(has_issue(report, "nonpositive weight", Severity::Error));
}

TEST(Validate, DeadElementWarning) {
  const Formula contradiction =
      Formula::conjunction(Formula::var("ItemA"), !Formula::var("ItemA"));
  const Net150 net = NetBuilder().place("P", 0, contradiction).transition("T").arc("P", "T").build();
  const auto report = validate_net(net, testsupport::assembly_fm());
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(has_issue(report, "dead element", Severity::Warning));
}

TEST(Validate, StructuralErrors) {
  const FeatureModel fm = testsupport::trivial_fm();
  EXPECT_TRUE(has_issue(
      validate_net(NetBuilder().place("P", 0).place("P", 0).transition("T").build(), fm),
      "duplicate name", Severity::Error));
  EXPECT_TRUE(has_issue(validate_net(NetBuilder().place("P", 0).arc("P", "T").build(), fm),
                        "unknown endpoint", Severity::Error));
  EXPECT_TRUE(has_issue(
      validate_net(NetBuilder().place("P", 0).place("Q", 0).arc("P", "Q").build(), fm),
      "not bipartite", Severity::Error));
  EXPECT_TRUE(has_issue(
      validate_net(
          NetBuilder().place("P", 1).transition("T").arc("P", "T").arc("P", "T").build(), fm),
      "duplicate arc", Severity::Error));
  EXPECT_TRUE(has_issue(
      validate_net(NetBuilder().place("P", 0, Formula::var("Ghost")).build(), fm),
      "undeclared feature", Severity::Error));
  // Names are unique per kind, so a place and a transition may share one;
  // an arc referencing the shared name is what cannot be resolved.
  const Net150 shared = NetBuilder().place("X", 1).place("P", 0).transition("X").arc("X", "P").build();
  const auto report = validate_net(shared, fm);
  EXPECT_FALSE(has_issue(report, "duplicate name", Severity::Error));
  EXPECT_TRUE(has_issue(report, "ambiguous endpoint", Severity::Error));
}

TEST(Validate, DivergenceWarning) {
  // A transition kept in products that drop its input place keeps firing
  // there with relaxed preconditions; flag it.
  const Net150 net = NetBuilder()
                         .place("P", 1, Formula::var("ItemA"))
                         .place("Q", 0)
                         .transition("T")  // pc true, but input place is optional
                         .arc("P", "T")
                         .arc("T", "Q")
                         .build();
  const auto report = validate_net(net, testsupport::assembly_fm());
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(has_issue(report, "derivation divergence", Severity::Warning));
}

TEST(Validate, MarkedOptionalPlaceWarning) {
  const Net150 net = NetBuilder().place("P", 2, Formula::var("ItemA")).build();
  const auto report = validate_net(net, testsupport::assembly_fm());
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(has_issue(report, "marked optional place", Severity::Warning));
}

TEST(EffectivePc, FoldsAdjacentElements) {
  const Net150 net = testsupport::assembly_net();
  const FeatureModel fm = testsupport::assembly_fm();

  // startA: own pc ItemA, adjacent pcs true or ItemA -> collapses to ItemA
  EXPECT_EQ(net.effective_pc("startA").to_string(), "ItemA");
  EXPECT_EQ(fm.config_set(net.effective_pc("startA")),
            fm.config_set(Formula::var("ItemA")));

  // all-true pcs collapse to the true constant
  const Net150 plain = NetBuilder().place("P", 1).transition("T").arc("P", "T").build();
  EXPECT_TRUE(plain.effective_pc("T").is_true());

  // own pc and an input-arc pc over different features conjoin
  const Net150 cross = NetBuilder()
                           .place("P", 1)
                           .transition("T", Formula::var("ItemA"))
                           .arc("P", "T", 1, Formula::var("ItemB"))
                           .build();
  EXPECT_EQ(fm.config_set(cross.effective_pc("T")),
            fm.config_set(Formula::conjunction(Formula::var("ItemA"), Formula::var("ItemB"))));
}

TEST(TokenGame, EnablednessExamples) {
  const Net150 net = testsupport::assembly_net();
  EXPECT_TRUE(enabled(net, Marking{{"Source", 5}}, "startA"));
  EXPECT_FALSE(enabled(net, Marking{{"Source", 1}}, "startA"));

  const Net150 free_t = NetBuilder().place("P", 0).transition("T").build();
  EXPECT_TRUE(enabled(free_t, Marking{}, "T"));  // no inputs: empty conjunction
}

TEST(TokenGame, FiringExamples) {
  const Net150 net = testsupport::assembly_net();
  const Marking m0{{"Source", 5}};

  EXPECT_EQ(fire(net, m0, "startA"), (Marking{{"Source", 3}, {"ItemA", 1}}));
  EXPECT_EQ(fire(net, m0, "startB"), (Marking{{"Source", 2}, {"ItemB", 1}}));
  EXPECT_EQ(m0.at("Source"), 5);  // value semantics: input untouched

  const Net150 no_arcs = NetBuilder().place("P", 2).transition("T").build();
  EXPECT_EQ(fire(no_arcs, Marking{{"P", 2}}, "T"), (Marking{{"P", 2}}));

  EXPECT_THROW(fire(net, Marking{{"Source", 1}}, "startA"), NotEnabledError);
}

TEST(TokenGame, FirePreservesShiftedTokenCount) {
  const Net150 net = testsupport::assembly_net();
  // startA consumes 2, produces 1: net shift -1. endA shifts 0.
  const Marking m{{"Source", 5}};
  EXPECT_EQ(fire(net, m, "startA").total(), m.total() - 1);
  const Marking m2{{"ItemA", 1}};
  EXPECT_EQ(fire(net, m2, "endA").total(), m2.total());
}

TEST(TokenGame, EnablednessIsMonotone) {
  const Net150 net = testsupport::assembly_net();
  std::mt19937_64 rng(42);
  const auto places = net.place_names();
  for (int i = 0; i < 200; ++i) {
    Marking m;
    for (const auto& p : places) m.set(p, static_cast<int>(rng() % 4));
    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
      if (!enabled(net, m, static_cast<int>(t))) continue;
      Marking more = m;
      more.add(places[rng() % places.size()], 1 + static_cast<int>(rng() % 3));
      EXPECT_TRUE(enabled(net, more, static_cast<int>(t)));
    }
  }
}

TEST(RenderMarking, PaperConvention) {
  const Net150 net = testsupport::assembly_net();
  EXPECT_EQ(render_marking(net, Marking{{"Source", 3}, {"ItemA", 1}}), "Source(3)ItemA(1)");
  EXPECT_EQ(render_marking(net, Marking{}), "empty");
  EXPECT_EQ(render_marking(net, Marking{{"Completed", 2}}), "Completed(2)");
  // declaration order, not alphabetical or insertion order
  EXPECT_EQ(render_marking(net, Marking{{"Completed", 1}, {"Source", 1}}), "Source(1)Completed(1)");
}
