#include "pnpl/feature_model.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "pnpl/errors.hpp"
#include "support/oracles.hpp"
#include "support/random_pnpl.hpp"
#include "support/test_models.hpp"

using namespace pnpl;

TEST(FeatureModel, RunningExampleHasThreeVariantsInCanonicalOrder) {
  const FeatureModel fm = testsupport::assembly_fm();
  ASSERT_EQ(fm.config_count(), 3u);
  EXPECT_EQ(fm.config_label(0), "ItemA");
  EXPECT_EQ(fm.config_label(1), "ItemB");
  EXPECT_EQ(fm.config_label(2), "ItemA,ItemB");

  // Root and the mandatory abstract feature hold in every variant.
  const std::vector<std::string> core{"FlexibleAssemblyLine", "Product"};
  EXPECT_EQ(fm.core_features(), core);
  for (const auto& config : fm.valid_configurations()) {
    EXPECT_TRUE(config.at("FlexibleAssemblyLine"));
    EXPECT_TRUE(config.at("Product"));
  }
}

TEST(FeatureModel, AlternativeGroupHasTwoVariants) {
  const FeatureModel fm = testsupport::assembly_fm(GroupKind::Alternative);
  ASSERT_EQ(fm.config_count(), 2u);
  EXPECT_EQ(fm.config_label(0), "ItemA");
  EXPECT_EQ(fm.config_label(1), "ItemB");
}

TEST(FeatureModel, SingleRootHasOneVariant) {
  const FeatureModel fm = testsupport::trivial_fm();
  ASSERT_EQ(fm.config_count(), 1u);
  EXPECT_EQ(fm.config_label(0), "(none)");
  EXPECT_TRUE(fm.constraints() == Formula::var("Root"));
}

TEST(FeatureModel, UnsatisfiableConstraintsFailAtBuild) {
  FeatureModelBuilder b;
  b.feature("Root").feature("A").feature("B").root("Root");
  b.mandatory("Root", "A").optional("Root", "B");
  b.add_requires("A", "B").add_excludes("A", "B");
  EXPECT_THROW(b.build(), ModelError);
}

TEST(FeatureModel, EnumerationLimitGuard) {
  FeatureModelBuilder b;
  b.feature("Root").root("Root");
  for (int i = 1; i <= 21; ++i) {
    const std::string name = "F" + std::to_string(i);
    b.feature(name).optional("Root", name);
  }
  try {
    b.build();
    FAIL() << "expected LimitExceededError";
  } catch (const LimitExceededError& e) {
    EXPECT_EQ(e.kind(), LimitKind::Features);
    EXPECT_EQ(e.limit(), 20u);
    EXPECT_EQ(e.observed(), 22u);
  }
  // A raised limit admits the same model.
  EXPECT_EQ(b.build(22).config_count(), 1u << 21);
}

TEST(FeatureModel, StructuralValidation) {
  EXPECT_THROW(FeatureModelBuilder().build(), ModelError);  // nothing declared
  EXPECT_THROW(FeatureModelBuilder().feature("A").build(), ModelError);  // no root
  EXPECT_THROW(FeatureModelBuilder().feature("A").feature("A").root("A").build(), ModelError);
  EXPECT_THROW(  // detached feature
      FeatureModelBuilder().feature("A").feature("B").root("A").build(), ModelError);
  EXPECT_THROW(  // group of one
      FeatureModelBuilder().feature("A").feature("B").root("A").group("A", GroupKind::Or, {"B"}).build(),
      ModelError);
  EXPECT_THROW(  // attached twice
      FeatureModelBuilder().feature("A").feature("B").root("A").optional("A", "B").mandatory("A", "B").build(),
      ModelError);
  EXPECT_THROW(  // constraint over unknown feature
      FeatureModelBuilder().feature("A").root("A").constraint(Formula::var("Z")).build(), ModelError);
}

TEST(FeatureModel, MandatoryAndGroupSemantics) {
  // or-group: at least one child when parent holds; alt: exactly one.
  FeatureModelBuilder or_b;
  or_b.feature("R").feature("X").feature("Y").root("R").group("R", GroupKind::Or, {"X", "Y"});
  EXPECT_EQ(or_b.build().config_count(), 3u);

  FeatureModelBuilder alt_b;
  alt_b.feature("R").feature("X").feature("Y").root("R").group("R", GroupKind::Alternative, {"X", "Y"});
  const FeatureModel alt = alt_b.build();
  EXPECT_EQ(alt.config_count(), 2u);
  for (const auto& config : alt.valid_configurations())
    EXPECT_NE(config.at("X"), config.at("Y"));

  FeatureModelBuilder mand;
  mand.feature("R").feature("X").root("R").mandatory("R", "X");
  const FeatureModel m = mand.build();
  ASSERT_EQ(m.config_count(), 1u);
  EXPECT_TRUE(m.valid_configurations()[0].at("X"));
}

TEST(FeatureModel, IsValidConfiguration) {
  const FeatureModel fm = testsupport::assembly_fm();
  EXPECT_TRUE(fm.is_valid_configuration(fm.assignment_with({"ItemA", "ItemB"})));

  Assignment all_false;
  for (const auto& f : fm.features()) all_false[f.name] = false;
  EXPECT_FALSE(fm.is_valid_configuration(all_false));  // root must hold

  // or-group requires at least one child
  EXPECT_FALSE(fm.is_valid_configuration(fm.assignment_with({})));
  EXPECT_THROW(fm.is_valid_configuration(Assignment{{"ItemA", true}}), Error);  // not total
  EXPECT_THROW(fm.assignment_with({"Nope"}), Error);
}

TEST(FeatureModel, EnumerationMatchesBruteForceCounting) {
  // |valid_configurations| equals the number of raw assignments satisfying C.
  testsupport::ModelGen models(2222);
  for (int m = 0; m < 30; ++m) {
    const auto model = models.next();
    std::size_t expected = 0;
    for (const auto& a : testsupport::all_assignments(model.fm.sorted_features()))
      expected += model.fm.constraints().evaluate(a);
    EXPECT_EQ(model.fm.config_count(), expected);
  }

  // Also at a larger scale, one mixed 12-feature model (2^12 assignments).
  FeatureModelBuilder b;
  b.feature("Root").root("Root");
  for (int i = 1; i <= 11; ++i) b.feature("F" + std::to_string(i));
  b.mandatory("Root", "F1").optional("Root", "F2");
  b.group("Root", GroupKind::Or, {"F3", "F4", "F5"});
  b.group("F1", GroupKind::Alternative, {"F6", "F7"});
  b.optional("F2", "F8").optional("F2", "F9").optional("Root", "F10").optional("Root", "F11");
  b.add_requires("F8", "F3").add_excludes("F9", "F4");
  const FeatureModel big = b.build();
  std::size_t expected = 0;
  for (const auto& a : testsupport::all_assignments(big.sorted_features()))
    expected += big.constraints().evaluate(a);
  EXPECT_EQ(big.config_count(), expected);
  EXPECT_GT(big.config_count(), 0u);
}

TEST(FeatureModel, EveryConfigurationSatisfiesEachCrossConstraint) {
  FeatureModelBuilder b;
  b.feature("Root").feature("A").feature("B").feature("C").root("Root");
  b.optional("Root", "A").optional("Root", "B").optional("Root", "C");
  b.add_requires("A", "B").add_excludes("B", "C");
  const FeatureModel fm = b.build();
  const Formula req = Formula::implication(Formula::var("A"), Formula::var("B"));
  const Formula exc = !Formula::conjunction(Formula::var("B"), Formula::var("C"));
  for (const auto& config : fm.valid_configurations()) {
    EXPECT_TRUE(req.evaluate(config));
    EXPECT_TRUE(exc.evaluate(config));
  }
}

TEST(FeatureModel, EnumerationIsStable) {
  const FeatureModel a = testsupport::assembly_fm();
  const FeatureModel b = testsupport::assembly_fm();
  ASSERT_EQ(a.config_count(), b.config_count());
  for (std::size_t i = 0; i < a.config_count(); ++i) {
    EXPECT_EQ(a.valid_configurations()[i], b.valid_configurations()[i]);
    EXPECT_EQ(a.config_label(i), b.config_label(i));
  }
}

TEST(FeatureModel, FormulaForConfigSetIsExact) {
  const FeatureModel fm = testsupport::assembly_fm();
  ConfigSet two = fm.empty_set();
  two.set(0);
  two.set(2);
  const Formula f = fm.formula_for(two);
  EXPECT_EQ(fm.config_set(f), two);
  EXPECT_TRUE(fm.formula_for(fm.empty_set()).is_false());
  EXPECT_TRUE(fm.formula_for(fm.full_set()).is_true());
}
