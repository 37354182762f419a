#include <gtest/gtest.h>

#include "ak/plan.hpp"
#include "ak/semantics.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using ak::Plan;

namespace {

Plan act(const char* a) { return Plan::action(a); }

}  // namespace

TEST(Plan, SeqWithEmptyCollapses) {
  EXPECT_EQ(ak::normalize(Plan::seq(act("a"), Plan::empty())), act("a"));
  EXPECT_EQ(ak::normalize(Plan::seq(Plan::empty(), act("a"))), act("a"));
  EXPECT_EQ(ak::normalize(Plan::seq(Plan::empty(), Plan::empty())), Plan::empty());
}

TEST(Plan, SeqRightAssociates) {
  Plan left = Plan::seq(Plan::seq(act("a"), act("b")), act("c"));
  EXPECT_EQ(ak::normalize(left), Plan::seq(act("a"), Plan::seq(act("b"), act("c"))));
}

TEST(Plan, NormalizeReachesIntoCaseBodies) {
  Plan c = Plan::make_case({ak::LiteralSet::of({"f"})}, {Plan::seq(Plan::seq(act("a"), Plan::empty()), act("b"))});
  Plan n = ak::normalize(c);
  EXPECT_EQ(n.body(0), Plan::seq(act("a"), act("b")));
  EXPECT_TRUE(ak::is_normalized(n));
}

TEST(Plan, CaseNeedsMatchingBranches) {
  EXPECT_THROW(Plan::make_case({}, {}), std::invalid_argument);
  EXPECT_THROW(Plan::make_case({ak::LiteralSet::of({"f"})}, {}), std::invalid_argument);
}

TEST(Plan, ConcatAppendsNormalized) {
  Plan c1 = Plan::seq(act("a"), act("b"));
  EXPECT_EQ(ak::concat(c1, act("c")), Plan::seq(act("a"), Plan::seq(act("b"), act("c"))));
  EXPECT_EQ(ak::concat(Plan::empty(), act("c")), act("c"));
  EXPECT_EQ(ak::concat(act("c"), Plan::empty()), act("c"));
}

TEST(Plan, Depth) {
  EXPECT_EQ(ak::depth(Plan::empty()), 1u);
  EXPECT_EQ(ak::depth(act("a")), 1u);
  EXPECT_EQ(ak::depth(Plan::seq(act("a"), act("b"))), 2u);
}

TEST(Plan, NormalizeIsIdempotent) {
  akt::Rng rng(17);
  auto fluents = akt::fluent_names(3);
  std::vector<std::string> actions{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    Plan c = akt::random_plan(rng, actions, fluents, 5);
    Plan n = ak::normalize(c);
    EXPECT_EQ(ak::normalize(n), n);
    EXPECT_TRUE(ak::is_normalized(n));
  }
}

// Normalization must not change the outcome of any plan in any a-state.
TEST(Plan, NormalizePreservesSemanticsExhaustively) {
  akt::Rng rng(23);
  akt::DomainShape shape;
  shape.fluents = 2;
  shape.actions = 3;
  for (int dom = 0; dom < 20; ++dom) {
    auto props = akt::random_propositions(rng, shape);
    auto d = ak::validate_domain(props).value();
    akt::Oracle oracle(props);
    for (const auto& f : akt::fluent_names(2)) oracle.bit(f);
    auto states = oracle.extensions({});
    for (int i = 0; i < 30; ++i) {
      Plan c = akt::random_plan(rng, d, 3);
      Plan n = ak::normalize(c);
      for (const auto& s : states) {
        ak::AState sigma(oracle.literals(s));
        EXPECT_EQ(ak::phi0_hat(c, sigma, d), ak::phi0_hat(n, sigma, d));
        EXPECT_EQ(ak::phi0_hat(Plan::seq(c, Plan::empty()), sigma, d), ak::phi0_hat(c, sigma, d));
        EXPECT_EQ(ak::phi0_hat(Plan::seq(Plan::empty(), c), sigma, d), ak::phi0_hat(c, sigma, d));
      }
    }
  }
}
