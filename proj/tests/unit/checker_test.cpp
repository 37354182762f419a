#include <gtest/gtest.h>

#include "ak/derivation_io.hpp"
#include "ak/parser.hpp"
#include "ak/proof.hpp"
#include "fixtures.hpp"

using ak::CheckVerdict;
using ak::Derivation;
using ak::LiteralSet;
using ak::ProofStep;
using ak::Rule;
using ak::Violation;

namespace {

ProofStep step(const std::string& judgment, Rule rule, std::vector<std::size_t> premises = {}, std::size_t branch = 0) {
  return {ak::parse_triple(judgment).value(), {rule, std::move(premises), branch}};
}

Derivation hand_proof() { return ak::parse_derivation(akt::data("bomb_hand_proof.json")).value(); }

std::optional<Violation> verdict(const ak::DomainDescription& d, std::vector<ProofStep> steps) {
  CheckVerdict v = ak::check_derivation(d, Derivation{d.hash(), std::move(steps)});
  if (v.accepted()) return std::nullopt;
  EXPECT_EQ(v.status, CheckVerdict::Status::kBadStep) << v.str();
  return v.diagnostic ? std::optional(v.diagnostic->violation) : std::nullopt;
}

const std::string kCase = akt::kBombCase;

}  // namespace

TEST(Checker, HandProofAccepted) {
  auto d = akt::bomb();
  Derivation proof = hand_proof();
  ASSERT_EQ(proof.steps.size(), 7u);
  EXPECT_TRUE(ak::check_derivation(d, proof).accepted()) << ak::check_derivation(d, proof).str();
  EXPECT_EQ(proof.conclusion(), ak::parse_triple(akt::data("bomb_goal.q")).value());
}

TEST(Checker, HandProofStepsIndividually) {
  auto d = akt::bomb();
  Derivation proof = hand_proof();
  std::vector<ak::Judgment> before;
  for (const auto& s : proof.steps) {
    EXPECT_EQ(ak::justify_step(d, s, before), std::nullopt) << ak::to_string(s.judgment);
    before.push_back(s.judgment);
  }
}

TEST(Checker, MissingSensingBranch) {
  auto d = akt::bomb();
  Derivation proof = hand_proof();
  ProofStep rule3 = proof.steps[4];
  rule3.why.premises = {1};
  std::vector<ak::Judgment> before;
  for (std::size_t i = 0; i < 4; ++i) before.push_back(proof.steps[i].judgment);
  auto diag = ak::justify_step(d, rule3, before);
  ASSERT_TRUE(diag.has_value());
  EXPECT_EQ(diag->violation, Violation::kMissingSensingBranch);
  EXPECT_NE(diag->detail.find("alarm_off"), std::string::npos);
}

TEST(Checker, DeletedStepLeavesDanglingPremise) {
  auto d = akt::bomb();
  Derivation proof = hand_proof();
  proof.steps.erase(proof.steps.begin() + 5);
  CheckVerdict v = ak::check_derivation(d, proof);
  EXPECT_EQ(v.status, CheckVerdict::Status::kBadStep);
  EXPECT_EQ(v.step, 5u);
  EXPECT_EQ(v.diagnostic->violation, Violation::kBadPremiseIndex);
}

TEST(Checker, DomainMismatchAndEmpty) {
  auto other = ak::validate_domain(ak::parse_domain("executable a.").value()).value();
  EXPECT_EQ(ak::check_derivation(other, hand_proof()).status, CheckVerdict::Status::kDomainMismatch);
  auto d = akt::bomb();
  EXPECT_EQ(ak::check_derivation(d, Derivation{d.hash(), {}}).status, CheckVerdict::Status::kEmpty);
}

TEST(Checker, Ax1) {
  auto d = akt::bomb();
  EXPECT_EQ(verdict(d, {step("{f} [] {f}", Rule::kAx1)}), std::nullopt);
  EXPECT_EQ(verdict(d, {step("{f, g} [] {f}", Rule::kAx1)}), Violation::kPostconditionMismatch);
  EXPECT_EQ(verdict(d, {step("{f} switch {f}", Rule::kAx1)}), Violation::kShapeMismatch);
}

TEST(Checker, Ax2) {
  auto d = akt::bomb();
  EXPECT_EQ(verdict(d, {step("{~disarmed, ~exploded, ~alarm_off} switch {~disarmed, ~exploded, alarm_off}", Rule::kAx2)}),
            std::nullopt);
  // Res0 must be matched exactly, not just implied.
  EXPECT_EQ(verdict(d, {step("{~disarmed, ~exploded, ~alarm_off} switch {alarm_off}", Rule::kAx2)}),
            Violation::kPostconditionMismatch);
  EXPECT_EQ(verdict(d, {step("{exploded} switch {exploded}", Rule::kAx2)}), Violation::kNotExecutable);
  EXPECT_EQ(verdict(d, {step("{~exploded} check {~exploded}", Rule::kAx2)}), Violation::kNotNonSensingAction);
  EXPECT_EQ(verdict(d, {step("{~exploded} fly {~exploded}", Rule::kAx2)}), Violation::kUnknownAction);
}

TEST(Checker, Rule3RejectsExtraBranch) {
  auto d = akt::bomb();
  std::vector<ProofStep> steps{
      step("{~exploded, alarm_off} [] {~exploded, alarm_off}", Rule::kAx1),
      step("{~exploded, ~alarm_off} [] {~exploded, ~alarm_off}", Rule::kAx1),
      step("{~exploded, disarmed} [] {~exploded, disarmed}", Rule::kAx1),
      step("{~exploded} check {~exploded}", Rule::kRule3, {0, 1}),
  };
  EXPECT_EQ(verdict(d, steps), Violation::kPostconditionMismatch);
  steps[0] = step("{~exploded, alarm_off} [] {~exploded}", Rule::kAx1);
  EXPECT_EQ(verdict(d, steps), Violation::kPostconditionMismatch);
  // A proper instance, with the trailing [] left implicit.
  std::vector<ProofStep> good{
      step("{~exploded, alarm_off} [] {~exploded, alarm_off}", Rule::kAx1),
      step("{~exploded, alarm_off} [] {~exploded}", Rule::kRule6, {0}),
      step("{~exploded, ~alarm_off} [] {~exploded, ~alarm_off}", Rule::kAx1),
      step("{~exploded, ~alarm_off} [] {~exploded}", Rule::kRule6, {2}),
      step("{~exploded} check {~exploded}", Rule::kRule3, {3, 1}),
  };
  EXPECT_EQ(verdict(d, good), std::nullopt);
  // A third branch that is not a completion of {~exploded} by alarm_off.
  good.push_back(step("{~exploded, disarmed} [] {~exploded, disarmed}", Rule::kAx1));
  good.push_back(step("{~exploded, disarmed} [] {~exploded}", Rule::kRule6, {5}));
  good.push_back(step("{~exploded} check {~exploded}", Rule::kRule3, {1, 3, 6}));
  EXPECT_EQ(verdict(d, good), Violation::kUnexpectedSensingBranch);
}

TEST(Checker, Rule4) {
  auto d = akt::bomb();
  ProofStep ax1 = step("{alarm_off} [] {alarm_off}", Rule::kAx1);
  EXPECT_EQ(verdict(d, {ax1, step("{alarm_off} " + kCase + " {alarm_off}", Rule::kRule4, {0}, 1)}), std::nullopt);
  EXPECT_EQ(verdict(d, {ax1, step("{alarm_off} " + kCase + " {alarm_off}", Rule::kRule4, {0}, 0)}),
            Violation::kGuardNotTrue);
  EXPECT_EQ(verdict(d, {ax1, step("{alarm_off} " + kCase + " {alarm_off}", Rule::kRule4, {0}, 2)}), Violation::kBadBranch);
  // Guards that both hold: the case plan is not well formed in X.
  ProofStep both = step("{alarm_off, disarmed} [] {alarm_off, disarmed}", Rule::kAx1);
  EXPECT_EQ(verdict(d, {both, step("{alarm_off, disarmed} case alarm_off -> []. disarmed -> []. endcase {alarm_off, disarmed}",
                                   Rule::kRule4, {0}, 0)}),
            Violation::kAmbiguousCase);
}

TEST(Checker, Rule5) {
  auto d = akt::bomb();
  std::vector<ProofStep> steps{
      step("{~alarm_off, ~exploded} switch {alarm_off, ~exploded}", Rule::kAx2),
      step("{alarm_off, ~exploded} defuse {alarm_off, disarmed, ~exploded}", Rule::kAx2),
      step("{~alarm_off, ~exploded} switch; defuse {alarm_off, disarmed, ~exploded}", Rule::kRule5, {0, 1}),
  };
  EXPECT_EQ(verdict(d, steps), std::nullopt);
  steps[2] = step("{~alarm_off, ~exploded} defuse; switch {alarm_off, disarmed, ~exploded}", Rule::kRule5, {0, 1});
  EXPECT_EQ(verdict(d, steps), Violation::kPlanMismatch);
  steps[1] = step("{alarm_off} [] {alarm_off}", Rule::kAx1);
  steps[2] = step("{~alarm_off, ~exploded} switch {alarm_off}", Rule::kRule5, {0, 1});
  EXPECT_EQ(verdict(d, steps), Violation::kIntermediateMismatch);
}

TEST(Checker, Rule6) {
  auto d = akt::bomb();
  ProofStep ax1 = step("{f, g} [] {f, g}", Rule::kAx1);
  EXPECT_EQ(verdict(d, {ax1, step("{f, g, h} [] {g}", Rule::kRule6, {0})}), std::nullopt);
  EXPECT_EQ(verdict(d, {ax1, step("{f} [] {g}", Rule::kRule6, {0})}), Violation::kPreconditionMismatch);
  EXPECT_EQ(verdict(d, {ax1, step("{f, g} [] {h}", Rule::kRule6, {0})}), Violation::kPostconditionMismatch);
  EXPECT_EQ(verdict(d, {ax1, step("{f, g} [] {g}", Rule::kRule6, {})}), Violation::kPremiseCount);
}

TEST(Checker, KwRules) {
  auto d = akt::bomb();
  EXPECT_EQ(verdict(d, {step("{~exploded} check {KW alarm_off}", Rule::kAx7)}), std::nullopt);
  EXPECT_EQ(verdict(d, {step("{~exploded} check {KW disarmed}", Rule::kAx7)}), Violation::kNotDetermined);
  EXPECT_EQ(verdict(d, {step("{exploded} check {KW alarm_off}", Rule::kAx7)}), Violation::kNotExecutable);
  EXPECT_EQ(verdict(d, {step("{~exploded} switch {KW alarm_off}", Rule::kAx7)}), Violation::kNotSensingAction);

  ProofStep ax1 = step("{p} [] {p}", Rule::kAx1);
  EXPECT_EQ(verdict(d, {ax1, step("{p} [] {KW p}", Rule::kRule8, {0})}), std::nullopt);
  EXPECT_EQ(verdict(d, {ax1, step("{p} [] {KW q}", Rule::kRule8, {0})}), Violation::kPostconditionMismatch);
  EXPECT_EQ(verdict(d, {ax1, step("{p} [] {KW p}", Rule::kRule8, {0}), step("{p} [] {KW ~q}", Rule::kRule9, {1})}),
            Violation::kLiteralMismatch);
  EXPECT_EQ(verdict(d, {ax1, step("{p} [] {KW p}", Rule::kRule8, {0}), step("{p} [] {KW ~p}", Rule::kRule9, {1})}),
            std::nullopt);
  // Knows rules cannot conclude KW judgments, nor the other way round.
  EXPECT_EQ(verdict(d, {step("{p} [] {KW p}", Rule::kAx1)}), Violation::kKindMismatch);
  EXPECT_EQ(verdict(d, {step("{p} [] {p}", Rule::kRule8, {})}), Violation::kKindMismatch);
}

TEST(Checker, KwSequenceAndCase) {
  auto d = akt::bomb();
  std::vector<ProofStep> steps{
      step("{~exploded, ~alarm_off} switch {alarm_off, ~exploded}", Rule::kAx2),
      step("{alarm_off, ~exploded} check {KW alarm_off}", Rule::kAx7),
      step("{~exploded, ~alarm_off} switch; check {KW alarm_off}", Rule::kRule11, {0, 1}),
      step("{~exploded, ~alarm_off} " + kCase + "; check {KW alarm_off}", Rule::kRule12, {2}, 0),
  };
  EXPECT_EQ(verdict(d, steps), std::nullopt);
}

TEST(Checker, RejectsForwardPremise) {
  auto d = akt::bomb();
  std::vector<ProofStep> steps{step("{f} [] {f}", Rule::kRule6, {0})};
  EXPECT_EQ(verdict(d, steps), Violation::kBadPremiseIndex);
}

TEST(SubDerivation, KeepsOnlyDependencies) {
  Derivation proof = hand_proof();
  Derivation five = ak::sub_derivation(proof, 5);
  ASSERT_EQ(five.steps.size(), 1u);
  EXPECT_EQ(five.steps[0].judgment, proof.steps[5].judgment);
  Derivation four = ak::sub_derivation(proof, 4);
  EXPECT_EQ(four.steps.size(), 5u);
  EXPECT_TRUE(ak::check_derivation(akt::bomb(), four).accepted());
  EXPECT_EQ(ak::sub_derivation(proof, 6), proof);
}

TEST(DerivationIo, RoundTrip) {
  Derivation proof = hand_proof();
  std::string text = ak::serialize_derivation(proof);
  EXPECT_EQ(ak::parse_derivation(text).value(), proof);
  EXPECT_EQ(ak::serialize_derivation(ak::parse_derivation(text).value()), text);
}

TEST(DerivationIo, Errors) {
  EXPECT_FALSE(ak::parse_derivation("not json").has_value());
  EXPECT_FALSE(ak::parse_derivation("{}").has_value());
  EXPECT_FALSE(ak::parse_derivation(R"({"format_version": 2, "domain_hash": "x", "steps": []})").has_value());
  EXPECT_FALSE(ak::parse_derivation(
                   R"({"format_version": 1, "domain_hash": "x", "steps": [{"judgment": "{f} [] {f}", "rule": "ax9"}]})")
                   .has_value());
  EXPECT_FALSE(ak::parse_derivation(
                   R"({"format_version": 1, "domain_hash": "x", "steps": [{"judgment": "{f} [] {f}", "rule": "ax1", "premises": [-1]}]})")
                   .has_value());
}
