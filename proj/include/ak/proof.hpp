/**
 * proof.hpp
 *
 * Proof objects for the Knows / Knows-Whether calculus and a checker that
 * validates every step against a domain description.
 *
 * Rule set (X, Y consistent literal sets, c normalized):
 *
 *   ax1     {X} [] {X}
 *   ax2     {X} a {Res0(a,X)}                 a non-sensing, 0-executable in X
 *   rule3   {X ∪ Xi} c {Y} for all i  ⊢  {X} a;c {Y}
 *                                             a sensing, 0-executable in X, the Xi are
 *                                             all X' with fln(X') = K(a), X ∪ X' consistent
 *   rule4   {X} ci;c' {Y}  ⊢  {X} case;c' {Y}   guard i ⊆ X
 *   rule5   {X} c1 {Y'}, {Y'} c2 {Y}  ⊢  {X} c1;c2 {Y}
 *   rule6   {X'} c {Y'}  ⊢  {X} c {Y}           X' ⊆ X, Y ⊆ Y'
 *   ax7     {X} a {KW f}                       a sensing, 0-executable in X, a determines f
 *   rule8   {X} c {{p}}  ⊢  {X} c {KW p}
 *   rule9   {X} c {KW p}  ⊢  {X} c {KW ~p}
 *   rule10  as rule3 with KW premises and conclusion
 *   rule11  {X} c1 {Y}, {Y} c2 {KW p}  ⊢  {X} c1;c2 {KW p}
 *   rule12  as rule4 with KW premise and conclusion
 *
 * A trailing sensing action or case plan is read as followed by [].
 */

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ak/domain.hpp"
#include "ak/judgment.hpp"
#include "ak/literal.hpp"
#include "ak/plan.hpp"
#include "ak/semantics.hpp"

namespace ak {

enum class Rule { kAx1, kAx2, kRule3, kRule4, kRule5, kRule6, kAx7, kRule8, kRule9, kRule10, kRule11, kRule12 };

inline constexpr Rule kAllRules[] = {Rule::kAx1,   Rule::kAx2,   Rule::kRule3, Rule::kRule4,
                                     Rule::kRule5, Rule::kRule6, Rule::kAx7,   Rule::kRule8,
                                     Rule::kRule9, Rule::kRule10, Rule::kRule11, Rule::kRule12};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::kAx1: return "ax1";
    case Rule::kAx2: return "ax2";
    case Rule::kRule3: return "rule3";
    case Rule::kRule4: return "rule4";
    case Rule::kRule5: return "rule5";
    case Rule::kRule6: return "rule6";
    case Rule::kAx7: return "ax7";
    case Rule::kRule8: return "rule8";
    case Rule::kRule9: return "rule9";
    case Rule::kRule10: return "rule10";
    case Rule::kRule11: return "rule11";
    case Rule::kRule12: return "rule12";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(std::string_view name) {
  for (Rule r : kAllRules)
    if (name == rule_name(r)) return r;
  return std::nullopt;
}

/// Rules belonging to the Knows-Whether extension.
inline bool is_kw_rule(Rule r) {
  return r == Rule::kAx7 || r == Rule::kRule8 || r == Rule::kRule9 || r == Rule::kRule10 || r == Rule::kRule11 ||
         r == Rule::kRule12;
}

struct Justification {
  Rule rule = Rule::kAx1;
  /// Indices of earlier steps.
  std::vector<std::size_t> premises;
  /// Selected case branch; rule4 and rule12 only.
  std::size_t branch = 0;

  bool operator==(const Justification&) const = default;
};

struct ProofStep {
  Judgment judgment;
  Justification why;

  bool operator==(const ProofStep&) const = default;
};

struct Derivation {
  std::string domain_hash;
  std::vector<ProofStep> steps;

  /// The theorem proved; requires a non-empty derivation.
  const Judgment& conclusion() const { return steps.back().judgment; }

  bool operator==(const Derivation&) const = default;
};

/// Side condition violated by a step.
enum class Violation {
  kMalformedJudgment,
  kBadPremiseIndex,
  kPremiseCount,
  kKindMismatch,
  kShapeMismatch,
  kNotNonSensingAction,
  kNotSensingAction,
  kUnknownAction,
  kNotExecutable,
  kPreconditionMismatch,
  kPostconditionMismatch,
  kPlanMismatch,
  kIntermediateMismatch,
  kBadBranch,
  kGuardNotTrue,
  kAmbiguousCase,
  kUnexpectedSensingBranch,
  kMissingSensingBranch,
  kNotDetermined,
  kLiteralMismatch,
};

inline const char* to_string(Violation v) {
  switch (v) {
    case Violation::kMalformedJudgment: return "MalformedJudgment";
    case Violation::kBadPremiseIndex: return "BadPremiseIndex";
    case Violation::kPremiseCount: return "PremiseCount";
    case Violation::kKindMismatch: return "KindMismatch";
    case Violation::kShapeMismatch: return "ShapeMismatch";
    case Violation::kNotNonSensingAction: return "NotNonSensingAction";
    case Violation::kNotSensingAction: return "NotSensingAction";
    case Violation::kUnknownAction: return "UnknownAction";
    case Violation::kNotExecutable: return "NotExecutable";
    case Violation::kPreconditionMismatch: return "PreconditionMismatch";
    case Violation::kPostconditionMismatch: return "PostconditionMismatch";
    case Violation::kPlanMismatch: return "PlanMismatch";
    case Violation::kIntermediateMismatch: return "IntermediateMismatch";
    case Violation::kBadBranch: return "BadBranch";
    case Violation::kGuardNotTrue: return "GuardNotTrue";
    case Violation::kAmbiguousCase: return "AmbiguousCase";
    case Violation::kUnexpectedSensingBranch: return "UnexpectedSensingBranch";
    case Violation::kMissingSensingBranch: return "MissingSensingBranch";
    case Violation::kNotDetermined: return "NotDetermined";
    case Violation::kLiteralMismatch: return "LiteralMismatch";
  }
  return "?";
}

struct Diagnostic {
  Violation violation;
  std::string detail;

  std::string str() const { return std::string(to_string(violation)) + ": " + detail; }
};

/// All X ∪ X' with fln(X') = K(a) and X ∪ X' consistent, positive literals
/// enumerated first. Throws SemanticsError(kNotSensing) unless `a` senses.
inline std::vector<LiteralSet> sensing_completions(const LiteralSet& x, const std::string& a,
                                                   const DomainDescription& d) {
  if (!d.is_sensing(a)) {
    throw SemanticsError(SemanticsError::Kind::kNotSensing, "action '" + a + "' is not a sensing action");
  }
  std::vector<LiteralSet> out;
  for (const auto& s : sensing_outcomes(AState(x), d.knowledge(a))) out.push_back(s.literals());
  return out;
}

namespace detail {

class StepChecker {
 public:
  StepChecker(const DomainDescription& d, const ProofStep& step, std::span<const Judgment> context)
      : d_(d), j_(step.judgment), why_(step.why), ctx_(context) {}

  std::optional<Diagnostic> run() {
    if (!j_.pre.consistent()) return bad(Violation::kMalformedJudgment, "precondition " + j_.pre.str() + " is inconsistent");
    if (j_.is_knows() && !j_.post.consistent())
      return bad(Violation::kMalformedJudgment, "postcondition " + j_.post.str() + " is inconsistent");
    if (!is_normalized(j_.plan)) return bad(Violation::kMalformedJudgment, "plan is not in normal form");
    for (std::size_t i : why_.premises) {
      if (i >= ctx_.size()) {
        return bad(Violation::kBadPremiseIndex, "premise " + std::to_string(i) + " does not precede this step");
      }
    }
    if (is_kw_rule(why_.rule) != j_.is_kw()) {
      return bad(Violation::kKindMismatch,
                 std::string(rule_name(why_.rule)) + " cannot conclude a " + (j_.is_kw() ? "KW" : "Knows") + " judgment");
    }
    try {
      switch (why_.rule) {
        case Rule::kAx1: return ax1();
        case Rule::kAx2: return ax2();
        case Rule::kRule3: return sensing_rule();
        case Rule::kRule4: return case_rule();
        case Rule::kRule5: return composition();
        case Rule::kRule6: return consequence();
        case Rule::kAx7: return ax7();
        case Rule::kRule8: return rule8();
        case Rule::kRule9: return rule9();
        case Rule::kRule10: return sensing_rule();
        case Rule::kRule11: return composition();
        case Rule::kRule12: return case_rule();
      }
    } catch (const SemanticsError& e) {
      if (e.kind() == SemanticsError::Kind::kUnknownAction) return bad(Violation::kUnknownAction, e.what());
      return bad(Violation::kShapeMismatch, e.what());
    }
    return std::nullopt;
  }

 private:
  using R = std::optional<Diagnostic>;

  static R bad(Violation v, std::string detail) { return Diagnostic{v, std::move(detail)}; }

  R premise_count(std::size_t n) const {
    if (why_.premises.size() == n) return std::nullopt;
    return bad(Violation::kPremiseCount, std::string(rule_name(why_.rule)) + " takes " + std::to_string(n) +
                                             " premise(s), got " + std::to_string(why_.premises.size()));
  }

  const Judgment& premise(std::size_t k) const { return ctx_[why_.premises[k]]; }

  /// Same goal (post set for Knows, literal for KW) as the conclusion.
  R same_goal(const Judgment& p) const {
    if (p.kind != j_.kind) return bad(Violation::kKindMismatch, "premise " + to_string(p) + " has the wrong kind");
    if (j_.is_knows() ? p.post != j_.post : p.kw != j_.kw) {
      return bad(Violation::kPostconditionMismatch, "premise " + to_string(p) + " has a different goal");
    }
    return std::nullopt;
  }

  R require_executable(const std::string& a, const LiteralSet& x) const {
    if (executable0(a, AState(x), d_)) return std::nullopt;
    return bad(Violation::kNotExecutable, "action '" + a + "' is not 0-executable in " + x.str());
  }

  R ax1() const {
    if (auto r = premise_count(0)) return r;
    if (!j_.plan.is_empty()) return bad(Violation::kShapeMismatch, "ax1 needs the empty plan");
    if (j_.pre != j_.post) return bad(Violation::kPostconditionMismatch, "ax1 needs X = Y");
    return std::nullopt;
  }

  R ax2() const {
    if (auto r = premise_count(0)) return r;
    if (!j_.plan.is_action()) return bad(Violation::kShapeMismatch, "ax2 needs a single action");
    const std::string& a = j_.plan.action_name();
    detail::require_action(a, d_);
    if (!d_.is_non_sensing(a)) return bad(Violation::kNotNonSensingAction, "'" + a + "' is a sensing action");
    if (auto r = require_executable(a, j_.pre)) return r;
    LiteralSet expected = res0(a, AState(j_.pre), d_).literals();
    if (expected != j_.post) {
      return bad(Violation::kPostconditionMismatch, "Res0(" + a + ", X) is " + expected.str() + ", not " + j_.post.str());
    }
    return std::nullopt;
  }

  /// rule3 / rule10
  R sensing_rule() const {
    Plan head = j_.plan.is_seq() ? j_.plan.first() : j_.plan;
    Plan tail = j_.plan.is_seq() ? j_.plan.rest() : Plan::empty();
    if (!head.is_action()) return bad(Violation::kShapeMismatch, "plan must start with a sensing action");
    const std::string& a = head.action_name();
    detail::require_action(a, d_);
    if (!d_.is_sensing(a)) return bad(Violation::kNotSensingAction, "'" + a + "' is not a sensing action");
    if (auto r = require_executable(a, j_.pre)) return r;

    std::vector<LiteralSet> wanted = sensing_completions(j_.pre, a, d_);
    std::vector<bool> covered(wanted.size(), false);
    for (std::size_t k = 0; k < why_.premises.size(); ++k) {
      const Judgment& p = premise(k);
      if (auto r = same_goal(p)) return r;
      if (!(p.plan == tail)) {
        return bad(Violation::kPlanMismatch, "premise plan must be '" + to_string(tail) + "'");
      }
      auto it = std::find(wanted.begin(), wanted.end(), p.pre);
      if (it == wanted.end()) {
        return bad(Violation::kUnexpectedSensingBranch, p.pre.str() + " is not a sensing completion of " + j_.pre.str());
      }
      covered[static_cast<std::size_t>(it - wanted.begin())] = true;
    }
    std::string missing;
    for (std::size_t i = 0; i < wanted.size(); ++i) {
      if (!covered[i]) missing += (missing.empty() ? "" : " ") + wanted[i].str();
    }
    if (!missing.empty()) return bad(Violation::kMissingSensingBranch, "uncovered completions: " + missing);
    return std::nullopt;
  }

  /// rule4 / rule12
  R case_rule() const {
    if (auto r = premise_count(1)) return r;
    Plan head = j_.plan.is_seq() ? j_.plan.first() : j_.plan;
    Plan tail = j_.plan.is_seq() ? j_.plan.rest() : Plan::empty();
    if (!head.is_case()) return bad(Violation::kShapeMismatch, "plan must start with a case plan");
    if (why_.branch >= head.branch_count()) {
      return bad(Violation::kBadBranch, "branch " + std::to_string(why_.branch) + " does not exist");
    }
    if (!head.guard(why_.branch).subset_of(j_.pre)) {
      return bad(Violation::kGuardNotTrue, "guard " + head.guard(why_.branch).str() + " is not included in " + j_.pre.str());
    }
    for (std::size_t i = 0; i < head.branch_count(); ++i) {
      if (i != why_.branch && head.guard(i).subset_of(j_.pre)) {
        return bad(Violation::kAmbiguousCase, "guards " + head.guard(why_.branch).str() + " and " + head.guard(i).str() +
                                                  " are both true in " + j_.pre.str());
      }
    }
    const Judgment& p = premise(0);
    if (auto r = same_goal(p)) return r;
    if (p.pre != j_.pre) return bad(Violation::kPreconditionMismatch, "premise must start from " + j_.pre.str());
    Plan expected = concat(head.body(why_.branch), tail);
    if (!(p.plan == expected)) {
      return bad(Violation::kPlanMismatch, "premise plan must be '" + to_string(expected) + "'");
    }
    return std::nullopt;
  }

  /// rule5 / rule11
  R composition() const {
    if (auto r = premise_count(2)) return r;
    const Judgment& p1 = premise(0);
    const Judgment& p2 = premise(1);
    if (!p1.is_knows()) return bad(Violation::kKindMismatch, "first premise must be a Knows judgment");
    if (auto r = same_goal(p2)) return r;
    if (p1.pre != j_.pre) return bad(Violation::kPreconditionMismatch, "first premise must start from " + j_.pre.str());
    if (p1.post != p2.pre) {
      return bad(Violation::kIntermediateMismatch, p1.post.str() + " does not match " + p2.pre.str());
    }
    if (!(concat(p1.plan, p2.plan) == j_.plan)) {
      return bad(Violation::kPlanMismatch, "'" + to_string(p1.plan) + "' ; '" + to_string(p2.plan) + "' is not '" +
                                               to_string(j_.plan) + "'");
    }
    return std::nullopt;
  }

  R consequence() const {
    if (auto r = premise_count(1)) return r;
    const Judgment& p = premise(0);
    if (!p.is_knows()) return bad(Violation::kKindMismatch, "premise must be a Knows judgment");
    if (!(p.plan == j_.plan)) return bad(Violation::kPlanMismatch, "premise plan differs");
    if (!p.pre.subset_of(j_.pre)) {
      return bad(Violation::kPreconditionMismatch, p.pre.str() + " is not included in " + j_.pre.str());
    }
    if (!j_.post.subset_of(p.post)) {
      return bad(Violation::kPostconditionMismatch, j_.post.str() + " is not included in " + p.post.str());
    }
    return std::nullopt;
  }

  R ax7() const {
    if (auto r = premise_count(0)) return r;
    if (!j_.plan.is_action()) return bad(Violation::kShapeMismatch, "ax7 needs a single action");
    const std::string& a = j_.plan.action_name();
    detail::require_action(a, d_);
    if (!d_.is_sensing(a)) return bad(Violation::kNotSensingAction, "'" + a + "' is not a sensing action");
    if (auto r = require_executable(a, j_.pre)) return r;
    if (!j_.kw.positive) return bad(Violation::kShapeMismatch, "ax7 concludes KW of a fluent name, not a negation");
    if (!contains(d_.knowledge(a), j_.kw.fluent)) {
      return bad(Violation::kNotDetermined, "'" + a + " determines " + j_.kw.fluent + "' is not in the domain");
    }
    return std::nullopt;
  }

  R rule8() const {
    if (auto r = premise_count(1)) return r;
    const Judgment& p = premise(0);
    if (!p.is_knows()) return bad(Violation::kKindMismatch, "premise must be a Knows judgment");
    if (p.pre != j_.pre) return bad(Violation::kPreconditionMismatch, "premise must start from " + j_.pre.str());
    if (!(p.plan == j_.plan)) return bad(Violation::kPlanMismatch, "premise plan differs");
    if (p.post != LiteralSet{j_.kw}) {
      return bad(Violation::kPostconditionMismatch, "premise goal must be {" + j_.kw.str() + "}");
    }
    return std::nullopt;
  }

  R rule9() const {
    if (auto r = premise_count(1)) return r;
    const Judgment& p = premise(0);
    if (!p.is_kw()) return bad(Violation::kKindMismatch, "premise must be a KW judgment");
    if (p.pre != j_.pre) return bad(Violation::kPreconditionMismatch, "premise must start from " + j_.pre.str());
    if (!(p.plan == j_.plan)) return bad(Violation::kPlanMismatch, "premise plan differs");
    if (p.kw != j_.kw.negated()) return bad(Violation::kLiteralMismatch, "premise must be KW " + j_.kw.negated().str());
    return std::nullopt;
  }

  const DomainDescription& d_;
  const Judgment& j_;
  const Justification& why_;
  std::span<const Judgment> ctx_;
};

}  // namespace detail

/// Checks one step against the judgments of the steps before it.
/// Returns nullopt when the step is an exact instance of its rule.
inline std::optional<Diagnostic> justify_step(const DomainDescription& d, const ProofStep& step,
                                              std::span<const Judgment> context) {
  return detail::StepChecker(d, step, context).run();
}

struct CheckVerdict {
  enum class Status { kAccepted, kDomainMismatch, kEmpty, kBadStep };

  Status status = Status::kAccepted;
  std::size_t step = 0;
  std::optional<Diagnostic> diagnostic;

  bool accepted() const { return status == Status::kAccepted; }

  std::string str() const {
    switch (status) {
      case Status::kAccepted: return "accepted";
      case Status::kDomainMismatch: return "DomainMismatch";
      case Status::kEmpty: return "empty derivation";
      case Status::kBadStep: return "BadStep " + std::to_string(step) + ": " + diagnostic->str();
    }
    return "?";
  }
};

inline CheckVerdict check_derivation(const DomainDescription& d, const Derivation& proof) {
  if (proof.domain_hash != d.hash()) return {CheckVerdict::Status::kDomainMismatch, 0, std::nullopt};
  if (proof.steps.empty()) return {CheckVerdict::Status::kEmpty, 0, std::nullopt};
  std::vector<Judgment> seen;
  seen.reserve(proof.steps.size());
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    if (auto diag = justify_step(d, proof.steps[i], seen)) {
      return {CheckVerdict::Status::kBadStep, i, std::move(diag)};
    }
    seen.push_back(proof.steps[i].judgment);
  }
  return {};
}

/// The steps that step `k` depends on (and `k` itself), renumbered.
/// Premise indices must point backwards.
inline Derivation sub_derivation(const Derivation& proof, std::size_t k) {
  if (k >= proof.steps.size()) throw std::out_of_range("sub_derivation: no step " + std::to_string(k));
  std::vector<bool> keep(k + 1, false);
  keep[k] = true;
  for (std::size_t i = k + 1; i-- > 0;) {
    if (!keep[i]) continue;
    for (std::size_t p : proof.steps[i].why.premises) {
      if (p >= i) throw std::invalid_argument("sub_derivation: premise does not precede its step");
      keep[p] = true;
    }
  }
  std::vector<std::size_t> renumber(k + 1, 0);
  Derivation out{proof.domain_hash, {}};
  for (std::size_t i = 0; i <= k; ++i) {
    if (!keep[i]) continue;
    renumber[i] = out.steps.size();
    ProofStep s = proof.steps[i];
    for (auto& p : s.why.premises) p = renumber[p];
    out.steps.push_back(std::move(s));
  }
  return out;
}

}  // namespace ak
