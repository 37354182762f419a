/**
 * prover.hpp
 *
 * Structure-directed proof search. The recursion mirrors the plan:
 *
 *   []           ax1, weakened by rule6          (KW: then rule8, rule9)
 *   a            ax2, weakened by rule6          (KW: ax7 for sensed fluents)
 *   a (sensing)  rule3 over all completions of X, each proving {X ∪ Xi} [] {Y}
 *   a; c         ax2 + rule5, or rule3 / rule10 for sensing a
 *   case; c      rule4 / rule12 on the unique branch whose guard holds in X
 *
 * Because every intermediate precondition is exactly the a-state reached so
 * far, a failed search always ends in a member of the outcome set (or ⊥),
 * which is returned as the witness.
 */

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ak/domain.hpp"
#include "ak/judgment.hpp"
#include "ak/proof.hpp"
#include "ak/result.hpp"
#include "ak/semantics.hpp"

namespace ak {

struct NotDerivable {
  /// A reachable a-state violating the goal, or ⊥.
  Counterexample witness;
  std::string reason;

  std::string str() const { return reason + " (witness: " + witness.str() + ")"; }
};

namespace detail {

class Prover {
 public:
  explicit Prover(const DomainDescription& d) : d_(d) {}

  Result<Derivation, NotDerivable> knows(const LiteralSet& x, const Plan& c, const LiteralSet& y) {
    require_consistent(x);
    require_consistent(y);
    if (!prove_knows(x, normalize(c), y)) return fail(x, c);
    return finish();
  }

  Result<Derivation, NotDerivable> kw(const LiteralSet& x, const Plan& c, const Literal& p) {
    require_consistent(x);
    if (!prove_kw(x, normalize(c), p)) return fail(x, c);
    return finish();
  }

 private:
  using Index = std::optional<std::size_t>;

  // A branch can miss the goal while a sibling reaches ⊥; the outcome is then ⊥.
  Unexpected<NotDerivable> fail(const LiteralSet& x, const Plan& c) {
    if (!failure_.witness.bottom && phi0_hat(c, AState(x), d_).bottom) failure_.witness = Counterexample{true, std::nullopt};
    return unexpected(std::move(failure_));
  }

  static void require_consistent(const LiteralSet& x) {
    if (!x.consistent()) throw std::invalid_argument("inconsistent literal set " + x.str());
  }

  Derivation finish() { return Derivation{d_.hash(), std::move(steps_)}; }

  std::size_t emit(Judgment j, Rule rule, std::vector<std::size_t> premises = {}, std::size_t branch = 0) {
    steps_.push_back({std::move(j), {rule, std::move(premises), branch}});
    return steps_.size() - 1;
  }

  Index fail_state(const LiteralSet& state, std::string reason) {
    failure_ = {Counterexample{false, AState(state)}, std::move(reason)};
    return std::nullopt;
  }

  Index fail_bottom(std::string reason) {
    failure_ = {Counterexample{true, std::nullopt}, std::move(reason)};
    return std::nullopt;
  }

  Index not_executable(const std::string& a, const LiteralSet& x) {
    return fail_bottom("action '" + a + "' is not 0-executable in " + x.str());
  }

  /// Rule6 from {X} c {Z} to {X} c {Y}, skipped when Y = Z.
  std::size_t weaken(std::size_t from, const LiteralSet& y) {
    const Judgment& j = steps_[from].judgment;
    if (j.post == y) return from;
    return emit(Judgment::knows(j.pre, j.plan, y), Rule::kRule6, {from});
  }

  Index prove_knows(const LiteralSet& x, const Plan& c, const LiteralSet& y) {
    switch (c.kind()) {
      case Plan::Kind::kEmpty: {
        if (!y.subset_of(x)) return fail_state(x, "goal " + y.str() + " does not hold in " + x.str());
        return weaken(emit(Judgment::knows(x, c, x), Rule::kAx1), y);
      }
      case Plan::Kind::kAction: {
        const std::string& a = c.action_name();
        if (!executable0(a, AState(x), d_)) return not_executable(a, x);
        if (d_.is_sensing(a)) {
          return sensing(x, a, Plan::empty(), Judgment::knows(x, c, y), Rule::kRule3,
                         [&](const LiteralSet& xi, const Plan& rest) { return prove_knows(xi, rest, y); });
        }
        LiteralSet r = res0(a, AState(x), d_).literals();
        std::size_t i = emit(Judgment::knows(x, c, r), Rule::kAx2);
        if (!y.subset_of(r)) return fail_state(r, "goal " + y.str() + " does not hold in " + r.str());
        return weaken(i, y);
      }
      case Plan::Kind::kCase:
        return case_step(x, c, Plan::empty(), Judgment::knows(x, c, y), Rule::kRule4,
                         [&](const Plan& next) { return prove_knows(x, next, y); });
      case Plan::Kind::kSeq:
        break;
    }
    const Plan& head = c.first();
    const Plan& tail = c.rest();
    if (head.is_case()) {
      return case_step(x, head, tail, Judgment::knows(x, c, y), Rule::kRule4,
                       [&](const Plan& next) { return prove_knows(x, next, y); });
    }
    const std::string& a = head.action_name();
    if (!executable0(a, AState(x), d_)) return not_executable(a, x);
    if (d_.is_sensing(a)) {
      return sensing(x, a, tail, Judgment::knows(x, c, y), Rule::kRule3,
                     [&](const LiteralSet& xi, const Plan& rest) { return prove_knows(xi, rest, y); });
    }
    LiteralSet r = res0(a, AState(x), d_).literals();
    std::size_t i = emit(Judgment::knows(x, head, r), Rule::kAx2);
    Index j = prove_knows(r, tail, y);
    if (!j) return j;
    return emit(Judgment::knows(x, c, y), Rule::kRule5, {i, *j});
  }

  Index prove_kw(const LiteralSet& x, const Plan& c, const Literal& p) {
    if (c.is_empty()) return decided(x, c, p, x);
    if (c.is_action()) {
      const std::string& a = c.action_name();
      if (!executable0(a, AState(x), d_)) return not_executable(a, x);
      if (!d_.is_sensing(a)) return decided(x, c, p, res0(a, AState(x), d_).literals());
      if (x.contains(p) || x.contains(p.negated())) return decided(x, c, p, x);
      if (!contains(d_.knowledge(a), p.fluent)) {
        return fail_state(sensing_outcomes(AState(x), d_.knowledge(a)).front().literals(),
                          "'" + a + "' does not determine " + p.fluent + ", which is unknown in " + x.str());
      }
      std::size_t i = emit(Judgment::knows_whether(x, c, Literal(p.fluent)), Rule::kAx7);
      if (p.positive) return i;
      return emit(Judgment::knows_whether(x, c, p), Rule::kRule9, {i});
    }
    if (c.is_case()) {
      return case_step(x, c, Plan::empty(), Judgment::knows_whether(x, c, p), Rule::kRule12,
                       [&](const Plan& next) { return prove_kw(x, next, p); });
    }
    const Plan& head = c.first();
    const Plan& tail = c.rest();
    if (head.is_case()) {
      return case_step(x, head, tail, Judgment::knows_whether(x, c, p), Rule::kRule12,
                       [&](const Plan& next) { return prove_kw(x, next, p); });
    }
    const std::string& a = head.action_name();
    if (!executable0(a, AState(x), d_)) return not_executable(a, x);
    if (d_.is_sensing(a)) {
      return sensing(x, a, tail, Judgment::knows_whether(x, c, p), Rule::kRule10,
                     [&](const LiteralSet& xi, const Plan& rest) { return prove_kw(xi, rest, p); });
    }
    LiteralSet r = res0(a, AState(x), d_).literals();
    std::size_t i = emit(Judgment::knows(x, head, r), Rule::kAx2);
    Index j = prove_kw(r, tail, p);
    if (!j) return j;
    return emit(Judgment::knows_whether(x, c, p), Rule::kRule11, {i, *j});
  }

  /// {X} c {KW p} for a plan without branching whose single outcome is `outcome`:
  /// prove {X} c {{q}} for the decided sign q of p, then rule8 (and rule9).
  Index decided(const LiteralSet& x, const Plan& c, const Literal& p, const LiteralSet& outcome) {
    const bool pos = outcome.contains(p);
    if (!pos && !outcome.contains(p.negated())) {
      return fail_state(outcome, p.fluent + " is unknown in " + outcome.str());
    }
    const Literal q = pos ? p : p.negated();
    Index i = prove_knows(x, c, LiteralSet{q});
    if (!i) return i;
    std::size_t j = emit(Judgment::knows_whether(x, c, q), Rule::kRule8, {*i});
    if (pos) return j;
    return emit(Judgment::knows_whether(x, c, p), Rule::kRule9, {j});
  }

  template <typename Sub>
  Index sensing(const LiteralSet& x, const std::string& a, const Plan& tail, Judgment conclusion, Rule rule,
                Sub&& sub) {
    std::vector<std::size_t> premises;
    for (const auto& xi : sensing_completions(x, a, d_)) {
      Index k = sub(xi, tail);
      if (!k) return k;
      premises.push_back(*k);
    }
    return emit(std::move(conclusion), rule, std::move(premises));
  }

  template <typename Sub>
  Index case_step(const LiteralSet& x, const Plan& head, const Plan& tail, Judgment conclusion, Rule rule, Sub&& sub) {
    auto branch = select_branch(head, AState(x));
    if (!branch) return fail_bottom("no guard of the case plan holds in " + x.str());
    Index k = sub(concat(head.body(*branch), tail));
    if (!k) return k;
    return emit(std::move(conclusion), rule, {*k}, *branch);
  }

  const DomainDescription& d_;
  std::vector<ProofStep> steps_;
  NotDerivable failure_;
};

}  // namespace detail

/// Derivation of {X} c {Y}, or the reason none exists.
inline Result<Derivation, NotDerivable> derive_knows(const DomainDescription& d, const LiteralSet& x, const Plan& c,
                                                     const LiteralSet& y) {
  return detail::Prover(d).knows(x, c, y);
}

/// Derivation of {X} c {KW p}, or the reason none exists.
inline Result<Derivation, NotDerivable> derive_kw(const DomainDescription& d, const LiteralSet& x, const Plan& c,
                                                  const Literal& p) {
  return detail::Prover(d).kw(x, c, p);
}

}  // namespace ak
