/**
 * semantics.hpp
 *
 * 0-approximation semantics over a-states: effect sets, Res0, the
 * transition functions Phi0 and its extension to conditional plans, the
 * extension order, and entailment of knowledge queries and triples.
 */

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ak/domain.hpp"
#include "ak/literal.hpp"
#include "ak/plan.hpp"

namespace ak {

class SemanticsError : public std::runtime_error {
 public:
  enum class Kind { kUnknownAction, kNotNonSensing, kNotSensing, kNotExecutable, kMultipleGuardsTrue };

  SemanticsError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Truth { kTrue, kFalse, kUnknown };

/**
 * An a-state (T, F): fluents known true and fluents known false, disjoint.
 *
 * Stored as the equivalent consistent literal set T ∪ ¬F.
 */
class AState {
 public:
  AState() = default;

  /// Throws std::invalid_argument if `lits` is inconsistent.
  explicit AState(LiteralSet lits) : lits_(std::move(lits)) {
    if (!lits_.consistent()) throw std::invalid_argument("inconsistent literal set " + lits_.str());
  }

  /// Throws std::invalid_argument unless T ∩ F = ∅.
  static AState from_sets(const FluentSet& true_set, const FluentSet& false_set) {
    std::vector<Literal> lits;
    for (const auto& f : true_set) lits.emplace_back(f, true);
    for (const auto& f : false_set) lits.emplace_back(f, false);
    return AState(LiteralSet(std::move(lits)));
  }

  FluentSet true_set() const {
    FluentSet out;
    for (const auto& p : lits_)
      if (p.positive) out.push_back(p.fluent);
    return out;
  }

  FluentSet false_set() const {
    FluentSet out;
    for (const auto& p : lits_)
      if (!p.positive) out.push_back(p.fluent);
    return out;
  }

  /// T ∪ F
  FluentSet known() const { return fln(lits_); }

  const LiteralSet& literals() const { return lits_; }

  Truth truth(const Literal& p) const {
    if (lits_.contains(p)) return Truth::kTrue;
    if (lits_.contains(p.negated())) return Truth::kFalse;
    return Truth::kUnknown;
  }

  bool is_true(const Literal& p) const { return lits_.contains(p); }
  bool possibly_true(const Literal& p) const { return !lits_.contains(p.negated()); }

  /// Every literal of `xs` is true.
  bool holds(const LiteralSet& xs) const { return xs.subset_of(lits_); }
  /// Every literal of `xs` is possibly true.
  bool possibly_holds(const LiteralSet& xs) const {
    for (const auto& p : xs)
      if (!possibly_true(p)) return false;
    return true;
  }

  std::string str() const { return lits_.str(); }

  bool operator==(const AState&) const = default;
  auto operator<=>(const AState& other) const { return lits_ <=> other.lits_; }

 private:
  LiteralSet lits_;
};

inline Truth truth(const Literal& p, const AState& s) { return s.truth(p); }

/// Extension order: T1 ⊆ T2 and F1 ⊆ F2.
inline bool leq(const AState& a, const AState& b) { return a.literals().subset_of(b.literals()); }

/// Every member of `rhs` extends some member of `lhs`.
inline bool set_leq(const std::vector<AState>& lhs, const std::vector<AState>& rhs) {
  for (const auto& d : rhs) {
    bool found = false;
    for (const auto& s : lhs) {
      if (leq(s, d)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Result of running an action or plan: ⊥, or a non-empty set of a-states.
struct StateOutcome {
  bool bottom = false;
  /// Sorted and duplicate-free; empty iff bottom.
  std::vector<AState> states;

  static StateOutcome make_bottom() { return {true, {}}; }
  static StateOutcome of(std::vector<AState> states) {
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    return {false, std::move(states)};
  }

  bool operator==(const StateOutcome&) const = default;
};

struct EffectSets {
  FluentSet e_plus;
  FluentSet e_minus;
  FluentSet f_plus;
  FluentSet f_minus;

  bool operator==(const EffectSets&) const = default;
};

namespace detail {

inline void require_action(const std::string& a, const DomainDescription& d) {
  if (!d.has_action(a)) throw SemanticsError(SemanticsError::Kind::kUnknownAction, "unknown action '" + a + "'");
}

inline FluentSet unite(const FluentSet& a, const FluentSet& b) {
  FluentSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline FluentSet subtract(const FluentSet& a, const FluentSet& b) {
  FluentSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

/// Some ex-proposition for `a` has all its ex-preconditions true in `s`.
inline bool executable0(const std::string& a, const AState& s, const DomainDescription& d) {
  detail::require_action(a, d);
  for (const auto& pre : d.executability(a)) {
    if (s.holds(pre)) return true;
  }
  return false;
}

inline EffectSets effect_sets(const std::string& a, const AState& s, const DomainDescription& d) {
  detail::require_action(a, d);
  if (!d.is_non_sensing(a)) {
    throw SemanticsError(SemanticsError::Kind::kNotNonSensing, "action '" + a + "' is not a non-sensing action");
  }
  std::vector<std::string> ep, em, fp, fm;
  for (const auto& e : d.effects(a)) {
    const bool fires = s.holds(e.precondition);
    const bool may_fire = s.possibly_holds(e.precondition);
    if (e.effect.positive) {
      if (fires) ep.push_back(e.effect.fluent);
      if (may_fire) fp.push_back(e.effect.fluent);
    } else {
      if (fires) em.push_back(e.effect.fluent);
      if (may_fire) fm.push_back(e.effect.fluent);
    }
  }
  return {make_fluent_set(std::move(ep)), make_fluent_set(std::move(em)), make_fluent_set(std::move(fp)),
          make_fluent_set(std::move(fm))};
}

/// Res0(a, (T,F)) = ((T ∪ e+) \ F-, (F ∪ e-) \ F+)
inline AState res0(const std::string& a, const AState& s, const DomainDescription& d) {
  EffectSets e = effect_sets(a, s, d);
  if (!executable0(a, s, d)) {
    throw SemanticsError(SemanticsError::Kind::kNotExecutable,
                         "action '" + a + "' is not 0-executable in " + s.str());
  }
  FluentSet t = detail::subtract(detail::unite(s.true_set(), e.e_plus), e.f_minus);
  FluentSet f = detail::subtract(detail::unite(s.false_set(), e.e_minus), e.f_plus);
  std::vector<std::string> both;
  std::set_intersection(t.begin(), t.end(), f.begin(), f.end(), std::back_inserter(both));
  if (!both.empty()) {
    // Unreachable for domains without contradictory effect propositions.
    throw std::logic_error("Res0(" + a + ", " + s.str() + ") is not disjoint on '" + both.front() + "'");
  }
  return AState::from_sets(t, f);
}

/// All extensions of `s` that additionally decide every fluent in `sensed`,
/// in canonical order (positive before negative, fluents sorted).
inline std::vector<AState> sensing_outcomes(const AState& s, const FluentSet& sensed) {
  std::vector<std::string> unknown;
  for (const auto& f : sensed) {
    if (s.truth(Literal(f)) == Truth::kUnknown) unknown.push_back(f);
  }
  std::vector<AState> out;
  const std::size_t n = unknown.size();
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    LiteralSet lits = s.literals();
    for (std::size_t i = 0; i < n; ++i) {
      // Bit set means negative; counting upward enumerates positives first.
      lits.insert(Literal(unknown[i], ((mask >> (n - 1 - i)) & 1) == 0));
    }
    out.emplace_back(std::move(lits));
  }
  return out;
}

inline StateOutcome phi0(const std::string& a, const AState& s, const DomainDescription& d) {
  if (!executable0(a, s, d)) return StateOutcome::make_bottom();
  if (d.is_sensing(a)) return StateOutcome::of(sensing_outcomes(s, d.knowledge(a)));
  return StateOutcome::of({res0(a, s, d)});
}

/// Phi0 lifted to a set of states; ⊥ is absorbing.
inline StateOutcome phi0(const std::string& a, const StateOutcome& in, const DomainDescription& d) {
  if (in.bottom) return in;
  std::vector<AState> out;
  for (const auto& s : in.states) {
    StateOutcome r = phi0(a, s, d);
    if (r.bottom) return r;
    out.insert(out.end(), r.states.begin(), r.states.end());
  }
  return StateOutcome::of(std::move(out));
}

/// Index of the unique branch whose guard is true in `s`, or nullopt if none.
/// Throws MultipleGuardsTrue if more than one guard holds.
inline std::optional<std::size_t> select_branch(const Plan& c, const AState& s) {
  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < c.branch_count(); ++i) {
    if (!s.holds(c.guard(i))) continue;
    if (chosen) {
      throw SemanticsError(SemanticsError::Kind::kMultipleGuardsTrue,
                           "guards " + c.guard(*chosen).str() + " and " + c.guard(i).str() + " are both true in " +
                               s.str());
    }
    chosen = i;
  }
  return chosen;
}

/**
 * Evaluates the extended transition function on conditional plans,
 * memoizing on (plan node, a-state) for the lifetime of the evaluator.
 */
class PlanEvaluator {
 public:
  explicit PlanEvaluator(const DomainDescription& d) : d_(d) {}

  StateOutcome run(const Plan& c, const AState& s) {
    switch (c.kind()) {
      case Plan::Kind::kEmpty:
        return StateOutcome::of({s});
      case Plan::Kind::kAction:
        return phi0(c.action_name(), s, d_);
      default:
        break;
    }
    auto key = std::make_pair(c.id(), s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    StateOutcome out;
    if (c.is_case()) {
      auto branch = select_branch(c, s);
      out = branch ? run(c.body(*branch), s) : StateOutcome::make_bottom();
    } else {
      out = run(c.rest(), run(c.first(), s));
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

  StateOutcome run(const Plan& c, const StateOutcome& in) {
    if (in.bottom) return in;
    std::vector<AState> out;
    for (const auto& s : in.states) {
      StateOutcome r = run(c, s);
      if (r.bottom) return r;
      out.insert(out.end(), r.states.begin(), r.states.end());
    }
    return StateOutcome::of(std::move(out));
  }

 private:
  const DomainDescription& d_;
  std::map<std::pair<const void*, AState>, StateOutcome> memo_;
};

inline StateOutcome phi0_hat(const Plan& c, const AState& s, const DomainDescription& d) {
  return PlanEvaluator(d).run(c, s);
}

inline StateOutcome phi0_hat(const Plan& c, const StateOutcome& in, const DomainDescription& d) {
  return PlanEvaluator(d).run(c, in);
}

/// (T_D, F_D) built from the initially-propositions.
inline AState least_initial(const DomainDescription& d) { return AState(d.initial()); }

/// Why a knowledge claim fails: ⊥ is reachable, or some outcome misses the goal.
struct Counterexample {
  bool bottom = false;
  std::optional<AState> state;

  std::string str() const { return bottom ? "BOTTOM" : state->str(); }
};

inline std::optional<Counterexample> knows_counterexample(const DomainDescription& d, const LiteralSet& x,
                                                          const Plan& c, const LiteralSet& y) {
  StateOutcome out = phi0_hat(c, AState(x), d);
  if (out.bottom) return Counterexample{true, std::nullopt};
  for (const auto& s : out.states) {
    if (!s.holds(y)) return Counterexample{false, s};
  }
  return std::nullopt;
}

inline std::optional<Counterexample> kwhether_counterexample(const DomainDescription& d, const LiteralSet& x,
                                                             const Plan& c, const Literal& p) {
  StateOutcome out = phi0_hat(c, AState(x), d);
  if (out.bottom) return Counterexample{true, std::nullopt};
  for (const auto& s : out.states) {
    if (s.truth(p) == Truth::kUnknown) return Counterexample{false, s};
  }
  return std::nullopt;
}

/// {X} c {Y}: c is 0-executable from X and Y holds in every outcome.
/// Initially-propositions of `d` play no role; X is the whole initial knowledge.
inline bool entails_knows(const DomainDescription& d, const LiteralSet& x, const Plan& c, const LiteralSet& y) {
  return !knows_counterexample(d, x, c, y).has_value();
}

/// {X} c {KW p}: c is 0-executable from X and p is decided in every outcome.
inline bool entails_kwhether(const DomainDescription& d, const LiteralSet& x, const Plan& c, const Literal& p) {
  return !kwhether_counterexample(d, x, c, p).has_value();
}

}  // namespace ak
