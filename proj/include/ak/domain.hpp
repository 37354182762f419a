/**
 * domain.hpp
 *
 * Propositions, domain descriptions and their validation.
 */

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ak/literal.hpp"
#include "ak/result.hpp"

namespace ak {

/// initially p
struct Initially {
  Literal literal;
  bool operator==(const Initially&) const = default;
};

/// a causes p if p1, ..., pn
struct Effect {
  std::string action;
  Literal effect;
  LiteralSet precondition;
  bool operator==(const Effect&) const = default;
};

/// executable a if p1, ..., pn
struct Executable {
  std::string action;
  LiteralSet precondition;
  bool operator==(const Executable&) const = default;
};

/// a determines f
struct Determines {
  std::string action;
  std::string fluent;
  bool operator==(const Determines&) const = default;
};

using Proposition = std::variant<Initially, Effect, Executable, Determines>;

/// Surface syntax of a single proposition, terminated by ".".
inline std::string to_string(const Proposition& prop) {
  struct Printer {
    std::string operator()(const Initially& p) const { return "initially " + p.literal.str() + "."; }
    std::string operator()(const Effect& p) const {
      std::string s = p.action + " causes " + p.effect.str();
      if (!p.precondition.empty()) s += " if " + p.precondition.list_str();
      return s + ".";
    }
    std::string operator()(const Executable& p) const {
      std::string s = "executable " + p.action;
      if (!p.precondition.empty()) s += " if " + p.precondition.list_str();
      return s + ".";
    }
    std::string operator()(const Determines& p) const { return p.action + " determines " + p.fluent + "."; }
  };
  return std::visit(Printer{}, prop);
}

struct ValidationError {
  enum class Kind {
    kContradictoryInitially,
    kContradictoryEffects,
    kSensingNonSensingOverlap,
    kInconsistentPrecondition,
  };

  Kind kind;
  std::string message;
  /// Indices into the proposition list that take part in the violation.
  std::vector<std::size_t> propositions;
};

inline const char* to_string(ValidationError::Kind k) {
  switch (k) {
    case ValidationError::Kind::kContradictoryInitially:
      return "ContradictoryInitially";
    case ValidationError::Kind::kContradictoryEffects:
      return "ContradictoryEffects";
    case ValidationError::Kind::kSensingNonSensingOverlap:
      return "SensingNonSensingOverlap";
    case ValidationError::Kind::kInconsistentPrecondition:
      return "InconsistentPrecondition";
  }
  return "?";
}

class DomainDescription;

Result<DomainDescription, std::vector<ValidationError>> validate_domain(std::vector<Proposition> props);

/**
 * A validated domain description with per-action indexes.
 *
 * Instances are only produced by validate_domain() and are immutable.
 */
class DomainDescription {
 public:
  const std::vector<Proposition>& propositions() const { return props_; }

  /// Every action mentioned by some proposition.
  const std::set<std::string>& actions() const { return actions_; }
  const std::set<std::string>& sensing_actions() const { return sensing_; }
  const std::set<std::string>& non_sensing_actions() const { return non_sensing_; }
  /// Every fluent mentioned by some proposition.
  const FluentSet& fluents() const { return fluents_; }

  bool has_action(const std::string& a) const { return actions_.count(a) > 0; }
  bool is_sensing(const std::string& a) const { return sensing_.count(a) > 0; }
  bool is_non_sensing(const std::string& a) const { return non_sensing_.count(a) > 0; }

  const std::vector<Effect>& effects(const std::string& a) const { return lookup(effects_, a); }
  const std::vector<LiteralSet>& executability(const std::string& a) const { return lookup(exec_, a); }

  /// K(a): fluents sensed by `a`; empty for non-sensing actions.
  const FluentSet& knowledge(const std::string& a) const { return lookup(knowledge_, a); }
  const std::map<std::string, FluentSet>& knowledge_map() const { return knowledge_; }

  /// {p | "initially p" in D}
  const LiteralSet& initial() const { return initial_; }

  /// Hex content digest over the canonical, order-independent text of the
  /// non-initially propositions. Transition functions do not depend on
  /// initial knowledge, so neither does the digest.
  const std::string& hash() const { return hash_; }

 private:
  friend Result<DomainDescription, std::vector<ValidationError>> validate_domain(std::vector<Proposition>);

  template <typename V>
  static const V& lookup(const std::map<std::string, V>& m, const std::string& key) {
    static const V kEmpty{};
    auto it = m.find(key);
    return it == m.end() ? kEmpty : it->second;
  }

  std::vector<Proposition> props_;
  std::set<std::string> actions_;
  std::set<std::string> sensing_;
  std::set<std::string> non_sensing_;
  FluentSet fluents_;
  std::map<std::string, std::vector<Effect>> effects_;
  std::map<std::string, std::vector<LiteralSet>> exec_;
  std::map<std::string, FluentSet> knowledge_;
  LiteralSet initial_;
  std::string hash_;
};

/// 64-bit FNV-1a, rendered as "fnv1a64:<16 hex digits>".
inline std::string content_digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static const char* kHex = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) out += kHex[(h >> shift) & 0xF];
  return out;
}

namespace detail {

inline std::string prop_label(const std::vector<Proposition>& props, std::size_t i) {
  return "#" + std::to_string(i + 1) + " \"" + to_string(props[i]) + "\"";
}

}  // namespace detail

/**
 * Checks the well-formedness conditions of a domain description and builds
 * its indexes. Every violation is reported, each naming the propositions
 * involved (1-based in messages, 0-based in ValidationError::propositions).
 */
inline Result<DomainDescription, std::vector<ValidationError>> validate_domain(std::vector<Proposition> props) {
  using Kind = ValidationError::Kind;
  std::vector<ValidationError> errors;
  DomainDescription d;

  std::vector<std::string> fluents;
  std::map<std::string, std::size_t> first_effect_mention;
  std::map<std::string, std::size_t> first_sensing_mention;
  std::vector<std::pair<Literal, std::size_t>> initially;
  std::vector<std::size_t> effect_index;

  for (std::size_t i = 0; i < props.size(); ++i) {
    const Proposition& prop = props[i];
    if (const auto* p = std::get_if<Initially>(&prop)) {
      fluents.push_back(p->literal.fluent);
      initially.emplace_back(p->literal, i);
    } else if (const auto* p = std::get_if<Effect>(&prop)) {
      d.actions_.insert(p->action);
      first_effect_mention.try_emplace(p->action, i);
      fluents.push_back(p->effect.fluent);
      for (const auto& q : p->precondition) fluents.push_back(q.fluent);
      if (!p->precondition.consistent()) {
        errors.push_back({Kind::kInconsistentPrecondition,
                          "effect precondition " + p->precondition.str() + " of " + detail::prop_label(props, i) +
                              " is inconsistent",
                          {i}});
      }
      effect_index.push_back(i);
    } else if (const auto* p = std::get_if<Executable>(&prop)) {
      d.actions_.insert(p->action);
      for (const auto& q : p->precondition) fluents.push_back(q.fluent);
      if (!p->precondition.consistent()) {
        errors.push_back({Kind::kInconsistentPrecondition,
                          "ex-precondition " + p->precondition.str() + " of " + detail::prop_label(props, i) +
                              " is inconsistent",
                          {i}});
      }
    } else if (const auto* p = std::get_if<Determines>(&prop)) {
      d.actions_.insert(p->action);
      first_sensing_mention.try_emplace(p->action, i);
      fluents.push_back(p->fluent);
    }
  }

  for (std::size_t i = 0; i < initially.size(); ++i) {
    for (std::size_t j = i + 1; j < initially.size(); ++j) {
      if (initially[i].first == initially[j].first.negated()) {
        errors.push_back({Kind::kContradictoryInitially,
                          detail::prop_label(props, initially[i].second) + " contradicts " +
                              detail::prop_label(props, initially[j].second),
                          {initially[i].second, initially[j].second}});
      }
    }
  }

  // Contradictory iff complementary effects and P ∩ ¬Q = ∅, i.e. P ∪ Q consistent.
  for (std::size_t x = 0; x < effect_index.size(); ++x) {
    const auto& e1 = std::get<Effect>(props[effect_index[x]]);
    for (std::size_t y = x + 1; y < effect_index.size(); ++y) {
      const auto& e2 = std::get<Effect>(props[effect_index[y]]);
      if (e1.action != e2.action || e1.effect != e2.effect.negated()) continue;
      if (e1.precondition.intersected(e2.precondition.negated()).empty()) {
        errors.push_back({Kind::kContradictoryEffects,
                          detail::prop_label(props, effect_index[x]) + " contradicts " +
                              detail::prop_label(props, effect_index[y]),
                          {effect_index[x], effect_index[y]}});
      }
    }
  }

  for (const auto& [action, i] : first_sensing_mention) {
    auto it = first_effect_mention.find(action);
    if (it != first_effect_mention.end()) {
      errors.push_back({Kind::kSensingNonSensingOverlap,
                        "action '" + action + "' is both sensing (" + detail::prop_label(props, i) +
                            ") and non-sensing (" + detail::prop_label(props, it->second) + ")",
                        {std::min(i, it->second), std::max(i, it->second)}});
    }
  }

  if (!errors.empty()) return unexpected(std::move(errors));

  for (const auto& a : d.actions_) {
    if (first_sensing_mention.count(a)) {
      d.sensing_.insert(a);
    } else {
      d.non_sensing_.insert(a);
    }
  }

  std::vector<Literal> init;
  std::vector<std::string> canonical;
  for (const Proposition& prop : props) {
    if (const auto* p = std::get_if<Initially>(&prop)) {
      init.push_back(p->literal);
      continue;
    }
    canonical.push_back(to_string(prop));
    if (const auto* p = std::get_if<Effect>(&prop)) {
      d.effects_[p->action].push_back(*p);
    } else if (const auto* p = std::get_if<Executable>(&prop)) {
      d.exec_[p->action].push_back(p->precondition);
    } else if (const auto* p = std::get_if<Determines>(&prop)) {
      d.knowledge_[p->action].push_back(p->fluent);
    }
  }
  for (auto& [a, fs] : d.knowledge_) fs = make_fluent_set(std::move(fs));
  d.initial_ = LiteralSet(std::move(init));
  d.fluents_ = make_fluent_set(std::move(fluents));

  std::sort(canonical.begin(), canonical.end());
  canonical.erase(std::unique(canonical.begin(), canonical.end()), canonical.end());
  std::string text;
  for (const auto& line : canonical) text += line + "\n";
  d.hash_ = content_digest(text);

  d.props_ = std::move(props);
  return d;
}

}  // namespace ak
