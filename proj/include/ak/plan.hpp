/**
 * plan.hpp
 *
 * Conditional plans: empty, single action, sequence, and case plans.
 */

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ak/literal.hpp"

namespace ak {

/**
 * Immutable conditional plan. Copies share structure.
 *
 * Plans built through the parser or normalize() are in canonical form:
 * sequences are right-associated and contain no empty component.
 */
class Plan {
 public:
  enum class Kind { kEmpty, kAction, kSeq, kCase };

  Plan() : node_(empty_node()) {}

  static Plan empty() { return Plan(); }

  static Plan action(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kAction;
    n->action = std::move(name);
    return Plan(std::move(n));
  }

  static Plan seq(Plan first, Plan rest) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kSeq;
    n->children = {std::move(first), std::move(rest)};
    return Plan(std::move(n));
  }

  /// Requires at least one branch.
  static Plan make_case(std::vector<LiteralSet> guards, std::vector<Plan> bodies) {
    if (guards.empty() || guards.size() != bodies.size()) {
      throw std::invalid_argument("case plan needs matching non-empty guard and body lists");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::kCase;
    n->guards = std::move(guards);
    n->children = std::move(bodies);
    return Plan(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_empty() const { return kind() == Kind::kEmpty; }
  bool is_action() const { return kind() == Kind::kAction; }
  bool is_seq() const { return kind() == Kind::kSeq; }
  bool is_case() const { return kind() == Kind::kCase; }

  const std::string& action_name() const { return node_->action; }
  const Plan& first() const { return node_->children[0]; }
  const Plan& rest() const { return node_->children[1]; }

  std::size_t branch_count() const { return is_case() ? node_->guards.size() : 0; }
  const LiteralSet& guard(std::size_t i) const { return node_->guards[i]; }
  const Plan& body(std::size_t i) const { return node_->children[i]; }

  /// Stable identity of the shared node; used as a memo key.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Plan& a, const Plan& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.action == y.action && x.guards == y.guards &&
           x.children == y.children;
  }

 private:
  struct Node {
    Kind kind = Kind::kEmpty;
    std::string action;
    std::vector<LiteralSet> guards;
    std::vector<Plan> children;
  };

  explicit Plan(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> empty_node() {
    static const auto node = std::make_shared<const Node>();
    return node;
  }

  std::shared_ptr<const Node> node_;
};

/// Builds the right-associated sequence of the given non-empty, non-sequence items.
inline Plan sequence(const std::vector<Plan>& items) {
  Plan out;
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    out = out.is_empty() ? *it : Plan::seq(*it, out);
  }
  return out;
}

namespace detail {

inline void flatten(const Plan& c, std::vector<Plan>& out);

inline Plan normalize_item(const Plan& c) {
  if (!c.is_case()) return c;
  std::vector<LiteralSet> guards;
  std::vector<Plan> bodies;
  for (std::size_t i = 0; i < c.branch_count(); ++i) {
    guards.push_back(c.guard(i));
    std::vector<Plan> items;
    flatten(c.body(i), items);
    bodies.push_back(sequence(items));
  }
  return Plan::make_case(std::move(guards), std::move(bodies));
}

inline void flatten(const Plan& c, std::vector<Plan>& out) {
  switch (c.kind()) {
    case Plan::Kind::kEmpty:
      return;
    case Plan::Kind::kSeq:
      flatten(c.first(), out);
      flatten(c.rest(), out);
      return;
    default:
      out.push_back(normalize_item(c));
  }
}

}  // namespace detail

/// Drops empty plans from sequences and right-associates them, recursively.
inline Plan normalize(const Plan& c) {
  std::vector<Plan> items;
  detail::flatten(c, items);
  return sequence(items);
}

/// normalize(c1; c2)
inline Plan concat(const Plan& c1, const Plan& c2) {
  std::vector<Plan> items;
  detail::flatten(c1, items);
  detail::flatten(c2, items);
  return sequence(items);
}

inline bool is_normalized(const Plan& c) { return normalize(c) == c; }

/// Number of nested plan levels; the empty plan and single actions have depth 1.
inline std::size_t depth(const Plan& c) {
  switch (c.kind()) {
    case Plan::Kind::kSeq:
      return 1 + std::max(depth(c.first()), depth(c.rest()));
    case Plan::Kind::kCase: {
      std::size_t d = 0;
      for (std::size_t i = 0; i < c.branch_count(); ++i) d = std::max(d, depth(c.body(i)));
      return 1 + d;
    }
    default:
      return 1;
  }
}

}  // namespace ak
