/**
 * judgment.hpp
 *
 * Triples {X} c {Y}, knows-whether triples {X} c {KW p}, and queries.
 */

#pragma once

#include <string>
#include <utility>

#include "ak/literal.hpp"
#include "ak/plan.hpp"

namespace ak {

std::string to_string(const Plan& c);

struct Judgment {
  enum class Kind { kKnows, kKw };

  Kind kind = Kind::kKnows;
  LiteralSet pre;
  Plan plan;
  /// Goal set; used by Knows judgments.
  LiteralSet post;
  /// Decided literal; used by KW judgments.
  Literal kw;

  static Judgment knows(LiteralSet x, Plan c, LiteralSet y) {
    return {Kind::kKnows, std::move(x), std::move(c), std::move(y), {}};
  }
  static Judgment knows_whether(LiteralSet x, Plan c, Literal p) {
    return {Kind::kKw, std::move(x), std::move(c), {}, std::move(p)};
  }

  bool is_knows() const { return kind == Kind::kKnows; }
  bool is_kw() const { return kind == Kind::kKw; }

  bool operator==(const Judgment& o) const {
    if (kind != o.kind || pre != o.pre || !(plan == o.plan)) return false;
    return is_knows() ? post == o.post : kw == o.kw;
  }
};

/// "{X} c {Y}" or "{X} c {KW p}"
inline std::string to_string(const Judgment& j) {
  std::string s = j.pre.str() + " " + to_string(j.plan) + " ";
  return s + (j.is_knows() ? j.post.str() : "{KW " + j.kw.str() + "}");
}

/// "knows X after c" / "kwhether p after c", evaluated from the domain's
/// initial knowledge.
struct Query {
  enum class Kind { kKnows, kKwhether };

  Kind kind = Kind::kKnows;
  LiteralSet goal;
  Literal literal;
  Plan plan;

  bool operator==(const Query& o) const {
    if (kind != o.kind || !(plan == o.plan)) return false;
    return kind == Kind::kKnows ? goal == o.goal : literal == o.literal;
  }
};

inline std::string to_string(const Query& q) {
  if (q.kind == Query::Kind::kKnows) return "knows " + q.goal.str() + " after " + to_string(q.plan) + ".";
  return "kwhether " + q.literal.str() + " after " + to_string(q.plan) + ".";
}

inline std::string to_string(const Plan& c) {
  switch (c.kind()) {
    case Plan::Kind::kEmpty:
      return "[]";
    case Plan::Kind::kAction:
      return c.action_name();
    case Plan::Kind::kSeq: {
      if (c.first().is_seq() || c.first().is_empty() || c.rest().is_empty()) return to_string(normalize(c));
      return to_string(c.first()) + "; " + to_string(c.rest());
    }
    case Plan::Kind::kCase: {
      std::string s = "case";
      for (std::size_t i = 0; i < c.branch_count(); ++i) {
        s += " " + c.guard(i).list_str() + " -> " + to_string(c.body(i)) + ".";
      }
      return s + " endcase";
    }
  }
  return "";
}

}  // namespace ak
