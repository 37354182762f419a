/**
 * literal.hpp
 *
 * Fluent literals and canonically ordered literal sets.
 */

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ak {

/// Sorted, duplicate-free set of fluent names.
using FluentSet = std::vector<std::string>;

/// A fluent `f` or its negation `~f`.
struct Literal {
  std::string fluent;
  bool positive = true;

  Literal() = default;
  Literal(std::string name, bool sign = true) : fluent(std::move(name)), positive(sign) {}

  /// Parses "f" or "~f" without validating the identifier.
  static Literal from_string(std::string_view text) {
    if (!text.empty() && text.front() == '~') return {std::string(text.substr(1)), false};
    return {std::string(text), true};
  }

  Literal negated() const { return {fluent, !positive}; }

  std::string str() const { return positive ? fluent : "~" + fluent; }

  bool operator==(const Literal&) const = default;

  // Fluent name first, positive before negative.
  std::strong_ordering operator<=>(const Literal& other) const {
    if (auto c = fluent <=> other.fluent; c != 0) return c;
    if (positive == other.positive) return std::strong_ordering::equal;
    return positive ? std::strong_ordering::less : std::strong_ordering::greater;
  }
};

inline Literal negate(const Literal& p) { return p.negated(); }

/// Fluent name underlying a literal.
inline const std::string& fln(const Literal& p) { return p.fluent; }

/**
 * A finite set of literals kept in canonical order.
 *
 * Consistent sets double as a-states: the positive literals are the fluents
 * known true, the negative ones the fluents known false.
 */
class LiteralSet {
 public:
  using const_iterator = std::vector<Literal>::const_iterator;

  LiteralSet() = default;
  LiteralSet(std::initializer_list<Literal> lits) : lits_(lits) { canonicalize(); }
  explicit LiteralSet(std::vector<Literal> lits) : lits_(std::move(lits)) { canonicalize(); }

  /// Convenience constructor from textual literals, e.g. {"f", "~g"}.
  static LiteralSet of(std::initializer_list<std::string_view> names) {
    std::vector<Literal> lits;
    for (auto n : names) lits.push_back(Literal::from_string(n));
    return LiteralSet(std::move(lits));
  }

  const_iterator begin() const { return lits_.begin(); }
  const_iterator end() const { return lits_.end(); }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  const Literal& operator[](std::size_t i) const { return lits_[i]; }
  const std::vector<Literal>& literals() const { return lits_; }

  bool contains(const Literal& p) const { return std::binary_search(lits_.begin(), lits_.end(), p); }

  /// True iff no literal occurs together with its negation.
  bool consistent() const {
    for (std::size_t i = 1; i < lits_.size(); ++i) {
      if (lits_[i].fluent == lits_[i - 1].fluent) return false;
    }
    return true;
  }

  bool subset_of(const LiteralSet& other) const {
    return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
  }

  bool insert(Literal p) {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), p);
    if (it != lits_.end() && *it == p) return false;
    lits_.insert(it, std::move(p));
    return true;
  }

  bool erase(const Literal& p) {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), p);
    if (it == lits_.end() || *it != p) return false;
    lits_.erase(it);
    return true;
  }

  LiteralSet united(const LiteralSet& other) const {
    LiteralSet out;
    out.lits_.reserve(lits_.size() + other.lits_.size());
    std::set_union(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                   std::back_inserter(out.lits_));
    return out;
  }

  LiteralSet minus(const LiteralSet& other) const {
    LiteralSet out;
    std::set_difference(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                        std::back_inserter(out.lits_));
    return out;
  }

  LiteralSet intersected(const LiteralSet& other) const {
    LiteralSet out;
    std::set_intersection(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                          std::back_inserter(out.lits_));
    return out;
  }

  /// {~p | p in X}
  LiteralSet negated() const {
    std::vector<Literal> out;
    out.reserve(lits_.size());
    for (const auto& p : lits_) out.push_back(p.negated());
    return LiteralSet(std::move(out));
  }

  /// Canonical text: "{a, ~b, c}".
  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      if (i) out += ", ";
      out += lits_[i].str();
    }
    return out + "}";
  }

  /// Comma-separated literals without braces.
  std::string list_str() const {
    std::string out;
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      if (i) out += ", ";
      out += lits_[i].str();
    }
    return out;
  }

  bool operator==(const LiteralSet&) const = default;
  auto operator<=>(const LiteralSet& other) const { return lits_ <=> other.lits_; }

 private:
  void canonicalize() {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  }

  std::vector<Literal> lits_;
};

/// Underlying fluent names of a set; at most |X| elements.
inline FluentSet fln(const LiteralSet& xs) {
  FluentSet out;
  for (const auto& p : xs) {
    if (out.empty() || out.back() != p.fluent) out.push_back(p.fluent);
  }
  return out;
}

inline bool contains(const FluentSet& fs, std::string_view f) {
  return std::binary_search(fs.begin(), fs.end(), f, std::less<>{});
}

inline FluentSet make_fluent_set(std::vector<std::string> fs) {
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

}  // namespace ak
