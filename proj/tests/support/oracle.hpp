// Reference semantics for tests. Written straight from the definitions on
// bitmask a-states and a raw proposition list, sharing no code with
// ak/semantics.hpp beyond the plan and proposition data types.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ak/domain.hpp"
#include "ak/plan.hpp"

namespace akt {

struct OState {
  std::uint32_t t = 0;
  std::uint32_t f = 0;
  auto operator<=>(const OState&) const = default;
};

/// A set of a-states that may also contain ⊥.
struct OOutcome {
  bool bottom = false;
  std::set<OState> states;
};

class Oracle {
 public:
  explicit Oracle(std::vector<ak::Proposition> props) : props_(std::move(props)) {
    auto see = [&](const std::string& f) {
      if (!index_.count(f)) {
        index_.emplace(f, names_.size());
        names_.push_back(f);
      }
    };
    for (const auto& p : props_) {
      if (auto* i = std::get_if<ak::Initially>(&p)) see(i->literal.fluent);
      if (auto* e = std::get_if<ak::Effect>(&p)) {
        see(e->effect.fluent);
        for (const auto& l : e->precondition) see(l.fluent);
      }
      if (auto* x = std::get_if<ak::Executable>(&p))
        for (const auto& l : x->precondition) see(l.fluent);
      if (auto* k = std::get_if<ak::Determines>(&p)) see(k->fluent);
    }
  }

  /// Makes sure `f` has a bit even if no proposition mentions it.
  std::uint32_t bit(const std::string& f) {
    if (!index_.count(f)) {
      index_.emplace(f, names_.size());
      names_.push_back(f);
    }
    if (names_.size() > 31) throw std::length_error("oracle supports at most 31 fluents");
    return 1u << index_.at(f);
  }

  std::size_t fluent_count() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  OState state(const ak::LiteralSet& x) {
    OState s;
    for (const auto& l : x) (l.positive ? s.t : s.f) |= bit(l.fluent);
    if (s.t & s.f) throw std::invalid_argument("inconsistent");
    return s;
  }

  ak::LiteralSet literals(const OState& s) const {
    std::vector<ak::Literal> out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (s.t >> i & 1u) out.emplace_back(names_[i], true);
      if (s.f >> i & 1u) out.emplace_back(names_[i], false);
    }
    return ak::LiteralSet(std::move(out));
  }

  bool is_true(const ak::Literal& l, const OState& s) {
    return ((l.positive ? s.t : s.f) & bit(l.fluent)) != 0;
  }
  bool is_false(const ak::Literal& l, const OState& s) {
    return ((l.positive ? s.f : s.t) & bit(l.fluent)) != 0;
  }
  bool all_true(const ak::LiteralSet& ps, const OState& s) {
    for (const auto& p : ps)
      if (!is_true(p, s)) return false;
    return true;
  }
  bool all_possibly_true(const ak::LiteralSet& ps, const OState& s) {
    for (const auto& p : ps)
      if (is_false(p, s)) return false;
    return true;
  }

  bool executable(const std::string& a, const OState& s) {
    for (const auto& p : props_) {
      auto* x = std::get_if<ak::Executable>(&p);
      if (x && x->action == a && all_true(x->precondition, s)) return true;
    }
    return false;
  }

  bool sensing(const std::string& a) const {
    for (const auto& p : props_) {
      auto* k = std::get_if<ak::Determines>(&p);
      if (k && k->action == a) return true;
    }
    return false;
  }

  std::uint32_t knowledge(const std::string& a) {
    std::uint32_t k = 0;
    for (const auto& p : props_) {
      auto* d = std::get_if<ak::Determines>(&p);
      if (d && d->action == a) k |= bit(d->fluent);
    }
    return k;
  }

  OState res0(const std::string& a, const OState& s) {
    std::uint32_t ep = 0, em = 0, fp = 0, fm = 0;
    for (const auto& p : props_) {
      auto* e = std::get_if<ak::Effect>(&p);
      if (!e || e->action != a) continue;
      std::uint32_t b = bit(e->effect.fluent);
      if (all_true(e->precondition, s)) (e->effect.positive ? ep : em) |= b;
      if (all_possibly_true(e->precondition, s)) (e->effect.positive ? fp : fm) |= b;
    }
    return {(s.t | ep) & ~fm, (s.f | em) & ~fp};
  }

  OOutcome phi0(const std::string& a, const OState& s) {
    OOutcome out;
    if (!executable(a, s)) {
      out.bottom = true;
      return out;
    }
    if (!sensing(a)) {
      out.states.insert(res0(a, s));
      return out;
    }
    // All (T', F') extending s with T' ∪ F' = T ∪ F ∪ K(a), T' ∩ F' = ∅.
    const std::uint32_t known = s.t | s.f;
    const std::uint32_t open = knowledge(a) & ~known;
    for (std::uint32_t sub = open;; sub = (sub - 1) & open) {
      out.states.insert({s.t | sub, s.f | (open & ~sub)});
      if (sub == 0) break;
    }
    return out;
  }

  OOutcome run(const ak::Plan& c, const OState& s) {
    using K = ak::Plan::Kind;
    switch (c.kind()) {
      case K::kEmpty: return {false, {s}};
      case K::kAction: return phi0(c.action_name(), s);
      case K::kCase: {
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < c.branch_count(); ++i) {
          if (!all_true(c.guard(i), s)) continue;
          if (pick) throw std::logic_error("guards not mutually exclusive");
          pick = i;
        }
        if (!pick) return {true, {}};
        return run(c.body(*pick), s);
      }
      case K::kSeq: {
        OOutcome mid = run(c.first(), s);
        OOutcome out{mid.bottom, {}};
        for (const auto& m : mid.states) {
          OOutcome r = run(c.rest(), m);
          out.bottom = out.bottom || r.bottom;
          out.states.insert(r.states.begin(), r.states.end());
        }
        return out;
      }
    }
    throw std::logic_error("unreachable");
  }

  bool knows(const ak::LiteralSet& x, const ak::Plan& c, const ak::LiteralSet& y) {
    OOutcome o = run(c, state(x));
    if (o.bottom) return false;
    for (const auto& s : o.states)
      if (!all_true(y, s)) return false;
    return true;
  }

  bool kwhether(const ak::LiteralSet& x, const ak::Plan& c, const ak::Literal& p) {
    OOutcome o = run(c, state(x));
    if (o.bottom) return false;
    for (const auto& s : o.states)
      if (!is_true(p, s) && !is_false(p, s)) return false;
    return true;
  }

  /// Every a-state over the known fluents in which all of x is true.
  std::vector<OState> extensions(const ak::LiteralSet& x) {
    OState base = state(x);
    std::vector<OState> out;
    const std::uint32_t free = ((names_.size() >= 32) ? ~0u : ((1u << names_.size()) - 1)) & ~(base.t | base.f);
    // Each free fluent: unknown, true or false.
    std::vector<std::uint32_t> bits;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (free >> i & 1u) bits.push_back(1u << i);
    std::size_t total = 1;
    for (std::size_t i = 0; i < bits.size(); ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      OState s = base;
      std::size_t rest = code;
      for (std::uint32_t b : bits) {
        if (rest % 3 == 1) s.t |= b;
        if (rest % 3 == 2) s.f |= b;
        rest /= 3;
      }
      out.push_back(s);
    }
    return out;
  }

  /// Knows Y after c, quantifying over every initial a-state extending x.
  bool knows_all_initial(const ak::LiteralSet& x, const ak::Plan& c, const ak::LiteralSet& y) {
    for (const auto& s0 : extensions(x)) {
      OOutcome o = run(c, s0);
      if (o.bottom) return false;
      for (const auto& s : o.states)
        if (!all_true(y, s)) return false;
    }
    return true;
  }

  bool kwhether_all_initial(const ak::LiteralSet& x, const ak::Plan& c, const ak::Literal& p) {
    for (const auto& s0 : extensions(x)) {
      OOutcome o = run(c, s0);
      if (o.bottom) return false;
      for (const auto& s : o.states)
        if (!is_true(p, s) && !is_false(p, s)) return false;
    }
    return true;
  }

 private:
  std::vector<ak::Proposition> props_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
};

}  // namespace akt
