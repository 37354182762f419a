// Random domains, plans and literal sets for property tests.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ak/domain.hpp"
#include "ak/plan.hpp"

namespace akt {

using Rng = std::mt19937_64;

struct DomainShape {
  std::size_t fluents = 3;
  std::size_t actions = 3;
  std::size_t max_effects = 3;
  std::size_t max_precondition = 2;
  std::size_t max_sensed = 2;
  double sensing_probability = 0.35;
  bool initially = false;
};

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<std::string> fluent_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("f" + std::to_string(i));
  return out;
}

inline ak::Literal random_literal(Rng& rng, const std::vector<std::string>& fluents) {
  return {fluents[uniform(rng, 0, fluents.size() - 1)], coin(rng)};
}

/// Consistent set of at most `max_size` literals.
inline ak::LiteralSet random_literals(Rng& rng, const std::vector<std::string>& fluents, std::size_t max_size) {
  std::vector<std::string> pool = fluents;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t n = uniform(rng, 0, std::min(max_size, pool.size()));
  std::vector<ak::Literal> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(pool[i], coin(rng));
  return ak::LiteralSet(std::move(out));
}

/// Proposition list that passes validation.
inline std::vector<ak::Proposition> random_propositions(Rng& rng, const DomainShape& shape) {
  const auto fluents = fluent_names(shape.fluents);
  for (;;) {
    std::vector<ak::Proposition> props;
    for (std::size_t i = 0; i < shape.actions; ++i) {
      const std::string a = "a" + std::to_string(i);
      if (coin(rng, shape.sensing_probability)) {
        std::size_t k = uniform(rng, 1, std::min(shape.max_sensed, fluents.size()));
        std::vector<std::string> pool = fluents;
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t j = 0; j < k; ++j) props.push_back(ak::Determines{a, pool[j]});
      } else {
        std::size_t n = uniform(rng, 0, shape.max_effects);
        for (std::size_t j = 0; j < n; ++j) {
          props.push_back(ak::Effect{a, random_literal(rng, fluents), random_literals(rng, fluents, shape.max_precondition)});
        }
      }
      std::size_t ex = coin(rng, 0.1) ? 0 : (coin(rng, 0.8) ? 1 : 2);
      for (std::size_t j = 0; j < ex; ++j) {
        props.push_back(ak::Executable{a, coin(rng, 0.6) ? ak::LiteralSet{} : random_literals(rng, fluents, 1)});
      }
    }
    if (shape.initially) {
      for (const auto& l : random_literals(rng, fluents, fluents.size())) props.push_back(ak::Initially{l});
    }
    auto d = ak::validate_domain(props);
    if (d && !d->actions().empty()) return props;
  }
}

inline ak::DomainDescription random_domain(Rng& rng, const DomainShape& shape) {
  return ak::validate_domain(random_propositions(rng, shape)).value();
}

/// Pairwise exclusive guards: at most one holds in any a-state.
inline std::vector<ak::LiteralSet> exclusive_guards(Rng& rng, const std::vector<std::string>& fluents) {
  std::vector<std::string> pool = fluents;
  std::shuffle(pool.begin(), pool.end(), rng);
  const std::string& f = pool[0];
  std::size_t shape = uniform(rng, 0, 9);
  if (shape < 2 || pool.size() < 2) {
    if (shape == 0) return {{ak::Literal(f, true)}};
    return {{ak::Literal(f, true)}, {ak::Literal(f, false)}};
  }
  const std::string& g = pool[1];
  if (shape < 6) return {{ak::Literal(f, true)}, {ak::Literal(f, false)}};
  if (shape < 8) return {{ak::Literal(f, true), ak::Literal(g, coin(rng))}, {ak::Literal(f, false)}};
  return {{ak::Literal(f, true), ak::Literal(g, true)}, {ak::Literal(f, true), ak::Literal(g, false)}, {ak::Literal(f, false)}};
}

/// Plan of depth at most `depth` over the domain's actions.
inline ak::Plan random_plan(Rng& rng, const std::vector<std::string>& actions, const std::vector<std::string>& fluents,
                            std::size_t depth) {
  auto leaf = [&]() {
    return coin(rng, 0.1) ? ak::Plan::empty() : ak::Plan::action(actions[uniform(rng, 0, actions.size() - 1)]);
  };
  if (depth <= 1) return leaf();
  std::size_t pick = uniform(rng, 0, 19);
  if (pick < 5) return leaf();
  if (pick < 14) {
    return ak::Plan::seq(random_plan(rng, actions, fluents, depth - 1), random_plan(rng, actions, fluents, depth - 1));
  }
  auto guards = exclusive_guards(rng, fluents);
  std::vector<ak::Plan> bodies;
  for (std::size_t i = 0; i < guards.size(); ++i) bodies.push_back(random_plan(rng, actions, fluents, depth - 1));
  return ak::Plan::make_case(std::move(guards), std::move(bodies));
}

inline ak::Plan random_plan(Rng& rng, const ak::DomainDescription& d, std::size_t depth) {
  std::vector<std::string> actions(d.actions().begin(), d.actions().end());
  std::vector<std::string> fluents(d.fluents().begin(), d.fluents().end());
  if (fluents.empty()) fluents.push_back("f0");
  return random_plan(rng, actions, fluents, depth);
}

}  // namespace akt
