/**
 * derivation_io.hpp
 *
 * JSON encoding of derivations:
 *
 *   {
 *     "format_version": 1,
 *     "domain_hash": "fnv1a64:...",
 *     "steps": [
 *       {"judgment": "{~f} a {g}", "rule": "ax2", "premises": []},
 *       {"judgment": "...", "rule": "rule4", "premises": [3], "branch": 0},
 *       ...
 *     ]
 *   }
 *
 * Premise and branch indices are 0-based. Judgments use the DSL triple syntax.
 */

#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "ak/parser.hpp"
#include "ak/proof.hpp"
#include "ak/result.hpp"

namespace ak {

inline constexpr int kDerivationFormatVersion = 1;

inline nlohmann::ordered_json derivation_to_json(const Derivation& d) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : d.steps) {
    nlohmann::ordered_json step;
    step["judgment"] = to_string(s.judgment);
    step["rule"] = rule_name(s.why.rule);
    step["premises"] = s.why.premises;
    if (s.why.rule == Rule::kRule4 || s.why.rule == Rule::kRule12) step["branch"] = s.why.branch;
    steps.push_back(std::move(step));
  }
  nlohmann::ordered_json out;
  out["format_version"] = kDerivationFormatVersion;
  out["domain_hash"] = d.domain_hash;
  out["steps"] = std::move(steps);
  return out;
}

inline Result<Derivation, std::string> derivation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) return unexpected(std::string("derivation must be a JSON object"));
  if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != kDerivationFormatVersion) {
    return unexpected(std::string("unsupported or missing format_version"));
  }
  if (!j.contains("domain_hash") || !j["domain_hash"].is_string()) {
    return unexpected(std::string("missing domain_hash"));
  }
  if (!j.contains("steps") || !j["steps"].is_array()) return unexpected(std::string("missing steps array"));

  Derivation d;
  d.domain_hash = j["domain_hash"].get<std::string>();
  std::size_t index = 0;
  for (const auto& s : j["steps"]) {
    const std::string where = "step " + std::to_string(index++) + ": ";
    if (!s.is_object() || !s.contains("judgment") || !s["judgment"].is_string() || !s.contains("rule") ||
        !s["rule"].is_string()) {
      return unexpected(where + "needs string fields 'judgment' and 'rule'");
    }
    auto judgment = parse_triple(s["judgment"].get<std::string>());
    if (!judgment) return unexpected(where + "bad judgment: " + judgment.error().str());
    auto rule = rule_from_name(s["rule"].get<std::string>());
    if (!rule) return unexpected(where + "unknown rule '" + s["rule"].get<std::string>() + "'");

    Justification why{*rule, {}, 0};
    if (s.contains("premises")) {
      if (!s["premises"].is_array()) return unexpected(where + "'premises' must be an array");
      for (const auto& p : s["premises"]) {
        if (!p.is_number_unsigned()) return unexpected(where + "premise indices must be non-negative integers");
        why.premises.push_back(p.get<std::size_t>());
      }
    }
    if (s.contains("branch")) {
      if (!s["branch"].is_number_unsigned()) return unexpected(where + "'branch' must be a non-negative integer");
      why.branch = s["branch"].get<std::size_t>();
    }
    d.steps.push_back({std::move(*judgment), std::move(why)});
  }
  return d;
}

inline std::string serialize_derivation(const Derivation& d) { return derivation_to_json(d).dump(2) + "\n"; }

inline Result<Derivation, std::string> parse_derivation(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return unexpected(std::string("invalid JSON"));
  return derivation_from_json(j);
}

}  // namespace ak
