/**
 * cli.hpp
 *
 * The `ak` command-line front end. `run` takes the arguments after the
 * program name and writes reports to the given streams, so tests can drive
 * it in-process.
 *
 * Exit codes: 0 success / property holds, 1 property fails / not derivable /
 * no path / rejected derivation, 2 usage or parse error, 3 invalid domain or
 * domain mismatch.
 */

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ak/derivation_io.hpp"
#include "ak/domain.hpp"
#include "ak/parser.hpp"
#include "ak/plandb.hpp"
#include "ak/proof.hpp"
#include "ak/prover.hpp"
#include "ak/semantics.hpp"

namespace ak::cli {

enum ExitCode : int { kOk = 0, kFails = 1, kUsage = 2, kInvalid = 3 };

struct Options {
  bool json = false;
  bool color = false;
};

namespace detail {

using Json = nlohmann::ordered_json;

/// Aborts a command with an exit code; rendered by `run`.
struct Abort {
  int code;
  std::string kind;
  std::string message;
  /// Extra lines shown under the message in text mode.
  std::string context;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Abort{kUsage, "IoError", "cannot read '" + path + "'", ""};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Abort{kUsage, "IoError", "cannot write '" + path + "'", ""};
}

/// The offending source line with a caret under the error position.
inline std::string caret(std::string_view text, const SourceSpan& span) {
  std::size_t begin = std::min(span.offset, text.size());
  while (begin > 0 && text[begin - 1] != '\n') --begin;
  std::size_t end = text.find('\n', begin);
  std::string line(text.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
  return "  " + line + "\n  " + std::string(span.offset - begin, ' ') + "^";
}

inline Abort parse_failure(const std::string& where, std::string_view text, const ParseError& e) {
  return Abort{kUsage, to_string(e.kind), where + ":" + e.str(), caret(text, e.span)};
}

template <typename T>
T or_abort(Result<T, ParseError> r, const std::string& where, std::string_view text) {
  if (!r) throw parse_failure(where, text, r.error());
  return std::move(*r);
}

inline Abort invalid_domain(const std::string& path, const std::vector<Proposition>& props,
                            const std::vector<ValidationError>& errors) {
  Abort a{kInvalid, to_string(errors.front().kind),
          path + ": invalid domain (" + std::to_string(errors.size()) + (errors.size() == 1 ? " error)" : " errors)"), ""};
  for (const auto& e : errors) {
    if (!a.context.empty()) a.context += "\n";
    a.context += std::string(to_string(e.kind)) + ": " + e.message;
    for (std::size_t i : e.propositions) a.context += "\n  #" + std::to_string(i + 1) + "  " + to_string(props[i]);
  }
  return a;
}

inline DomainDescription load_domain(const std::string& path) {
  std::string text = read_file(path);
  std::vector<Proposition> props = or_abort(parse_domain(text), path, text);
  auto d = validate_domain(props);
  if (!d) throw invalid_domain(path, props, d.error());
  return std::move(*d);
}

inline LiteralSet inline_literals(const std::string& flag, const std::string& text) {
  return or_abort(parse_literal_set(text), flag, text);
}

inline Json states_json(const StateOutcome& o) {
  Json states = Json::array();
  for (const auto& s : o.states) states.push_back(s.str());
  return states;
}

inline Json witness_json(const Counterexample& c) {
  Json w;
  w["bottom"] = c.bottom;
  if (c.state) w["state"] = c.state->str();
  return w;
}

/// The judgment asked for by a triple or query file.
inline Judgment read_claim(const std::string& path, const std::optional<std::string>& init, const DomainDescription& d) {
  std::string text = read_file(path);
  QueryFile q = or_abort(parse_query_file(text), path, text);
  if (auto* j = std::get_if<Judgment>(&q)) {
    if (init) throw Abort{kUsage, "Usage", "--init cannot be combined with a triple file", ""};
    return *j;
  }
  const Query& query = std::get<Query>(q);
  LiteralSet x = init ? inline_literals("--init", *init) : d.initial();
  if (query.kind == Query::Kind::kKnows) return Judgment::knows(x, query.plan, query.goal);
  return Judgment::knows_whether(x, query.plan, query.literal);
}

class Commands {
 public:
  Commands(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  int validate(const std::string& path) {
    std::string text = read_file(path);
    std::vector<Proposition> props = or_abort(parse_domain(text), path, text);
    auto d = validate_domain(props);
    if (!d) {
      if (!opt_.json) throw invalid_domain(path, props, d.error());
      Json errors = Json::array();
      for (const auto& e : d.error()) {
        Json je;
        je["kind"] = to_string(e.kind);
        je["message"] = e.message;
        Json involved = Json::array();
        for (std::size_t i : e.propositions) involved.push_back({{"index", i + 1}, {"statement", to_string(props[i])}});
        je["propositions"] = std::move(involved);
        errors.push_back(std::move(je));
      }
      emit({{"status", "invalid"}, {"errors", std::move(errors)}});
      return kInvalid;
    }
    const DomainDescription& dd = *d;
    Json report;
    report["status"] = "valid";
    report["domain_hash"] = dd.hash();
    report["propositions"] = dd.propositions().size();
    report["fluents"] = dd.fluents();
    report["non_sensing_actions"] = dd.non_sensing_actions();
    report["sensing_actions"] = dd.sensing_actions();
    Json k = Json::object();
    for (const auto& [a, fs] : dd.knowledge_map()) k[a] = fs;
    report["knowledge"] = std::move(k);
    if (opt_.json) {
      emit(report);
    } else {
      out_ << paint("valid", kGreen) << " " << path << " (" << dd.hash() << ")\n";
      out_ << "fluents: " << join(dd.fluents()) << "\n";
      out_ << "non-sensing actions: " << join(dd.non_sensing_actions()) << "\n";
      out_ << "sensing actions: " << join(dd.sensing_actions()) << "\n";
      for (const auto& [a, fs] : dd.knowledge_map()) out_ << "K(" << a << ") = {" << join(fs) << "}\n";
    }
    return kOk;
  }

  int exec(const std::string& domain_path, const std::string& plan_path, const std::optional<std::string>& init) {
    DomainDescription d = load_domain(domain_path);
    std::string text = read_file(plan_path);
    Plan c = or_abort(parse_plan(text), plan_path, text);
    AState s0 = init ? AState(inline_literals("--init", *init)) : least_initial(d);
    StateOutcome o = phi0_hat(c, s0, d);
    if (opt_.json) {
      emit({{"initial", s0.str()}, {"plan", to_string(c)}, {"bottom", o.bottom}, {"states", states_json(o)}});
    } else if (o.bottom) {
      out_ << paint("BOTTOM", kRed) << "\n";
    } else {
      for (const auto& s : o.states) out_ << s.str() << "\n";
    }
    return kOk;
  }

  int verify(const DomainDescription& d, const Judgment& j, bool witness) {
    std::optional<Counterexample> cex = j.is_knows() ? knows_counterexample(d, j.pre, j.plan, j.post)
                                                     : kwhether_counterexample(d, j.pre, j.plan, j.kw);
    if (opt_.json) {
      Json report{{"judgment", to_string(j)}, {"holds", !cex}};
      if (witness && cex) report["witness"] = witness_json(*cex);
      emit(report);
    } else {
      out_ << (cex ? paint("fails", kRed) : paint("holds", kGreen)) << ": " << to_string(j) << "\n";
      if (witness && cex) out_ << "witness: " << cex->str() << "\n";
    }
    return cex ? kFails : kOk;
  }

  int prove(const DomainDescription& d, const Judgment& j, const std::optional<std::string>& out_path) {
    auto proof = j.is_knows() ? derive_knows(d, j.pre, j.plan, j.post) : derive_kw(d, j.pre, j.plan, j.kw);
    if (!proof) {
      const NotDerivable& nd = proof.error();
      if (opt_.json) {
        emit({{"judgment", to_string(j)}, {"derivable", false}, {"reason", nd.reason}, {"witness", witness_json(nd.witness)}});
      } else {
        out_ << paint("not derivable", kRed) << ": " << to_string(j) << "\n"
             << "reason: " << nd.reason << "\n"
             << "witness: " << nd.witness.str() << "\n";
      }
      return kFails;
    }
    CheckVerdict v = check_derivation(d, *proof);
    if (!v.accepted()) throw std::logic_error("prover produced a rejected derivation: " + v.str());
    if (out_path) write_file(*out_path, serialize_derivation(*proof));
    if (opt_.json) {
      Json report{{"judgment", to_string(j)}, {"derivable", true}, {"steps", proof->steps.size()}};
      if (out_path) {
        report["out"] = *out_path;
      } else {
        report["derivation"] = derivation_to_json(*proof);
      }
      emit(report);
    } else {
      if (!out_path) print_steps(*proof);
      out_ << paint("derived", kGreen) << ": " << to_string(j) << " (" << steps(proof->steps.size()) << ")\n";
      if (out_path) out_ << "written to " << *out_path << "\n";
    }
    return kOk;
  }

  int check(const std::string& domain_path, const std::string& proof_path) {
    DomainDescription d = load_domain(domain_path);
    Derivation proof = read_derivation(proof_path);
    CheckVerdict v = check_derivation(d, proof);
    if (v.status == CheckVerdict::Status::kDomainMismatch) {
      throw Abort{kInvalid, "DomainMismatch",
                  proof_path + " was produced for " + proof.domain_hash + ", domain is " + d.hash(), ""};
    }
    if (opt_.json) {
      Json report{{"accepted", v.accepted()}, {"steps", proof.steps.size()}};
      if (v.accepted()) report["conclusion"] = to_string(proof.conclusion());
      if (v.status == CheckVerdict::Status::kBadStep) {
        report["bad_step"] = v.step;
        report["judgment"] = to_string(proof.steps[v.step].judgment);
        report["violation"] = to_string(v.diagnostic->violation);
        report["detail"] = v.diagnostic->detail;
      } else if (!v.accepted()) {
        report["detail"] = v.str();
      }
      emit(report);
    } else if (v.accepted()) {
      out_ << paint("accepted", kGreen) << ": " << to_string(proof.conclusion()) << " (" << steps(proof.steps.size()) << ")\n";
    } else if (v.status == CheckVerdict::Status::kBadStep) {
      out_ << paint("rejected", kRed) << " at step " << v.step << ": " << to_string(proof.steps[v.step].judgment)
           << "\n  " << v.diagnostic->str() << "\n";
    } else {
      out_ << paint("rejected", kRed) << ": " << v.str() << "\n";
    }
    return v.accepted() ? kOk : kFails;
  }

  int db_add(const std::string& domain_path, const std::string& graph_path, const std::vector<std::string>& proofs,
             bool decompose) {
    DomainDescription d = load_domain(domain_path);
    ProofGraph g = std::filesystem::exists(graph_path) ? load_graph(graph_path, &d, false) : ProofGraph(d.hash());
    Json added = Json::array();
    for (const auto& path : proofs) {
      Derivation proof = read_derivation(path);
      std::vector<std::size_t> picks;
      if (decompose) {
        for (std::size_t i = 0; i < proof.steps.size(); ++i)
          if (proof.steps[i].judgment.is_knows()) picks.push_back(i);
      } else if (!proof.steps.empty()) {
        picks.push_back(proof.steps.size() - 1);
      }
      if (picks.empty()) throw Abort{kFails, "RejectedDerivation", path + ": no {X} c {Y} judgment to store", ""};
      for (std::size_t i : picks) {
        Derivation sub = sub_derivation(proof, i);
        auto id = g.add_triple(d, sub.conclusion(), sub);
        if (!id) throw graph_failure(path, id.error());
        added.push_back({{"edge", *id}, {"triple", to_string(sub.conclusion())}});
        if (!opt_.json) out_ << "edge " << *id << ": " << to_string(sub.conclusion()) << "\n";
      }
    }
    save_graph(g, graph_path);
    if (opt_.json) {
      emit({{"added", std::move(added)}, {"nodes", g.node_count()}, {"edges", g.edge_count()}});
    } else {
      out_ << graph_path << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    }
    return kOk;
  }

  int db_query(const std::string& domain_path, const std::string& graph_path, const std::string& init,
               const std::string& goal, std::size_t max_len, const std::optional<std::string>& out_path, bool fast) {
    DomainDescription d = load_domain(domain_path);
    ProofGraph g = load_graph(graph_path, &d, fast);
    LiteralSet start = inline_literals("--init", init);
    LiteralSet target = inline_literals("--goal", goal);
    auto path = g.query_path(start, target, max_len);
    if (!path) {
      if (opt_.json) {
        emit({{"found", false}, {"explored", path.error().explored}});
      } else {
        out_ << paint("no path", kRed) << " from " << start.str() << " to " << target.str() << " within " << max_len
             << " edges\n";
      }
      return kFails;
    }
    CheckVerdict v = check_derivation(d, path->derivation);
    if (!v.accepted()) throw std::logic_error("stitched derivation rejected: " + v.str());
    if (out_path) write_file(*out_path, serialize_derivation(path->derivation));
    if (opt_.json) {
      Json report{{"found", true}, {"plan", to_string(path->plan)}, {"edges", path->edges},
                  {"steps", path->derivation.steps.size()}};
      if (out_path) report["out"] = *out_path;
      emit(report);
    } else {
      out_ << to_string(path->plan) << "\n";
      if (out_path) out_ << "derivation (" << steps(path->derivation.steps.size()) << ") written to " << *out_path << "\n";
    }
    return kOk;
  }

  int db_stats(const std::string& graph_path, const std::optional<std::string>& domain_path) {
    std::optional<DomainDescription> d;
    if (domain_path) d = load_domain(*domain_path);
    ProofGraph g = load_graph(graph_path, d ? &*d : nullptr, !d);
    if (opt_.json) {
      emit({{"domain_hash", g.domain_hash()}, {"nodes", g.node_count()}, {"edges", g.edge_count()},
            {"verified", g.verified()}});
    } else {
      out_ << "domain: " << g.domain_hash() << "\n"
           << "nodes: " << g.node_count() << "\n"
           << "edges: " << g.edge_count() << "\n"
           << "verified: " << (g.verified() ? "yes" : "no") << "\n";
    }
    return kOk;
  }

 private:
  static constexpr const char* kGreen = "32";
  static constexpr const char* kRed = "31";

  std::string paint(const std::string& s, const char* code) const {
    return opt_.color ? "\033[" + std::string(code) + "m" + s + "\033[0m" : s;
  }

  template <typename Range>
  static std::string join(const Range& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
  }

  static std::string steps(std::size_t n) { return std::to_string(n) + (n == 1 ? " step" : " steps"); }

  void emit(const Json& report) { out_ << report.dump(2) << "\n"; }

  void print_steps(const Derivation& proof) {
    for (std::size_t i = 0; i < proof.steps.size(); ++i) {
      const ProofStep& s = proof.steps[i];
      out_ << "(" << i << ") " << to_string(s.judgment) << "    " << rule_name(s.why.rule);
      if (!s.why.premises.empty()) {
        out_ << " from";
        for (std::size_t p : s.why.premises) out_ << " (" << p << ")";
      }
      if (s.why.rule == Rule::kRule4 || s.why.rule == Rule::kRule12) out_ << " branch " << s.why.branch;
      out_ << "\n";
    }
  }

  static Derivation read_derivation(const std::string& path) {
    auto proof = parse_derivation(read_file(path));
    if (!proof) throw Abort{kUsage, "DerivationFormat", path + ": " + proof.error(), ""};
    return std::move(*proof);
  }

  static Abort graph_failure(const std::string& where, const GraphError& e) {
    switch (e.kind) {
      case GraphError::Kind::kDomainMismatch: return {kInvalid, "DomainMismatch", where + ": " + e.message, ""};
      case GraphError::Kind::kRejectedDerivation: return {kFails, "RejectedDerivation", where + ": " + e.message, ""};
      case GraphError::Kind::kCorruptFile: return {kUsage, "CorruptFile", where + ": " + e.message, ""};
      case GraphError::Kind::kIo: return {kUsage, "IoError", e.message, ""};
    }
    return {kUsage, "Error", e.message, ""};
  }

  static ProofGraph load_graph(const std::string& path, const DomainDescription* d, bool fast) {
    auto g = ProofGraph::load(path, d, LoadOptions{!fast});
    if (!g) throw graph_failure(path, g.error());
    if (d && g->domain_hash() != d->hash()) {
      throw Abort{kInvalid, "DomainMismatch", path + ": graph belongs to " + g->domain_hash() + ", domain is " + d->hash(), ""};
    }
    return std::move(*g);
  }

  static void save_graph(const ProofGraph& g, const std::string& path) {
    auto r = g.save(path);
    if (!r) throw graph_failure(path, r.error());
  }

  const Options& opt_;
  std::ostream& out_;
};

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err, bool color = false) {
  CLI::App app{"Reason about plans with sensing actions under the 0-approximation.", "ak"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ak 1.0.0");

  std::string format = "text";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

  std::string domain, plan_file, query_file, proof_file, graph_file, start, goal, kw;
  std::optional<std::string> init;
  std::optional<std::string> out_file;
  std::vector<std::string> proof_files;
  bool witness = false, decompose = false, fast = false;
  std::size_t max_len = 8;
  std::optional<std::string> stats_domain;

  auto fmt = [&](CLI::App* sub) { sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"})); };

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a domain description");
  validate->add_option("domain", domain, "Domain file")->required();
  fmt(validate);

  CLI::App* exec = app.add_subcommand("exec", "Print the outcome of running a plan");
  exec->add_option("domain", domain, "Domain file")->required();
  exec->add_option("--plan", plan_file, "Plan file")->required();
  exec->add_option("--init", init, "Initial literals; defaults to the domain's initial knowledge");
  fmt(exec);

  CLI::App* verify = app.add_subcommand("verify", "Decide a triple or query semantically");
  verify->add_option("domain", domain, "Domain file")->required();
  verify->add_option("query", query_file, "Triple or query file");
  verify->add_option("--kw", kw, "Ask whether this literal becomes known");
  verify->add_option("--plan", plan_file, "Plan file, with --kw");
  verify->add_option("--init", init, "Initial literals");
  verify->add_flag("--witness", witness, "Print a counterexample when the property fails");
  fmt(verify);

  CLI::App* prove = app.add_subcommand("prove", "Derive a triple or query in the proof system");
  prove->add_option("domain", domain, "Domain file")->required();
  prove->add_option("query", query_file, "Triple or query file")->required();
  prove->add_option("--init", init, "Initial literals for a query file");
  prove->add_option("--out", out_file, "Write the derivation here");
  fmt(prove);

  CLI::App* check = app.add_subcommand("check", "Check a derivation");
  check->add_option("domain", domain, "Domain file")->required();
  check->add_option("derivation", proof_file, "Derivation file")->required();
  fmt(check);

  CLI::App* db = app.add_subcommand("db", "Proof graph database");
  db->require_subcommand(1);
  CLI::App* db_add = db->add_subcommand("add", "Store verified triples");
  db_add->add_option("domain", domain, "Domain file")->required();
  db_add->add_option("graph", graph_file, "Graph file (.akg); created if missing")->required();
  db_add->add_option("derivations", proof_files, "Derivation files")->required();
  db_add->add_flag("--decompose", decompose, "Store every {X} c {Y} step, not only the conclusion");
  fmt(db_add);
  CLI::App* db_query = db->add_subcommand("query", "Search for a plan between two literal sets");
  db_query->add_option("domain", domain, "Domain file")->required();
  db_query->add_option("graph", graph_file, "Graph file (.akg)")->required();
  db_query->add_option("--init", start, "Start literals")->required();
  db_query->add_option("--goal", goal, "Goal literals")->required();
  db_query->add_option("--max-len", max_len, "Maximum number of edges")->check(CLI::PositiveNumber);
  db_query->add_option("--out", out_file, "Write the stitched derivation here");
  db_query->add_flag("--fast", fast, "Skip re-checking stored derivations");
  fmt(db_query);
  CLI::App* db_stats = db->add_subcommand("stats", "Print graph size");
  db_stats->add_option("graph", graph_file, "Graph file (.akg)")->required();
  db_stats->add_option("--domain", stats_domain, "Re-check derivations against this domain");
  fmt(db_stats);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "ak 1.0.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  Options opt{format == "json", color};
  detail::Commands cmd(opt, out);
  try {
    if (*validate) return cmd.validate(domain);
    if (*exec) return cmd.exec(domain, plan_file, init);
    if (*verify || *prove) {
      DomainDescription d = detail::load_domain(domain);
      Judgment j;
      if (!query_file.empty()) {
        if (!kw.empty()) throw detail::Abort{kUsage, "Usage", "give either a query file or --kw, not both", ""};
        j = detail::read_claim(query_file, init, d);
      } else {
        if (kw.empty() || plan_file.empty()) {
          throw detail::Abort{kUsage, "Usage", "need a query file, or --kw with --plan", ""};
        }
        Literal p = detail::or_abort(parse_literal(kw), "--kw", kw);
        std::string text = detail::read_file(plan_file);
        Plan c = detail::or_abort(parse_plan(text), plan_file, text);
        LiteralSet x = init ? detail::inline_literals("--init", *init) : d.initial();
        j = Judgment::knows_whether(x, c, p);
      }
      return *verify ? cmd.verify(d, j, witness) : cmd.prove(d, j, out_file);
    }
    if (*check) return cmd.check(domain, proof_file);
    if (*db_add) return cmd.db_add(domain, graph_file, proof_files, decompose);
    if (*db_query) return cmd.db_query(domain, graph_file, start, goal, max_len, out_file, fast);
    if (*db_stats) return cmd.db_stats(graph_file, stats_domain);
  } catch (const detail::Abort& a) {
    if (opt.json) {
      out << detail::Json{{"error", a.kind}, {"message", a.message}}.dump(2) << "\n";
    } else {
      err << "error: " << a.message << "\n";
      if (!a.context.empty()) err << a.context << "\n";
    }
    return a.code;
  } catch (const SemanticsError& e) {
    if (opt.json) {
      out << detail::Json{{"error", "SemanticsError"}, {"message", e.what()}}.dump(2) << "\n";
    } else {
      err << "error: " << e.what() << "\n";
    }
    return kUsage;
  }
  err << "error: no command\n";
  return kUsage;
}

}  // namespace ak::cli
