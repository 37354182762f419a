/**
 * plandb.hpp
 *
 * Persistent graph of verified triples. Nodes are literal sets, an edge
 * {X} c {Y} carries a checked derivation. Plan existence between two sets
 * is answered by breadth-first search; an edge applies at S iff X ⊆ S and
 * leads to exactly Y.
 *
 * File format (".akg", JSON lines):
 *   {"format_version":1,"domain_hash":"fnv1a64:..."}
 *   {"pre":"{...}","plan":"...","post":"{...}","derivation":{...}}
 *   ...
 */

#pragma once

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ak/derivation_io.hpp"
#include "ak/domain.hpp"
#include "ak/judgment.hpp"
#include "ak/parser.hpp"
#include "ak/proof.hpp"
#include "ak/result.hpp"

namespace ak {

inline constexpr int kGraphFormatVersion = 1;

struct GraphError {
  enum class Kind { kRejectedDerivation, kDomainMismatch, kCorruptFile, kIo };

  Kind kind;
  std::string message;

  std::string str() const {
    switch (kind) {
      case Kind::kRejectedDerivation: return "RejectedDerivation: " + message;
      case Kind::kDomainMismatch: return "DomainMismatch: " + message;
      case Kind::kCorruptFile: return "CorruptFile: " + message;
      case Kind::kIo: return "IoError: " + message;
    }
    return message;
  }
};

struct Edge {
  LiteralSet pre;
  Plan plan;
  LiteralSet post;
  Derivation derivation;

  bool operator==(const Edge&) const = default;
};

struct PathResult {
  Plan plan;
  Derivation derivation;
  /// Edge ids along the path.
  std::vector<std::size_t> edges;
};

struct NoPath {
  std::size_t explored = 0;
};

struct LoadOptions {
  /// Re-run the checker on every stored derivation.
  bool verify = true;
};

class ProofGraph {
 public:
  explicit ProofGraph(std::string domain_hash) : hash_(std::move(domain_hash)) {}

  ProofGraph(const ProofGraph& other) {
    std::shared_lock lock(other.mu_);
    copy_from(other);
  }

  ProofGraph& operator=(const ProofGraph& other) {
    if (this != &other) {
      std::scoped_lock lock(mu_, other.mu_);
      copy_from(other);
    }
    return *this;
  }

  const std::string& domain_hash() const { return hash_; }

  /// False if the graph was loaded without re-checking derivations.
  bool verified() const {
    std::shared_lock lock(mu_);
    return verified_;
  }

  std::size_t node_count() const {
    std::shared_lock lock(mu_);
    return nodes_.size();
  }

  std::size_t edge_count() const {
    std::shared_lock lock(mu_);
    return edges_.size();
  }

  std::vector<LiteralSet> nodes() const {
    std::shared_lock lock(mu_);
    return {nodes_.begin(), nodes_.end()};
  }

  std::vector<Edge> edges() const {
    std::shared_lock lock(mu_);
    return edges_;
  }

  /// Inserts {X} c {Y} after checking `proof` against `d`. Inserting an
  /// existing triple returns its id.
  Result<std::size_t, GraphError> add_triple(const DomainDescription& d, const Judgment& j, const Derivation& proof) {
    if (d.hash() != hash_) {
      return unexpected(GraphError{GraphError::Kind::kDomainMismatch, "graph belongs to " + hash_ + ", domain is " + d.hash()});
    }
    if (auto err = gatekeep(d, j, proof)) return unexpected(std::move(*err));
    std::unique_lock lock(mu_);
    return insert(j, proof);
  }

  bool operator==(const ProofGraph& other) const {
    if (this == &other) return true;
    std::shared_lock a(mu_, std::defer_lock);
    std::shared_lock b(other.mu_, std::defer_lock);
    std::lock(a, b);
    return hash_ == other.hash_ && edges_ == other.edges_ && nodes_ == other.nodes_;
  }

  /**
   * Shortest sequence of at most `max_len` edges leading from `start` to a
   * set including `goal`. The derivation of {start} plan {goal} stitches the
   * stored derivations together with rule6 and rule5 steps.
   */
  Result<PathResult, NoPath> query_path(const LiteralSet& start, const LiteralSet& goal, std::size_t max_len) const {
    std::shared_lock lock(mu_);
    if (goal.subset_of(start)) return stitch(start, goal, {});

    const std::vector<std::size_t> order = canonical_order();
    std::map<LiteralSet, std::pair<LiteralSet, std::size_t>> parent;
    std::set<LiteralSet> visited{start};
    std::deque<std::pair<LiteralSet, std::size_t>> queue{{start, 0}};
    std::size_t explored = 0;

    while (!queue.empty()) {
      auto [s, len] = queue.front();
      queue.pop_front();
      ++explored;
      if (len >= max_len) continue;
      for (std::size_t id : order) {
        const Edge& e = edges_[id];
        if (!e.pre.subset_of(s) || visited.count(e.post)) continue;
        visited.insert(e.post);
        parent.emplace(e.post, std::make_pair(s, id));
        if (goal.subset_of(e.post)) {
          std::vector<std::size_t> path;
          for (LiteralSet at = e.post; at != start;) {
            const auto& [prev, via] = parent.at(at);
            path.push_back(via);
            at = prev;
          }
          std::reverse(path.begin(), path.end());
          return stitch(start, goal, path);
        }
        queue.emplace_back(e.post, len + 1);
      }
    }
    return unexpected(NoPath{explored});
  }

  /// JSON-lines encoding; deterministic for a given graph.
  std::string save_to_string() const {
    std::shared_lock lock(mu_);
    nlohmann::ordered_json header;
    header["format_version"] = kGraphFormatVersion;
    header["domain_hash"] = hash_;
    std::string out = header.dump() + "\n";
    for (const Edge& e : edges_) {
      nlohmann::ordered_json rec;
      rec["pre"] = e.pre.str();
      rec["plan"] = to_string(e.plan);
      rec["post"] = e.post.str();
      rec["derivation"] = derivation_to_json(e.derivation);
      out += rec.dump() + "\n";
    }
    return out;
  }

  /// `d` is required when options.verify is set.
  static Result<ProofGraph, GraphError> load_from_string(std::string_view text, const DomainDescription* d,
                                                         LoadOptions options = {}) {
    auto corrupt = [](std::size_t line, const std::string& why) {
      return unexpected(GraphError{GraphError::Kind::kCorruptFile, "line " + std::to_string(line) + ": " + why});
    };
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) return corrupt(lines.size() + 1, "missing trailing newline (truncated?)");
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
    if (lines.empty()) return corrupt(1, "empty file");

    nlohmann::json header = nlohmann::json::parse(lines[0], nullptr, false);
    if (header.is_discarded() || !header.is_object() || !header.contains("format_version") ||
        !header.contains("domain_hash") || !header["domain_hash"].is_string()) {
      return corrupt(1, "bad header");
    }
    if (!header["format_version"].is_number_integer() || header["format_version"].get<int>() != kGraphFormatVersion) {
      return corrupt(1, "unsupported format_version");
    }
    ProofGraph g(header["domain_hash"].get<std::string>());
    if (options.verify) {
      if (d == nullptr) throw std::invalid_argument("verifying load needs a domain description");
      if (d->hash() != g.hash_) {
        return unexpected(GraphError{GraphError::Kind::kDomainMismatch,
                                     "graph belongs to " + g.hash_ + ", domain is " + d->hash()});
      }
    }
    g.verified_ = options.verify;

    for (std::size_t i = 1; i < lines.size(); ++i) {
      nlohmann::json rec = nlohmann::json::parse(lines[i], nullptr, false);
      if (rec.is_discarded() || !rec.is_object()) return corrupt(i + 1, "invalid JSON record");
      for (const char* key : {"pre", "plan", "post"}) {
        if (!rec.contains(key) || !rec[key].is_string()) return corrupt(i + 1, std::string("missing '") + key + "'");
      }
      if (!rec.contains("derivation")) return corrupt(i + 1, "missing 'derivation'");
      auto triple = parse_triple(rec["pre"].get<std::string>() + " " + rec["plan"].get<std::string>() + " " +
                                 rec["post"].get<std::string>());
      if (!triple || !triple->is_knows()) return corrupt(i + 1, "malformed triple");
      auto proof = derivation_from_json(rec["derivation"]);
      if (!proof) return corrupt(i + 1, proof.error());
      if (options.verify) {
        if (auto err = gatekeep(*d, *triple, *proof)) {
          err->message = "line " + std::to_string(i + 1) + ": " + err->message;
          return unexpected(std::move(*err));
        }
      }
      g.insert(*triple, *proof);
    }
    return g;
  }

  Result<bool, GraphError> save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return unexpected(GraphError{GraphError::Kind::kIo, "cannot write " + path});
    out << save_to_string();
    if (!out) return unexpected(GraphError{GraphError::Kind::kIo, "write to " + path + " failed"});
    return true;
  }

  static Result<ProofGraph, GraphError> load(const std::string& path, const DomainDescription* d,
                                             LoadOptions options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return unexpected(GraphError{GraphError::Kind::kIo, "cannot read " + path});
    std::stringstream buf;
    buf << in.rdbuf();
    return load_from_string(buf.str(), d, options);
  }

 private:
  using Key = std::tuple<LiteralSet, std::string, LiteralSet>;

  void copy_from(const ProofGraph& other) {
    hash_ = other.hash_;
    nodes_ = other.nodes_;
    edges_ = other.edges_;
    index_ = other.index_;
    verified_ = other.verified_;
  }

  static std::optional<GraphError> gatekeep(const DomainDescription& d, const Judgment& j, const Derivation& proof) {
    auto reject = [](std::string why) { return GraphError{GraphError::Kind::kRejectedDerivation, std::move(why)}; };
    if (!j.is_knows()) return reject("only {X} c {Y} triples can be stored");
    CheckVerdict v = check_derivation(d, proof);
    if (v.status == CheckVerdict::Status::kDomainMismatch) {
      return GraphError{GraphError::Kind::kDomainMismatch, "derivation was produced for another domain"};
    }
    if (!v.accepted()) return reject(v.str());
    if (!(proof.conclusion() == j)) return reject("derivation proves " + to_string(proof.conclusion()) + ", not " + to_string(j));
    return std::nullopt;
  }

  std::size_t insert(const Judgment& j, const Derivation& proof) {
    Key key{j.pre, to_string(j.plan), j.post};
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    nodes_.insert(j.pre);
    nodes_.insert(j.post);
    edges_.push_back({j.pre, j.plan, j.post, proof});
    index_.emplace(std::move(key), edges_.size() - 1);
    return edges_.size() - 1;
  }

  std::vector<std::size_t> canonical_order() const {
    std::vector<std::size_t> order;
    order.reserve(index_.size());
    for (const auto& [key, id] : index_) order.push_back(id);
    return order;
  }

  PathResult stitch(const LiteralSet& start, const LiteralSet& goal, const std::vector<std::size_t>& path) const {
    PathResult out;
    out.edges = path;
    Derivation& proof = out.derivation;
    proof.domain_hash = hash_;
    auto emit = [&](Judgment j, Rule rule, std::vector<std::size_t> premises) {
      proof.steps.push_back({std::move(j), {rule, std::move(premises), 0}});
      return proof.steps.size() - 1;
    };

    if (path.empty()) {
      std::size_t i = emit(Judgment::knows(start, Plan::empty(), start), Rule::kAx1, {});
      if (goal != start) emit(Judgment::knows(start, Plan::empty(), goal), Rule::kRule6, {i});
      return out;
    }

    std::optional<std::size_t> acc;
    LiteralSet at = start;
    for (std::size_t id : path) {
      const Edge& e = edges_[id];
      const std::size_t offset = proof.steps.size();
      for (const ProofStep& s : e.derivation.steps) {
        ProofStep copy = s;
        for (auto& p : copy.why.premises) p += offset;
        proof.steps.push_back(std::move(copy));
      }
      std::size_t step = proof.steps.size() - 1;
      if (at != e.pre) step = emit(Judgment::knows(at, e.plan, e.post), Rule::kRule6, {step});
      if (acc) {
        const Judgment& prev = proof.steps[*acc].judgment;
        step = emit(Judgment::knows(start, concat(prev.plan, e.plan), e.post), Rule::kRule5, {*acc, step});
      }
      acc = step;
      at = e.post;
    }
    out.plan = proof.steps[*acc].judgment.plan;
    if (goal != at) emit(Judgment::knows(start, out.plan, goal), Rule::kRule6, {*acc});
    return out;
  }

  mutable std::shared_mutex mu_;
  std::string hash_;
  std::set<LiteralSet> nodes_;
  std::vector<Edge> edges_;
  std::map<Key, std::size_t> index_;
  bool verified_ = true;
};

}  // namespace ak
