#ifndef PALKIT_KRIPKE_HPP
#define PALKIT_KRIPKE_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "palkit/formula.hpp"

namespace palkit {

// Worlds are dense 0-based indices; sets and relation rows are bitmasks, so
// models are capped at 64 worlds (wise-men 4 needs 15, the bounded checker 4).
inline constexpr int kMaxWorlds = 64;

inline uint64_t mask_of_width(int n) {
  return n >= 64 ? ~0ull : ((1ull << n) - 1);
}

/// Subset of a model's worlds; doubles as an SSE evaluation domain.
struct WorldSet {
  uint64_t bits = 0;
  int width = 0;  // owning model's world count

  static WorldSet full(int n) { return {mask_of_width(n), n}; }
  static WorldSet none(int n) { return {0, n}; }

  bool test(int w) const { return (bits >> w) & 1; }
  void set(int w, bool v = true) { v ? bits |= (1ull << w) : bits &= ~(1ull << w); }
  int count() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }
  bool is_full() const { return bits == mask_of_width(width); }
  bool subset_of(const WorldSet& o) const { return (bits & ~o.bits) == 0; }
  bool operator==(const WorldSet& o) const = default;
};

/// world_count x world_count adjacency matrix, one bitmask row per source.
class Relation {
 public:
  explicit Relation(int n) : n_(n), rows_(static_cast<size_t>(n), 0) {
    if (n < 1 || n > kMaxWorlds) throw std::invalid_argument("relation size out of range");
  }

  int size() const { return n_; }
  bool at(int u, int v) const { return (rows_[static_cast<size_t>(u)] >> v) & 1; }
  void set(int u, int v, bool b = true) {
    b ? rows_[static_cast<size_t>(u)] |= (1ull << v)
      : rows_[static_cast<size_t>(u)] &= ~(1ull << v);
  }
  uint64_t row(int u) const { return rows_[static_cast<size_t>(u)]; }
  void set_row(int u, uint64_t bits) { rows_[static_cast<size_t>(u)] = bits & mask_of_width(n_); }
  bool operator==(const Relation& o) const = default;

 private:
  int n_;
  std::vector<uint64_t> rows_;
};

bool is_reflexive(const Relation& r);
bool is_transitive(const Relation& r);
bool is_euclidean(const Relation& r);
bool is_symmetric(const Relation& r);

/// Least transitive relation containing r (Warshall over bitmask rows).
Relation transitive_closure(Relation r);

enum class FrameClass { K, S5 };

std::string to_string(FrameClass fc);

struct EmptyDomainError : std::runtime_error {
  EmptyDomainError() : std::runtime_error("cannot restrict a model to an empty world set") {}
};

struct UnknownAgentError : std::runtime_error {
  explicit UnknownAgentError(const std::string& name)
      : std::runtime_error("unknown agent: '" + name + "'") {}
};

/// Finite epistemic model: labeled worlds, one relation per agent, and a
/// valuation over a declared proposition list. Immutable after construction.
class KripkeModel {
 public:
  KripkeModel(std::vector<std::string> world_labels, std::vector<std::string> agent_names,
              std::vector<Relation> agent_relations, std::vector<std::string> prop_names,
              std::vector<uint64_t> valuation_masks);

  int world_count() const { return static_cast<int>(world_labels_.size()); }
  const std::vector<std::string>& world_labels() const { return world_labels_; }
  const std::string& world_label(int w) const { return world_labels_[static_cast<size_t>(w)]; }
  std::optional<int> world_index(std::string_view label) const;

  int agent_count() const { return static_cast<int>(agent_names_.size()); }
  const std::vector<std::string>& agent_names() const { return agent_names_; }
  std::optional<int> agent_index(std::string_view name) const;
  const Relation& relation(int agent) const { return relations_[static_cast<size_t>(agent)]; }
  const Relation& relation_of(const AgentId& name) const;

  const std::vector<std::string>& prop_names() const { return prop_names_; }
  /// Valuation is total on the declared prop list; undeclared props denote {}.
  uint64_t valuation_bits(std::string_view prop) const;
  WorldSet full_set() const { return WorldSet::full(world_count()); }
  uint64_t full_bits() const { return mask_of_width(world_count()); }

 private:
  std::vector<std::string> world_labels_;
  std::vector<std::string> agent_names_;
  std::vector<Relation> relations_;
  std::vector<std::string> prop_names_;
  std::vector<uint64_t> valuation_;
};

bool satisfies_frame(const KripkeModel& m, FrameClass fc);

/// Pointwise union / intersection of the group members' relations.
Relation union_rel(const KripkeModel& m, const AgentGroup& g);
Relation intersect_rel(const KripkeModel& m, const AgentGroup& g);

/// Sub-model induced by `domain`: worlds reindexed densely (labels kept),
/// relations intersected with domain x domain, valuation with domain.
KripkeModel restrict_model(const KripkeModel& m, const WorldSet& domain);

struct ModelFormatError : std::runtime_error {
  ModelFormatError(std::string path, const std::string& message)
      : std::runtime_error("model format error at " + path + ": " + message),
        field_path(std::move(path)) {}
  std::string field_path;
};

/// Document format (JSON): {"worlds": [...], "props": [...],
///   "agents": {name: {"partition": [[..]]} | {"pairs": [[u,v],..]}},
///   "valuation": {prop: [world labels]}}
KripkeModel load_model(const std::string& text);
std::string save_model(const KripkeModel& m);  // canonical form, pairs only
std::string to_dot(const KripkeModel& m);

}  // namespace palkit

#endif
