#ifndef PALKIT_CHECKER_HPP
#define PALKIT_CHECKER_HPP

#include <optional>
#include <string>
#include <vector>

#include "palkit/formula.hpp"
#include "palkit/kripke.hpp"
#include "palkit/semantics.hpp"

namespace palkit {

enum class ValidityMode { Direct, PValid, TValid };

std::string to_string(ValidityMode mode);

struct SearchBounds {
  int max_worlds = 3;
  FrameClass frame = FrameClass::S5;
  std::vector<AgentId> agents;
  std::vector<std::string> props;
  uint64_t model_cap = 10'000'000;
  std::optional<double> time_cap_seconds;
  int max_denotation_worlds = 3;  // denotation tables have 2^(2^n * n) entries
};

struct CapExceededError : std::runtime_error {
  explicit CapExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

/// All set partitions of {0..n-1} as equivalence relations, in restricted
/// growth string order; there are Bell(n) of them.
std::vector<Relation> equivalence_relations(int n);

/// Deterministic, index-addressable family of candidate models of size n:
/// one relation choice per agent (every partition under S5, every relation
/// under K) crossed with every valuation of the props. Earlier agents and
/// props vary slower; no isomorphism reduction.
class ModelEnumeration {
 public:
  ModelEnumeration(const SearchBounds& bounds, int n);  // throws CapExceededError

  uint64_t count() const { return count_; }
  KripkeModel at(uint64_t index) const;

 private:
  int n_;
  std::vector<AgentId> agents_;
  std::vector<std::string> props_;
  std::vector<Relation> relation_choices_;  // S5 partitions; empty under K
  uint64_t relations_per_agent_;
  uint64_t count_;
  std::vector<std::string> labels_;
};

/// All total (domain, world) tables of an n-world model, 2^(2^n * n) of them;
/// bit (domain*n + world) of the index is the table entry.
class DenotationEnumeration {
 public:
  explicit DenotationEnumeration(int world_count, int cap_worlds = 3);
  uint64_t count() const { return count_; }
  Denotation at(uint64_t index) const;
  void fill(Denotation& d, uint64_t index) const;  // overwrite in place
  static uint64_t index_of(const Denotation& d);

 private:
  int n_;
  uint64_t count_;
};

struct CountermodelWitness {
  KripkeModel model;
  int world;
  std::optional<WorldSet> domain;  // present under pvalid/tvalid
  SchematicEnv env;                // empty when the check had no schematic names
};

struct Verdict {
  enum class Status { ValidUpTo, Countermodel, Inconclusive };
  Status status = Status::ValidUpTo;
  int worlds_checked = 0;
  uint64_t models_checked = 0;
  double elapsed_seconds = 0.0;
  std::optional<CountermodelWitness> countermodel;
  std::string inconclusive_reason;

  bool valid() const { return status == Status::ValidUpTo; }
};

struct CheckOptions {
  // 0 = all hardware threads (OpenMP kernel), 1 = serial reference path,
  // n > 1 = OpenMP with n threads.
  int jobs = 0;
};

/// Exhaustive bounded validity over every model of every size 1..max_worlds.
/// Direct mode uses valid_in_model; pvalid/tvalid additionally enumerate a
/// denotation per schematic name (models outer, assignments inner); the
/// reported countermodel is the first in enumeration order.
Verdict bounded_valid(const Formula& f, const SearchBounds& bounds, ValidityMode mode,
                      const CheckOptions& options = {});

/// Global semantic consequence: in every model where all premises are valid,
/// the conclusion must be valid (per the mode's validity notion).
Verdict bounded_consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                            const SearchBounds& bounds, ValidityMode mode,
                            const CheckOptions& options = {});

}  // namespace palkit

#endif
