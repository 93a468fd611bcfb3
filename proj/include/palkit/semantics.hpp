#ifndef PALKIT_SEMANTICS_HPP
#define PALKIT_SEMANTICS_HPP

#include <map>
#include <optional>
#include <string>

#include "palkit/formula.hpp"
#include "palkit/kripke.hpp"

namespace palkit {

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bundles a model with the frame check (if any) it passed.
struct EvalContext {
  const KripkeModel* model = nullptr;
  std::optional<FrameClass> frame_class_checked;
};

/// Total truth table over (domain-subset, world) pairs of an n-world model.
/// This is what a schematic formula variable ranges over.
class Denotation {
 public:
  explicit Denotation(int world_count);

  int world_count() const { return n_; }
  bool at(uint64_t domain_bits, int world) const {
    return table_[static_cast<size_t>(domain_bits) * static_cast<size_t>(n_) +
                  static_cast<size_t>(world)] != 0;
  }
  void set(uint64_t domain_bits, int world, bool v) {
    table_[static_cast<size_t>(domain_bits) * static_cast<size_t>(n_) +
           static_cast<size_t>(world)] = v ? 1 : 0;
  }
  /// Worlds w in the model with table(domain, w) true, as a bitmask.
  uint64_t row_bits(uint64_t domain_bits) const;
  size_t entry_count() const { return table_.size(); }  // 2^n * n
  bool operator==(const Denotation& o) const = default;

 private:
  int n_;
  std::vector<uint8_t> table_;
};

using SchematicEnv = std::map<std::string, Denotation>;

// --- Direct recursive semantics --------------------------------------------

/// Truth set of f in m (memoized; announcements evaluate in restricted copies).
WorldSet extension(const KripkeModel& m, const Formula& f);
bool eval_direct(const KripkeModel& m, const Formula& f, int world);
bool valid_in_model(const KripkeModel& m, const Formula& f);

// --- Domain-passing SSE semantics -------------------------------------------
// Every clause threads the current evaluation domain; only announcement
// shrinks it. Schematic names evaluate by table lookup in `env`.

uint64_t sse_extension_bits(const KripkeModel& m, const Formula& f, uint64_t domain_bits,
                            const SchematicEnv* env = nullptr);
WorldSet sse_extension(const KripkeModel& m, const Formula& f, const WorldSet& domain,
                       const SchematicEnv* env = nullptr);
bool eval_sse(const KripkeModel& m, const Formula& f, const WorldSet& domain, int world,
              const SchematicEnv* env = nullptr);

struct DomainWorld {
  uint64_t domain_bits;
  int world;
};

/// pvalid: true at every (domain, world) pair with world in domain.
bool vld_p(const KripkeModel& m, const Formula& f, const SchematicEnv* env = nullptr);
std::optional<DomainWorld> vld_p_witness(const KripkeModel& m, const Formula& f,
                                         const SchematicEnv* env = nullptr);

/// tvalid: true at every world with the full set as domain.
bool vld_t(const KripkeModel& m, const Formula& f, const SchematicEnv* env = nullptr);
std::optional<DomainWorld> vld_t_witness(const KripkeModel& m, const Formula& f,
                                         const SchematicEnv* env = nullptr);

}  // namespace palkit

#endif
