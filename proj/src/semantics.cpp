#include "palkit/semantics.hpp"

namespace palkit {

Denotation::Denotation(int world_count) : n_(world_count) {
  if (world_count < 1 || world_count > 20)
    throw std::invalid_argument("denotation world count out of range");
  table_.assign((size_t{1} << n_) * static_cast<size_t>(n_), 0);
}

uint64_t Denotation::row_bits(uint64_t domain_bits) const {
  uint64_t out = 0;
  for (int w = 0; w < n_; ++w)
    if (at(domain_bits, w)) out |= 1ull << w;
  return out;
}

namespace {

using detail::FormulaNode;

// Small linear-scan memo; formulas have few distinct subterms and models in
// the search loops have <= 4 worlds, so this beats hashing.
struct DirectMemo {
  std::vector<std::pair<const FormulaNode*, uint64_t>> entries;
  const uint64_t* find(const FormulaNode* n) const {
    for (const auto& [k, v] : entries)
      if (k == n) return &v;
    return nullptr;
  }
  void put(const FormulaNode* n, uint64_t bits) { entries.emplace_back(n, bits); }
};

uint64_t know_bits(const Relation& r, uint64_t body, uint64_t full) {
  uint64_t out = 0;
  for (int w = 0; w < r.size(); ++w)
    if ((r.row(w) & full & ~body) == 0) out |= 1ull << w;
  return out;
}

Relation group_union(const KripkeModel& m, const std::vector<AgentId>& names) {
  Relation out(m.world_count());
  for (const auto& name : names) {
    const Relation& r = m.relation_of(name);
    for (int u = 0; u < out.size(); ++u) out.set_row(u, out.row(u) | r.row(u));
  }
  return out;
}

Relation group_intersection(const KripkeModel& m, const std::vector<AgentId>& names) {
  Relation out(m.world_count());
  bool first = true;
  for (const auto& name : names) {
    const Relation& r = m.relation_of(name);
    for (int u = 0; u < out.size(); ++u)
      out.set_row(u, first ? r.row(u) : (out.row(u) & r.row(u)));
    first = false;
  }
  return out;
}

// Worlds from which every reachable world (along edges whose target satisfies
// the filter) lands in `body`: the Rck truth set given the filtered closure.
uint64_t rck_bits(const Relation& base, uint64_t target_filter, uint64_t body) {
  Relation filtered(base.size());
  for (int u = 0; u < base.size(); ++u) filtered.set_row(u, base.row(u) & target_filter);
  Relation closed = transitive_closure(std::move(filtered));
  uint64_t out = 0;
  for (int w = 0; w < closed.size(); ++w)
    if ((closed.row(w) & ~body) == 0) out |= 1ull << w;
  return out;
}

uint64_t direct_ext(const KripkeModel& m, const Formula& f, DirectMemo& memo) {
  const FormulaNode* n = f.node();
  if (const uint64_t* hit = memo.find(n)) return *hit;
  const uint64_t full = m.full_bits();
  uint64_t out = 0;
  switch (f.kind()) {
    case FormulaKind::Atom:
      out = m.valuation_bits(f.name());
      break;
    case FormulaKind::Schematic:
      throw EvalError("schematic name '?" + f.name() +
                      "' is only meaningful under pvalid/tvalid evaluation");
    case FormulaKind::Top:
      out = full;
      break;
    case FormulaKind::Neg:
      out = full & ~direct_ext(m, f.child(0), memo);
      break;
    case FormulaKind::And:
      out = direct_ext(m, f.child(0), memo) & direct_ext(m, f.child(1), memo);
      break;
    case FormulaKind::Or:
      out = direct_ext(m, f.child(0), memo) | direct_ext(m, f.child(1), memo);
      break;
    case FormulaKind::Imp:
      out = (full & ~direct_ext(m, f.child(0), memo)) | direct_ext(m, f.child(1), memo);
      break;
    case FormulaKind::Iff: {
      uint64_t a = direct_ext(m, f.child(0), memo);
      uint64_t b = direct_ext(m, f.child(1), memo);
      out = full & ~(a ^ b);
      break;
    }
    case FormulaKind::Know:
      out = know_bits(m.relation_of(n->group[0]), direct_ext(m, f.child(0), memo), full);
      break;
    case FormulaKind::EvKnow:
      out = know_bits(group_union(m, n->group), direct_ext(m, f.child(0), memo), full);
      break;
    case FormulaKind::DistKnow:
      out = know_bits(group_intersection(m, n->group), direct_ext(m, f.child(0), memo), full);
      break;
    case FormulaKind::CommonKnow:
      out = rck_bits(group_union(m, n->group), full, direct_ext(m, f.child(0), memo));
      break;
    case FormulaKind::Rck:
      out = rck_bits(group_union(m, n->group), direct_ext(m, f.child(0), memo),
                     direct_ext(m, f.child(1), memo));
      break;
    case FormulaKind::Announce: {
      uint64_t announced = direct_ext(m, f.child(0), memo);
      if (announced == 0) {
        // No world satisfies the announcement, so it fails everywhere and the
        // clause is vacuously true; the empty model is never built.
        out = full;
        break;
      }
      KripkeModel updated = restrict_model(m, WorldSet{announced, m.world_count()});
      DirectMemo sub;
      uint64_t body = direct_ext(updated, f.child(1), sub);
      out = full & ~announced;  // announcement false: clause holds
      uint64_t live = announced;
      int new_idx = 0;
      while (live) {
        int w = std::countr_zero(live);
        live &= live - 1;
        if ((body >> new_idx) & 1) out |= 1ull << w;
        ++new_idx;
      }
      break;
    }
  }
  memo.put(n, out);
  return out;
}

}  // namespace

WorldSet extension(const KripkeModel& m, const Formula& f) {
  DirectMemo memo;
  return WorldSet{direct_ext(m, f, memo), m.world_count()};
}

bool eval_direct(const KripkeModel& m, const Formula& f, int world) {
  if (world < 0 || world >= m.world_count()) throw EvalError("world index out of range");
  return extension(m, f).test(world);
}

bool valid_in_model(const KripkeModel& m, const Formula& f) {
  return extension(m, f).is_full();
}

// ---------------------------------------------------------------------------
// SSE semantics: predicates over (domain, world)
// ---------------------------------------------------------------------------

namespace {

// Unlike the direct path, the SSE recursion touches each tree node at most
// once per top-level (domain) call, so there is nothing to memoize; this
// function runs in the checker's innermost loop over 2^24 denotation tables.
uint64_t sse_ext(const KripkeModel& m, const Formula& f, uint64_t domain,
                 const SchematicEnv* env) {
  const FormulaNode* n = f.node();
  const uint64_t full = m.full_bits();
  uint64_t out = 0;
  switch (f.kind()) {
    case FormulaKind::Atom:
      // atom clause: D X and A X
      out = domain & m.valuation_bits(f.name());
      break;
    case FormulaKind::Schematic: {
      if (env == nullptr) throw EvalError("unbound schematic name: '?" + f.name() + "'");
      auto it = env->find(f.name());
      if (it == env->end()) throw EvalError("unbound schematic name: '?" + f.name() + "'");
      if (it->second.world_count() != m.world_count())
        throw EvalError("denotation for '?" + f.name() + "' has the wrong world count");
      out = it->second.row_bits(domain) & full;
      break;
    }
    case FormulaKind::Top:
      out = full;  // true regardless of the domain
      break;
    case FormulaKind::Neg:
      out = full & ~sse_ext(m, f.child(0), domain, env);
      break;
    case FormulaKind::And:
      out = sse_ext(m, f.child(0), domain, env) & sse_ext(m, f.child(1), domain, env);
      break;
    case FormulaKind::Or:
      out = sse_ext(m, f.child(0), domain, env) | sse_ext(m, f.child(1), domain, env);
      break;
    case FormulaKind::Imp:
      out = (full & ~sse_ext(m, f.child(0), domain, env)) |
            sse_ext(m, f.child(1), domain, env);
      break;
    case FormulaKind::Iff: {
      uint64_t a = sse_ext(m, f.child(0), domain, env);
      uint64_t b = sse_ext(m, f.child(1), domain, env);
      out = full & ~(a ^ b);
      break;
    }
    case FormulaKind::Know: {
      // forall Y: (D Y and R X Y) -> A D Y
      uint64_t body = sse_ext(m, f.child(0), domain, env);
      const Relation& r = m.relation_of(n->group[0]);
      for (int w = 0; w < r.size(); ++w)
        if ((r.row(w) & domain & ~body) == 0) out |= 1ull << w;
      break;
    }
    case FormulaKind::EvKnow: {
      uint64_t body = sse_ext(m, f.child(0), domain, env);
      Relation r = group_union(m, n->group);
      for (int w = 0; w < r.size(); ++w)
        if ((r.row(w) & domain & ~body) == 0) out |= 1ull << w;
      break;
    }
    case FormulaKind::DistKnow: {
      uint64_t body = sse_ext(m, f.child(0), domain, env);
      Relation r = group_intersection(m, n->group);
      for (int w = 0; w < r.size(); ++w)
        if ((r.row(w) & domain & ~body) == 0) out |= 1ull << w;
      break;
    }
    case FormulaKind::CommonKnow:
      // Cr(top|f): the path filter reduces to the domain itself.
      out = rck_bits(group_union(m, n->group), domain,
                     sse_ext(m, f.child(0), domain, env));
      break;
    case FormulaKind::Rck: {
      // tc(EVR G  intersected with  (U,V) s.t. D V and A D V), consequent at D
      uint64_t ant = sse_ext(m, f.child(0), domain, env);
      uint64_t body = sse_ext(m, f.child(1), domain, env);
      out = rck_bits(group_union(m, n->group), domain & ant, body);
      break;
    }
    case FormulaKind::Announce: {
      // (A D X) -> (B (lambda Y. D Y and A D Y) X)
      uint64_t announced = sse_ext(m, f.child(0), domain, env);
      uint64_t shrunk = domain & announced;
      uint64_t body = sse_ext(m, f.child(1), shrunk, env);
      out = (full & ~announced) | body;
      break;
    }
  }
  return out;
}

}  // namespace

uint64_t sse_extension_bits(const KripkeModel& m, const Formula& f, uint64_t domain_bits,
                            const SchematicEnv* env) {
  return sse_ext(m, f, domain_bits & m.full_bits(), env);
}

WorldSet sse_extension(const KripkeModel& m, const Formula& f, const WorldSet& domain,
                       const SchematicEnv* env) {
  return WorldSet{sse_extension_bits(m, f, domain.bits, env), m.world_count()};
}

bool eval_sse(const KripkeModel& m, const Formula& f, const WorldSet& domain, int world,
              const SchematicEnv* env) {
  if (world < 0 || world >= m.world_count()) throw EvalError("world index out of range");
  return (sse_extension_bits(m, f, domain.bits, env) >> world) & 1;
}

std::optional<DomainWorld> vld_p_witness(const KripkeModel& m, const Formula& f,
                                         const SchematicEnv* env) {
  if (m.world_count() > 20)
    throw EvalError("pvalid quantifies over all 2^n domains; limited to 20 worlds");
  const uint64_t full = m.full_bits();
  for (uint64_t d = 0; d <= full; ++d) {
    uint64_t holds = sse_ext(m, f, d, env);
    uint64_t missing = d & ~holds;
    if (missing) return DomainWorld{d, std::countr_zero(missing)};
  }
  return std::nullopt;
}

bool vld_p(const KripkeModel& m, const Formula& f, const SchematicEnv* env) {
  if (m.world_count() > 20)
    throw EvalError("pvalid quantifies over all 2^n domains; limited to 20 worlds");
  // Same quantification as vld_p_witness; larger domains are checked first
  // since refutations cluster there, and the empty domain cannot refute.
  const uint64_t full = m.full_bits();
  for (uint64_t d = full; d >= 1; --d) {
    uint64_t holds = sse_ext(m, f, d, env);
    if (d & ~holds) return false;
  }
  return true;
}

std::optional<DomainWorld> vld_t_witness(const KripkeModel& m, const Formula& f,
                                         const SchematicEnv* env) {
  const uint64_t full = m.full_bits();
  uint64_t missing = full & ~sse_extension_bits(m, f, full, env);
  if (missing) return DomainWorld{full, std::countr_zero(missing)};
  return std::nullopt;
}

bool vld_t(const KripkeModel& m, const Formula& f, const SchematicEnv* env) {
  return !vld_t_witness(m, f, env).has_value();
}

}  // namespace palkit
