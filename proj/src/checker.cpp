#include "palkit/checker.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace palkit {

std::string to_string(ValidityMode mode) {
  switch (mode) {
    case ValidityMode::Direct: return "direct";
    case ValidityMode::PValid: return "pvalid";
    case ValidityMode::TValid: return "tvalid";
  }
  return "?";
}

namespace {

bool next_rgs(std::vector<int>& a) {
  int n = static_cast<int>(a.size());
  for (int i = n - 1; i >= 1; --i) {
    int mx = 0;
    for (int j = 0; j < i; ++j) mx = std::max(mx, a[j]);
    if (a[i] <= mx) {
      ++a[i];
      for (int j = i + 1; j < n; ++j) a[j] = 0;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Relation> equivalence_relations(int n) {
  std::vector<Relation> out;
  std::vector<int> rgs(static_cast<size_t>(n), 0);
  do {
    Relation r(n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (rgs[static_cast<size_t>(u)] == rgs[static_cast<size_t>(v)]) r.set(u, v);
    out.push_back(std::move(r));
  } while (next_rgs(rgs));
  return out;
}

ModelEnumeration::ModelEnumeration(const SearchBounds& bounds, int n)
    : n_(n), agents_(bounds.agents), props_(bounds.props) {
  if (n < 1 || n > kMaxWorlds) throw std::invalid_argument("model size out of range");
  if (agents_.empty()) throw std::invalid_argument("search bounds need at least one agent");
  if (bounds.frame == FrameClass::S5) {
    relation_choices_ = equivalence_relations(n);
    relations_per_agent_ = relation_choices_.size();
  } else {
    if (n * n >= 62) throw CapExceededError("class-K relation space overflows at this size");
    relations_per_agent_ = 1ull << (n * n);
  }
  unsigned __int128 total = 1;
  for (size_t i = 0; i < agents_.size(); ++i) total *= relations_per_agent_;
  for (size_t i = 0; i < props_.size(); ++i) total *= (1ull << n);
  if (total > bounds.model_cap) {
    throw CapExceededError("projected model count at " + std::to_string(n) +
                           " worlds exceeds model cap " + std::to_string(bounds.model_cap));
  }
  count_ = static_cast<uint64_t>(total);
  for (int w = 1; w <= n; ++w) labels_.push_back("w" + std::to_string(w));
}

KripkeModel ModelEnumeration::at(uint64_t index) const {
  uint64_t rest = index;
  std::vector<uint64_t> valuation(props_.size(), 0);
  for (size_t j = props_.size(); j-- > 0;) {
    valuation[j] = rest & mask_of_width(n_);
    rest >>= n_;
  }
  std::vector<Relation> rels(agents_.size(), Relation(n_));
  for (size_t i = agents_.size(); i-- > 0;) {
    uint64_t choice = rest % relations_per_agent_;
    rest /= relations_per_agent_;
    if (!relation_choices_.empty()) {
      rels[i] = relation_choices_[static_cast<size_t>(choice)];
    } else {
      Relation r(n_);
      for (int u = 0; u < n_; ++u) r.set_row(u, (choice >> (u * n_)) & mask_of_width(n_));
      rels[i] = std::move(r);
    }
  }
  return KripkeModel(labels_, agents_, std::move(rels), props_, std::move(valuation));
}

DenotationEnumeration::DenotationEnumeration(int world_count, int cap_worlds) : n_(world_count) {
  if (world_count < 1) throw std::invalid_argument("denotation world count out of range");
  if (world_count > cap_worlds)
    throw CapExceededError("denotation enumeration is capped at " + std::to_string(cap_worlds) +
                           " worlds (tables have 2^(2^n*n) entries)");
  int bits = (1 << n_) * n_;
  if (bits >= 62) throw CapExceededError("denotation space overflows at this size");
  count_ = 1ull << bits;
}

Denotation DenotationEnumeration::at(uint64_t index) const {
  Denotation d(n_);
  fill(d, index);
  return d;
}

void DenotationEnumeration::fill(Denotation& d, uint64_t index) const {
  if (d.world_count() != n_) throw std::invalid_argument("denotation world count mismatch");
  int bits = (1 << n_) * n_;
  for (int k = 0; k < bits; ++k)
    d.set(static_cast<uint64_t>(k) / n_, k % n_, (index >> k) & 1);
}

uint64_t DenotationEnumeration::index_of(const Denotation& d) {
  int n = d.world_count();
  int bits = (1 << n) * n;
  if (bits >= 62) throw CapExceededError("denotation space overflows at this size");
  uint64_t idx = 0;
  for (int k = 0; k < bits; ++k)
    if (d.at(static_cast<uint64_t>(k) / n, k % n)) idx |= 1ull << k;
  return idx;
}

// ---------------------------------------------------------------------------
// Bounded search
// ---------------------------------------------------------------------------

namespace {

struct Search {
  std::vector<Formula> premises;
  Formula conclusion;
  SearchBounds bounds;
  ValidityMode mode;
  std::vector<std::string> schematic_names;  // sorted
};

bool formula_holds(const Search& s, const KripkeModel& m, const Formula& f,
                   const SchematicEnv* env) {
  switch (s.mode) {
    case ValidityMode::Direct: return valid_in_model(m, f);
    case ValidityMode::PValid: return vld_p(m, f, env);
    case ValidityMode::TValid: return vld_t(m, f, env);
  }
  return false;
}

// Premises are global: a model only counts when every premise is valid in it.
bool combination_passes(const Search& s, const KripkeModel& m, const SchematicEnv* env) {
  for (const auto& p : s.premises)
    if (!formula_holds(s, m, p, env)) return true;
  return formula_holds(s, m, s.conclusion, env);
}

void decode_env(SchematicEnv& env, const std::vector<std::string>& names,
                const DenotationEnumeration& den, uint64_t env_idx) {
  // First (alphabetically first) name is the most significant digit.
  for (size_t i = names.size(); i-- > 0;) {
    uint64_t digit = env_idx % den.count();
    env_idx /= den.count();
    auto [it, inserted] = env.try_emplace(names[i], den.at(digit));
    if (!inserted) den.fill(it->second, digit);
  }
}

struct SizeScan {
  uint64_t first_fail = UINT64_MAX;  // combined (model, env) index
  bool timed_out = false;
};

struct ScanContext {
  const Search& search;
  const ModelEnumeration& models;
  const DenotationEnumeration* denotations;  // null when no schematic names
  uint64_t env_total;
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline;
};

struct ThreadState {
  uint64_t model_idx = UINT64_MAX;
  std::optional<KripkeModel> model;
  SchematicEnv env;
  uint64_t env_idx = UINT64_MAX;
};

bool check_combined(const ScanContext& ctx, ThreadState& st, uint64_t c) {
  uint64_t model_idx = c / ctx.env_total;
  if (st.model_idx != model_idx) {
    st.model.emplace(ctx.models.at(model_idx));
    st.model_idx = model_idx;
  }
  const SchematicEnv* env = nullptr;
  if (ctx.denotations != nullptr) {
    uint64_t env_idx = c % ctx.env_total;
    if (st.env_idx != env_idx) {
      decode_env(st.env, ctx.search.schematic_names, *ctx.denotations, env_idx);
      st.env_idx = env_idx;
    }
    env = &st.env;
  }
  return combination_passes(ctx.search, *st.model, env);
}

SizeScan scan_serial(const ScanContext& ctx, uint64_t total) {
  SizeScan out;
  ThreadState st;
  for (uint64_t c = 0; c < total; ++c) {
    if (ctx.has_deadline && (c & 0xfff) == 0 &&
        std::chrono::steady_clock::now() > ctx.deadline) {
      out.timed_out = true;
      return out;
    }
    if (!check_combined(ctx, st, c)) {
      out.first_fail = c;
      return out;
    }
  }
  return out;
}

#ifdef _OPENMP
void atomic_min(std::atomic<uint64_t>& target, uint64_t value) {
  uint64_t cur = target.load();
  while (value < cur && !target.compare_exchange_weak(cur, value)) {
  }
}

SizeScan scan_parallel(const ScanContext& ctx, uint64_t total, int jobs) {
  SizeScan out;
  std::atomic<uint64_t> best{UINT64_MAX};
  const uint64_t block = 65536;
  int threads = jobs > 0 ? jobs : omp_get_max_threads();
  for (uint64_t start = 0; start < total; start += block) {
    if (ctx.has_deadline && std::chrono::steady_clock::now() > ctx.deadline) {
      out.timed_out = true;
      return out;
    }
    uint64_t end = std::min(total, start + block);
#pragma omp parallel num_threads(threads)
    {
      ThreadState st;
      // static schedule: consecutive indices per thread, cached model rebuilt
      // only when the model digit changes
#pragma omp for schedule(static)
      for (long long c = static_cast<long long>(start); c < static_cast<long long>(end); ++c) {
        bool ok;
        try {
          ok = check_combined(ctx, st, static_cast<uint64_t>(c));
        } catch (...) {
          ok = false;  // rethrown with context when the minimal index is re-verified
        }
        if (!ok) atomic_min(best, static_cast<uint64_t>(c));
      }
    }
    if (best.load() != UINT64_MAX) break;
  }
  out.first_fail = best.load();
  return out;
}
#endif

Verdict run_search(Search s, const CheckOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](Verdict v) {
    v.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
  };

  // Schematic names appear in the denotation environment, never in models.
  std::set<std::string> schem;
  std::set<std::string> all_atoms;
  std::set<std::string> all_agents;
  auto scan_formula = [&](const Formula& f) {
    for (const auto& x : f.schematics()) schem.insert(x);
    for (const auto& x : f.atoms()) all_atoms.insert(x);
    for (const auto& x : f.agents()) all_agents.insert(x);
  };
  scan_formula(s.conclusion);
  for (const auto& p : s.premises) scan_formula(p);
  s.schematic_names.assign(schem.begin(), schem.end());

  if (s.bounds.max_worlds < 1) throw std::invalid_argument("max_worlds must be at least 1");
  if (s.bounds.agents.empty()) throw std::invalid_argument("search bounds need agents");
  if (!s.schematic_names.empty() && s.mode == ValidityMode::Direct)
    throw std::invalid_argument("schematic names need --mode pvalid or tvalid");
  for (const auto& a : all_agents)
    if (std::find(s.bounds.agents.begin(), s.bounds.agents.end(), a) == s.bounds.agents.end())
      throw std::invalid_argument("agent '" + a + "' is not in the search bounds");
  for (const auto& p : all_atoms)
    if (std::find(s.bounds.props.begin(), s.bounds.props.end(), p) == s.bounds.props.end())
      throw std::invalid_argument("atom '" + p + "' is not in the search bounds");

  std::chrono::steady_clock::time_point deadline{};
  bool has_deadline = s.bounds.time_cap_seconds.has_value();
  if (has_deadline)
    deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(*s.bounds.time_cap_seconds));

  Verdict verdict;
  for (int n = 1; n <= s.bounds.max_worlds; ++n) {
    std::optional<ModelEnumeration> models;
    std::optional<DenotationEnumeration> denotations;
    uint64_t env_total = 1;
    try {
      models.emplace(s.bounds, n);
      if (!s.schematic_names.empty()) {
        denotations.emplace(n, s.bounds.max_denotation_worlds);
        unsigned __int128 combos = 1;
        for (size_t i = 0; i < s.schematic_names.size(); ++i) combos *= denotations->count();
        if (combos * models->count() > s.bounds.model_cap)
          throw CapExceededError(
              "projected model x denotation combinations exceed model cap at " +
              std::to_string(n) + " worlds");
        env_total = static_cast<uint64_t>(combos);
      }
    } catch (const CapExceededError& e) {
      verdict.status = Verdict::Status::Inconclusive;
      verdict.inconclusive_reason = e.what();
      verdict.worlds_checked = n - 1;
      return finish(verdict);
    }

    uint64_t total = models->count() * env_total;
    ScanContext ctx{s, *models, denotations ? &*denotations : nullptr, env_total, deadline,
                    has_deadline};

    SizeScan scan;
#ifdef _OPENMP
    if (options.jobs == 1) {
      scan = scan_serial(ctx, total);
    } else {
      scan = scan_parallel(ctx, total, options.jobs);
    }
#else
    (void)options;
    scan = scan_serial(ctx, total);
#endif

    if (scan.timed_out) {
      verdict.status = Verdict::Status::Inconclusive;
      verdict.inconclusive_reason = "time cap exceeded";
      verdict.worlds_checked = n - 1;
      return finish(verdict);
    }

    if (scan.first_fail != UINT64_MAX) {
      uint64_t model_idx = scan.first_fail / env_total;
      uint64_t env_idx = scan.first_fail % env_total;
      verdict.models_checked += model_idx + 1;
      verdict.worlds_checked = n;
      KripkeModel m = models->at(model_idx);
      SchematicEnv env;
      const SchematicEnv* envp = nullptr;
      if (denotations) {
        decode_env(env, s.schematic_names, *denotations, env_idx);
        envp = &env;
      }
      // Locate the failing (domain, world) pair and confirm the failure before
      // reporting: a countermodel must re-evaluate to false.
      for (const auto& p : s.premises) {
        if (!formula_holds(s, m, p, envp))
          throw std::logic_error("countermodel re-verification failed: premise does not hold");
      }
      int world = 0;
      std::optional<WorldSet> domain;
      switch (s.mode) {
        case ValidityMode::Direct: {
          WorldSet ext = extension(m, s.conclusion);
          uint64_t missing = m.full_bits() & ~ext.bits;
          if (!missing) throw std::logic_error("countermodel re-verification failed");
          world = std::countr_zero(missing);
          break;
        }
        case ValidityMode::PValid: {
          auto dw = vld_p_witness(m, s.conclusion, envp);
          if (!dw) throw std::logic_error("countermodel re-verification failed");
          world = dw->world;
          domain = WorldSet{dw->domain_bits, m.world_count()};
          break;
        }
        case ValidityMode::TValid: {
          auto dw = vld_t_witness(m, s.conclusion, envp);
          if (!dw) throw std::logic_error("countermodel re-verification failed");
          world = dw->world;
          domain = WorldSet{dw->domain_bits, m.world_count()};
          break;
        }
      }
      verdict.status = Verdict::Status::Countermodel;
      verdict.countermodel = CountermodelWitness{std::move(m), world, domain, std::move(env)};
      return finish(verdict);
    }
    verdict.models_checked += models->count();
    verdict.worlds_checked = n;
  }
  verdict.status = Verdict::Status::ValidUpTo;
  return finish(verdict);
}

}  // namespace

Verdict bounded_valid(const Formula& f, const SearchBounds& bounds, ValidityMode mode,
                      const CheckOptions& options) {
  return run_search(Search{{}, f, bounds, mode, {}}, options);
}

Verdict bounded_consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                            const SearchBounds& bounds, ValidityMode mode,
                            const CheckOptions& options) {
  return run_search(Search{premises, conclusion, bounds, mode, {}}, options);
}

}  // namespace palkit
