#include "palkit/kripke.hpp"

#include <algorithm>
#include <set>

namespace palkit {

bool is_reflexive(const Relation& r) {
  for (int u = 0; u < r.size(); ++u)
    if (!r.at(u, u)) return false;
  return true;
}

bool is_transitive(const Relation& r) {
  // r(x,y) and r(y,z) imply r(x,z): every successor's row stays inside x's row.
  for (int x = 0; x < r.size(); ++x) {
    uint64_t succ = r.row(x);
    while (succ) {
      int y = std::countr_zero(succ);
      succ &= succ - 1;
      if (r.row(y) & ~r.row(x)) return false;
    }
  }
  return true;
}

bool is_euclidean(const Relation& r) {
  // r(x,y) and r(x,z) imply r(y,z): each successor must see all successors.
  for (int x = 0; x < r.size(); ++x) {
    uint64_t succ = r.row(x);
    uint64_t all = succ;
    while (succ) {
      int y = std::countr_zero(succ);
      succ &= succ - 1;
      if (all & ~r.row(y)) return false;
    }
  }
  return true;
}

bool is_symmetric(const Relation& r) {
  for (int u = 0; u < r.size(); ++u)
    for (int v = u + 1; v < r.size(); ++v)
      if (r.at(u, v) != r.at(v, u)) return false;
  return true;
}

Relation transitive_closure(Relation r) {
  int n = r.size();
  for (int k = 0; k < n; ++k) {
    uint64_t via = r.row(k);
    for (int u = 0; u < n; ++u)
      if (r.at(u, k)) r.set_row(u, r.row(u) | via);
  }
  return r;
}

std::string to_string(FrameClass fc) { return fc == FrameClass::K ? "k" : "s5"; }

KripkeModel::KripkeModel(std::vector<std::string> world_labels,
                         std::vector<std::string> agent_names,
                         std::vector<Relation> agent_relations,
                         std::vector<std::string> prop_names,
                         std::vector<uint64_t> valuation_masks)
    : world_labels_(std::move(world_labels)),
      agent_names_(std::move(agent_names)),
      relations_(std::move(agent_relations)),
      prop_names_(std::move(prop_names)),
      valuation_(std::move(valuation_masks)) {
  int n = world_count();
  if (n < 1) throw std::invalid_argument("model needs at least one world");
  if (n > kMaxWorlds) throw std::invalid_argument("model exceeds the 64-world limit");
  std::set<std::string_view> seen;
  for (const auto& l : world_labels_) {
    if (l.empty()) throw std::invalid_argument("empty world label");
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate world label: '" + l + "'");
  }
  seen.clear();
  for (const auto& a : agent_names_)
    if (!seen.insert(a).second) throw std::invalid_argument("duplicate agent: '" + a + "'");
  if (relations_.size() != agent_names_.size())
    throw std::invalid_argument("agent/relation count mismatch");
  for (const auto& r : relations_)
    if (r.size() != n) throw std::invalid_argument("relation dimension mismatch");
  seen.clear();
  for (const auto& p : prop_names_)
    if (!seen.insert(p).second) throw std::invalid_argument("duplicate prop: '" + p + "'");
  if (valuation_.size() != prop_names_.size())
    throw std::invalid_argument("prop/valuation count mismatch");
  for (auto& v : valuation_) v &= mask_of_width(n);
}

std::optional<int> KripkeModel::world_index(std::string_view label) const {
  for (size_t i = 0; i < world_labels_.size(); ++i)
    if (world_labels_[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> KripkeModel::agent_index(std::string_view name) const {
  for (size_t i = 0; i < agent_names_.size(); ++i)
    if (agent_names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

const Relation& KripkeModel::relation_of(const AgentId& name) const {
  auto idx = agent_index(name);
  if (!idx) throw UnknownAgentError(name);
  return relation(*idx);
}

uint64_t KripkeModel::valuation_bits(std::string_view prop) const {
  for (size_t i = 0; i < prop_names_.size(); ++i)
    if (prop_names_[i] == prop) return valuation_[i];
  return 0;
}

bool satisfies_frame(const KripkeModel& m, FrameClass fc) {
  if (fc == FrameClass::K) return true;
  for (int a = 0; a < m.agent_count(); ++a) {
    const Relation& r = m.relation(a);
    if (!is_reflexive(r) || !is_transitive(r) || !is_euclidean(r)) return false;
  }
  return true;
}

Relation union_rel(const KripkeModel& m, const AgentGroup& g) {
  Relation out(m.world_count());
  for (const auto& name : g.members()) {
    const Relation& r = m.relation_of(name);
    for (int u = 0; u < out.size(); ++u) out.set_row(u, out.row(u) | r.row(u));
  }
  return out;
}

Relation intersect_rel(const KripkeModel& m, const AgentGroup& g) {
  Relation out(m.world_count());
  bool first = true;
  for (const auto& name : g.members()) {
    const Relation& r = m.relation_of(name);
    for (int u = 0; u < out.size(); ++u)
      out.set_row(u, first ? r.row(u) : (out.row(u) & r.row(u)));
    first = false;
  }
  return out;
}

KripkeModel restrict_model(const KripkeModel& m, const WorldSet& domain) {
  if (domain.width != m.world_count())
    throw std::invalid_argument("domain width does not match model");
  if (domain.empty()) throw EmptyDomainError();
  int n = m.world_count();
  std::vector<int> to_new(static_cast<size_t>(n), -1);
  std::vector<std::string> labels;
  for (int w = 0; w < n; ++w) {
    if (domain.test(w)) {
      to_new[static_cast<size_t>(w)] = static_cast<int>(labels.size());
      labels.push_back(m.world_label(w));
    }
  }
  int nn = static_cast<int>(labels.size());
  auto compress = [&](uint64_t bits) {
    uint64_t out = 0;
    uint64_t live = bits & domain.bits;
    while (live) {
      int w = std::countr_zero(live);
      live &= live - 1;
      out |= 1ull << to_new[static_cast<size_t>(w)];
    }
    return out;
  };
  std::vector<Relation> rels;
  rels.reserve(static_cast<size_t>(m.agent_count()));
  for (int a = 0; a < m.agent_count(); ++a) {
    Relation r(nn);
    for (int u = 0; u < n; ++u)
      if (domain.test(u)) r.set_row(to_new[static_cast<size_t>(u)], compress(m.relation(a).row(u)));
    rels.push_back(std::move(r));
  }
  std::vector<uint64_t> vals;
  vals.reserve(m.prop_names().size());
  for (const auto& p : m.prop_names()) vals.push_back(compress(m.valuation_bits(p)));
  return KripkeModel(std::move(labels), m.agent_names(), std::move(rels), m.prop_names(),
                     std::move(vals));
}

}  // namespace palkit
