#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "palkit/kripke.hpp"

using namespace palkit;

namespace {

Relation from_pairs(int n, std::initializer_list<std::pair<int, int>> pairs) {
  Relation r(n);
  for (auto [u, v] : pairs) r.set(u, v);
  return r;
}

Relation from_bits(int n, int bits) {
  Relation r(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if ((bits >> (u * n + v)) & 1) r.set(u, v);
  return r;
}

std::set<std::pair<int, int>> pair_set(const Relation& r) {
  std::set<std::pair<int, int>> out;
  for (int u = 0; u < r.size(); ++u)
    for (int v = 0; v < r.size(); ++v)
      if (r.at(u, v)) out.insert({u, v});
  return out;
}

const char* kConcreteDoc = R"({
  "worlds": ["w1","w2","w3"],
  "props": ["p"],
  "agents": {
    "a": {"partition": [["w1","w2"],["w3"]]},
    "b": {"pairs": [["w1","w1"],["w2","w2"],["w2","w3"],["w3","w2"],["w3","w3"]]}
  },
  "valuation": {"p": ["w1","w2"]}
})";

}  // namespace

TEST_CASE("frame property checks") {
  Relation identity(3);
  for (int i = 0; i < 3; ++i) identity.set(i, i);
  CHECK(is_reflexive(identity));
  CHECK(is_transitive(identity));
  CHECK(is_euclidean(identity));

  Relation single = from_pairs(2, {{0, 1}});
  CHECK_FALSE(is_reflexive(single));

  Relation partition = from_pairs(3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}});
  CHECK(is_reflexive(partition));
  CHECK(is_transitive(partition));
  CHECK(is_euclidean(partition));
}

TEST_CASE("equivalence characterization by brute force on small relations") {
  for (int n = 1; n <= 3; ++n) {
    int total = 1 << (n * n);
    for (int bits = 0; bits < total; ++bits) {
      Relation r = from_bits(n, bits);
      bool s5 = is_reflexive(r) && is_transitive(r) && is_euclidean(r);
      bool equivalence = is_reflexive(r) && is_symmetric(r) && is_transitive(r);
      CHECK(s5 == equivalence);
      if (is_reflexive(r) && is_euclidean(r)) CHECK(is_symmetric(r));
    }
  }
}

TEST_CASE("transitive closure forced examples") {
  Relation chain = from_pairs(3, {{0, 1}, {1, 2}});
  CHECK(pair_set(transitive_closure(chain)) ==
        std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}});
  Relation empty(3);
  CHECK(transitive_closure(empty) == empty);
}

TEST_CASE("transitive closure matches the least-superset oracle on all 512 relations") {
  for (int bits = 0; bits < 512; ++bits) {
    Relation r = from_bits(3, bits);
    CHECK(pair_set(transitive_closure(r)) == oracle::tc_oracle3(pair_set(r)));
  }
}

TEST_CASE("transitive closure properties on random relations") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<uint64_t> bits(0, mask_of_width(5));
  for (int i = 0; i < 1000; ++i) {
    Relation r(5);
    Relation s(5);
    for (int u = 0; u < 5; ++u) {
      uint64_t rb = bits(rng);
      r.set_row(u, rb);
      s.set_row(u, rb | bits(rng));  // r is a subset of s
    }
    Relation tr = transitive_closure(r);
    CHECK(is_transitive(tr));
    for (int u = 0; u < 5; ++u) CHECK((r.row(u) & ~tr.row(u)) == 0);   // contains r
    CHECK(transitive_closure(tr) == tr);                               // idempotent
    Relation ts = transitive_closure(s);
    for (int u = 0; u < 5; ++u) CHECK((tr.row(u) & ~ts.row(u)) == 0);  // monotone
  }
}

TEST_CASE("union and intersection over the concrete model") {
  KripkeModel m = load_model(kConcreteDoc);
  CHECK(pair_set(union_rel(m, AgentGroup({"a"}))) == pair_set(m.relation_of("a")));
  // labels w1,w2,w3 are indices 0,1,2
  CHECK(pair_set(union_rel(m, AgentGroup({"a", "b"}))) ==
        std::set<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}});
  CHECK(pair_set(intersect_rel(m, AgentGroup({"a", "b"}))) ==
        std::set<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(pair_set(union_rel(m, AgentGroup({"a", "b"}))) ==
        pair_set(union_rel(m, AgentGroup({"b", "a"}))));
  CHECK(pair_set(intersect_rel(m, AgentGroup({"a", "b"}))) ==
        pair_set(intersect_rel(m, AgentGroup({"b", "a"}))));
  CHECK_THROWS_AS(union_rel(m, AgentGroup({"z"})), UnknownAgentError);

  Relation ra = from_pairs(2, {{0, 1}});
  Relation rb = from_pairs(2, {{1, 0}});
  KripkeModel two({"u", "v"}, {"a", "b"}, {ra, rb}, {}, {});
  CHECK(pair_set(union_rel(two, AgentGroup({"a", "b"}))) ==
        std::set<std::pair<int, int>>{{0, 1}, {1, 0}});
  CHECK(pair_set(intersect_rel(two, AgentGroup({"a", "b"}))).empty());
}

TEST_CASE("group operations ignore member order") {
  std::mt19937 rng(23);
  const std::vector<std::vector<std::string>> orders = {
      {"a", "b", "c"}, {"c", "a", "b"}, {"b", "c", "a"}, {"c", "b", "a"}};
  for (int i = 0; i < 100; ++i) {
    KripkeModel m = oracle::random_model(rng, 4, {"a", "b", "c"}, {"p"});
    Relation u0 = union_rel(m, AgentGroup(orders[0]));
    Relation i0 = intersect_rel(m, AgentGroup(orders[0]));
    for (size_t k = 1; k < orders.size(); ++k) {
      CHECK(union_rel(m, AgentGroup(orders[k])) == u0);
      CHECK(intersect_rel(m, AgentGroup(orders[k])) == i0);
    }
  }
}

TEST_CASE("satisfies_frame") {
  KripkeModel m = load_model(kConcreteDoc);
  CHECK(satisfies_frame(m, FrameClass::K));
  CHECK(satisfies_frame(m, FrameClass::S5));
  KripkeModel loose({"u"}, {"a"}, {Relation(1)}, {}, {});
  CHECK(satisfies_frame(loose, FrameClass::K));
  CHECK_FALSE(satisfies_frame(loose, FrameClass::S5));  // empty relation, 1 world
}

TEST_CASE("restrict reindexes and preserves labels") {
  KripkeModel m = load_model(kConcreteDoc);

  KripkeModel full = restrict_model(m, m.full_set());
  CHECK(full.world_labels() == m.world_labels());
  for (int a = 0; a < m.agent_count(); ++a) CHECK(full.relation(a) == m.relation(a));
  CHECK(full.valuation_bits("p") == m.valuation_bits("p"));

  WorldSet d = WorldSet::none(3);
  d.set(*m.world_index("w1"));
  KripkeModel one = restrict_model(m, d);
  CHECK(one.world_count() == 1);
  CHECK(one.world_label(0) == "w1");
  CHECK(one.relation_of("a").at(0, 0));
  CHECK(one.relation_of("b").at(0, 0));
  CHECK(one.valuation_bits("p") == 1);

  CHECK_THROWS_AS(restrict_model(m, WorldSet::none(3)), EmptyDomainError);
}

TEST_CASE("restrict composes") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    KripkeModel m = oracle::random_model(rng, 5);
    int n = m.world_count();
    std::uniform_int_distribution<uint64_t> bits(0, mask_of_width(n));
    uint64_t d1 = bits(rng) | 1;  // keep world 0 so nothing is empty
    uint64_t d2 = bits(rng) | 1;
    KripkeModel m1 = restrict_model(m, WorldSet{d1, n});
    // reindex d2 into m1's coordinates
    uint64_t d2_in_m1 = 0;
    int idx = 0;
    for (int w = 0; w < n; ++w) {
      if ((d1 >> w) & 1) {
        if ((d2 >> w) & 1) d2_in_m1 |= 1ull << idx;
        ++idx;
      }
    }
    KripkeModel lhs = restrict_model(m1, WorldSet{d2_in_m1, m1.world_count()});
    KripkeModel rhs = restrict_model(m, WorldSet{d1 & d2, n});
    CHECK(lhs.world_labels() == rhs.world_labels());
    for (int a = 0; a < lhs.agent_count(); ++a) CHECK(lhs.relation(a) == rhs.relation(a));
    for (const auto& p : lhs.prop_names())
      CHECK(lhs.valuation_bits(p) == rhs.valuation_bits(p));
  }
}

TEST_CASE("model io round trip") {
  KripkeModel m = load_model(kConcreteDoc);
  CHECK(m.world_count() == 3);
  CHECK(m.agent_count() == 2);
  CHECK(m.valuation_bits("p") == 0b011);
  CHECK(m.relation_of("a").at(0, 1));
  CHECK_FALSE(m.relation_of("a").at(0, 2));
  CHECK(m.relation_of("b").at(1, 2));

  std::string saved = save_model(m);
  KripkeModel reloaded = load_model(saved);
  CHECK(reloaded.world_labels() == m.world_labels());
  for (int a = 0; a < m.agent_count(); ++a) CHECK(reloaded.relation(a) == m.relation(a));
  CHECK(save_model(reloaded) == saved);  // canonical form is a fixed point

  KripkeModel minimal = load_model(R"({"worlds":["u"],"agents":{"a":{"pairs":[]}}})");
  CHECK(minimal.world_count() == 1);
  CHECK(minimal.prop_names().empty());
}

TEST_CASE("saving is canonical over a document corpus") {
  const std::vector<const char*> corpus = {
      kConcreteDoc,
      R"({"worlds":["u"],"agents":{"a":{"pairs":[["u","u"]]}}})",
      R"({"worlds":["x","y"],"props":["p","q"],
          "agents":{"a":{"pairs":[["x","y"]]},"b":{"partition":[["x","y"]]}},
          "valuation":{"q":["y"]}})",
      R"({"worlds":["w1","w2","w3","w4"],"props":["p"],
          "agents":{"a":{"partition":[["w1","w2"],["w3"],["w4"]]}},
          "valuation":{}})",
  };
  for (const char* doc : corpus) {
    std::string canonical = save_model(load_model(doc));
    CHECK(save_model(load_model(canonical)) == canonical);
    KripkeModel a = load_model(doc);
    KripkeModel b = load_model(canonical);
    CHECK(a.world_labels() == b.world_labels());
    CHECK(a.prop_names() == b.prop_names());
    for (int i = 0; i < a.agent_count(); ++i) CHECK(a.relation(i) == b.relation(i));
    for (const auto& p : a.prop_names()) CHECK(a.valuation_bits(p) == b.valuation_bits(p));
  }
}

TEST_CASE("model io error paths") {
  auto path_of = [](const char* doc) {
    try {
      load_model(doc);
      return std::string("no error");
    } catch (const ModelFormatError& e) {
      return e.field_path;
    }
  };
  CHECK(path_of(R"({"agents":{}})") == "worlds");
  CHECK(path_of(R"({"worlds":[],"agents":{}})") == "worlds");
  CHECK(path_of(R"({"worlds":["u","u"],"agents":{}})") == "worlds[1]");
  CHECK(path_of(R"({"worlds":["u"],"agents":{"a":{}}})") == "agents.a");
  CHECK(path_of(R"({"worlds":["u"],"agents":{"a":{"pairs":[],"partition":[]}}})") ==
        "agents.a");
  CHECK(path_of(R"({"worlds":["u"],"agents":{"a":{"pairs":[["u","x"]]}}})") ==
        "agents.a.pairs[0]");
  CHECK(path_of(R"({"worlds":["u","v"],"agents":{"a":{"partition":[["u"],["u","v"]]}}})") ==
        "agents.a.partition[1]");
  CHECK(path_of(R"({"worlds":["u"],"agents":{"a":{"pairs":[]}},"valuation":{"p":["u"]}})") ==
        "valuation.p");
  CHECK(path_of("not json") == "$");
}

TEST_CASE("loader rejects mutated documents without crashing") {
  std::string base = kConcreteDoc;
  std::mt19937 rng(1234);
  std::uniform_int_distribution<size_t> pos(0, base.size() - 1);
  std::uniform_int_distribution<int> op(0, 2);
  const std::string chars = "{}[]\",:wxyz123";
  std::uniform_int_distribution<size_t> ch(0, chars.size() - 1);
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string doc = base;
    switch (op(rng)) {
      case 0: doc.erase(pos(rng), 1); break;
      case 1: doc[pos(rng)] = chars[ch(rng)]; break;
      default: doc.insert(pos(rng), 1, chars[ch(rng)]); break;
    }
    try {
      KripkeModel m = load_model(doc);
      ++accepted;  // a harmless mutation (say, inside a label)
      CHECK(m.world_count() >= 1);
    } catch (const ModelFormatError& e) {
      CHECK(!e.field_path.empty());
    }
  }
  CHECK(accepted < 2000);  // most mutations must be rejected
}

TEST_CASE("dot export is deterministic") {
  KripkeModel m = load_model(kConcreteDoc);
  std::string dot = to_dot(m);
  CHECK(dot == to_dot(load_model(kConcreteDoc)));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"w1\" -> \"w2\" [label=\"a\"]") != std::string::npos);
  CHECK(dot.find("cluster_1") != std::string::npos);
  KripkeModel one = load_model(R"({"worlds":["u"],"agents":{"a":{"pairs":[]}}})");
  CHECK(to_dot(one).find("\"u\"") != std::string::npos);
}
