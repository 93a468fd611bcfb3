#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "palkit/checker.hpp"

using namespace palkit;

namespace {

SearchBounds bounds_for(FrameClass frame, int max_worlds, std::vector<std::string> agents,
                        std::vector<std::string> props) {
  SearchBounds b;
  b.frame = frame;
  b.max_worlds = max_worlds;
  b.agents = std::move(agents);
  b.props = std::move(props);
  return b;
}

}  // namespace

TEST_CASE("set partition counts follow the Bell numbers") {
  CHECK(equivalence_relations(1).size() == 1);
  CHECK(equivalence_relations(2).size() == 2);
  CHECK(equivalence_relations(3).size() == 5);
  CHECK(equivalence_relations(4).size() == 15);
  for (const auto& r : equivalence_relations(4)) {
    CHECK(is_reflexive(r));
    CHECK(is_transitive(r));
    CHECK(is_euclidean(r));
  }
}

TEST_CASE("model enumeration counts") {
  CHECK(ModelEnumeration(bounds_for(FrameClass::S5, 3, {"a"}, {}), 3).count() == 5);
  CHECK(ModelEnumeration(bounds_for(FrameClass::K, 2, {"a"}, {}), 2).count() == 16);
  CHECK(ModelEnumeration(bounds_for(FrameClass::S5, 3, {"a", "b", "c"}, {"p", "q", "r"}), 3)
            .count() == 64000);
  CHECK_THROWS_AS(ModelEnumeration(bounds_for(FrameClass::K, 4, {"a", "b"}, {}), 4),
                  CapExceededError);
}

TEST_CASE("model enumeration is deterministic and hits every S5 frame") {
  SearchBounds b = bounds_for(FrameClass::S5, 2, {"a"}, {"p"});
  ModelEnumeration e(b, 2);
  REQUIRE(e.count() == 8);  // 2 partitions x 4 valuations
  for (uint64_t i = 0; i < e.count(); ++i) {
    KripkeModel m = e.at(i);
    CHECK(satisfies_frame(m, FrameClass::S5));
    CHECK(m.world_labels() == std::vector<std::string>{"w1", "w2"});
    // valuation is the fastest dimension
    CHECK(m.valuation_bits("p") == (i % 4));
  }
  CHECK(e.at(0).relation(0).at(0, 1));        // first partition: everything linked
  CHECK_FALSE(e.at(4).relation(0).at(0, 1));  // second: identity
}

TEST_CASE("earlier agents and props vary slower in the enumeration") {
  SearchBounds b = bounds_for(FrameClass::K, 1, {"a", "b"}, {"p"});
  ModelEnumeration e(b, 1);
  REQUIRE(e.count() == 8);  // 2 relations per agent x 2 valuations
  for (uint64_t i = 0; i < 8; ++i) {
    KripkeModel m = e.at(i);
    CHECK(m.relation_of("a").at(0, 0) == ((i >> 2) & 1));
    CHECK(m.relation_of("b").at(0, 0) == ((i >> 1) & 1));
    CHECK(m.valuation_bits("p") == (i & 1));
  }
}

TEST_CASE("denotation enumeration") {
  CHECK(DenotationEnumeration(1).count() == 4);
  CHECK(DenotationEnumeration(2).count() == 256);
  CHECK(DenotationEnumeration(3).count() == uint64_t{1} << 24);
  CHECK_THROWS_AS(DenotationEnumeration(4), CapExceededError);

  DenotationEnumeration den(2);
  for (uint64_t i : {uint64_t{0}, uint64_t{1}, uint64_t{37}, uint64_t{255}}) {
    CHECK(DenotationEnumeration::index_of(den.at(i)) == i);
  }

  // The SSE meaning of any formula shows up in the stream.
  Relation id(2);
  id.set(0, 0);
  id.set(1, 1);
  KripkeModel m({"w1", "w2"}, {"a"}, {id}, {"p"}, {0b01});
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    Formula f = oracle::random_formula(rng, 1 + i % 4, {{"p"}, {"a"}, false, {}});
    Denotation table(2);
    for (uint64_t d = 0; d < 4; ++d)
      for (int w = 0; w < 2; ++w)
        table.set(d, w, eval_sse(m, f, WorldSet{d, 2}, w));
    uint64_t idx = DenotationEnumeration::index_of(table);
    REQUIRE(idx < den.count());
    CHECK(den.at(idx) == table);
  }
}

TEST_CASE("bounded_valid on the distribution axiom") {
  Formula axiom_k = parse_formula("K{a}(p -> q) -> (K{a} p -> K{a} q)");
  Verdict v = bounded_valid(axiom_k, bounds_for(FrameClass::K, 3, {"a"}, {"p", "q"}),
                            ValidityMode::Direct);
  CHECK(v.status == Verdict::Status::ValidUpTo);
  CHECK(v.worlds_checked == 3);
  // 2^(n^2) relations x 2^(2n) valuations for n = 1, 2, 3
  CHECK(v.models_checked == 8 + 256 + 32768);
}

TEST_CASE("axiom T needs reflexivity") {
  Formula t = parse_formula("K{a} p -> p");
  Verdict k = bounded_valid(t, bounds_for(FrameClass::K, 2, {"a"}, {"p"}), ValidityMode::Direct);
  REQUIRE(k.status == Verdict::Status::Countermodel);
  CHECK(k.countermodel->model.world_count() == 1);  // empty relation, p false
  CHECK_FALSE(eval_direct(k.countermodel->model, t, k.countermodel->world));

  Verdict s5 = bounded_valid(t, bounds_for(FrameClass::S5, 2, {"a"}, {"p"}),
                             ValidityMode::Direct);
  CHECK(s5.status == Verdict::Status::ValidUpTo);
}

TEST_CASE("axiom 5 under both frame classes") {
  Formula five = parse_formula("~K{a} p -> K{a} ~K{a} p");
  CHECK(bounded_valid(five, bounds_for(FrameClass::K, 2, {"a"}, {"p"}), ValidityMode::Direct)
            .status == Verdict::Status::Countermodel);
  CHECK(bounded_valid(five, bounds_for(FrameClass::S5, 3, {"a"}, {"p"}), ValidityMode::Direct)
            .status == Verdict::Status::ValidUpTo);
}

TEST_CASE("schematic moore principle has a two-world countermodel") {
  Formula f = parse_formula("?phi -> ~[!?phi](~?phi)");
  Verdict v =
      bounded_valid(f, bounds_for(FrameClass::S5, 2, {"a"}, {}), ValidityMode::PValid);
  REQUIRE(v.status == Verdict::Status::Countermodel);
  const CountermodelWitness& w = *v.countermodel;
  CHECK(w.model.world_count() == 2);
  REQUIRE(w.env.count("phi") == 1);
  REQUIRE(w.domain.has_value());
  CHECK(w.domain->test(w.world));
  CHECK_FALSE(eval_sse(w.model, f, *w.domain, w.world, &w.env));
}

TEST_CASE("announcement necessitation: pvalid sound, tvalid refuted") {
  std::vector<Formula> premises = {parse_formula("?phi")};
  Formula conclusion = parse_formula("[!?psi]?phi");
  SearchBounds b = bounds_for(FrameClass::S5, 2, {"a"}, {});

  Verdict p = bounded_consequence(premises, conclusion, b, ValidityMode::PValid);
  CHECK(p.status == Verdict::Status::ValidUpTo);
  CHECK(p.worlds_checked == 2);

  Verdict t = bounded_consequence(premises, conclusion, b, ValidityMode::TValid);
  REQUIRE(t.status == Verdict::Status::Countermodel);
  const CountermodelWitness& w = *t.countermodel;
  CHECK(w.model.world_count() == 2);
  SchematicEnv env = w.env;
  CHECK(vld_t(w.model, premises[0], &env));
  CHECK_FALSE(vld_t(w.model, conclusion, &env));
  CHECK_FALSE(eval_sse(w.model, conclusion, *w.domain, w.world, &env));
}

TEST_CASE("consequence with no premises is plain validity") {
  Verdict v = bounded_consequence({}, parse_formula("p"),
                                  bounds_for(FrameClass::S5, 2, {"a"}, {"p"}),
                                  ValidityMode::Direct);
  REQUIRE(v.status == Verdict::Status::Countermodel);
  CHECK_FALSE(valid_in_model(v.countermodel->model, parse_formula("p")));
}

TEST_CASE("direct and pvalid verdicts agree without schematic names") {
  std::vector<std::string> formulas = {
      "K{a} p -> p",
      "K{a} p -> K{a} K{a} p",
      "[!p]q <-> (p -> q)",
      "p -> K{a} p",
      "Cr{a}(q|p) -> E{a}(q -> (p & Cr{a}(q|p)))",
      "[!p](~q) <-> (p -> ~[!p]q)",
      "p & ~p -> q",
      "C{a} p -> p",
  };
  for (FrameClass frame : {FrameClass::K, FrameClass::S5}) {
    for (const auto& text : formulas) {
      Formula f = parse_formula(text);
      SearchBounds b = bounds_for(frame, 2, {"a"}, {"p", "q"});
      Verdict direct = bounded_valid(f, b, ValidityMode::Direct);
      Verdict pvalid = bounded_valid(f, b, ValidityMode::PValid);
      CHECK(direct.status == pvalid.status);
    }
  }
}

TEST_CASE("reduction axioms hold under pvalid on enumerated S5 models") {
  const std::vector<std::string> axioms = {
      "[!p]q <-> (p -> q)",
      "[!p](q & r) <-> ([!p]q & [!p]r)",
      "[!p](~q) <-> (p -> ~[!p]q)",
      "[!p]K{a} q <-> (p -> K{a}(p -> [!p]q))",
      "[!p]Cr{a}(q|r) <-> (p -> Cr{a}((p & [!p]q)|[!p]r))",
  };
  for (const auto& text : axioms) {
    Formula f = parse_formula(text);
    SearchBounds b = bounds_for(FrameClass::S5, 3, {"a"}, f.atoms());
    Verdict v = bounded_valid(f, b, ValidityMode::PValid);
    INFO(text);
    CHECK(v.status == Verdict::Status::ValidUpTo);
    CHECK(v.worlds_checked == 3);
  }
}

TEST_CASE("parallel scan reports the same verdict as the serial reference") {
  CheckOptions serial{1};
  CheckOptions parallel{0};

  auto same_witness = [](const Verdict& a, const Verdict& b) {
    REQUIRE(a.status == b.status);
    CHECK(a.models_checked == b.models_checked);
    CHECK(a.worlds_checked == b.worlds_checked);
    if (a.countermodel) {
      CHECK(a.countermodel->world == b.countermodel->world);
      CHECK(save_model(a.countermodel->model) == save_model(b.countermodel->model));
      CHECK(a.countermodel->domain.has_value() == b.countermodel->domain.has_value());
      if (a.countermodel->domain) CHECK(a.countermodel->domain->bits == b.countermodel->domain->bits);
      CHECK(a.countermodel->env == b.countermodel->env);
    }
  };

  Formula t = parse_formula("K{a} p -> p");
  same_witness(bounded_valid(t, bounds_for(FrameClass::K, 3, {"a"}, {"p"}),
                             ValidityMode::Direct, serial),
               bounded_valid(t, bounds_for(FrameClass::K, 3, {"a"}, {"p"}),
                             ValidityMode::Direct, parallel));

  Formula moore = parse_formula("?phi -> ~[!?phi](~?phi)");
  same_witness(bounded_valid(moore, bounds_for(FrameClass::S5, 2, {"a"}, {}),
                             ValidityMode::PValid, serial),
               bounded_valid(moore, bounds_for(FrameClass::S5, 2, {"a"}, {}),
                             ValidityMode::PValid, parallel));

  Formula valid4 = parse_formula("K{a} p -> K{a} K{a} p");
  same_witness(bounded_valid(valid4, bounds_for(FrameClass::S5, 3, {"a"}, {"p"}),
                             ValidityMode::Direct, serial),
               bounded_valid(valid4, bounds_for(FrameClass::S5, 3, {"a"}, {"p"}),
                             ValidityMode::Direct, parallel));
}

TEST_CASE("pvalid-valid implies tvalid-valid at equal bounds") {
  const std::vector<std::string> formulas = {
      "?phi -> ?phi",
      "?phi -> ~[!?phi](~?phi)",
      "[!?phi]?psi -> [!?phi]?psi",
      "?phi | ~?phi",
  };
  SearchBounds b = bounds_for(FrameClass::S5, 2, {"a"}, {});
  for (const auto& text : formulas) {
    Formula f = parse_formula(text);
    Verdict p = bounded_valid(f, b, ValidityMode::PValid);
    Verdict t = bounded_valid(f, b, ValidityMode::TValid);
    INFO(text);
    if (p.status == Verdict::Status::ValidUpTo)
      CHECK(t.status == Verdict::Status::ValidUpTo);
  }
}

TEST_CASE("caps produce inconclusive verdicts") {
  SearchBounds b = bounds_for(FrameClass::K, 3, {"a"}, {"p"});
  b.model_cap = 100;
  Verdict v = bounded_valid(parse_formula("p -> p"), b, ValidityMode::Direct);
  CHECK(v.status == Verdict::Status::Inconclusive);  // class-K size 3 projects past the cap
  CHECK(v.worlds_checked == 2);

  SearchBounds tiny = bounds_for(FrameClass::S5, 2, {"a"}, {"p"});
  tiny.time_cap_seconds = 0.0;
  Verdict timed = bounded_valid(parse_formula("K{a} p -> p"), tiny, ValidityMode::Direct,
                                CheckOptions{1});
  CHECK(timed.status == Verdict::Status::Inconclusive);

  SearchBounds schem = bounds_for(FrameClass::S5, 3, {"a"}, {});
  Verdict deno = bounded_valid(parse_formula("?phi -> ?phi"), schem, ValidityMode::PValid);
  CHECK(deno.status == Verdict::Status::Inconclusive);  // n=3 denotations over the cap
  CHECK(deno.worlds_checked == 2);
}

TEST_CASE("search precondition violations") {
  CHECK_THROWS_AS(bounded_valid(parse_formula("?phi"),
                                bounds_for(FrameClass::S5, 2, {"a"}, {}), ValidityMode::Direct),
                  std::invalid_argument);
  CHECK_THROWS_AS(bounded_valid(parse_formula("K{z} p"),
                                bounds_for(FrameClass::S5, 2, {"a"}, {"p"}),
                                ValidityMode::Direct),
                  std::invalid_argument);
  CHECK_THROWS_AS(bounded_valid(parse_formula("p"),
                                bounds_for(FrameClass::S5, 2, {"a"}, {}), ValidityMode::Direct),
                  std::invalid_argument);
  SearchBounds no_agents = bounds_for(FrameClass::S5, 2, {}, {"p"});
  CHECK_THROWS_AS(bounded_valid(parse_formula("p"), no_agents, ValidityMode::Direct),
                  std::invalid_argument);
}
