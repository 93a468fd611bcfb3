#ifndef PALKIT_SCENARIOS_HPP
#define PALKIT_SCENARIOS_HPP

#include <string>
#include <vector>

#include "palkit/checker.hpp"

namespace palkit::scenarios {

/// Per-agent spot colors for a wise-men world; at least one spot is white.
struct SpotVector {
  std::vector<bool> spots;  // true = white

  explicit SpotVector(std::vector<bool> s);
  std::string label() const;  // "w" + one digit per agent, e.g. "w101"
};

/// The 3-world model with two partition relations and p true at w1, w2.
KripkeModel concrete_model();

/// Evaluates p & K{a} p & K{b} p & ~K{a} K{b} p at w1; must be true.
bool concrete_model_demo();

/// Canonical wise-men model over n agents (n in {3,4}): one world per spot
/// vector with at least one white spot, agent i's relation links worlds that
/// agree on every spot except possibly i's own. Satisfies S5.
KripkeModel wise_men_model(int n_agents);

struct WiseMenRun {
  bool theorem_holds = false;        // nested-announcement theorem, full model
  std::vector<int> world_counts;     // world count before/after each announcement
  std::vector<std::string> announcements;
  bool variant_holds = false;        // "knows own spot either way" announcements
};

/// Announces "x does not know own spot is white" for all agents but the last,
/// then checks that the last agent knows; exposes the surviving-world trace.
WiseMenRun run_wise_men(int n_agents);

/// Premise-based version for three agents: WM1 + the six WM2xy axioms entail
/// the two-announcement conclusion over every S5 model within bounds.
Verdict wise_men_axiomatic(const SearchBounds& bounds, const CheckOptions& options = {});

struct SuiteEntry {
  std::string name;
  std::string formula;  // "p, q ⊢ r" rendering for consequence rows
  ValidityMode mode = ValidityMode::Direct;
  FrameClass frame = FrameClass::K;
  std::string expected;  // "valid" or "countermodel"
  Verdict verdict;
  bool as_expected = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteEntry> entries;
  bool all_as_expected() const;
  double total_elapsed_seconds() const;
};

/// Every axiom and inference rule of the PAL-RCK proof system, checked
/// exhaustively with atomic instances at the given bound. Axioms run under
/// bounded_valid, rules under bounded_consequence; T/4/5 need S5 frames, the
/// rest hold over arbitrary frames.
SuiteReport axiom_suite(const SearchBounds& bounds, const CheckOptions& options = {});

/// The six uniform-substitution pitfalls: valid with an atomic p, refuted by a
/// two-world countermodel once p becomes a schematic ?phi; plus the concrete
/// Moore-sentence instance of the first principle.
SuiteReport substitution_suite(const SearchBounds& bounds, const CheckOptions& options = {});

/// wise_men_axiomatic plus the WM2ab' derivation and a no-WM1 negative control.
SuiteReport wise_men_axiomatic_suite(const SearchBounds& bounds,
                                     const CheckOptions& options = {});

}  // namespace palkit::scenarios

#endif
