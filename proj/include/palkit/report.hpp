#ifndef PALKIT_REPORT_HPP
#define PALKIT_REPORT_HPP

#include <json.hpp>

#include <string>

#include "palkit/checker.hpp"
#include "palkit/scenarios.hpp"

namespace palkit {

using ordered_json = nlohmann::ordered_json;

std::string verdict_status(const Verdict& v);

ordered_json model_to_json(const KripkeModel& m);
ordered_json worldset_to_json(const KripkeModel& m, const WorldSet& ws);
ordered_json denotation_to_json(const KripkeModel& m, const Denotation& d);
ordered_json bounds_to_json(const SearchBounds& b);
ordered_json verdict_to_json(const Verdict& v);
ordered_json suite_to_json(const scenarios::SuiteReport& report);

/// One "({w1,w2}, w1) := true" line per (domain, world) table entry.
std::string denotation_lines(const KripkeModel& m, const Denotation& d,
                             const std::string& indent);
std::string verdict_text(const Verdict& v);
std::string suite_text(const scenarios::SuiteReport& report);

}  // namespace palkit

#endif
