#include "palkit/report.hpp"

#include <iomanip>
#include <sstream>

namespace palkit {

std::string verdict_status(const Verdict& v) {
  switch (v.status) {
    case Verdict::Status::ValidUpTo: return "valid_up_to";
    case Verdict::Status::Countermodel: return "countermodel";
    case Verdict::Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

ordered_json model_to_json(const KripkeModel& m) {
  return ordered_json::parse(save_model(m));
}

ordered_json worldset_to_json(const KripkeModel& m, const WorldSet& ws) {
  ordered_json out = ordered_json::array();
  for (int w = 0; w < m.world_count(); ++w)
    if (ws.test(w)) out.push_back(m.world_label(w));
  return out;
}

ordered_json denotation_to_json(const KripkeModel& m, const Denotation& d) {
  ordered_json out = ordered_json::array();
  uint64_t domains = 1ull << m.world_count();
  for (uint64_t dom = 0; dom < domains; ++dom)
    for (int w = 0; w < m.world_count(); ++w)
      out.push_back({{"domain", worldset_to_json(m, WorldSet{dom, m.world_count()})},
                     {"world", m.world_label(w)},
                     {"value", d.at(dom, w)}});
  return out;
}

ordered_json bounds_to_json(const SearchBounds& b) {
  ordered_json out;
  out["max_worlds"] = b.max_worlds;
  out["frame"] = to_string(b.frame);
  out["agents"] = b.agents;
  out["props"] = b.props;
  out["model_cap"] = b.model_cap;
  return out;
}

ordered_json verdict_to_json(const Verdict& v) {
  ordered_json out;
  out["status"] = verdict_status(v);
  out["worlds_checked"] = v.worlds_checked;
  out["models_checked"] = v.models_checked;
  out["elapsed_seconds"] = v.elapsed_seconds;
  if (v.status == Verdict::Status::Inconclusive) out["reason"] = v.inconclusive_reason;
  if (v.countermodel) {
    const CountermodelWitness& w = *v.countermodel;
    ordered_json cm;
    cm["model"] = model_to_json(w.model);
    cm["world"] = w.model.world_label(w.world);
    if (w.domain) cm["domain"] = worldset_to_json(w.model, *w.domain);
    if (!w.env.empty()) {
      ordered_json env;
      for (const auto& [name, den] : w.env)
        env["?" + name] = denotation_to_json(w.model, den);
      cm["env"] = std::move(env);
    }
    out["countermodel"] = std::move(cm);
  }
  return out;
}

ordered_json suite_to_json(const scenarios::SuiteReport& report) {
  ordered_json out;
  out["suite"] = report.suite;
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    ordered_json row = verdict_to_json(e.verdict);
    ordered_json full;
    full["name"] = e.name;
    full["formula"] = e.formula;
    full["mode"] = to_string(e.mode);
    full["frame"] = to_string(e.frame);
    full["expected"] = e.expected;
    full["as_expected"] = e.as_expected;
    full.update(row);
    entries.push_back(std::move(full));
  }
  out["entries"] = std::move(entries);
  out["all_as_expected"] = report.all_as_expected();
  return out;
}

namespace {

std::string set_text(const KripkeModel& m, uint64_t bits) {
  std::string out = "{";
  bool first = true;
  for (int w = 0; w < m.world_count(); ++w) {
    if ((bits >> w) & 1) {
      if (!first) out += ",";
      out += m.world_label(w);
      first = false;
    }
  }
  return out + "}";
}

}  // namespace

std::string denotation_lines(const KripkeModel& m, const Denotation& d,
                             const std::string& indent) {
  std::ostringstream out;
  uint64_t domains = 1ull << m.world_count();
  for (uint64_t dom = 0; dom < domains; ++dom)
    for (int w = 0; w < m.world_count(); ++w)
      out << indent << "(" << set_text(m, dom) << ", " << m.world_label(w)
          << ") := " << (d.at(dom, w) ? "true" : "false") << "\n";
  return out.str();
}

std::string verdict_text(const Verdict& v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  switch (v.status) {
    case Verdict::Status::ValidUpTo:
      out << "valid up to " << v.worlds_checked << " worlds (" << v.models_checked
          << " models, " << v.elapsed_seconds << " s)\n";
      break;
    case Verdict::Status::Inconclusive:
      out << "inconclusive: " << v.inconclusive_reason << " (" << v.models_checked
          << " models checked, " << v.elapsed_seconds << " s)\n";
      break;
    case Verdict::Status::Countermodel: {
      const CountermodelWitness& w = *v.countermodel;
      out << "countermodel found after " << v.models_checked << " models ("
          << v.elapsed_seconds << " s)\n";
      out << "  world: " << w.model.world_label(w.world) << "\n";
      if (w.domain) out << "  domain: " << set_text(w.model, w.domain->bits) << "\n";
      for (const auto& [name, den] : w.env) {
        out << "  ?" << name << " =\n" << denotation_lines(w.model, den, "    ");
      }
      out << "  model:\n";
      std::istringstream doc(save_model(w.model));
      std::string line;
      while (std::getline(doc, line)) out << "    " << line << "\n";
      break;
    }
  }
  return out.str();
}

std::string suite_text(const scenarios::SuiteReport& report) {
  std::ostringstream out;
  size_t name_w = 4, formula_w = 7;
  for (const auto& e : report.entries) {
    name_w = std::max(name_w, e.name.size());
    formula_w = std::max(formula_w, std::min<size_t>(e.formula.size(), 60));
  }
  out << std::left << std::setw(static_cast<int>(name_w) + 2) << "name"
      << std::setw(7) << "frame" << std::setw(9) << "mode"
      << std::setw(14) << "verdict" << std::setw(10) << "elapsed" << "ok  formula\n";
  for (const auto& e : report.entries) {
    std::ostringstream elapsed;
    elapsed << std::fixed << std::setprecision(2) << e.verdict.elapsed_seconds << "s";
    out << std::left << std::setw(static_cast<int>(name_w) + 2) << e.name
        << std::setw(7) << to_string(e.frame) << std::setw(9) << to_string(e.mode)
        << std::setw(14) << verdict_status(e.verdict) << std::setw(10) << elapsed.str()
        << (e.as_expected ? "ok" : "XX") << "  " << e.formula << "\n";
  }
  out << (report.all_as_expected() ? "suite passed" : "suite FAILED") << "\n";
  return out.str();
}

}  // namespace palkit
