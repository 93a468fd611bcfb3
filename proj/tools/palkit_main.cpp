#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "palkit/report.hpp"

using namespace palkit;

namespace {

// 0 = check passed / formula valid, 1 = countermodel or failed check,
// 2 = usage / parse / load error, 3 = cap or time budget exceeded.
enum ExitStatus : int { kOk = 0, kFailed = 1, kUsage = 2, kCapExceeded = 3 };

struct CommonFlags {
  std::string frame = "s5";
  std::string agents;
  std::string props;
  int max_worlds = 3;
  std::string mode = "direct";
  std::string format = "text";
  uint64_t model_cap = 10'000'000;
  double time_cap = 0.0;  // seconds; 0 = none
  int jobs = 0;
};

void add_bounds_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--frame", flags.frame, "frame class: k or s5")
      ->check(CLI::IsMember({"k", "s5"}));
  cmd->add_option("--agents", flags.agents, "comma-separated agent names (default: from formula)");
  cmd->add_option("--props", flags.props, "comma-separated proposition names (default: from formula)");
  cmd->add_option("--max-worlds", flags.max_worlds, "largest model size to enumerate")
      ->check(CLI::Range(1, 16));
  cmd->add_option("--mode", flags.mode, "validity notion: direct, pvalid or tvalid")
      ->check(CLI::IsMember({"direct", "pvalid", "tvalid"}));
  cmd->add_option("--model-cap", flags.model_cap, "abort when the projected search exceeds this");
  cmd->add_option("--time-cap", flags.time_cap, "wall-clock budget in seconds");
}

void add_format_flag(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--format", flags.format, "text or doc (machine-readable)")
      ->check(CLI::IsMember({"text", "doc"}));
}

void add_jobs_flag(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--jobs", flags.jobs, "worker threads (0 = all cores, 1 = serial)");
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int resolve_jobs(int flag_value) {
  if (const char* env = std::getenv("PALKIT_JOBS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
      // fall through to the flag
    }
  }
  return flag_value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Formula formula_from(const std::string& text, const std::string& file) {
  if (!file.empty()) return parse_formula(read_file(file));
  return parse_formula(text);
}

SearchBounds bounds_from(const CommonFlags& flags, const std::vector<Formula>& formulas) {
  SearchBounds b;
  b.frame = flags.frame == "k" ? FrameClass::K : FrameClass::S5;
  b.max_worlds = flags.max_worlds;
  b.model_cap = flags.model_cap;
  if (flags.time_cap > 0) b.time_cap_seconds = flags.time_cap;
  if (!flags.agents.empty()) {
    b.agents = split_list(flags.agents);
  } else {
    std::set<std::string> agents;
    for (const auto& f : formulas)
      for (const auto& a : f.agents()) agents.insert(a);
    b.agents.assign(agents.begin(), agents.end());
    if (b.agents.empty()) b.agents = {"a"};
  }
  if (!flags.props.empty()) {
    b.props = split_list(flags.props);
  } else {
    std::set<std::string> props;
    for (const auto& f : formulas)
      for (const auto& p : f.atoms()) props.insert(p);
    b.props.assign(props.begin(), props.end());
  }
  return b;
}

ValidityMode mode_from(const CommonFlags& flags) {
  if (flags.mode == "pvalid") return ValidityMode::PValid;
  if (flags.mode == "tvalid") return ValidityMode::TValid;
  return ValidityMode::Direct;
}

int verdict_exit(const Verdict& v) {
  switch (v.status) {
    case Verdict::Status::ValidUpTo: return kOk;
    case Verdict::Status::Countermodel: return kFailed;
    case Verdict::Status::Inconclusive: return kCapExceeded;
  }
  return kUsage;
}

void emit_verdict(const Verdict& v, const CommonFlags& flags, const SearchBounds& b,
                  ValidityMode mode) {
  if (flags.format == "doc") {
    ordered_json out = verdict_to_json(v);
    out["bounds"] = bounds_to_json(b);
    out["mode"] = to_string(mode);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << verdict_text(v);
  }
}

int run_parse(const std::string& text, const std::string& file, const CommonFlags& flags) {
  Formula f = formula_from(text, file);
  if (flags.format == "doc") {
    ordered_json out;
    out["status"] = "ok";
    out["formula"] = print_formula(f);
    out["size"] = f.size();
    out["atoms"] = f.atoms();
    out["agents"] = f.agents();
    out["schematics"] = f.schematics();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << print_formula(f) << "\n";
  }
  return kOk;
}

int run_check(const std::string& model_path, const std::string& formula_text,
              const std::string& formula_file, const std::string& world,
              const CommonFlags& flags) {
  KripkeModel m = load_model(read_file(model_path));
  Formula f = formula_from(formula_text, formula_file);
  EvalContext ctx{&m, satisfies_frame(m, FrameClass::S5) ? std::optional(FrameClass::S5)
                                                         : std::nullopt};
  if (!world.empty()) {
    auto w = m.world_index(world);
    if (!w) throw std::runtime_error("unknown world label: '" + world + "'");
    bool value = eval_direct(m, f, *w);
    if (flags.format == "doc") {
      ordered_json out;
      out["status"] = "ok";
      out["world"] = world;
      out["value"] = value;
      if (ctx.frame_class_checked) out["frame_checked"] = to_string(*ctx.frame_class_checked);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << (value ? "true" : "false") << "\n";
    }
    return value ? kOk : kFailed;
  }
  WorldSet ext = extension(m, f);
  bool valid = ext.is_full();
  if (flags.format == "doc") {
    ordered_json out;
    out["status"] = "ok";
    out["valid_in_model"] = valid;
    out["extension"] = worldset_to_json(m, ext);
    if (ctx.frame_class_checked) out["frame_checked"] = to_string(*ctx.frame_class_checked);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "valid in model: " << (valid ? "true" : "false") << "\n";
    std::cout << "extension: ";
    bool first = true;
    std::cout << "{";
    for (int w = 0; w < m.world_count(); ++w) {
      if (ext.test(w)) {
        if (!first) std::cout << ",";
        std::cout << m.world_label(w);
        first = false;
      }
    }
    std::cout << "}\n";
  }
  return valid ? kOk : kFailed;
}

int run_scenario(const std::string& name, const CommonFlags& flags, const CheckOptions& options) {
  SearchBounds b;
  b.max_worlds = flags.max_worlds;
  b.model_cap = flags.model_cap;
  if (flags.time_cap > 0) b.time_cap_seconds = flags.time_cap;

  auto emit_suite = [&](const scenarios::SuiteReport& report) {
    if (flags.format == "doc") {
      std::cout << suite_to_json(report).dump(2) << "\n";
    } else {
      std::cout << suite_text(report);
    }
    return report.all_as_expected() ? kOk : kFailed;
  };

  if (name == "wisemen3" || name == "wisemen4") {
    int agents = name == "wisemen4" ? 4 : 3;
    scenarios::WiseMenRun run = scenarios::run_wise_men(agents);
    std::vector<int> expected =
        agents == 4 ? std::vector<int>{15, 14, 12, 8} : std::vector<int>{7, 6, 4};
    bool ok = run.theorem_holds && run.variant_holds && run.world_counts == expected;
    if (flags.format == "doc") {
      ordered_json out;
      out["scenario"] = name;
      out["theorem_holds"] = run.theorem_holds;
      out["variant_holds"] = run.variant_holds;
      out["world_counts"] = run.world_counts;
      out["expected_counts"] = expected;
      out["announcements"] = run.announcements;
      out["as_expected"] = ok;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "theorem: " << (run.theorem_holds ? "true" : "false") << "\n";
      std::cout << "variant (knows own spot either way): "
                << (run.variant_holds ? "true" : "false") << "\n";
      std::cout << "surviving worlds:";
      for (int c : run.world_counts) std::cout << " " << c;
      std::cout << "\n";
    }
    return ok ? kOk : kFailed;
  }
  if (name == "wisemen3-axiomatic")
    return emit_suite(scenarios::wise_men_axiomatic_suite(b, options));
  if (name == "axioms") return emit_suite(scenarios::axiom_suite(b, options));
  if (name == "substitution") return emit_suite(scenarios::substitution_suite(b, options));
  if (name == "concrete-demo") {
    KripkeModel m = scenarios::concrete_model();
    struct Row {
      const char* formula;
      const char* world;
      bool expected;
    };
    const Row rows[] = {
        {"p & K{a} p & K{b} p & ~K{a} K{b} p", "w1", true},
        {"K{a} K{b} p", "w1", false},
        {"K{b} p", "w3", false},
    };
    bool all_ok = true;
    ordered_json entries = ordered_json::array();
    for (const Row& row : rows) {
      bool value = eval_direct(m, parse_formula(row.formula), *m.world_index(row.world));
      bool ok = value == row.expected;
      all_ok = all_ok && ok;
      if (flags.format == "doc") {
        entries.push_back({{"formula", row.formula},
                           {"world", row.world},
                           {"value", value},
                           {"expected", row.expected},
                           {"as_expected", ok}});
      } else {
        std::cout << row.formula << " @ " << row.world << " = " << (value ? "true" : "false")
                  << (ok ? "" : "  (UNEXPECTED)") << "\n";
      }
    }
    if (flags.format == "doc") {
      ordered_json out;
      out["scenario"] = name;
      out["entries"] = std::move(entries);
      out["as_expected"] = all_ok;
      std::cout << out.dump(2) << "\n";
    }
    return all_ok ? kOk : kFailed;
  }
  throw CLI::ValidationError("scenario", "unknown scenario: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"palkit — public announcement logic with relativized common knowledge"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string formula_text;
  std::string formula_file;
  std::string model_path;
  std::string world;
  std::string scenario_name;
  std::string conclusion_text;
  std::vector<std::string> premise_texts;
  std::string premises_file;

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse a formula and print it back");
  parse_cmd->add_option("formula", formula_text, "formula text");
  parse_cmd->add_option("--formula-file", formula_file, "read the formula from a file");
  add_format_flag(parse_cmd, flags);

  CLI::App* check_cmd =
      app.add_subcommand("check", "evaluate a formula in a model file, optionally at one world");
  check_cmd->add_option("model", model_path, "model document")->required();
  check_cmd->add_option("formula", formula_text, "formula text");
  check_cmd->add_option("world", world, "world label (omit to check validity in the model)");
  check_cmd->add_option("--formula-file", formula_file, "read the formula from a file");
  add_format_flag(check_cmd, flags);

  CLI::App* valid_cmd =
      app.add_subcommand("valid", "bounded validity over all models within the bounds");
  valid_cmd->add_option("formula", formula_text, "formula text");
  valid_cmd->add_option("--formula-file", formula_file, "read the formula from a file");
  add_bounds_flags(valid_cmd, flags);
  add_format_flag(valid_cmd, flags);
  add_jobs_flag(valid_cmd, flags);

  CLI::App* cons_cmd = app.add_subcommand(
      "consequence", "bounded global consequence from premises to a conclusion");
  cons_cmd->add_option("conclusion", conclusion_text, "conclusion formula");
  cons_cmd->add_option("--premise", premise_texts, "premise formula (repeatable)");
  cons_cmd->add_option("--premises-file", premises_file, "file with one premise per line");
  add_bounds_flags(cons_cmd, flags);
  add_format_flag(cons_cmd, flags);
  add_jobs_flag(cons_cmd, flags);

  CLI::App* scen_cmd = app.add_subcommand("scenario", "run a built-in scenario or suite");
  scen_cmd
      ->add_option("name", scenario_name,
                   "wisemen3 | wisemen4 | wisemen3-axiomatic | axioms | substitution | "
                   "concrete-demo")
      ->required();
  add_bounds_flags(scen_cmd, flags);
  add_format_flag(scen_cmd, flags);
  add_jobs_flag(scen_cmd, flags);

  CLI::App* dot_cmd = app.add_subcommand("dot", "emit a model file as DOT");
  dot_cmd->add_option("model", model_path, "model document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kUsage;
  }

  CheckOptions options{resolve_jobs(flags.jobs)};

  try {
    if (parse_cmd->parsed()) return run_parse(formula_text, formula_file, flags);
    if (check_cmd->parsed()) {
      if (formula_text.empty() && formula_file.empty())
        throw std::runtime_error("check needs a formula argument or --formula-file");
      return run_check(model_path, formula_text, formula_file, world, flags);
    }
    if (valid_cmd->parsed()) {
      Formula f = formula_from(formula_text, formula_file);
      SearchBounds b = bounds_from(flags, {f});
      ValidityMode mode = mode_from(flags);
      Verdict v = bounded_valid(f, b, mode, options);
      emit_verdict(v, flags, b, mode);
      return verdict_exit(v);
    }
    if (cons_cmd->parsed()) {
      if (conclusion_text.empty()) throw std::runtime_error("consequence needs a conclusion");
      std::vector<Formula> premises;
      for (const auto& p : premise_texts) premises.push_back(parse_formula(p));
      if (!premises_file.empty()) {
        std::istringstream lines(read_file(premises_file));
        std::string line;
        while (std::getline(lines, line)) {
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          premises.push_back(parse_formula(line));
        }
      }
      Formula conclusion = parse_formula(conclusion_text);
      std::vector<Formula> all = premises;
      all.push_back(conclusion);
      SearchBounds b = bounds_from(flags, all);
      ValidityMode mode = mode_from(flags);
      Verdict v = bounded_consequence(premises, conclusion, b, mode, options);
      emit_verdict(v, flags, b, mode);
      return verdict_exit(v);
    }
    if (scen_cmd->parsed()) return run_scenario(scenario_name, flags, options);
    if (dot_cmd->parsed()) {
      std::cout << to_dot(load_model(read_file(model_path)));
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
