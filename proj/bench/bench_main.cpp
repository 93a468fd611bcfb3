// Compares the serial reference scan (jobs = 1) against the OpenMP kernel on
// the heavier bounded searches and confirms both return identical verdicts.

#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "palkit/report.hpp"
#include "palkit/scenarios.hpp"

using namespace palkit;

namespace {

struct Workload {
  std::string name;
  std::function<Verdict(const CheckOptions&)> run;
};

bool same_verdict(const Verdict& a, const Verdict& b) {
  if (a.status != b.status || a.models_checked != b.models_checked) return false;
  if (a.countermodel.has_value() != b.countermodel.has_value()) return false;
  if (a.countermodel) {
    if (a.countermodel->world != b.countermodel->world) return false;
    if (save_model(a.countermodel->model) != save_model(b.countermodel->model)) return false;
    if (!(a.countermodel->env == b.countermodel->env)) return false;
  }
  return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif
  std::printf("scan kernel benchmark: serial reference vs %d-thread kernel\n\n", threads);

  SearchBounds wm;
  wm.max_worlds = 3;

  SearchBounds deep;
  deep.max_worlds = 3;
  deep.frame = FrameClass::S5;
  deep.agents = {"a"};
  deep.model_cap = 100'000'000;

  SearchBounds axioms_k;
  axioms_k.max_worlds = 3;
  axioms_k.frame = FrameClass::K;
  axioms_k.agents = {"a"};
  axioms_k.props = {"p", "q", "r"};

  std::vector<Workload> workloads = {
      {"wise-men axiomatic consequence (64k S5 models)",
       [&](const CheckOptions& o) { return scenarios::wise_men_axiomatic(wm, o); }},
      {"announcement-rck reduction axiom (class K, 263k models)",
       [&](const CheckOptions& o) {
         return bounded_valid(
             parse_formula("[!p]Cr{a}(q|r) <-> (p -> Cr{a}((p & [!p]q)|[!p]r))"), axioms_k,
             ValidityMode::Direct, o);
       }},
      {"schematic countermodel search (16.7M denotations)",
       [&](const CheckOptions& o) {
         return bounded_valid(parse_formula("?phi -> ~[!?phi](?phi & ~K{a} ?phi)"), deep,
                              ValidityMode::PValid, o);
       }},
  };

  std::printf("%-56s %10s %10s %8s  %s\n", "workload", "serial", "parallel", "speedup",
              "verdicts");
  for (const auto& w : workloads) {
    Verdict serial = w.run(CheckOptions{1});
    Verdict parallel = w.run(CheckOptions{0});
    bool same = same_verdict(serial, parallel);
    std::printf("%-56s %9.2fs %9.2fs %7.2fx  %s\n", w.name.c_str(), serial.elapsed_seconds,
                parallel.elapsed_seconds,
                parallel.elapsed_seconds > 0 ? serial.elapsed_seconds / parallel.elapsed_seconds
                                             : 0.0,
                same ? "identical" : "MISMATCH");
    if (!same) return 1;
  }
  return 0;
}
