// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "roctl/check.hpp"
#include "roctl/corpus.hpp"
#include "roctl/deviants.hpp"
#include "roctl/dfa2ltl.hpp"
#include "roctl/fsa.hpp"
#include "roctl/modelcheck.hpp"
#include "roctl/oracle.hpp"
#include "roctl/pipeline.hpp"
#include "roctl/qctl.hpp"
#include "roctl/succinct.hpp"
#include "roctl/tableau.hpp"
#include "support/generators.hpp"

using namespace roctl;
using namespace roctl::testing;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

Formula parse(const std::string& s) { return parse_formula(s, Dialect::RoctlStar); }

bool verdict(const Structure& m, const Anchor& a, Formula f, Strategy s) {
  return check_roctl(m, a, f, s).verdict;
}

// Structures shared by criteria 2 and 7.
struct Instance {
  Structure m;
  std::vector<Formula> formulas;
};
std::vector<Instance> g_instances;

Outcome onno() {
  auto t0 = Clock::now();
  Example ex = load_example(data_dir(), "onno");
  const Structure& m = ex.model;
  Lasso sigma{{m.require("u"), m.require("wp")}, {m.require("w")}};
  struct Row {
    const char* f;
    bool expected;
  };
  const Row rows[] = {{"O N p & ~(N O p)", true},
                      {"N O ~p & ~(O N ~p)", true},
                      {"N O p", false},
                      {"O N ~p", false}};
  int ok = 0;
  for (const auto& r : rows) {
    Formula f = parse(r.f);
    bool o = eval_path(m, sigma, f);
    bool t = verdict(m, Anchor::on(sigma), f, Strategy::Translate);
    bool d = verdict(m, Anchor::on(sigma), f, Strategy::AutomatonDirect);
    if (o == r.expected && t == r.expected && d == r.expected) ++ok;
  }
  double secs = since(t0);
  std::ostringstream os;
  os << ok << "/4 claims, " << secs << "s";
  return {ok == 4 && secs < 1.0, os.str()};
}

Outcome translation_soundness() {
  auto t0 = Clock::now();
  Rng rng(20261015);
  const int kStructures = 200, kFormulas = 5;
  std::size_t checks = 0, agree = 0, inexact = 0;
  std::string first_bad;
  for (int s = 0; s < kStructures; ++s) {
    Instance inst;
    inst.m = random_structure(rng);
    if (!exactness_certificate(inst.m)) ++inexact;
    for (int k = 0; k < kFormulas; ++k) inst.formulas.push_back(random_formula(rng));
    Oracle o(inst.m);
    for (Formula f : inst.formulas) {
      std::vector<Anchor> anchors = {Anchor::on(*inst.m.path)};
      for (std::size_t w = 0; w < inst.m.size(); ++w) anchors.push_back(Anchor::at(static_cast<int>(w)));
      for (const auto& a : anchors) {
        bool ov = a.path ? o.path(*a.path, f) : o.world(*a.world, f);
        bool tv = verdict(inst.m, a, f, Strategy::Translate);
        bool dv = verdict(inst.m, a, f, Strategy::AutomatonDirect);
        ++checks;
        if (ov == tv && tv == dv) {
          ++agree;
        } else if (first_bad.empty()) {
          first_bad = render_formula(f) + " on structure " + std::to_string(s);
        }
      }
    }
    g_instances.push_back(std::move(inst));
  }
  double secs = since(t0);
  std::ostringstream os;
  os << agree << "/" << checks << " agree over " << kStructures << " structures, " << secs << "s";
  if (inexact) os << ", " << inexact << " structures not certified exact";
  if (!first_bad.empty()) os << ", first mismatch " << first_bad;
  return {agree == checks && inexact == 0 && secs < 600, os.str()};
}

Outcome tableau_correctness() {
  Rng rng(3);
  std::size_t total = 0, ok = 0;
  for (int s = 0; s < 20; ++s) {
    Structure m = random_structure(rng);
    Oracle o(m);
    for (const char* txt : {"N p", "G p", "p U q", "~(p U q)"}) {
      Formula f = parse(txt);
      Tableau t = build_aphi(f);
      for (const Lasso& pi : all_fullpaths(m))
        for (std::size_t i = 0; i <= 4; ++i) {
          ++total;
          if (accepts_pair(t, m, pi, i) == o.path(pi, f)) ++ok;
        }
    }
  }
  std::ostringstream os;
  os << ok << "/" << total << " pairs";
  return {ok == total, os.str()};
}

Outcome deviation_automaton() {
  Rng rng(3);
  std::size_t total = 0, ok = 0;
  for (int s = 0; s < 20; ++s) {
    Structure m = random_structure(rng);
    Oracle o(m);
    std::vector<Formula> fs;
    for (const char* txt : {"N p", "G p", "p U q", "~(p U q)", "F ~p", "N N q"}) fs.push_back(parse(txt));
    for (Formula f : fs)
      for (const Lasso& sigma : all_fullpaths(m)) {
        bool brute = false;
        for (const auto& [i, pi] : deviations(m, sigma, {})) brute = brute || o.path(pi, f);
        ++total;
        if (check_lambda(m, sigma, f) == brute) ++ok;
      }
  }
  std::ostringstream os;
  os << ok << "/" << total << " lassos";
  return {ok == total, os.str()};
}

Outcome counter_free_preservation() {
  Rng rng(5);
  int cf = 0, lang = 0;
  for (int k = 0; k < 100; ++k) {
    Fsa a = random_counter_free_fsa(rng);
    Fsa d = determinise(a);
    if (is_counter_free(d) && satisfies_counter_free_definition(d)) ++cf;
    if (language_upto(a, 6) == language_upto(d, 6)) ++lang;
  }
  std::ostringstream os;
  os << cf << "/100 counter-free after determinisation, " << lang << "/100 languages equal up to length 6";
  return {cf == 100 && lang == 100, os.str()};
}

Outcome wilke() {
  Rng rng(6);
  int ok = 0;
  std::uint64_t max_len = 0, sum_len = 0;
  for (int k = 0; k < 20; ++k) {
    Fsa d = random_counter_free_dfa(rng);
    WilkeResult r = wilke_translate(d);
    max_len = std::max(max_len, r.length);
    sum_len += r.length;
    bool all = true;
    for (const Word& w : all_words(d.atoms().size(), 6))
      if (finite_eval(d.atoms(), w, r.formula) != accepts(d, w)) {
        all = false;
        break;
      }
    ok += all;
  }
  std::ostringstream os;
  os << ok << "/20 DFAs, formula length mean " << sum_len / 20 << " max " << max_len;
  return {ok == 20, os.str()};
}

Outcome prefix_lift() {
  std::size_t automata = 0, total = 0, ok = 0;
  for (const Instance& inst : g_instances) {
    for (Formula f : inst.formulas) {
      AltlTranslation tr = to_altl(f);
      const AtomDefinitions& defs = tr.table.definitions();
      for (const auto& [ptr, d] : tr.table.deviations()) {
        ++automata;
        Formula lift = prefix_existence_lift(d);
        Formula op = mk_automaton(d.automaton);
        Structure g = ground_triggers(inst.m, d, defs);
        Oracle o(g, {}, defs);
        for (const Lasso& l : all_fullpaths(g)) {
          ++total;
          if (o.path(l, op) == o.path(l, lift)) ++ok;
        }
      }
    }
  }
  std::ostringstream os;
  os << ok << "/" << total << " lassos over " << automata << " deviation automata";
  return {automata > 0 && ok == total, os.str()};
}

Outcome qctl_linearity() {
  std::vector<Formula> fs;
  for (const auto& s : corpus_formulas()) fs.push_back(parse(s));
  for (const auto& name : example_names())
    for (const Claim& c : load_example(data_dir(), name).claims) fs.push_back(parse(c.formula));
  Rng rng(8);
  FormulaGenOptions opt;
  opt.max_depth = 6;
  opt.max_closure = 40;
  opt.max_robust_nesting = 4;
  for (int k = 0; k < 1000; ++k) fs.push_back(random_formula(rng, opt));
  double worst = 0;
  std::size_t ok = 0;
  for (Formula f : fs) {
    double ratio = static_cast<double>(length(to_qctl(f))) / static_cast<double>(length(f));
    worst = std::max(worst, ratio);
    if (ratio <= 24.0) ++ok;
  }
  std::ostringstream os;
  os << ok << "/" << fs.size() << " formulas within 24x, worst ratio " << worst;
  return {ok == fs.size(), os.str()};
}

Outcome succinctness() {
  auto t0 = Clock::now();
  ExperimentReport r = experiment(1, 2);
  bool matrix = r.agrees() && r.trees.size() == 6 && r.positives(r.isomorphism) == 6 && !r.checker.empty();
  std::uint64_t c0 = count_utrees(0, 2), c1 = count_utrees(1, 2), c2 = count_utrees(2, 2);
  bool counts = c0 == 4 && c1 == 6 && c2 == 20;
  // Linear growth: constant increments in h (fixed l) and in l (fixed h).
  bool linear = true;
  for (int l = 1; l <= 3; ++l) {
    std::uint64_t d = length(formula_f(1, l)) - length(formula_f(0, l));
    for (int h = 2; h <= 4; ++h) linear = linear && length(formula_f(h, l)) - length(formula_f(h - 1, l)) == d;
  }
  for (int h = 0; h <= 3; ++h) {
    std::uint64_t d = length(formula_f(h, 2)) - length(formula_f(h, 1));
    for (int l = 3; l <= 5; ++l) linear = linear && length(formula_f(h, l)) - length(formula_f(h, l - 1)) == d;
  }
  double secs = since(t0);
  std::ostringstream os;
  os << "matrix " << (matrix ? "equal" : "differs") << " on 36 pairs, counts " << c0 << "/" << c1 << "/" << c2
     << ", |f(h,2)| =";
  for (int h = 0; h <= 3; ++h) os << " " << length(formula_f(h, 2));
  os << (linear ? " (linear)" : " (not linear)") << ", " << secs << "s";
  return {matrix && counts && linear && secs < 300, os.str()};
}

Outcome bisimulation() {
  Rng rng(10);
  std::vector<Formula> fs;
  for (const auto& s : corpus_formulas()) fs.push_back(parse(s));
  std::size_t pairs = 0, total = 0, ok = 0;
  for (int k = 0; k < 50; ++k) {
    Structure m = random_structure(rng);
    Duplicated d = duplicated_variant(m, rng);
    bool bis = true;
    for (std::size_t w = 0; w < m.size(); ++w)
      bis = bis && bisimilar({&m, static_cast<int>(w)}, {&d.m, d.copy_of[w]});
    if (!bis) continue;
    ++pairs;
    Lasso hat = lift_lasso(m, d, *m.path);
    for (Formula f : fs) {
      ++total;
      bool same = verdict(m, Anchor::on(*m.path), f, Strategy::AutomatonDirect) ==
                  verdict(d.m, Anchor::on(hat), f, Strategy::AutomatonDirect);
      for (std::size_t w = 0; w < m.size() && same; ++w)
        same = verdict(m, Anchor::at(static_cast<int>(w)), f, Strategy::AutomatonDirect) ==
               verdict(d.m, Anchor::at(d.copy_of[w]), f, Strategy::AutomatonDirect);
      if (same) ++ok;
    }
  }
  std::ostringstream os;
  os << pairs << "/50 pairs bisimilar, " << ok << "/" << total << " formula checks agree";
  return {pairs == 50 && ok == total, os.str()};
}

Outcome fast_paths() {
  Rng rng(11);
  std::vector<Structure> ms;
  for (int k = 0; k < 20; ++k) ms.push_back(random_structure(rng));
  for (const char* name : {"onno", "fuse", "chisholm"}) ms.push_back(load_example(data_dir(), name).model);
  std::size_t total = 0, ok = 0;
  for (const char* txt : {"p", "N p", "G p", "p U q", "F ~q"}) {
    Formula f = parse(txt);
    for (std::size_t n = 0; n <= 2; ++n) {
      Formula slow = f;
      for (std::size_t k = 0; k < n; ++k) slow = mk_robustly(slow);
      slow = mk_obligatory(slow);
      LabelledAtomTable t;
      Formula fast = translate_bounded_robustly(BoundedMode::ObligatoryRobust, n, f, t);
      for (const Structure& m : ms) {
        ModelChecker mc(m, t.definitions());
        for (std::size_t w = 0; w < m.size(); ++w) {
          ++total;
          if (mc.state(static_cast<int>(w), fast) ==
              verdict(m, Anchor::at(static_cast<int>(w)), slow, Strategy::AutomatonDirect))
            ++ok;
        }
      }
    }
  }
  std::ostringstream os;
  os << ok << "/" << total << " world checks for n <= 2";
  return {ok == total, os.str()};
}

Outcome fuse() {
  Rng rng(12);
  std::vector<Structure> ms;
  for (int k = 0; k < 50; ++k) ms.push_back(random_structure(rng));
  for (const auto& name : example_names()) {
    Structure m = load_example(data_dir(), name).model;
    if (m.used_atoms().count("p")) ms.push_back(std::move(m));
  }
  std::size_t total = 0, ok = 0;
  for (const char* phi : {"p", "N p", "p U q", "F p"}) {
    Formula f = mk_implies(mk_robustly(mk_globally(parse(phi))), mk_globally(mk_robustly(parse(phi))));
    for (const Structure& m : ms) {
      ++total;
      // Valid: no world has a fullpath falsifying it.
      bool falsified = false;
      for (std::size_t w = 0; w < m.size(); ++w)
        falsified = falsified || verdict(m, Anchor::at(static_cast<int>(w)), mk_not(f), Strategy::AutomatonDirect);
      if (!falsified) ++ok;
    }
  }
  Example ex = load_example(data_dir(), "fuse");
  Lasso loop{{}, {ex.model.require("n1")}};
  Formula bad = parse("G Rb p -> Rb G p");
  bool refuted = !verdict(ex.model, Anchor::on(loop), bad, Strategy::Translate) &&
                 !verdict(ex.model, Anchor::on(loop), bad, Strategy::AutomatonDirect) &&
                 !eval_path(ex.model, loop, bad);
  std::ostringstream os;
  os << "Rb G -> G Rb holds on " << ok << "/" << total << " structure checks; fuse model "
     << (refuted ? "falsifies" : "does not falsify") << " G Rb p -> Rb G p";
  return {ok == total && refuted, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"ONNO reproduction", onno},
      {"translation soundness", translation_soundness},
      {"tableau correctness", tableau_correctness},
      {"deviation automaton", deviation_automaton},
      {"counter-freeness preservation", counter_free_preservation},
      {"Wilke translation", wilke},
      {"prefix-existence lift", prefix_lift},
      {"QCTL* linearity", qctl_linearity},
      {"succinctness experiment", succinctness},
      {"bisimulation invariance", bisimulation},
      {"fragment fast paths", fast_paths},
      {"validity/invalidity pair", fuse},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].title, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
