#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "roctl/modelcheck.hpp"
#include "roctl/oracle.hpp"
#include "roctl/pipeline.hpp"
#include "roctl/tableau.hpp"
#include "support/generators.hpp"

using namespace roctl;

namespace {

Formula P(const std::string& s) { return parse_formula(s, Dialect::RoctlStar); }
Formula C(const std::string& s) { return parse_formula(s, Dialect::CtlStar); }

std::vector<Structure> structures(std::uint64_t seed, int n) {
  testing::Rng rng(seed);
  std::vector<Structure> out;
  for (int k = 0; k < n; ++k) out.push_back(testing::random_structure(rng));
  return out;
}

// Violations at positions > 0, or -1 when infinitely many.
int violations(const Structure& m, const Lasso& l) {
  for (int w : l.loop)
    if (m.has(w, kViol)) return -1;
  int c = 0;
  for (std::size_t j = 1; j < l.prefix.size(); ++j) c += m.has(l.prefix[j], kViol);
  return c;
}

}  // namespace

TEST_CASE("ALTL translation clauses") {
  AltlTranslation o = to_altl(P("O p"));
  REQUIRE(o.formula.op() == Op::Atom);
  CHECK(o.formula.name().rfind(kLabelPrefix, 0) == 0);
  CHECK(o.table.definitions().at(o.formula.name()) == C("A((N G ~viol) -> p)"));

  CHECK(to_altl(P("p & q")).formula == P("p & q"));
  CHECK(to_altl(P("N (p U q)")).formula == P("N (p U q)"));

  AltlTranslation rb = to_altl(P("Rb p"));
  Formula f = rb.formula;
  REQUIRE(f.op() == Op::Not);
  REQUIRE(f.child().op() == Op::Or);
  CHECK(f.child().child(0) == P("~p"));
  CHECK(f.child().child(1).op() == Op::Automaton);
  CHECK(rb.table.deviation(f.child().child(1)->aut.get()) != nullptr);
  CHECK(in_dialect(f, Dialect::Altl));
}

TEST_CASE("labels are stable") {
  LabelledAtomTable t;
  Formula a = t.label(C("A G p")), b = t.label(C("A G p")), c = t.label(C("A F p"));
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("f_prone") {
  for (const char* s : {"p", "N p", "G p", "p U q", "~(p U q)"}) {
    LabelledAtomTable t;
    Formula f = P(s);
    Formula fp = f_prone(f, t);
    CAPTURE(s);
    CHECK(complexity(fp, t.definitions()) <= (std::uint64_t{1} << closure(f).size()) + length(f) + 1);
  }

  LabelledAtomTable t;
  Formula bottom = f_prone(mk_false(), t);
  REQUIRE(bottom.op() == Op::Or);
  CHECK(bottom.child(0) == mk_false());
  CHECK(language_upto(*bottom.child(1)->aut, 5).empty());

  for (const Structure& m : structures(1, 15))
    for (const char* s : {"N p", "G p", "p U q"}) {
      LabelledAtomTable tab;
      Formula f = P(s);
      Formula fp = f_prone(f, tab);
      Oracle plain(m), labelled(m, {}, tab.definitions());
      for (const Lasso& l : testing::all_fullpaths(m)) CHECK(labelled.path(l, fp) == plain.path(l, mk_prone(f)));
    }
}

TEST_CASE("CTL* translation") {
  CHECK(to_ctlstar(P("O p")) == C("A((N G ~viol) -> p)"));
  CHECK(to_ctlstar(P("O G p")) == C("A((N G ~viol) -> G p)"));
  CHECK(in_dialect(to_ctlstar(P("Rb N p")), Dialect::CtlStar));
  CHECK(to_ctlstar(P("p U N q")) == P("p U N q"));

  for (const char* s : {"Rb N p", "Pn G q", "O Rb F p", "A G (p -> Rb N p)"}) {
    Formula f = P(s), t = to_ctlstar(f);
    for (const Structure& m : structures(2, 15)) {
      Oracle o(m);
      ModelChecker mc(m);
      for (const Lasso& l : testing::all_fullpaths(m)) CHECK(o.path(l, f) == mc.path(l, t));
    }
  }
}

TEST_CASE("satisfiability wrapper") {
  CHECK(to_ctlstar_sat(mk_true()) == mk_and(to_ctlstar(mk_true()), C("A G E N ~viol")));
  for (const Structure& m : structures(3, 15)) {
    ModelChecker mc(m);
    for (const char* s : {"O N p", "Rb G p", "Pn F q"})
      for (std::size_t w = 0; w < m.size(); ++w) {
        int wi = static_cast<int>(w);
        CHECK(mc.state(wi, to_ctlstar(P(s))) == mc.state(wi, to_ctlstar_sat(P(s))));
      }
  }
  // The successor of the start world is failing everywhere.
  Structure bad;
  int s = bad.add_world("s"), x = bad.add_world("x", {"viol"});
  bad.add_edge(s, x);
  bad.add_edge(x, x);
  CHECK_FALSE(check_state(bad, s, to_ctlstar_sat(mk_true())));
}

TEST_CASE("violation bounds") {
  CHECK(gamma_n(0) == C("N G ~viol"));
  CHECK(gamma_n(1) == C("N (~viol U N G ~viol)"));
  CHECK(gamma_n(2) == C("N (~viol U N (~viol U N G ~viol))"));
  testing::StructureGenOptions opt;
  opt.viol_probability = 0.6;
  testing::Rng rng(4);
  for (int k = 0; k < 30; ++k) {
    Structure m = testing::random_structure(rng, opt);
    Oracle o(m);
    for (const Lasso& l : testing::all_fullpaths(m))
      for (std::size_t n = 0; n <= 3; ++n) {
        int v = violations(m, l);
        CHECK(o.path(l, gamma_n(n)) == (v >= 0 && static_cast<std::size_t>(v) <= n));
      }
  }
  CHECK(length(gamma_n(3)) - length(gamma_n(2)) == length(gamma_n(2)) - length(gamma_n(1)));
}

TEST_CASE("bounded fast paths") {
  LabelledAtomTable t;
  Formula p = P("p");
  CHECK(translate_bounded_robustly(BoundedMode::Prone, 0, p, t) == p);
  CHECK(translate_bounded_robustly(BoundedMode::Robust, 0, p, t) == p);
  CHECK(translate_bounded_robustly(BoundedMode::ObligatoryRobust, 2, p, t) == mk_all(mk_implies(gamma_n(2), p)));

  for (const char* s : {"N p", "G p", "p U q"}) {
    Formula f = P(s);
    LabelledAtomTable tab;
    Formula prone1 = translate_bounded_robustly(BoundedMode::Prone, 1, f, tab);
    Formula robust2 = translate_bounded_robustly(BoundedMode::Robust, 2, f, tab);
    Formula slow2 = mk_robustly(mk_robustly(f));
    for (const Structure& m : structures(5, 12)) {
      Oracle o(m), lab(m, {}, tab.definitions());
      for (const Lasso& l : testing::all_fullpaths(m)) {
        CHECK(lab.path(l, prone1) == o.path(l, mk_prone(f)));
        CHECK(lab.path(l, robust2) == o.path(l, slow2));
      }
    }
  }
}

TEST_CASE("skeleton outside deontic and path operators is unchanged") {
  testing::Rng rng(6);
  testing::FormulaGenOptions opt;
  opt.allow_robust = false;
  opt.allow_obligatory = false;
  opt.allow_path_quantifiers = false;
  for (int k = 0; k < 100; ++k) {
    Formula f = testing::random_formula(rng, opt);
    CHECK(to_altl(f).formula == f);
  }
}
