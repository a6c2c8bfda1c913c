#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "roctl/check.hpp"
#include "roctl/modelcheck.hpp"
#include "roctl/oracle.hpp"
#include "support/generators.hpp"

using namespace roctl;

namespace {

Formula L(const std::string& s) { return parse_formula(s, Dialect::Ltl); }
Formula C(const std::string& s) { return parse_formula(s, Dialect::CtlStar); }
Formula R(const std::string& s) { return parse_formula(s, Dialect::RoctlStar); }
Structure model(const std::string& name) { return load_structure(testing::data_dir() + "/models/" + name + ".json"); }

Word letters(const OmegaAutomaton& a, const Structure& m, const std::vector<int>& ws) {
  Word out;
  for (int w : ws) {
    Letter e = 0;
    for (std::size_t i = 0; i < a.atoms.size(); ++i)
      if (m.has(w, a.atoms[i])) e |= Letter{1} << i;
    out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("omega automata") {
  OmegaAutomaton g = ltl_to_omega(L("G p"));
  CHECK(omega_accepts(g, {}, {1}));
  CHECK_FALSE(omega_accepts(g, {1, 0}, {1}));
  CHECK_FALSE(omega_accepts(g, {}, {1, 1, 0}));

  testing::Rng rng(1);
  Formula u = L("p U q"), nu = L("~(p U q)");
  OmegaAutomaton au = ltl_to_omega(u), anu = ltl_to_omega(nu);
  int sampled = 0;
  while (sampled < 500) {
    Structure m = testing::random_structure(rng);
    for (const Lasso& l : testing::all_fullpaths(m)) {
      bool truth = eval_path(m, l, u);
      CHECK(omega_accepts(au, letters(au, m, l.prefix), letters(au, m, l.loop)) == truth);
      CHECK(omega_accepts(anu, letters(anu, m, l.prefix), letters(anu, m, l.loop)) == !truth);
      ++sampled;
    }
  }
  CHECK_THROWS(ltl_to_omega(C("A p")));
}

TEST_CASE("path satisfiability") {
  CHECK(path_satisfiable(L("p U q")));
  CHECK_FALSE(path_satisfiable(L("G p & F ~p")));
  CHECK(path_satisfiable(L("G F p & G F ~p")));
}

TEST_CASE("state checks on ONNO") {
  Structure m = model("onno");
  int u = m.require("u");
  CHECK(check_state(m, u, C("E G ~p")));
  CHECK_FALSE(check_state(m, u, C("A G ~p")));
  ModelChecker mc(m);
  auto w = mc.witness(u, C("E G ~p"));
  REQUIRE(w);
  CHECK(*w == Lasso{{u, m.require("wp")}, {m.require("w")}});
  for (std::size_t x = 0; x < m.size(); ++x) CHECK(check_state(m, static_cast<int>(x), C("A true")));
  CHECK_THROWS_AS(check_state(m, u, R("O p")), DialectError);
}

TEST_CASE("path checks") {
  Structure m = model("onno");
  Lasso sigma{{m.require("u")}, {m.require("v")}};
  CHECK(check_path(m, sigma.suffix(1), C("G p")));
  CHECK(check_path(m, sigma, C("N G p")));
  CHECK(check_path(m, sigma, C("A F p")) == check_state(m, sigma.at(0), C("A F p")));
}

TEST_CASE("agreement with the oracle and negation soundness") {
  testing::Rng rng(2);
  testing::FormulaGenOptions opt;
  opt.allow_robust = false;
  opt.allow_obligatory = false;
  opt.max_closure = 12;
  for (int k = 0; k < 60; ++k) {
    Structure m = testing::random_structure(rng);
    Formula f = testing::random_formula(rng, opt);
    Oracle o(m);
    ModelChecker mc(m);
    for (const Lasso& l : testing::all_fullpaths(m)) {
      bool v = mc.path(l, f);
      CHECK(v == o.path(l, f));
      CHECK(mc.path(l, mk_not(f)) == !v);
    }
    for (std::size_t w = 0; w < m.size(); ++w) {
      bool v = mc.state(static_cast<int>(w), f);
      CHECK(v == o.world(static_cast<int>(w), f));
      auto wit = mc.witness(static_cast<int>(w), f);
      CHECK(wit.has_value() == v);
      if (wit) CHECK(o.path(*wit, f));
    }
  }
}

TEST_CASE("labelling") {
  Structure m = model("onno");
  ModelChecker mc(m);
  auto lab = mc.label(C("A G p"));
  CHECK(lab[static_cast<std::size_t>(m.require("v"))]);
  CHECK_FALSE(lab[static_cast<std::size_t>(m.require("u"))]);
  CHECK(mc.stats().searches > 0);
}

TEST_CASE("RoCTL* checks") {
  Structure m = model("onno");
  Lasso sigma{{m.require("u"), m.require("wp")}, {m.require("w")}};
  for (Strategy s : {Strategy::Translate, Strategy::AutomatonDirect}) {
    CHECK(check_roctl(m, Anchor::on(sigma), R("O N p & ~(N O p)"), s).verdict);
    CHECK(check_roctl(m, Anchor::on(sigma), R("N O ~p & ~(O N ~p)"), s).verdict);
    for (std::size_t w = 0; w < m.size(); ++w) CHECK(check_roctl(m, Anchor::at(static_cast<int>(w)), R("O true"), s).verdict);
  }
  Structure cat = model("cat");
  CHECK(check_roctl(cat, Anchor::at(*cat.start), R("O Rb G (d -> b)"), Strategy::AutomatonDirect).verdict);
  CHECK(check_roctl(cat, Anchor::at(*cat.start), R("O Rb G (d -> b)"), Strategy::Translate).verdict);

  CHECK(parse_strategy("translate") == Strategy::Translate);
  CHECK(parse_strategy("automaton-direct") == Strategy::AutomatonDirect);
  CHECK_THROWS_AS(parse_strategy("fast"), std::invalid_argument);
}

TEST_CASE("verdict report") {
  Structure m = model("onno");
  Verdict v = check_roctl(m, Anchor::at(m.require("u")), R("E G ~p"), Strategy::AutomatonDirect);
  auto j = v.to_json(m);
  CHECK(j.at("verdict") == true);
  CHECK(j.at("strategy") == "automaton-direct");
  CHECK(j.contains("witness"));
  CHECK(j.at("stats").contains("automatonStates"));
  CHECK(j.at("stats").at("formulaLength").get<int>() > 0);
}

TEST_CASE("structure requirements") {
  Structure bad;
  int x = bad.add_world("x", {"viol"});
  bad.add_edge(x, x);
  int s = bad.add_world("s");
  bad.add_edge(s, x);
  CHECK_THROWS_AS(check_roctl(bad, Anchor::at(s), R("O p"), Strategy::Translate), StructureError);
  CHECK_NOTHROW(check_roctl(bad, Anchor::at(s), R("Rb p"), Strategy::Translate, {.require_roctl_structure = false}));
  Structure dead;
  dead.add_world("d");
  CHECK_THROWS_AS(check_roctl(dead, Anchor::at(0), R("p"), Strategy::Translate, {.require_roctl_structure = false}),
                  StructureError);
}
