#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "roctl/tableau.hpp"
#include "support/generators.hpp"

using namespace roctl;

namespace {

Formula P(const std::string& s) { return parse_formula(s, Dialect::Altl); }

std::set<Formula, StructuralLess> as_set(const std::vector<Formula>& v) { return {v.begin(), v.end()}; }

FormulaSet fs(std::vector<Formula> v) {
  std::sort(v.begin(), v.end(), StructuralLess{});
  return v;
}

}  // namespace

TEST_CASE("closure") {
  Formula p = P("p"), np = P("N p");
  CHECK(as_set(closure(p)) == std::set<Formula, StructuralLess>{p, mk_not(p)});
  CHECK(as_set(closure(np)) == std::set<Formula, StructuralLess>{np, mk_not(np), p, mk_not(p)});

  auto fsa = std::make_shared<Fsa>(std::vector<std::string>{"p"}, std::vector<std::string>{"x", "y"},
                                   std::vector<int>{0}, std::vector<int>{1},
                                   std::vector<Transition>{{0, Guard{1, 0}, 1}, {1, Guard{}, 1}});
  auto cl = as_set(closure(mk_automaton(fsa)));
  for (int x : {0, 1}) {
    CHECK(cl.count(mk_automaton(fsa, {x})));
    CHECK(cl.count(mk_not(mk_automaton(fsa, {x}))));
  }
}

TEST_CASE("tableau states") {
  CHECK(tableau_states(P("p")).size() == 2);
  CHECK(tableau_states(P("p U q")).size() == 5);
  Tableau contradiction = build_aphi(P("p & ~p"));
  CHECK(contradiction.automaton->initial().empty());
  for (const char* s : {"N p", "G p", "p U q", "F (p & N q)"}) {
    Formula f = P(s);
    CHECK(tableau_states(f).size() <= (std::size_t{1} << closure(f).size()));
  }
}

TEST_CASE("temporal successor") {
  Formula p = P("p"), q = P("q"), np = P("N p"), u = P("p U q");
  CHECK(temporal_successor(fs({np, p}), fs({p})));
  CHECK_FALSE(temporal_successor(fs({np, p}), fs({mk_not(p)})));
  CHECK_FALSE(temporal_successor(fs({u, p, mk_not(q)}), fs({mk_not(u), mk_not(p), mk_not(q)})));
  CHECK(temporal_successor(fs({p}), fs({mk_not(p)})));
}

TEST_CASE("tableau automaton") {
  Tableau t = build_aphi(P("p"));
  CHECK(t.automaton->num_states() == 2);
  CHECK(t.automaton->flavor() == Flavor::NoAcceptance);
  CHECK(t.letters == std::vector<std::string>{"p"});
  for (const Transition& tr : t.automaton->transitions()) {
    // The letter read must agree with the state being left.
    const FormulaSet& from = t.states[static_cast<std::size_t>(tr.from)];
    bool has_p = std::count(from.begin(), from.end(), P("p")) > 0;
    CHECK(tr.guard == (has_p ? Guard{1, 0} : Guard{0, 1}));
  }
  for (const char* s : {"N p", "G p", "p U q", "~(p U q)", "F G p"}) CHECK(is_counter_free(*build_aphi(P(s)).automaton));
}

TEST_CASE("pair acceptance equals path truth") {
  testing::Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    Structure m = testing::random_structure(rng);
    Oracle o(m);
    for (const char* s : {"p U q", "p", "G (p | N q)"}) {
      Formula f = P(s);
      Tableau t = build_aphi(f);
      for (const Lasso& pi : testing::all_fullpaths(m))
        for (std::size_t i = 0; i <= 4; ++i) CHECK(accepts_pair(t, m, pi, i) == o.path(pi, f));
    }
  }
}

TEST_CASE("pair acceptance with an embedded automaton") {
  // Some prefix reaches a letter with q.
  auto fsa = std::make_shared<Fsa>(std::vector<std::string>{"q"}, std::vector<std::string>{"x", "y"},
                                   std::vector<int>{0}, std::vector<int>{1},
                                   std::vector<Transition>{{0, Guard{0, 1}, 0}, {0, Guard{1, 0}, 1}, {1, Guard{}, 1}});
  Formula f = mk_and(mk_atom("p"), mk_next(mk_automaton(fsa)));
  Tableau t = build_aphi(f);
  testing::Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    Structure m = testing::random_structure(rng);
    Oracle o(m);
    for (const Lasso& pi : testing::all_fullpaths(m))
      for (std::size_t i = 0; i <= 3; ++i) CHECK(accepts_pair(t, m, pi, i) == o.path(pi, f));
  }
}

TEST_CASE("successor states entail their predecessors") {
  testing::Rng rng(4);
  Formula f = P("p U (q & N p)");
  Tableau t = build_aphi(f, {.reachable_only = false});
  const Fsa& a = *t.automaton;
  for (int k = 0; k < 10; ++k) {
    Structure m = testing::random_structure(rng);
    Oracle o(m);
    for (const Lasso& pi : testing::all_fullpaths(m))
      for (std::size_t j = 0; j < 3; ++j) {
        Letter e = a.letter_of(m.world(pi.at(j)).atoms);
        for (const Transition& tr : a.transitions()) {
          if (!tr.guard.matches(e)) continue;
          bool later = o.path(pi.suffix(j + 1), s_and_all(t.states[static_cast<std::size_t>(tr.to)]));
          bool now = o.path(pi.suffix(j), s_and_all(t.states[static_cast<std::size_t>(tr.from)]));
          if (later) CHECK(now);
        }
      }
  }
}

TEST_CASE("ALTL satisfiability") {
  CHECK_FALSE(altl_sat(P("p & ~p")));
  CHECK_FALSE(altl_sat(P("G p & F ~p")));
  CHECK(altl_sat(P("p U q")));
  CHECK(altl_sat(P("G F p & G F ~p")));
}

TEST_CASE("counter-freeness is required") {
  auto mod2 = std::make_shared<Fsa>(std::vector<std::string>{"p"}, std::vector<std::string>{"a", "b"},
                                    std::vector<int>{0}, std::vector<int>{0},
                                    std::vector<Transition>{{0, Guard{1, 0}, 1}, {1, Guard{1, 0}, 0}});
  CHECK_THROWS_AS(require_counter_free(mk_automaton(mod2)), FsaError);
  CHECK_THROWS_AS(build_aphi(mk_automaton(mod2)), FsaError);
}
