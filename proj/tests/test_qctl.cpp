#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <set>

#include "roctl/check.hpp"
#include "roctl/corpus.hpp"
#include "roctl/modelcheck.hpp"
#include "roctl/oracle.hpp"
#include "roctl/qctl.hpp"
#include "support/generators.hpp"

using namespace roctl;

namespace {

Formula P(const std::string& s) { return parse_formula(s, Dialect::RoctlStar); }
Formula Q(const std::string& s) { return parse_formula(s, Dialect::QctlStar, {.allow_reserved = true}); }

// Every quantified atom occurs only below its own quantifier.
bool well_scoped(Formula f, std::set<std::string> bound = {}) {
  if (f.op() == Op::Atom)
    return f.name().rfind(kFreshVarPrefix, 0) != 0 || bound.count(f.name());
  if (f.op() == Op::Forall) bound.insert(f.name());
  for (int i = 0; i < f.arity(); ++i)
    if (!well_scoped(f.child(i), bound)) return false;
  return true;
}

}  // namespace

TEST_CASE("obligatory clause") {
  CHECK(translate_O(P("p")) == Q("A((N G ~viol) -> p)"));
  CHECK(translate_O(mk_true()) == Q("A((N G ~viol) -> true)"));
  // Measured constant overhead.
  testing::Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    Formula f = testing::random_formula(rng);
    CHECK(length(translate_O(f)) == length(f) + 5);
  }
}

TEST_CASE("prone clause") {
  FreshVarSource v;
  Formula t = translate_prone(P("p"), v);
  REQUIRE(t.op() == Op::Forall);
  std::string y = t.name();
  CHECK(y.rfind(kFreshVarPrefix, 0) == 0);
  CHECK(t == Q("forall " + y + " . (G " + y + " -> E((G " + y + " | F(" + y + " & N N G ~viol)) & p))"));
  CHECK(no_failure_after_next() == Q("N N G ~viol"));

  Formula nested = translate_prone(translate_prone(P("p"), v), v);
  CHECK(nested.name() != y);
  CHECK(nested.name() != t.name());
}

TEST_CASE("fresh names avoid the input") {
  FreshVarSource v({"qv_0", "qv_1"});
  CHECK(v.next() == "qv_2");
  CHECK(v.next() == "qv_3");
}

TEST_CASE("structural translation") {
  CHECK(to_qctl(P("O p")) == Q("A((N G ~viol) -> p)"));
  CHECK(to_qctl(P("p & N q")) == P("p & N q"));
  Formula rb = to_qctl(P("Rb p"));
  REQUIRE(rb.op() == Op::Not);
  std::string y = rb.child().name();
  CHECK(rb == Q("~forall " + y + " . (G " + y + " -> E((G " + y + " | F(" + y + " & N N G ~viol)) & ~p))"));
  CHECK(in_dialect(to_qctl(P("O Rb F p & Pn G q")), Dialect::QctlStar));
  CHECK_THROWS_AS(to_qctl(mk_atom(kViol)), DialectError);
}

TEST_CASE("sat wrapper") {
  CHECK(qctl_sat_wrapper(mk_true()) == Q("A G E N ~viol & true"));
  CHECK(qctl_sat_wrapper(P("O p")) == Q("A G E N ~viol & A((N G ~viol) -> p)"));
  testing::Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    Formula f = testing::random_formula(rng);
    CHECK(length(qctl_sat_wrapper(f)) == length(to_qctl(f)) + 6);
  }
}

TEST_CASE("linear size and scoping") {
  std::vector<Formula> fs;
  for (const auto& s : testing::corpus_formulas()) fs.push_back(P(s));
  testing::Rng rng(3);
  testing::FormulaGenOptions opt;
  opt.max_depth = 6;
  opt.max_closure = 40;
  opt.max_robust_nesting = 4;
  for (int k = 0; k < 1000; ++k) fs.push_back(testing::random_formula(rng, opt));
  for (Formula f : fs) {
    Formula t = to_qctl(f);
    CHECK(length(t) <= 24 * length(f));
    CHECK(well_scoped(t));
  }
}

TEST_CASE("obligatory fragment agrees with the oracle") {
  // Without Robustly the translation is plain CTL*.
  testing::Rng rng(4);
  testing::FormulaGenOptions opt;
  opt.allow_robust = false;
  for (int k = 0; k < 40; ++k) {
    Structure m = testing::random_structure(rng);
    Formula f = testing::random_formula(rng, opt);
    Formula t = to_qctl(f);
    REQUIRE(in_dialect(t, Dialect::CtlStar));
    Oracle o(m);
    ModelChecker mc(m);
    for (std::size_t w = 0; w < m.size(); ++w) CHECK(o.world(static_cast<int>(w), f) == mc.state(static_cast<int>(w), t));
  }
}
