#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "roctl/oracle.hpp"
#include "roctl/succinct.hpp"

using namespace roctl;

namespace {

std::set<std::string> atoms_at(const Structure& m, const std::string& id) {
  const auto& a = m.world(m.require(id)).atoms;
  return {a.begin(), a.end()};
}

}  // namespace

TEST_CASE("counting and enumeration") {
  CHECK(count_utrees(0, 1) == 2);
  CHECK(count_utrees(0, 2) == 4);
  CHECK(count_utrees(1, 2) == 6);
  CHECK(count_utrees(2, 2) == 20);
  CHECK(count_utrees(2, 2) >= 8);
  for (auto [h, l] : {std::pair{0, 2}, {1, 2}, {2, 2}, {1, 1}, {2, 1}}) {
    auto ts = enum_utrees(h, l);
    CHECK(ts.size() == count_utrees(h, l));
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(valid_utree(ts[i], l));
      CHECK(ts[i].height() == h);
      for (std::size_t j = i + 1; j < ts.size(); ++j) CHECK_FALSE(isomorphic(ts[i], ts[j]));
      if (i > 0) CHECK(ts[i - 1].canonical() < ts[i].canonical());
    }
  }
  // Binomial lower bound for the next level.
  for (int h = 0; h <= 1; ++h) {
    std::uint64_t n = count_utrees(h, 2);
    CHECK(count_utrees(h + 1, 2) >= (std::uint64_t{1} << (n / 2)));
  }
  CHECK_THROWS_AS(count_utrees(3, 2), SuccinctError);
  CHECK_THROWS_AS(enum_utrees(3, 2), SuccinctError);
}

TEST_CASE("isomorphism") {
  Utree a = make_node({make_leaf({1, 2}), make_leaf({2})});
  Utree b = make_node({make_leaf({2}), make_leaf({1, 2})});
  CHECK(isomorphic(a, a));
  CHECK(isomorphic(a, b));
  CHECK_FALSE(isomorphic(make_leaf({1}), make_leaf({2})));
  CHECK(a.canonical() == "1[{1,2} {2}]");
  CHECK(valid_utree(a, 2));
  CHECK_FALSE(valid_utree(make_node({make_leaf({1}), make_leaf({1})}), 2));
}

TEST_CASE("prefix encoding") {
  Structure m = prefix_encode(make_leaf({1}));
  CHECK(m.size() == 3);
  CHECK(atoms_at(m, "w0") == std::set<std::string>{enc::kOpen, enc::height(0), enc::marker(1), enc::letter(1)});
  CHECK(atoms_at(m, "w1") == std::set<std::string>{enc::kClose, enc::height(0)});
  CHECK(atoms_at(m, "wZ").empty());
  CHECK(m.succ(m.require("wZ")).empty());

  Utree ex = make_node({make_leaf({1, 2}), make_leaf({2})});
  Structure e = prefix_encode(ex);
  CHECK(e.size() == 2 * ex.nodes() + 1);
  CHECK(atoms_at(e, "w0").count(enc::kOpen));
  CHECK(atoms_at(e, "w0").count(enc::height(1)));
  CHECK(atoms_at(e, "w5").count(enc::kClose));
  CHECK(atoms_at(e, "w5").count(enc::height(1)));
  // Chain order.
  for (int i = 0; i + 1 < 6; ++i)
    CHECK(e.has_edge(e.require("w" + std::to_string(i)), e.require("w" + std::to_string(i + 1))));
  CHECK(e.has_edge(e.require("w5"), e.require("wZ")));
}

TEST_CASE("suffix encoding") {
  Structure m = suffix_encode(make_leaf({1}));
  CHECK(atoms_at(m, "n1") == std::set<std::string>{std::string(kViol)});
  CHECK(atoms_at(m, "n1p") == std::set<std::string>{enc::letter(1), enc::final_height(0)});
  CHECK(m.has_edge(m.require("n1"), m.require("n1p")));
  CHECK(m.has_edge(m.require("n1p"), m.require("nZ")));
  CHECK(m.has_edge(m.require("nZ"), m.require("nZ")));

  Utree ex = make_node({make_leaf({1, 2}), make_leaf({2})});
  Structure s = suffix_encode(ex);
  for (const World& w : s.worlds()) {
    bool node = w.id != "nZ" && w.id.back() != 'p';
    CHECK(std::count(w.atoms.begin(), w.atoms.end(), std::string(kViol)) == (node ? 1 : 0));
    if (node) {
      CHECK(s.has_edge(s.require(w.id), s.require(w.id + "p")));
      CHECK(s.has_edge(s.require(w.id + "p"), s.require("nZ")));
    }
  }
}

TEST_CASE("joined structures") {
  auto ts = enum_utrees(1, 2);
  for (const Utree& t : ts)
    for (const Utree& t2 : ts) {
      Structure j = join(t, t2);
      auto d = validate_structure(j);
      CHECK(d.serial());
      CHECK(exactness_certificate(j));
      CHECK(enumerate_fullpaths(j, j.require("w0"), {}, false).size() == t2.nodes());
      // Everything from the tree root on has a failure-free continuation.
      for (const World& w : j.worlds())
        if (w.id[0] == 'n') CHECK(!enumerate_fullpaths(j, j.require(w.id), {}, true).empty());
      Lasso p = designated_path(j);
      CHECK(valid_lasso(j, p));
      CHECK(p.at(0) == j.require("w0"));
      CHECK(p.loop == std::vector<int>{j.require("nZ")});
    }
}

TEST_CASE("formula families") {
  CHECK(render_formula(formula_f(0, 1)) == "(b1 -> (F(hf0 & b1))) & (~b1 -> (F(hf0 & ~b1)))");
  CHECK(formula_f(0, 0) == mk_true());
  std::uint64_t d = length(formula_f(1, 2)) - length(formula_f(0, 2));
  for (int h = 2; h <= 5; ++h) CHECK(length(formula_f(h, 2)) - length(formula_f(h - 1, 2)) == d);
  CHECK(contains_op(formula_fprime(1, 2), Op::WeakUntil));
  CHECK_FALSE(contains_op(formula_f(1, 2), Op::WeakUntil));
  CHECK(in_dialect(formula_f(2, 2), Dialect::RoctlStar));
}

TEST_CASE("formula recognises isomorphic pairs") {
  for (auto [h, l] : {std::pair{0, 1}, {0, 2}, {1, 1}}) {
    ExperimentReport r = experiment(h, l);
    CHECK(r.agrees());
    CHECK(r.positives(r.oracle) == r.trees.size());
  }
  ExperimentReport fp = experiment(1, 1, {.family = Family::FPrime});
  CHECK(fp.agrees());
  ExperimentReport tr = experiment(1, 1, {.strategy = Strategy::Translate});
  CHECK(tr.agrees());
}

TEST_CASE("anchoring away from the start falsifies f") {
  auto ts = enum_utrees(1, 1);
  Structure j = join(ts[0], ts[0]);
  Lasso p = designated_path(j);
  Formula f = formula_f(1, 1);
  CHECK(eval_path(j, p, f));
  for (std::size_t k = 1; k < p.positions(); ++k) CHECK_FALSE(eval_path(j, p.suffix(k), f));
}

TEST_CASE("report output") {
  ExperimentReport r = experiment(0, 2, {.run_checker = false});
  CHECK(r.checker.empty());
  auto j = r.to_json();
  CHECK(j.at("trees").size() == 4);
  CHECK(r.to_text().find("verdict") != std::string::npos);
}
