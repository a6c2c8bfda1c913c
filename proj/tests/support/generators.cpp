#include "support/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace roctl::testing {

namespace {

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

Structure random_structure(Rng& rng, const StructureGenOptions& opt) {
  const int n = uniform(rng, opt.min_worlds, opt.max_worlds);
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng, opt.edge_probability)) succ[static_cast<std::size_t>(i)].push_back(j);
  // Keep everything reachable from world 0.
  for (int j = 1; j < n; ++j) {
    bool reached = false;
    for (int i = 0; i < j && !reached; ++i)
      reached = std::count(succ[static_cast<std::size_t>(i)].begin(), succ[static_cast<std::size_t>(i)].end(), j) > 0;
    if (!reached) succ[static_cast<std::size_t>(uniform(rng, 0, j - 1))].push_back(j);
  }

  std::vector<std::vector<std::string>> val(static_cast<std::size_t>(n));
  std::vector<bool> viol(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    for (const auto& a : opt.atoms)
      if (coin(rng, 0.5)) val[static_cast<std::size_t>(i)].push_back(a);
    bool sink = succ[static_cast<std::size_t>(i)].empty();
    viol[static_cast<std::size_t>(i)] = !sink && coin(rng, opt.viol_probability);
  }

  // good[i]: world i lacks viol and has a failure-free continuation.
  std::vector<bool> good(static_cast<std::size_t>(n), false);
  for (int i = n - 1; i >= 0; --i) {
    auto& s = succ[static_cast<std::size_t>(i)];
    bool ok = s.empty() || std::any_of(s.begin(), s.end(), [&](int j) { return good[static_cast<std::size_t>(j)]; });
    if (!ok) {
      // Route to some good world further on; the last world is a clean sink.
      std::vector<int> cand;
      for (int j = i + 1; j < n; ++j)
        if (good[static_cast<std::size_t>(j)]) cand.push_back(j);
      int j = cand[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cand.size()) - 1))];
      if (std::find(s.begin(), s.end(), j) == s.end()) s.push_back(j);
    }
    good[static_cast<std::size_t>(i)] = !viol[static_cast<std::size_t>(i)];
  }

  Structure m;
  for (int i = 0; i < n; ++i) {
    auto atoms = val[static_cast<std::size_t>(i)];
    if (viol[static_cast<std::size_t>(i)]) atoms.emplace_back(kViol);
    m.add_world("w" + std::to_string(i), atoms);
  }
  for (int i = 0; i < n; ++i) {
    auto s = succ[static_cast<std::size_t>(i)];
    std::sort(s.begin(), s.end());
    if (s.empty()) m.add_edge(i, i);
    for (int j : s) m.add_edge(i, j);
  }
  m.start = 0;
  m.path = random_fullpath(m, 0, rng);
  return m;
}

Lasso random_fullpath(const Structure& m, int w, Rng& rng) {
  Lasso l;
  for (;;) {
    const auto& s = m.succ(w);
    if (s.size() == 1 && s[0] == w) {
      l.loop.push_back(w);
      return l;
    }
    l.prefix.push_back(w);
    std::vector<int> fwd;
    for (int v : s)
      if (v != w) fwd.push_back(v);
    w = fwd[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(fwd.size()) - 1))];
  }
}

std::vector<Lasso> all_fullpaths(const Structure& m) {
  std::vector<Lasso> out;
  for (std::size_t w = 0; w < m.size(); ++w) {
    auto ls = enumerate_fullpaths(m, static_cast<int>(w), {}, false);
    out.insert(out.end(), ls.begin(), ls.end());
  }
  return out;
}

int robust_nesting(Formula f) {
  int best = 0;
  for (int i = 0; i < f.arity(); ++i) best = std::max(best, robust_nesting(f.child(i)));
  return best + ((f.op() == Op::Robustly || f.op() == Op::Prone) ? 1 : 0);
}

namespace {

Formula gen(Rng& rng, const FormulaGenOptions& opt, int depth, bool ltl_only) {
  if (depth == 0 || coin(rng, 0.25)) {
    if (coin(rng, 0.08)) return mk_true();
    return mk_atom(opt.atoms[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(opt.atoms.size()) - 1))]);
  }
  std::vector<Op> ops = {Op::Not, Op::And, Op::Or, Op::Next, Op::Until, Op::Finally, Op::Globally};
  if (!ltl_only) {
    if (opt.allow_path_quantifiers) ops.insert(ops.end(), {Op::All, Op::Exists});
    if (opt.allow_obligatory) ops.insert(ops.end(), {Op::Obligatory, Op::Permissible});
    if (opt.allow_robust) ops.insert(ops.end(), {Op::Robustly, Op::Prone, Op::Robustly});
  }
  Op op = ops[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(ops.size()) - 1))];
  Formula a = gen(rng, opt, depth - 1, ltl_only);
  if (is_binary(op)) return mk_binary(op, a, gen(rng, opt, depth - 1, ltl_only));
  return mk_unary(op, a);
}

}  // namespace

Formula random_formula(Rng& rng, const FormulaGenOptions& opt) {
  for (;;) {
    Formula f = gen(rng, opt, opt.max_depth, false);
    if (f.op() == Op::Atom || f.op() == Op::True) continue;
    if (dag_size(normalize(f)) > opt.max_closure) continue;
    if (robust_nesting(f) > opt.max_robust_nesting) continue;
    return f;
  }
}

Formula random_ltl(Rng& rng, std::vector<std::string> atoms, int max_depth) {
  FormulaGenOptions opt;
  opt.atoms = std::move(atoms);
  return gen(rng, opt, max_depth, true);
}

namespace {

std::vector<std::string> atom_names(int k) {
  std::vector<std::string> v;
  for (int i = 0; i < k; ++i) v.push_back(std::string(1, static_cast<char>('a' + i)));
  return v;
}

std::vector<std::string> state_names(int n) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back("s" + std::to_string(i));
  return v;
}

}  // namespace

Fsa random_counter_free_fsa(Rng& rng, int max_states, int max_atoms) {
  for (;;) {
    int n = uniform(rng, 1, max_states), k = uniform(rng, 1, max_atoms);
    std::vector<Transition> ts;
    for (int s = 0; s < n; ++s) {
      for (Letter e = 0; e < (Letter{1} << k); ++e)
        for (int t = 0; t < n; ++t)
          if (coin(rng, 0.35)) ts.push_back({s, exact_guard(e, static_cast<std::size_t>(k)), t});
      // Occasionally a cube guard on a single atom.
      if (k == 2 && coin(rng, 0.3)) ts.push_back({s, Guard{1, 0}, uniform(rng, 0, n - 1)});
    }
    std::vector<int> init = {0}, acc;
    if (n > 1 && coin(rng, 0.3)) init.push_back(uniform(rng, 1, n - 1));
    for (int s = 0; s < n; ++s)
      if (coin(rng, 0.4)) acc.push_back(s);
    std::sort(init.begin(), init.end());
    init.erase(std::unique(init.begin(), init.end()), init.end());
    Fsa a(atom_names(k), state_names(n), init, acc, ts);
    if (is_counter_free(a)) return a;
  }
}

Fsa random_counter_free_dfa(Rng& rng, int max_states, int max_atoms) {
  for (;;) {
    int n = uniform(rng, 1, max_states), k = uniform(rng, 1, max_atoms);
    std::vector<Transition> ts;
    for (int s = 0; s < n; ++s)
      for (Letter e = 0; e < (Letter{1} << k); ++e)
        ts.push_back({s, exact_guard(e, static_cast<std::size_t>(k)), uniform(rng, 0, n - 1)});
    std::vector<int> acc;
    for (int s = 0; s < n; ++s)
      if (coin(rng, 0.5)) acc.push_back(s);
    Fsa a(atom_names(k), state_names(n), {0}, acc, ts);
    if (is_counter_free(a)) return a;
  }
}

Duplicated duplicated_variant(const Structure& m, Rng& rng) {
  Duplicated d;
  const int n = static_cast<int>(m.size());
  for (int w = 0; w < n; ++w) {
    d.copy_of.push_back(d.m.add_world(m.world(w).id + "a", m.world(w).atoms));
    d.m.add_world(m.world(w).id + "b", m.world(w).atoms);
  }
  for (int u = 0; u < n; ++u) {
    for (int v : m.succ(u)) {
      for (int cu = 0; cu < 2; ++cu) {
        int from = d.copy_of[static_cast<std::size_t>(u)] + cu;
        int base = d.copy_of[static_cast<std::size_t>(v)];
        if (u == v) {
          d.m.add_edge(from, from);
          continue;
        }
        int pick = uniform(rng, 1, 3);  // bit 0: copy a, bit 1: copy b
        if (pick & 1) d.m.add_edge(from, base);
        if (pick & 2) d.m.add_edge(from, base + 1);
      }
    }
  }
  if (m.start) d.m.start = d.copy_of[static_cast<std::size_t>(*m.start)];
  return d;
}

Lasso lift_lasso(const Structure& m, const Duplicated& d, const Lasso& l) {
  (void)m;
  // Follow edges of the variant, preferring copy a.
  Lasso out;
  std::size_t total = l.positions();
  std::vector<int> seq;
  int cur = d.copy_of[static_cast<std::size_t>(l.at(0))];
  seq.push_back(cur);
  for (std::size_t j = 1; j < total; ++j) {
    int base = d.copy_of[static_cast<std::size_t>(l.at(j))];
    cur = d.m.has_edge(cur, base) ? base : base + 1;
    seq.push_back(cur);
  }
  // On exact-enumerable inputs the loop is a single self-looping sink.
  for (std::size_t j = 0; j < total; ++j) (j < l.prefix.size() ? out.prefix : out.loop).push_back(seq[j]);
  if (!valid_lasso(d.m, out)) throw StructureError("lifted lasso is not a fullpath of the variant");
  return out;
}

const std::vector<std::string>& corpus_formulas() {
  static const std::vector<std::string> v = {
      "p",
      "N p",
      "G p",
      "p U q",
      "~(p U q)",
      "O p",
      "O N p",
      "N O p",
      "P G ~p",
      "Rb p",
      "Rb N p",
      "Rb G p",
      "Rb F q",
      "Pn N p",
      "Pn G ~q",
      "O Rb F p",
      "A G (p -> Rb N p)",
      "E (p U Rb q)",
      "Rb G p -> G Rb p",
      "G Rb p -> Rb G p",
      "O (p U q) & Pn N ~q",
      "A F Rb p",
  };
  return v;
}

std::vector<Word> all_words(std::size_t natoms, std::size_t k) {
  std::vector<Word> out = {Word{}};
  std::size_t from = 0;
  for (std::size_t len = 1; len <= k; ++len) {
    std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (Letter e = 0; e < (Letter{1} << natoms); ++e) {
        Word w = out[i];
        w.push_back(e);
        out.push_back(std::move(w));
      }
    from = to;
  }
  return out;
}

std::string data_dir() { return ROCTL_DATA_DIR; }

}  // namespace roctl::testing
