#include "roctl/tableau.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "roctl/modelcheck.hpp"

namespace roctl {

namespace {

bool closure_less(Formula a, Formula b) {
  if (a->length != b->length) return a->length < b->length;
  return structural_less(a, b);
}

// Automaton operators with an implicit initial set get it spelled out, so
// that A with a single initial state x coincides with A^x.
Formula explicit_automata(Formula f) {
  return rewrite(f, [](Formula g, const std::vector<Formula>& k) -> Formula {
    if (g.op() == Op::Automaton) {
      if (!g->init.empty()) return g;
      return mk_automaton(g->aut, g->aut->initial());
    }
    if (k.empty()) return g;
    return is_binary(g.op()) ? mk_binary(g.op(), k[0], k[1]) : mk_unary(g.op(), k[0]);
  });
}

Formula prepare(Formula f) { return explicit_automata(normalize(f)); }

std::mutex& cf_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

void require_counter_free(Formula f) {
  static std::unordered_map<const Fsa*, bool> memo;
  std::vector<const Fsa*> auts;
  std::unordered_set<const Node*> seen;
  std::function<void(Formula)> walk = [&](Formula g) {
    if (!seen.insert(g.node()).second) return;
    if (g.op() == Op::Automaton) auts.push_back(g->aut.get());
    for (int i = 0; i < g.arity(); ++i) walk(g.child(i));
  };
  walk(f);
  for (const Fsa* a : auts) {
    bool ok;
    {
      std::lock_guard<std::mutex> lock(cf_mutex());
      auto it = memo.find(a);
      if (it != memo.end()) {
        ok = it->second;
      } else {
        ok = is_counter_free(*a);
        memo.emplace(a, ok);
      }
    }
    if (!ok) throw FsaError("embedded automaton " + a->name() + " is not counter-free");
  }
}

bool altl_sat(Formula f) {
  static std::mutex mu;
  static std::unordered_map<const Node*, bool> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(f.node());
    if (it != memo.end()) return it->second;
  }
  require_counter_free(f);
  bool r = path_satisfiable(f);
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(f.node(), r);
  return r;
}

std::vector<Formula> closure(Formula f) {
  Formula g = prepare(f);
  std::set<Formula, StructuralLess> out;
  std::function<void(Formula)> add = [&](Formula h) {
    if (!out.insert(h).second) return;
    for (int i = 0; i < h.arity(); ++i) add(h.child(i));
    if (h.op() == Op::Automaton)
      for (std::size_t x = 0; x < h->aut->num_states(); ++x) add(mk_automaton(h->aut, {static_cast<int>(x)}));
  };
  add(g);
  std::vector<Formula> base(out.begin(), out.end());
  for (Formula h : base)
    if (h.op() != Op::Not) out.insert(mk_not(h));
  std::vector<Formula> cl(out.begin(), out.end());
  std::sort(cl.begin(), cl.end(), closure_less);
  return cl;
}

namespace {

struct Enumerator {
  std::vector<Formula> cl;
  std::unordered_map<const Node*, int> index;
  std::vector<int> base;  // closure indices of non-negation formulas, children first
  bool approximate = false;

  explicit Enumerator(Formula f, bool approx) : cl(closure(f)), approximate(approx) {
    for (std::size_t i = 0; i < cl.size(); ++i) index[cl[i].node()] = static_cast<int>(i);
    for (std::size_t i = 0; i < cl.size(); ++i)
      if (cl[i].op() != Op::Not) base.push_back(static_cast<int>(i));
  }

  int idx(Formula g) const { return index.at(g.node()); }

  // Truth of closure member g under a partial base assignment.
  static bool value(Formula g, const std::unordered_map<const Node*, bool>& v) {
    if (g.op() == Op::Not) return !value(g.child(0), v);
    return v.at(g.node());
  }

  std::vector<FormulaSet> run() {
    std::vector<FormulaSet> states;
    std::unordered_map<const Node*, bool> v;
    std::function<void(std::size_t)> go = [&](std::size_t k) {
      if (k == base.size()) {
        FormulaSet s;
        for (Formula g : cl)
          if (value(g, v)) s.push_back(g);
        std::sort(s.begin(), s.end(), StructuralLess());
        if (approximate || altl_sat(s_and_all(s))) states.push_back(std::move(s));
        return;
      }
      Formula g = cl[static_cast<std::size_t>(base[k])];
      auto choose = [&](bool b) {
        v[g.node()] = b;
        go(k + 1);
        v.erase(g.node());
      };
      switch (g.op()) {
        case Op::True:
          choose(true);
          return;
        case Op::And:
          choose(value(g.child(0), v) && value(g.child(1), v));
          return;
        case Op::Until: {
          bool a = value(g.child(0), v), b = value(g.child(1), v);
          if (b) {
            choose(true);  // S3
          } else if (!a) {
            choose(false);  // S2
          } else {
            choose(false);
            choose(true);
          }
          return;
        }
        case Op::Automaton: {
          Bitset x(g->aut->num_states());
          for (int s : g->init) x.set(static_cast<std::size_t>(s));
          if (g->aut->any_accepting(x)) {
            choose(true);
            return;
          }
          choose(false);
          choose(true);
          return;
        }
        default:
          choose(false);
          choose(true);
          return;
      }
    };
    go(0);
    return states;
  }
};

using Membership = std::vector<bool>;

Membership membership(const std::vector<Formula>& cl, const std::unordered_map<const Node*, int>& index,
                      const FormulaSet& s) {
  Membership m(cl.size());
  for (Formula g : s) m[static_cast<std::size_t>(index.at(g.node()))] = true;
  return m;
}

bool successor(const std::vector<Formula>& cl, const std::unordered_map<const Node*, int>& index,
               const Membership& s, const Membership& t) {
  auto in = [&](const Membership& m, Formula g) {
    auto it = index.find(g.node());
    return it != index.end() && m[static_cast<std::size_t>(it->second)];
  };
  for (std::size_t i = 0; i < cl.size(); ++i) {
    Formula g = cl[i];
    if (g.op() == Op::Next) {
      if (s[i] && !in(t, g.child(0))) return false;  // R1
      if (!s[i] && in(t, g.child(0))) return false;  // R2
    } else if (g.op() == Op::Until) {
      if (s[i] && !in(s, g.child(1)) && !t[i]) return false;  // R3
      if (!s[i] && in(s, g.child(0)) && t[i]) return false;   // R4
    }
  }
  return true;
}

}  // namespace

std::vector<FormulaSet> tableau_states(Formula f) {
  require_counter_free(f);
  return Enumerator(f, false).run();
}

bool temporal_successor(const FormulaSet& s, const FormulaSet& t) {
  std::set<Formula, StructuralLess> ss(s.begin(), s.end()), ts(t.begin(), t.end());
  auto holds = [](const std::set<Formula, StructuralLess>& x, Formula g) { return x.count(g) > 0; };
  for (Formula g : s) {
    if (g.op() == Op::Next && !holds(ts, g.child(0))) return false;
    if (g.op() == Op::Not && g.child(0).op() == Op::Next && holds(ts, g.child(0).child(0))) return false;
    if (g.op() == Op::Until && !holds(ss, g.child(1)) && !holds(ts, g)) return false;
    if (g.op() == Op::Not && g.child(0).op() == Op::Until && holds(ss, g.child(0).child(0)) &&
        holds(ts, g.child(0)))
      return false;
  }
  return true;
}

Tableau build_aphi(Formula f, TableauOptions opt) {
  require_counter_free(f);
  Enumerator en(f, opt.approximate_s4);
  std::vector<FormulaSet> all = en.run();
  const auto& cl = en.cl;
  Formula g = prepare(f);

  // Letter basis: V_f first, then automaton atoms not fixed by T2.
  std::vector<std::string> vf, w;
  for (Formula h : cl)
    if (h.op() == Op::Atom) vf.push_back(h.name());
  std::sort(vf.begin(), vf.end());
  std::set<std::string> wset;
  std::vector<Formula> auts;
  for (Formula h : cl)
    if (h.op() == Op::Automaton) {
      auts.push_back(h);
      for (const auto& a : h->aut->atoms())
        if (!std::binary_search(vf.begin(), vf.end(), a)) wset.insert(a);
    }
  w.assign(wset.begin(), wset.end());
  std::vector<std::string> basis = vf;
  basis.insert(basis.end(), w.begin(), w.end());
  if (basis.size() > kMaxAtoms) throw FsaError("tableau alphabet exceeds 64 atoms");
  auto bit = [&](const std::string& a) {
    return Letter{1} << static_cast<std::size_t>(std::find(basis.begin(), basis.end(), a) - basis.begin());
  };
  Letter vmask = 0, wmask = 0;
  for (const auto& a : vf) vmask |= bit(a);
  for (const auto& a : w) wmask |= bit(a);

  // Per embedded automaton: local bit -> basis bit.
  std::map<const Fsa*, std::vector<Letter>> remap;
  for (Formula h : auts) {
    auto& r = remap[h->aut.get()];
    if (!r.empty()) continue;
    for (const auto& a : h->aut->atoms()) r.push_back(bit(a));
  }
  auto to_basis = [&](const Fsa* a, const Guard& gd) {
    Guard out;
    const auto& r = remap[a];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if ((gd.pos >> i) & 1U) out.pos |= r[i];
      if ((gd.neg >> i) & 1U) out.neg |= r[i];
    }
    return out;
  };
  auto to_local = [&](const Fsa* a, Letter e) {
    Letter out = 0;
    const auto& r = remap[a];
    for (std::size_t i = 0; i < r.size(); ++i)
      if (e & r[i]) out |= Letter{1} << i;
    return out;
  };

  std::vector<Membership> mem;
  for (const auto& s : all) mem.push_back(membership(cl, en.index, s));
  std::vector<Letter> fixed(all.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (const auto& a : vf)
      if (mem[i][static_cast<std::size_t>(en.idx(mk_atom(a)))]) fixed[i] |= bit(a);

  // A^y lookup per automaton.
  std::map<std::pair<const Fsa*, int>, int> single;
  for (Formula h : auts)
    for (std::size_t y = 0; y < h->aut->num_states(); ++y)
      single[{h->aut.get(), static_cast<int>(y)}] = en.idx(mk_automaton(h->aut, {static_cast<int>(y)}));

  auto t34 = [&](const Membership& s, const Membership& t, Letter e) {
    for (Formula h : auts) {
      const Fsa* a = h->aut.get();
      Bitset x(a->num_states());
      for (int q : h->init) x.set(static_cast<std::size_t>(q));
      Bitset y = a->post(x, to_local(a, e));
      bool pos = s[static_cast<std::size_t>(en.idx(h))];
      if (pos) {
        if (a->any_accepting(x)) continue;
        bool ok = false;
        y.for_each([&](std::size_t q) { ok = ok || t[static_cast<std::size_t>(single[{a, static_cast<int>(q)}])]; });
        if (!ok) return false;  // T3
      } else {
        bool bad = false;
        y.for_each([&](std::size_t q) { bad = bad || t[static_cast<std::size_t>(single[{a, static_cast<int>(q)}])]; });
        if (bad) return false;  // T4
      }
    }
    return true;
  };

  std::vector<Transition> trans;
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::vector<Guard> cubes;
    if (wmask == 0) {
      cubes.push_back({});
    } else {
      std::vector<Guard> guards;
      for (Formula h : auts) {
        const Fsa* a = h->aut.get();
        for (int q : h->init)
          for (const auto& tr : a->out(q)) {
            Guard gb = to_basis(a, tr.guard);
            if ((gb.pos & vmask & ~fixed[i]) || (gb.neg & fixed[i])) continue;
            guards.push_back({gb.pos & wmask, gb.neg & wmask});
          }
      }
      cubes = letter_partition(guards, wmask);
    }
    for (const Guard& c : cubes) {
      Letter e = fixed[i] | c.pos;
      Guard gd{fixed[i] | c.pos, (vmask & ~fixed[i]) | c.neg};
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (!successor(cl, en.index, mem[i], mem[j])) continue;
        if (!t34(mem[i], mem[j], e)) continue;
        trans.push_back({static_cast<int>(i), gd, static_cast<int>(j)});
      }
    }
  }

  std::vector<int> initial;
  int root = en.idx(g);
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mem[i][static_cast<std::size_t>(root)]) initial.push_back(static_cast<int>(i));

  std::vector<int> keep(all.size(), -1);
  std::vector<int> order;
  if (opt.reachable_only) {
    std::vector<std::vector<int>> adj(all.size());
    for (const auto& t : trans) adj[static_cast<std::size_t>(t.from)].push_back(t.to);
    std::vector<bool> seen(all.size());
    std::vector<int> stack(initial.rbegin(), initial.rend());
    for (int s : initial) seen[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (int t : adj[static_cast<std::size_t>(s)])
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = true;
          stack.push_back(t);
        }
    }
    for (std::size_t i = 0; i < all.size(); ++i)
      if (seen[i]) order.push_back(static_cast<int>(i));
  } else {
    for (std::size_t i = 0; i < all.size(); ++i) order.push_back(static_cast<int>(i));
  }
  for (std::size_t k = 0; k < order.size(); ++k) keep[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

  Tableau out;
  out.formula = g;
  out.closure = cl;
  out.letters = vf;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < order.size(); ++k) {
    names.push_back("s" + std::to_string(k));
    out.states.push_back(all[static_cast<std::size_t>(order[k])]);
  }
  std::vector<Transition> kept;
  for (const auto& t : trans) {
    int a = keep[static_cast<std::size_t>(t.from)], b = keep[static_cast<std::size_t>(t.to)];
    if (a >= 0 && b >= 0) kept.push_back({a, t.guard, b});
  }
  std::vector<int> init2;
  for (int s : initial) init2.push_back(keep[static_cast<std::size_t>(s)]);
  out.automaton = std::make_shared<Fsa>(basis, names, init2, std::vector<int>{}, kept, Flavor::NoAcceptance);
  return out;
}

bool accepts_pair(const Tableau& t, const Structure& m, const Lasso& pi, std::size_t i, EvalBounds b,
                  const AtomDefinitions& defs) {
  Oracle o(m, b, defs);
  const Fsa& a = *t.automaton;
  Bitset x = a.initial_set();
  for (std::size_t j = 0; j < i && x.any(); ++j) {
    int w = pi.at(j);
    Letter e = 0;
    for (std::size_t k = 0; k < a.atoms().size(); ++k)
      if (o.world(w, mk_atom(a.atoms()[k]))) e |= Letter{1} << k;
    x = a.post(x, e);
  }
  Lasso suffix = pi.suffix(i);
  bool ok = false;
  x.for_each([&](std::size_t s) { ok = ok || o.path(suffix, s_and_all(t.states[s])); });
  return ok;
}

}  // namespace roctl
