#include "roctl/dfa2ltl.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace roctl {

namespace {

constexpr const char* kHole = "$H";

Formula hole() { return mk_atom(kHole); }
Formula or_(Formula a, Formula b) { return s_not(s_and(s_not(a), s_not(b))); }
Formula eventually(Formula a) { return s_until(mk_true(), a); }
Formula always(Formula a) { return s_not(eventually(s_not(a))); }

void add(std::map<Behavior, Formula>& m, const Behavior& k, Formula f) {
  auto [it, fresh] = m.emplace(k, f);
  if (!fresh) it->second = or_(it->second, f);
}

// Apply `first`, then `second`. Undefined entries stay undefined.
Behavior compose(const Behavior& first, const Behavior& second) {
  Behavior r(first.size(), -1);
  for (std::size_t q = 0; q < first.size(); ++q)
    if (first[q] >= 0) r[q] = second[static_cast<std::size_t>(first[q])];
  return r;
}

// DFA over abstract letters. States are a subset of a global numbering;
// behaviours are indexed by global state and are -1 outside `states`.
struct Abstract {
  std::vector<int> states;
  std::vector<std::string> atoms;  // one atom per letter
  std::vector<Behavior> maps;
};

struct Translation {
  std::map<Behavior, Formula> theta;  // finite words with behaviour α
  std::map<Behavior, Formula> ex;     // some prefix has behaviour α, hole after it
};

std::set<Behavior> monoid(const std::vector<Behavior>& letters) {
  std::set<Behavior> seen(letters.begin(), letters.end());
  std::vector<Behavior> todo(seen.begin(), seen.end());
  while (!todo.empty()) {
    Behavior m = std::move(todo.back());
    todo.pop_back();
    for (const auto& l : letters) {
      Behavior c = compose(m, l);
      if (seen.insert(c).second) todo.push_back(std::move(c));
    }
  }
  return seen;
}

class Wilke {
 public:
  explicit Wilke(std::size_t n) : n_(n) {}

  const Translation& solve(const Abstract& a, int level) {
    std::string key = std::to_string(level) + "|";
    for (int q : a.states) key += std::to_string(q) + ",";
    for (std::size_t i = 0; i < a.atoms.size(); ++i) {
      key += "|" + a.atoms[i] + ":";
      for (int q : a.states) key += std::to_string(a.maps[i][static_cast<std::size_t>(q)]) + ",";
    }
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Translation t = compute(a, level);
    return memo_.emplace(std::move(key), std::move(t)).first->second;
  }

 private:
  Behavior identity(const Abstract& a) const {
    Behavior id(n_, -1);
    for (int q : a.states) id[static_cast<std::size_t>(q)] = q;
    return id;
  }

  Translation compute(const Abstract& a, int level) {
    Translation out;
    if (a.atoms.empty()) return out;
    Behavior id = identity(a);

    int b = -1;
    for (std::size_t i = 0; i < a.maps.size(); ++i) {
      std::set<int> image;
      for (int q : a.states) image.insert(a.maps[i][static_cast<std::size_t>(q)]);
      if (image.size() < a.states.size()) {
        if (b < 0) b = static_cast<int>(i);
      } else if (a.maps[i] != id) {
        throw FsaError("automaton is not counter-free: a letter permutes its states");
      }
    }
    if (b < 0) {
      out.theta[id] = mk_true();
      out.ex[id] = eventually(mk_next(hole()));
      return out;
    }

    const Behavior& bmap = a.maps[static_cast<std::size_t>(b)];
    Formula bf = mk_atom(a.atoms[static_cast<std::size_t>(b)]);
    Formula nb = s_not(bf);

    Abstract rb;
    rb.states = a.states;
    for (std::size_t i = 0; i < a.atoms.size(); ++i)
      if (static_cast<int>(i) != b) {
        rb.atoms.push_back(a.atoms[i]);
        rb.maps.push_back(a.maps[i]);
      }
    const Translation tb = solve(rb, level);

    // Relativise to the maximal b-free segment starting here. The hole
    // refers to the unrestricted word and is left alone.
    std::unordered_map<const Node*, Formula> rel_memo;
    std::function<Formula(Formula)> rel = [&](Formula f) -> Formula {
      auto it = rel_memo.find(f.node());
      if (it != rel_memo.end()) return it->second;
      Formula r;
      switch (f.op()) {
        case Op::True:
        case Op::False:
        case Op::Atom:
          r = f;
          break;
        case Op::Not:
          r = s_not(rel(f.child(0)));
          break;
        case Op::And:
          r = s_and(rel(f.child(0)), rel(f.child(1)));
          break;
        case Op::Next:
          r = f.child(0) == hole() ? f : s_next(s_and(nb, rel(f.child(0))));
          break;
        case Op::Until:
          r = s_until(s_and(nb, rel(f.child(0))), s_and(nb, rel(f.child(1))));
          break;
        default:
          throw FsaError("unexpected operator in generated formula");
      }
      rel_memo.emplace(f.node(), r);
      return r;
    };

    // Behaviours of possibly empty b-free words, with the formula saying the
    // segment starting here has that behaviour (E: the segment is empty).
    std::vector<std::pair<Behavior, Formula>> pre{{id, bf}};
    for (const auto& [beta, th] : tb.theta) pre.emplace_back(beta, s_and(nb, rel(th)));

    // Quotient over b-terminated blocks, on the image of b.
    Abstract qc;
    {
      std::set<int> image;
      for (int q : a.states) image.insert(bmap[static_cast<std::size_t>(q)]);
      qc.states.assign(image.begin(), image.end());
    }
    std::map<Behavior, std::size_t> group;
    std::vector<Formula> blk;
    for (const auto& [beta, f] : pre) {
      Behavior c(n_, -1);
      for (int q : qc.states) c[static_cast<std::size_t>(q)] = bmap[static_cast<std::size_t>(beta[static_cast<std::size_t>(q)])];
      auto [g, fresh] = group.emplace(c, blk.size());
      if (fresh) {
        qc.atoms.push_back("$L" + std::to_string(level + 1) + "_" + std::to_string(blk.size()));
        qc.maps.push_back(c);
        blk.push_back(f);
      } else {
        blk[g->second] = or_(blk[g->second], f);
      }
    }
    std::map<std::string, Formula> blk_of;
    for (std::size_t j = 0; j < blk.size(); ++j) blk_of.emplace(qc.atoms[j], blk[j]);
    const Translation tc = solve(qc, level + 1);

    // Block-level formulas, read at the start of a complete block.
    Formula more = eventually(bf);
    std::unordered_map<const Node*, Formula> t_memo;
    std::function<Formula(Formula)> lift = [&](Formula f) -> Formula {
      auto it = t_memo.find(f.node());
      if (it != t_memo.end()) return it->second;
      Formula r;
      switch (f.op()) {
        case Op::True:
        case Op::False:
          r = f;
          break;
        case Op::Atom: {
          auto k = blk_of.find(f.name());
          if (k == blk_of.end()) throw FsaError("unexpected atom in block formula");
          r = k->second;
          break;
        }
        case Op::Not:
          r = s_not(lift(f.child(0)));
          break;
        case Op::And:
          r = s_and(lift(f.child(0)), lift(f.child(1)));
          break;
        case Op::Next:
          if (f.child(0) == hole())
            r = s_until(nb, s_and(bf, mk_next(hole())));
          else
            r = s_until(nb, s_and(bf, s_next(s_and(more, lift(f.child(0))))));
          break;
        case Op::Until: {
          Formula x = lift(f.child(0)), y = lift(f.child(1));
          Formula step = s_until(s_implies_core(bf, s_next(x)), s_and(bf, s_next(s_and(more, y))));
          r = or_(y, s_and(x, step));
          break;
        }
        default:
          throw FsaError("unexpected operator in block formula");
      }
      t_memo.emplace(f.node(), r);
      return r;
    };

    // Exactly the words without b.
    for (const auto& [beta, th] : tb.theta) add(out.theta, beta, s_and(th, always(nb)));
    for (const auto& [beta, ex] : tb.ex) add(out.ex, beta, s_and(nb, rel(ex)));

    // Suffix after the last b: empty, or a nonempty b-free rest.
    std::vector<std::pair<Behavior, Formula>> post{{id, s_not(mk_next(mk_true()))}};
    for (const auto& [beta, th] : tb.theta) post.emplace_back(beta, s_next(s_and(nb, s_and(th, always(nb)))));
    // Prefix ending right after the first b, or after a b-free stretch past it.
    std::vector<std::pair<Behavior, Formula>> stop{{id, mk_next(hole())}};
    std::vector<std::pair<Behavior, Formula>> stop_blk{{id, hole()}};
    for (const auto& [beta, ex] : tb.ex) {
      stop.emplace_back(beta, s_next(s_and(nb, rel(ex))));
      stop_blk.emplace_back(beta, s_and(nb, rel(ex)));
    }

    auto through_b = [&](const Behavior& beta) { return compose(beta, bmap); };

    // One b.
    for (const auto& [beta, p] : pre) {
      Behavior bb = through_b(beta);
      for (const auto& [beta2, q] : post) add(out.theta, compose(bb, beta2), s_and(p, s_until(nb, s_and(bf, q))));
      for (const auto& [beta2, q] : stop) add(out.ex, compose(bb, beta2), s_and(p, s_until(nb, s_and(bf, q))));
    }

    // Two or more b: first b, then blocks, then the tail after the last b.
    std::map<Behavior, Formula> mid, mid_ex;
    for (const auto& [gamma, th] : tc.theta) {
      Formula blocks = s_until(nb, s_and(bf, s_next(s_and(more, lift(th)))));
      for (const auto& [beta2, q] : post) add(mid, compose(gamma, beta2), s_and(blocks, eventually(s_and(bf, q))));
    }
    for (const auto& [gamma, ex] : tc.ex) {
      Formula lifted = lift(ex);
      for (const auto& [beta2, z] : stop_blk)
        add(mid_ex, compose(gamma, beta2), s_next(s_and(more, substitute(lifted, {{kHole, z}}))));
    }
    for (const auto& [beta, p] : pre) {
      Behavior bb = through_b(beta);
      for (const auto& [kappa, m] : mid) add(out.theta, compose(bb, kappa), s_and(p, m));
      for (const auto& [kappa, m] : mid_ex) add(out.ex, compose(bb, kappa), s_and(p, s_until(nb, s_and(bf, m))));
    }
    return out;
  }

  static Formula s_implies_core(Formula a, Formula b) { return or_(s_not(a), b); }

  std::size_t n_;
  std::map<std::string, Translation> memo_;
};

Formula cube_formula(const std::vector<std::string>& atoms, const Guard& g) {
  Formula r = mk_true();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if ((g.pos >> i) & 1U) r = s_and(r, mk_atom(atoms[i]));
    if ((g.neg >> i) & 1U) r = s_and(r, s_not(mk_atom(atoms[i])));
  }
  return r;
}

Letter full_mask(std::size_t n) { return n >= 64 ? ~Letter{0} : (Letter{1} << n) - 1; }

// Deterministic complete DFA with letters grouped by behaviour.
struct Compact {
  std::size_t n = 0;
  int initial = 0;
  std::vector<Formula> letter;  // predicate over the real atoms
  std::vector<Behavior> maps;
  std::vector<int> label;       // acceptance or any other per-state label
};

int successor(const Fsa& d, int q, Letter e) {
  for (const auto& t : d.out(q))
    if (t.guard.matches(e)) return t.to;
  throw FsaError("automaton is not complete");
}

// `label` classifies states of `d`; states with different labels are never merged.
Compact compact(const Fsa& d, const std::vector<int>& label, bool reachable_only, bool minimize) {
  if (!is_deterministic(d) || !is_complete(d)) throw FsaError("a deterministic complete automaton is required");
  std::vector<Guard> guards;
  for (const auto& t : d.transitions()) guards.push_back(t.guard);
  std::vector<Guard> cubes = letter_partition(guards, full_mask(d.atoms().size()));

  std::size_t n = d.num_states();
  std::vector<Behavior> cube_maps;
  for (const Guard& c : cubes) {
    Behavior m(n);
    for (std::size_t q = 0; q < n; ++q) m[q] = successor(d, static_cast<int>(q), c.pos);
    cube_maps.push_back(std::move(m));
  }

  std::vector<int> keep;
  if (reachable_only) {
    std::vector<bool> seen(n);
    std::vector<int> stack{d.initial()[0]};
    seen[static_cast<std::size_t>(stack[0])] = true;
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (const auto& m : cube_maps) {
        int r = m[static_cast<std::size_t>(q)];
        if (!seen[static_cast<std::size_t>(r)]) {
          seen[static_cast<std::size_t>(r)] = true;
          stack.push_back(r);
        }
      }
    }
    for (std::size_t q = 0; q < n; ++q)
      if (seen[q]) keep.push_back(static_cast<int>(q));
  } else {
    for (std::size_t q = 0; q < n; ++q) keep.push_back(static_cast<int>(q));
  }

  // Block of each kept state: identity, or Moore classes.
  std::vector<int> block(n, -1);
  for (std::size_t k = 0; k < keep.size(); ++k) block[static_cast<std::size_t>(keep[k])] = static_cast<int>(k);
  std::size_t nblocks = keep.size();
  if (minimize) {
    std::map<int, int> first;
    for (int q : keep) block[static_cast<std::size_t>(q)] = first.emplace(label[static_cast<std::size_t>(q)], static_cast<int>(first.size())).first->second;
    nblocks = first.size();
    for (;;) {
      std::map<std::vector<int>, int> sig_id;
      std::vector<int> next(n, -1);
      for (int q : keep) {
        std::vector<int> sig{block[static_cast<std::size_t>(q)]};
        for (const auto& m : cube_maps) sig.push_back(block[static_cast<std::size_t>(m[static_cast<std::size_t>(q)])]);
        next[static_cast<std::size_t>(q)] = sig_id.emplace(sig, static_cast<int>(sig_id.size())).first->second;
      }
      bool stable = sig_id.size() == nblocks;
      block = std::move(next);
      nblocks = sig_id.size();
      if (stable) break;
    }
  }

  Compact c;
  c.n = nblocks;
  c.initial = block[static_cast<std::size_t>(d.initial()[0])];
  c.label.assign(nblocks, 0);
  for (int q : keep) c.label[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])] = label[static_cast<std::size_t>(q)];
  std::map<Behavior, std::size_t> idx;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    Behavior m(nblocks, -1);
    for (int q : keep) m[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])] = block[static_cast<std::size_t>(cube_maps[i][static_cast<std::size_t>(q)])];
    Formula f = cube_formula(d.atoms(), cubes[i]);
    auto [it, fresh] = idx.emplace(m, c.maps.size());
    if (fresh) {
      c.maps.push_back(std::move(m));
      c.letter.push_back(f);
    } else {
      c.letter[it->second] = or_(c.letter[it->second], f);
    }
  }
  return c;
}

Abstract top_level(const Compact& c) {
  Abstract a;
  for (std::size_t q = 0; q < c.n; ++q) a.states.push_back(static_cast<int>(q));
  for (std::size_t j = 0; j < c.maps.size(); ++j) a.atoms.push_back("$L0_" + std::to_string(j));
  a.maps = c.maps;
  return a;
}

std::map<std::string, Formula> letter_substitution(const Compact& c) {
  std::map<std::string, Formula> sub;
  for (std::size_t j = 0; j < c.letter.size(); ++j) sub.emplace("$L0_" + std::to_string(j), c.letter[j]);
  return sub;
}

}  // namespace

std::set<Behavior> behaviors(const Fsa& d) {
  if (!is_deterministic(d) || !is_complete(d)) throw FsaError("a deterministic complete automaton is required");
  std::vector<Guard> guards;
  for (const auto& t : d.transitions()) guards.push_back(t.guard);
  std::vector<Behavior> letters;
  for (const Guard& c : letter_partition(guards, full_mask(d.atoms().size()))) {
    Behavior m(d.num_states());
    for (std::size_t q = 0; q < d.num_states(); ++q) m[q] = successor(d, static_cast<int>(q), c.pos);
    letters.push_back(std::move(m));
  }
  return monoid(letters);
}

WilkeResult wilke_translate(const Fsa& d, WilkeOptions opt) {
  std::vector<int> acc(d.num_states());
  for (std::size_t q = 0; q < d.num_states(); ++q) acc[q] = d.accepting(static_cast<int>(q)) ? 1 : 0;
  Compact c = compact(d, acc, opt.reachable_only, opt.minimize);
  Wilke w(c.n);
  const Translation& t = w.solve(top_level(c), 0);
  auto sub = letter_substitution(c);

  WilkeResult r;
  r.states = c.n;
  Formula nonempty = mk_until(mk_true(), mk_true());
  Formula words = mk_false();
  for (const auto& [alpha, th] : t.theta) {
    Formula f = substitute(th, sub);
    r.theta.emplace(alpha, f);
    if (c.label[static_cast<std::size_t>(alpha[static_cast<std::size_t>(c.initial)])]) words = or_(words, f);
  }
  Formula body = s_and(nonempty, words);
  r.formula = c.label[static_cast<std::size_t>(c.initial)] ? or_(mk_not(nonempty), body) : body;
  r.length = length(r.formula);
  r.dag = dag_size(r.formula);
  return r;
}

bool finite_eval(const std::vector<std::set<std::string>>& word, Formula f) {
  std::size_t len = word.size();
  std::unordered_map<const Node*, std::vector<char>> memo;
  std::function<const std::vector<char>&(Formula)> eval = [&](Formula g) -> const std::vector<char>& {
    auto it = memo.find(g.node());
    if (it != memo.end()) return it->second;
    std::vector<char> v(len + 1, 0);  // index len: past the end
    switch (g.op()) {
      case Op::True:
        v.assign(len + 1, 1);
        break;
      case Op::False:
        break;
      case Op::Atom:
        for (std::size_t i = 0; i < len; ++i) v[i] = word[i].count(g.name()) ? 1 : 0;
        break;
      case Op::Not: {
        const auto& c = eval(g.child(0));
        for (std::size_t i = 0; i <= len; ++i) v[i] = !c[i];
        break;
      }
      case Op::And: {
        std::vector<char> a = eval(g.child(0));
        const auto& c = eval(g.child(1));
        for (std::size_t i = 0; i <= len; ++i) v[i] = a[i] && c[i];
        break;
      }
      case Op::Next: {
        const auto& c = eval(g.child(0));
        for (std::size_t i = 0; i + 1 < len; ++i) v[i] = c[i + 1];
        break;
      }
      case Op::Until: {
        std::vector<char> a = eval(g.child(0));
        const auto& c = eval(g.child(1));
        for (std::size_t i = len; i-- > 0;) v[i] = c[i] || (a[i] && v[i + 1]);
        break;
      }
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
      case Op::WeakUntil:
      case Op::Finally:
      case Op::Globally:
        v = eval(normalize(g));
        break;
      default:
        throw DialectError("finite_eval handles LTL formulas only");
    }
    return memo.emplace(g.node(), std::move(v)).first->second;
  };
  return eval(f)[0];
}

bool finite_eval(const std::vector<std::string>& atoms, const Word& word, Formula f) {
  std::vector<std::set<std::string>> w;
  for (Letter e : word) {
    std::set<std::string> s;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if ((e >> i) & 1U) s.insert(atoms[i]);
    w.push_back(std::move(s));
  }
  return finite_eval(w, f);
}

Formula prefix_existence_lift(const Fsa& a) {
  Fsa d = is_deterministic(a) && is_complete(a) ? a : determinise(a, {.reachable_only = true});
  for (const auto& t : d.transitions())
    if (d.accepting(t.from) && !d.accepting(t.to)) throw FsaError("accepting states are not absorbing");
  std::vector<int> acc(d.num_states());
  for (std::size_t q = 0; q < d.num_states(); ++q) acc[q] = d.accepting(static_cast<int>(q)) ? 1 : 0;
  Compact c = compact(d, acc, true, true);
  if (c.label[static_cast<std::size_t>(c.initial)]) return mk_true();
  Wilke w(c.n);
  const Translation& t = w.solve(top_level(c), 0);
  Formula r = mk_false();
  for (const auto& [alpha, ex] : t.ex)
    if (c.label[static_cast<std::size_t>(alpha[static_cast<std::size_t>(c.initial)])]) r = or_(r, ex);
  r = substitute(r, {{kHole, mk_true()}});
  return substitute(r, letter_substitution(c));
}

Formula prefix_existence_lift(const DeviationAutomaton& dev, const std::vector<int>& init) {
  if (std::find(init.begin(), init.end(), dev.accept) != init.end()) return mk_true();
  const Fsa& base = init.empty() ? *dev.base
                                 : Fsa(dev.base->atoms(), dev.base->state_names(), init, {},
                                       dev.base->transitions(), Flavor::NoAcceptance);
  Fsa d = determinise(base, {.reachable_only = true});
  // Tableau states making up each subset state.
  std::vector<Bitset> subset(d.num_states(), Bitset(base.num_states()));
  {
    std::vector<bool> done(d.num_states());
    subset[static_cast<std::size_t>(d.initial()[0])] = base.initial_set();
    done[static_cast<std::size_t>(d.initial()[0])] = true;
    std::vector<int> stack{d.initial()[0]};
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (const auto& t : d.out(q)) {
        if (done[static_cast<std::size_t>(t.to)]) continue;
        done[static_cast<std::size_t>(t.to)] = true;
        subset[static_cast<std::size_t>(t.to)] = base.post(subset[static_cast<std::size_t>(q)], t.guard.pos);
        stack.push_back(t.to);
      }
    }
  }
  // Every state keeps its own label, so compact state k is d's state label[k].
  std::vector<int> label(d.num_states());
  for (std::size_t q = 0; q < d.num_states(); ++q) label[q] = static_cast<int>(q);
  Compact c = compact(d, label, true, false);
  std::vector<Formula> trig(c.n, mk_false());
  for (std::size_t k = 0; k < c.n; ++k)
    subset[static_cast<std::size_t>(c.label[k])].for_each(
        [&](std::size_t s) { trig[k] = or_(trig[k], dev.fire[s]); });
  Formula r = trig[static_cast<std::size_t>(c.initial)];
  Wilke w(c.n);
  const Translation& t = w.solve(top_level(c), 0);
  std::map<int, Formula> by_target;
  for (const auto& [alpha, ex] : t.ex) {
    int target = alpha[static_cast<std::size_t>(c.initial)];
    auto [it, fresh] = by_target.emplace(target, ex);
    if (!fresh) it->second = or_(it->second, ex);
  }
  for (const auto& [target, ex] : by_target) {
    Formula h = trig[static_cast<std::size_t>(target)];
    if (h == mk_false()) continue;
    r = or_(r, substitute(ex, {{kHole, h}}));
  }
  return substitute(r, letter_substitution(c));
}

}  // namespace roctl
