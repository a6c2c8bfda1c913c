#include "roctl/oracle.hpp"

#include <map>
#include <set>

#include "roctl/fsa.hpp"

namespace roctl {

namespace {

struct Key {
  Lasso lasso;
  const Node* f;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = std::hash<const void*>()(k.f);
    for (int w : k.lasso.prefix) h = h * 31 + static_cast<std::size_t>(w);
    h = h * 1000003u + 17;
    for (int w : k.lasso.loop) h = h * 31 + static_cast<std::size_t>(w);
    return h;
  }
};

}  // namespace

bool exactness_certificate(const Structure& m, EvalBounds b) {
  if (!exact_enumerable(m)) return false;
  for (std::size_t w = 0; w < m.size(); ++w) {
    const auto& s = m.succ(static_cast<int>(w));
    bool self = std::find(s.begin(), s.end(), static_cast<int>(w)) != s.end();
    if (self && s.size() != 1) return false;
  }
  PathBounds pb = effective_bounds(m, {b.prefix_cap, b.loop_cap});
  return pb.prefix_cap + 1 >= m.size() && pb.loop_cap >= 1 && b.deviation_window == 0;
}

std::size_t auto_deviation_window(const Lasso& sigma, Formula f) {
  return sigma.prefix.size() + sigma.loop.size() * (static_cast<std::size_t>(f->depth) + 2);
}

struct Oracle::Impl {
  const Structure& m;
  EvalBounds b;
  PathBounds pb;
  AtomDefinitions defs;
  std::unordered_map<Key, std::vector<bool>, KeyHash> tables;
  std::map<std::pair<const Node*, int>, bool> world_memo, all_memo, ob_memo;
  std::map<int, std::vector<Lasso>> all_paths, ff_paths;

  Impl(const Structure& s, EvalBounds bb, AtomDefinitions d)
      : m(s), b(bb), pb(effective_bounds(s, {bb.prefix_cap, bb.loop_cap})), defs(std::move(d)) {}

  const std::vector<Lasso>& paths(int w, bool ff) {
    auto& cache = ff ? ff_paths : all_paths;
    auto it = cache.find(w);
    if (it == cache.end()) it = cache.emplace(w, enumerate_fullpaths(m, w, pb, ff)).first;
    return it->second;
  }

  bool atom_at(int w, const std::string& name) {
    if (m.has(w, name)) return true;
    auto it = defs.find(name);
    return it != defs.end() && world(w, it->second);
  }

  bool world(int w, Formula f) {
    auto key = std::make_pair(f.node(), w);
    auto it = world_memo.find(key);
    if (it != world_memo.end()) return it->second;
    bool r = false;
    for (const Lasso& l : paths(w, false))
      if ((r = path(l, f))) break;
    world_memo[key] = r;
    return r;
  }

  bool quantify(int w, Formula f, bool ff) {
    auto& memo = ff ? ob_memo : all_memo;
    auto key = std::make_pair(f.node(), w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool r = true;
    for (const Lasso& l : paths(w, ff))
      if (!(r = path(l, f))) break;
    memo[key] = r;
    return r;
  }

  bool path(const Lasso& l, Formula f) { return table(l, f)[0]; }

  bool robust(const Lasso& sigma, Formula f) {
    if (!path(sigma, f)) return false;
    std::size_t window = b.deviation_window ? b.deviation_window : auto_deviation_window(sigma, f);
    for (const auto& [i, pi] : deviations(m, sigma, pb, window))
      if (!path(pi, f)) return false;
    return true;
  }

  Letter letter(const Fsa& a, int w) {
    Letter e = 0;
    for (std::size_t i = 0; i < a.atoms().size(); ++i)
      if (atom_at(w, a.atoms()[i])) e |= Letter{1} << i;
    return e;
  }

  bool automaton(const Lasso& l, std::size_t j, Formula f) {
    const Fsa& a = *f->aut;
    Bitset x(a.num_states());
    if (f->init.empty()) {
      x = a.initial_set();
    } else {
      for (int s : f->init) x.set(static_cast<std::size_t>(s));
    }
    if (a.any_accepting(x)) return true;
    std::set<std::pair<std::size_t, Bitset>> seen;
    std::size_t p = j;
    for (;;) {
      x = a.post(x, letter(a, l.at(p)));
      if (a.any_accepting(x)) return true;
      if (x.none()) return false;
      p = l.next_pos(p);
      if (!seen.insert({p, x}).second) return false;
    }
  }

  const std::vector<bool>& table(const Lasso& l, Formula f) {
    Key key{l, f.node()};
    auto it = tables.find(key);
    if (it != tables.end()) return it->second;
    std::size_t n = l.positions();
    std::vector<bool> v(n);
    switch (f.op()) {
      case Op::True:
        v.assign(n, true);
        break;
      case Op::Atom:
        for (std::size_t j = 0; j < n; ++j) v[j] = atom_at(l.at(j), f.name());
        break;
      case Op::Not: {
        const auto& c = table(l, f.child(0));
        for (std::size_t j = 0; j < n; ++j) v[j] = !c[j];
        break;
      }
      case Op::And: {
        std::vector<bool> c0 = table(l, f.child(0));
        const auto& c1 = table(l, f.child(1));
        for (std::size_t j = 0; j < n; ++j) v[j] = c0[j] && c1[j];
        break;
      }
      case Op::Next: {
        const auto& c = table(l, f.child(0));
        for (std::size_t j = 0; j < n; ++j) v[j] = c[l.next_pos(j)];
        break;
      }
      case Op::Until: {
        std::vector<bool> a = table(l, f.child(0));
        const auto& c = table(l, f.child(1));
        v = c;
        for (bool changed = true; changed;) {
          changed = false;
          for (std::size_t j = n; j-- > 0;) {
            bool nv = c[j] || (a[j] && v[l.next_pos(j)]);
            if (nv != v[j]) {
              v[j] = nv;
              changed = true;
            }
          }
        }
        break;
      }
      case Op::All:
        for (std::size_t j = 0; j < n; ++j) v[j] = quantify(l.at(j), f.child(0), false);
        break;
      case Op::Obligatory:
        for (std::size_t j = 0; j < n; ++j) v[j] = quantify(l.at(j), f.child(0), true);
        break;
      case Op::Robustly:
        for (std::size_t j = 0; j < n; ++j) v[j] = robust(l.suffix(j).canonical(), f.child(0));
        break;
      case Op::Automaton:
        for (std::size_t j = 0; j < n; ++j) v[j] = automaton(l, j, f);
        break;
      case Op::Forall:
        throw DialectError("the oracle does not evaluate propositional quantification");
      default:
        v = table(l, normalize(f));
        break;
    }
    return tables.emplace(std::move(key), std::move(v)).first->second;
  }
};

Oracle::Oracle(const Structure& m, EvalBounds b, AtomDefinitions defs)
    : impl_(std::make_unique<Impl>(m, b, std::move(defs))), exact_(exactness_certificate(m, b)) {}

Oracle::~Oracle() = default;

bool Oracle::path(const Lasso& sigma, Formula f) {
  if (!valid_lasso(impl_->m, sigma)) throw StructureError("lasso is not a fullpath of the structure");
  return impl_->path(sigma.canonical(), f);
}

bool Oracle::world(int w, Formula f) {
  if (w < 0 || static_cast<std::size_t>(w) >= impl_->m.size()) throw StructureError("world out of range");
  return impl_->world(w, f);
}

const std::vector<bool>& Oracle::positions(const Lasso& sigma, Formula f) { return impl_->table(sigma, f); }

const std::vector<Lasso>& Oracle::fullpaths(int w, bool failure_free_only) {
  return impl_->paths(w, failure_free_only);
}

bool eval_path(const Structure& m, const Lasso& sigma, Formula f, EvalBounds b, const AtomDefinitions& defs) {
  Oracle o(m, b, defs);
  return o.path(sigma, f);
}

bool eval_world(const Structure& m, int w, Formula f, EvalBounds b, const AtomDefinitions& defs) {
  Oracle o(m, b, defs);
  return o.world(w, f);
}

}  // namespace roctl
