#include "roctl/modelcheck.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace roctl {

namespace {

enum class K : std::uint8_t { TT, FF, Lit, And, Or, X, U, R, AutP, AutN };

struct NNode {
  K k;
  int a = -1;
  int b = -1;
  int atom = -1;
  bool pos = true;
  int aut = -1;
  Bitset set;
};

// Interning store for negation-normal-form path formulas. Automaton
// operators carry the current subset of automaton states, so the store
// grows as automata are simulated.
class Store {
 public:
  int atom_id(const std::string& name) {
    auto [it, fresh] = atom_ids_.emplace(name, static_cast<int>(atoms_.size()));
    if (fresh) atoms_.push_back(name);
    return it->second;
  }
  const std::string& atom_name(int id) const { return atoms_[static_cast<std::size_t>(id)]; }
  std::size_t num_atoms() const { return atoms_.size(); }

  int aut_id(const Fsa* a) {
    auto [it, fresh] = aut_ids_.emplace(a, static_cast<int>(auts_.size()));
    if (fresh) {
      auts_.push_back(a);
      std::vector<int> ids;
      for (const auto& name : a->atoms()) ids.push_back(atom_id(name));
      aut_atoms_.push_back(std::move(ids));
    }
    return it->second;
  }
  const Fsa& aut(int id) const { return *auts_[static_cast<std::size_t>(id)]; }
  const std::vector<int>& aut_atoms(int id) const { return aut_atoms_[static_cast<std::size_t>(id)]; }

  const NNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  int make(K k, int a = -1, int b = -1, int atom = -1, bool pos = true, int aut = -1, Bitset set = {}) {
    switch (k) {
      case K::And:
        if (kind(a) == K::FF || kind(b) == K::FF) return ff();
        if (kind(a) == K::TT) return b;
        if (kind(b) == K::TT || a == b) return a;
        if (a > b) std::swap(a, b);
        break;
      case K::Or:
        if (kind(a) == K::TT || kind(b) == K::TT) return tt();
        if (kind(a) == K::FF) return b;
        if (kind(b) == K::FF || a == b) return a;
        if (a > b) std::swap(a, b);
        break;
      case K::X:
        if (kind(a) == K::TT || kind(a) == K::FF) return a;
        break;
      case K::U:
        if (kind(b) == K::TT || kind(b) == K::FF) return b;
        break;
      case K::R:
        if (kind(b) == K::TT || kind(b) == K::FF) return b;
        break;
      case K::AutP:
        if (set.none()) return ff();
        break;
      case K::AutN:
        if (set.none()) return tt();
        break;
      default:
        break;
    }
    std::string key;
    auto put = [&](long long v) {
      key.append(reinterpret_cast<const char*>(&v), sizeof v);
    };
    put(static_cast<long long>(k));
    put(a);
    put(b);
    put(atom);
    put(pos);
    put(aut);
    for (int s : set.to_vector()) put(s);
    auto it = keys_.find(key);
    if (it != keys_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({k, a, b, atom, pos, aut, std::move(set)});
    keys_.emplace(std::move(key), id);
    return id;
  }

  int tt() { return make(K::TT); }
  int ff() { return make(K::FF); }

  bool eventuality(int id) const {
    K k = node(id).k;
    return k == K::U || k == K::AutP;
  }

  int nnf(Formula f, bool pol) {
    auto key = std::make_pair(f.node(), pol);
    auto it = nnf_memo_.find(key);
    if (it != nnf_memo_.end()) return it->second;
    int r = build(f, pol);
    nnf_memo_.emplace(key, r);
    return r;
  }

  int set_id(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    auto [it, fresh] = set_ids_.emplace(v, static_cast<int>(sets_.size()));
    if (fresh) sets_.push_back(std::move(v));
    return it->second;
  }
  const std::vector<int>& set(int id) const { return sets_[static_cast<std::size_t>(id)]; }

 private:
  K kind(int id) const { return nodes_[static_cast<std::size_t>(id)].k; }

  int build(Formula f, bool pol) {
    switch (f.op()) {
      case Op::True:
        return pol ? tt() : ff();
      case Op::False:
        return pol ? ff() : tt();
      case Op::Atom:
        return make(K::Lit, -1, -1, atom_id(f.name()), pol);
      case Op::Not:
        return nnf(f.child(0), !pol);
      case Op::And:
        return make(pol ? K::And : K::Or, nnf(f.child(0), pol), nnf(f.child(1), pol));
      case Op::Or:
        return make(pol ? K::Or : K::And, nnf(f.child(0), pol), nnf(f.child(1), pol));
      case Op::Implies:
        return make(pol ? K::Or : K::And, nnf(f.child(0), !pol), nnf(f.child(1), pol));
      case Op::Next:
        return make(K::X, nnf(f.child(0), pol));
      case Op::Until:
        return pol ? make(K::U, nnf(f.child(0), true), nnf(f.child(1), true))
                   : make(K::R, nnf(f.child(0), false), nnf(f.child(1), false));
      case Op::Finally:
        return pol ? make(K::U, tt(), nnf(f.child(0), true)) : make(K::R, ff(), nnf(f.child(0), false));
      case Op::Globally:
        return pol ? make(K::R, ff(), nnf(f.child(0), true)) : make(K::U, tt(), nnf(f.child(0), false));
      case Op::WeakUntil: {
        // a W b = b R (a | b);  ~(a W b) = ~b U (~a & ~b)
        int a = nnf(f.child(0), pol);
        int b = nnf(f.child(1), pol);
        return pol ? make(K::R, b, make(K::Or, a, b)) : make(K::U, b, make(K::And, a, b));
      }
      case Op::Automaton: {
        const Fsa& a = *f->aut;
        Bitset x(a.num_states());
        if (f->init.empty()) {
          x = a.initial_set();
        } else {
          for (int s : f->init) x.set(static_cast<std::size_t>(s));
        }
        return make(pol ? K::AutP : K::AutN, -1, -1, -1, true, aut_id(&a), std::move(x));
      }
      case Op::Iff:
        return nnf(normalize(f), pol);
      default:
        throw DialectError("state operator left inside a path formula");
    }
  }

  std::vector<std::string> atoms_;
  std::map<std::string, int> atom_ids_;
  std::vector<const Fsa*> auts_;
  std::vector<std::vector<int>> aut_atoms_;
  std::map<const Fsa*, int> aut_ids_;
  std::vector<NNode> nodes_;
  std::unordered_map<std::string, int> keys_;
  std::map<std::pair<const Node*, bool>, int> nnf_memo_;
  std::map<std::vector<int>, int> set_ids_;
  std::vector<std::vector<int>> sets_;
};

// A finite graph whose vertices carry truth values for store atoms.
struct View {
  std::size_t size = 0;
  std::function<const std::vector<int>&(int)> succ;
  std::function<bool(int, int)> truth;  // (vertex, atom id)
};

class Product {
 public:
  struct Alt {
    int next;                                 // set id of next-step obligations
    std::vector<std::pair<int, int>> post;    // postponed eventuality -> its successor
    std::vector<std::pair<int, bool>> lits;   // letter constraints (free mode)
  };
  struct Edge {
    int to;
    int alt;
  };

  Product(Store& s, const View* v, CheckStats& st, std::size_t cap) : store_(s), view_(v), stats_(st), cap_(cap) {}

  bool acc(int id) const { return states_[static_cast<std::size_t>(id)].acc; }
  int world(int id) const { return states_[static_cast<std::size_t>(id)].w; }
  const Alt& alt_of(int id, int alt) {
    const auto& st = states_[static_cast<std::size_t>(id)];
    return alternatives(st.w, st.nset)[static_cast<std::size_t>(alt)];
  }
  std::size_t size() const { return states_.size(); }

  int initial(int w, int root) {
    int n = store_.set_id({root});
    return intern(w, n, store_.set_id(eventualities(n)), false);
  }

  const std::vector<Edge>& successors(int id) {
    if (!states_[static_cast<std::size_t>(id)].expanded) {
      std::vector<Edge> out;
      int w = states_[static_cast<std::size_t>(id)].w;
      int nset = states_[static_cast<std::size_t>(id)].nset;
      std::vector<int> bset = store_.set(states_[static_cast<std::size_t>(id)].bset);
      const auto& alts = alternatives(w, nset);
      for (std::size_t i = 0; i < alts.size(); ++i) {
        const Alt& alt = alts[i];
        std::vector<int> b2;
        for (auto [from, to] : alt.post)
          if (std::binary_search(bset.begin(), bset.end(), from)) b2.push_back(to);
        bool breakpoint = b2.empty();
        if (breakpoint) b2 = eventualities(alt.next);
        int bid = store_.set_id(std::move(b2));
        if (view_) {
          for (int w2 : view_->succ(w)) out.push_back({intern(w2, alt.next, bid, breakpoint), static_cast<int>(i)});
        } else {
          out.push_back({intern(-1, alt.next, bid, breakpoint), static_cast<int>(i)});
        }
      }
      auto& st = states_[static_cast<std::size_t>(id)];
      st.succ = std::move(out);
      st.expanded = true;
    }
    return states_[static_cast<std::size_t>(id)].succ;
  }

  /// Nested depth-first search from the initial state for (w, root). On
  /// success optionally reports the product lasso (stem, cycle).
  bool search(int w, int root, std::vector<int>* stem, std::vector<int>* cycle) {
    ++stats_.searches;
    int s0 = initial(w, root);
    if (auto k = known_.find(s0); k != known_.end() && (!k->second || !stem)) return k->second;
    std::unordered_map<int, std::uint8_t> colour;  // 0 white, 1 cyan, 2 blue, 3 red
    auto col = [&](int s) -> std::uint8_t {
      auto it = colour.find(s);
      return it == colour.end() ? 0 : it->second;
    };
    std::vector<std::pair<int, std::size_t>> blue{{s0, 0}};
    colour[s0] = 1;
    auto found = [&](int target, const std::vector<int>& red) {
      for (auto& [s, i] : blue) known_[s] = true;
      if (!stem) return true;
      std::size_t idx = 0;
      while (blue[idx].first != target) ++idx;
      stem->clear();
      cycle->clear();
      for (std::size_t k = 0; k < idx; ++k) stem->push_back(blue[k].first);
      for (std::size_t k = idx; k < blue.size(); ++k) cycle->push_back(blue[k].first);
      for (std::size_t k = 1; k < red.size(); ++k) cycle->push_back(red[k]);
      return true;
    };
    while (!blue.empty()) {
      int s = blue.back().first;
      std::size_t i = blue.back().second;
      const auto& succ = successors(s);
      if (i < succ.size()) {
        int t = succ[i].to;
        blue.back().second = i + 1;
        auto kt = known_.find(t);
        if (kt != known_.end()) {
          if (!kt->second) continue;
          if (!stem) {
            for (auto& [b, j] : blue) known_[b] = true;
            return true;
          }
        }
        std::uint8_t c = col(t);
        if (c == 1 && (acc(s) || acc(t))) return found(t, {});
        if (c == 0) {
          colour[t] = 1;
          blue.push_back({t, 0});
        }
        continue;
      }
      if (acc(s)) {
        // Red search for a cyan state.
        std::vector<std::pair<int, std::size_t>> red{{s, 0}};
        while (!red.empty()) {
          int u = red.back().first;
          std::size_t j = red.back().second;
          const auto& us = successors(u);
          if (j < us.size()) {
            int t = us[j].to;
            red.back().second = j + 1;
            std::uint8_t c = col(t);
            if (c == 1) {
              std::vector<int> path;
              for (auto& [r, k] : red) path.push_back(r);
              return found(t, path);
            }
            if (c == 2) {
              colour[t] = 3;
              red.push_back({t, 0});
            }
          } else {
            red.pop_back();
          }
        }
        colour[s] = 3;
      } else {
        colour[s] = 2;
      }
      blue.pop_back();
    }
    for (auto& [s, c] : colour) known_[s] = false;
    return false;
  }

 private:
  struct PState {
    int w;
    int nset;
    int bset;
    bool acc;
    bool expanded = false;
    std::vector<Edge> succ;
  };

  std::vector<int> eventualities(int nset) const {
    std::vector<int> r;
    for (int f : store_.set(nset))
      if (store_.eventuality(f)) r.push_back(f);
    return r;
  }

  int intern(int w, int nset, int bset, bool acc) {
    std::array<int, 4> key{w, nset, bset, acc ? 1 : 0};
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (states_.size() >= cap_) throw ResourceLimit("product exceeds " + std::to_string(cap_) + " states");
    int id = static_cast<int>(states_.size());
    states_.push_back({w, nset, bset, acc, false, {}});
    ids_.emplace(key, id);
    ++stats_.product_states;
    return id;
  }

  Letter letter(int w, int aut) {
    auto key = std::make_pair(w, aut);
    auto it = letters_.find(key);
    if (it != letters_.end()) return it->second;
    Letter e = 0;
    const auto& ids = store_.aut_atoms(aut);
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (view_->truth(w, ids[i])) e |= Letter{1} << i;
    letters_.emplace(key, e);
    return e;
  }

  struct Branch {
    std::vector<int> todo;
    std::set<int> done;
    std::set<int> next;
    std::vector<std::pair<int, int>> post;
    std::map<int, bool> lits;
  };

  bool add_lit(Branch& br, int atom, bool pos) {
    auto [it, fresh] = br.lits.emplace(atom, pos);
    return fresh || it->second == pos;
  }

  std::vector<Guard> cubes(int aut, const Bitset& x) {
    const Fsa& a = store_.aut(aut);
    std::vector<Guard> guards;
    x.for_each([&](std::size_t s) {
      for (const auto& t : a.out(static_cast<int>(s))) guards.push_back(t.guard);
    });
    std::size_t n = a.atoms().size();
    Letter mask = n >= 64 ? ~Letter{0} : ((Letter{1} << n) - 1);
    return letter_partition(guards, mask);
  }

  bool add_cube(Branch& br, int aut, const Guard& g) {
    const auto& ids = store_.aut_atoms(aut);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      Letter bit = Letter{1} << i;
      if ((g.pos & bit) && !add_lit(br, ids[i], true)) return false;
      if ((g.neg & bit) && !add_lit(br, ids[i], false)) return false;
    }
    return true;
  }

  void expand(Branch br, int w, std::vector<Alt>& out) {
    while (!br.todo.empty()) {
      int f = br.todo.back();
      br.todo.pop_back();
      if (!br.done.insert(f).second) continue;
      NNode n = store_.node(f);
      switch (n.k) {
        case K::TT:
          break;
        case K::FF:
          return;
        case K::Lit:
          if (view_) {
            if (view_->truth(w, n.atom) != n.pos) return;
          } else if (!add_lit(br, n.atom, n.pos)) {
            return;
          }
          break;
        case K::And:
          br.todo.push_back(n.b);
          br.todo.push_back(n.a);
          break;
        case K::Or: {
          Branch c = br;
          c.todo.push_back(n.a);
          expand(std::move(c), w, out);
          br.todo.push_back(n.b);
          break;
        }
        case K::X:
          br.next.insert(n.a);
          break;
        case K::U: {
          Branch c = br;
          c.todo.push_back(n.b);
          expand(std::move(c), w, out);
          br.todo.push_back(n.a);
          br.next.insert(f);
          br.post.push_back({f, f});
          break;
        }
        case K::R: {
          Branch c = br;
          c.todo.push_back(n.b);
          c.todo.push_back(n.a);
          expand(std::move(c), w, out);
          br.todo.push_back(n.b);
          br.next.insert(f);
          break;
        }
        case K::AutP:
        case K::AutN: {
          const Fsa& a = store_.aut(n.aut);
          bool positive = n.k == K::AutP;
          if (a.any_accepting(n.set)) {
            if (positive) break;
            return;
          }
          if (view_) {
            int g = store_.make(n.k, -1, -1, -1, true, n.aut, a.post(n.set, letter(w, n.aut)));
            K gk = store_.node(g).k;
            if (gk == K::FF) return;
            if (gk == K::TT) break;
            br.next.insert(g);
            if (positive) br.post.push_back({f, g});
            break;
          }
          for (const Guard& cube : cubes(n.aut, n.set)) {
            Branch c = br;
            if (!add_cube(c, n.aut, cube)) continue;
            int g = store_.make(n.k, -1, -1, -1, true, n.aut, a.post(n.set, cube.pos));
            K gk = store_.node(g).k;
            if (gk == K::FF) continue;
            if (gk != K::TT) {
              c.next.insert(g);
              if (positive) c.post.push_back({f, g});
            }
            expand(std::move(c), w, out);
          }
          return;
        }
      }
    }
    Alt alt;
    alt.next = store_.set_id({br.next.begin(), br.next.end()});
    alt.post = std::move(br.post);
    std::sort(alt.post.begin(), alt.post.end());
    alt.post.erase(std::unique(alt.post.begin(), alt.post.end()), alt.post.end());
    alt.lits.assign(br.lits.begin(), br.lits.end());
    out.push_back(std::move(alt));
  }

  // Successor options of one obligation at a fixed world, kept as an
  // antichain: an option needing a superset of another's next-step
  // obligations and postponements can never do better.
  struct Opt {
    std::vector<int> next;
    std::vector<std::pair<int, int>> post;
    friend bool operator==(const Opt&, const Opt&) = default;
  };
  using Opts = std::vector<Opt>;

  static bool covers(const Opt& a, const Opt& b) {
    return std::includes(b.next.begin(), b.next.end(), a.next.begin(), a.next.end()) &&
           std::includes(b.post.begin(), b.post.end(), a.post.begin(), a.post.end());
  }

  static Opts prune(Opts in) {
    std::sort(in.begin(), in.end(), [](const Opt& a, const Opt& b) {
      return std::tie(a.next, a.post) < std::tie(b.next, b.post);
    });
    in.erase(std::unique(in.begin(), in.end()), in.end());
    std::stable_sort(in.begin(), in.end(), [](const Opt& a, const Opt& b) {
      return a.next.size() + a.post.size() < b.next.size() + b.post.size();
    });
    Opts out;
    for (auto& o : in) {
      bool dominated = false;
      for (const auto& k : out)
        if (covers(k, o)) {
          dominated = true;
          break;
        }
      if (!dominated) out.push_back(std::move(o));
    }
    return out;
  }

  static Opts conj(const Opts& x, const Opts& y) {
    Opts out;
    for (const auto& a : x)
      for (const auto& b : y) {
        Opt o;
        std::set_union(a.next.begin(), a.next.end(), b.next.begin(), b.next.end(), std::back_inserter(o.next));
        std::set_union(a.post.begin(), a.post.end(), b.post.begin(), b.post.end(), std::back_inserter(o.post));
        out.push_back(std::move(o));
      }
    return prune(std::move(out));
  }

  static Opts disj(Opts x, const Opts& y) {
    x.insert(x.end(), y.begin(), y.end());
    return prune(std::move(x));
  }

  const Opts& options(int w, int f) {
    auto key = std::make_pair(w, f);
    if (auto it = opts_.find(key); it != opts_.end()) return it->second;
    Opts r;
    const Opts none;
    const Opts unit{Opt{}};
    NNode n = store_.node(f);
    switch (n.k) {
      case K::TT:
        r = unit;
        break;
      case K::FF:
        break;
      case K::Lit:
        if (view_->truth(w, n.atom) == n.pos) r = unit;
        break;
      case K::And:
        r = conj(options(w, n.a), options(w, n.b));
        break;
      case K::Or:
        r = disj(options(w, n.a), options(w, n.b));
        break;
      case K::X:
        r = {Opt{{n.a}, {}}};
        break;
      case K::U:
        r = disj(options(w, n.b), conj(options(w, n.a), {Opt{{f}, {{f, f}}}}));
        break;
      case K::R:
        r = disj(conj(options(w, n.a), options(w, n.b)), conj(options(w, n.b), {Opt{{f}, {}}}));
        break;
      case K::AutP:
      case K::AutN: {
        const Fsa& a = store_.aut(n.aut);
        bool positive = n.k == K::AutP;
        if (a.any_accepting(n.set)) {
          if (positive) r = unit;
          break;
        }
        int g = store_.make(n.k, -1, -1, -1, true, n.aut, a.post(n.set, letter(w, n.aut)));
        K gk = store_.node(g).k;
        if (gk == K::TT) {
          r = unit;
        } else if (gk != K::FF) {
          Opt o{{g}, {}};
          if (positive) o.post = {{f, g}};
          r = {o};
        }
        break;
      }
    }
    return opts_.emplace(key, std::move(r)).first->second;
  }

  const std::vector<Alt>& alternatives(int w, int nset) {
    auto key = std::make_pair(w, nset);
    auto it = alts_.find(key);
    if (it != alts_.end()) return it->second;
    if (view_) {
      Opts acc{Opt{}};
      for (int f : store_.set(nset)) {
        acc = conj(acc, options(w, f));
        if (acc.empty()) break;
      }
      std::vector<Alt> out;
      for (auto& o : acc) out.push_back({store_.set_id(std::move(o.next)), std::move(o.post), {}});
      return alts_.emplace(key, std::move(out)).first->second;
    }
    std::vector<Alt> out;
    Branch br;
    br.todo = store_.set(nset);
    std::reverse(br.todo.begin(), br.todo.end());
    expand(std::move(br), w, out);
    // Identical alternatives add nothing.
    std::vector<Alt> uniq;
    std::set<std::tuple<int, std::vector<std::pair<int, int>>, std::vector<std::pair<int, bool>>>> seen;
    for (auto& a : out)
      if (seen.insert({a.next, a.post, a.lits}).second) uniq.push_back(std::move(a));
    return alts_.emplace(key, std::move(uniq)).first->second;
  }

  Store& store_;
  const View* view_;
  CheckStats& stats_;
  std::size_t cap_;
  std::vector<PState> states_;
  std::map<std::array<int, 4>, int> ids_;
  std::map<std::pair<int, int>, std::vector<Alt>> alts_;
  std::map<std::pair<int, int>, Opts> opts_;
  std::map<std::pair<int, int>, Letter> letters_;
  std::unordered_map<int, bool> known_;
};

}  // namespace

OmegaAutomaton ltl_to_omega(Formula f, std::size_t state_cap) {
  Store store;
  CheckStats stats;
  Product p(store, nullptr, stats, state_cap);
  int root = store.nnf(f, true);
  int s0 = p.initial(-1, root);
  std::vector<int> order{s0};
  std::map<int, int> index{{s0, 0}};
  OmegaAutomaton out;
  std::vector<std::tuple<int, std::vector<std::pair<int, bool>>, int>> raw;
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    int s = order[qi];
    for (const auto& e : p.successors(s)) {
      auto [it, fresh] = index.emplace(e.to, static_cast<int>(order.size()));
      if (fresh) order.push_back(e.to);
      raw.emplace_back(static_cast<int>(qi), p.alt_of(s, e.alt).lits, it->second);
    }
  }
  std::set<std::string> names;
  for (const auto& r : raw)
    for (auto [a, pos] : std::get<1>(r)) names.insert(store.atom_name(a));
  for (const auto& a : atoms_of(f)) names.insert(a);
  out.atoms.assign(names.begin(), names.end());
  if (out.atoms.size() > kMaxAtoms) throw ResourceLimit("too many atoms for an explicit automaton");
  auto bit = [&](const std::string& a) {
    return Letter{1} << static_cast<std::size_t>(std::lower_bound(out.atoms.begin(), out.atoms.end(), a) - out.atoms.begin());
  };
  for (const auto& [from, lits, to] : raw) {
    Guard g;
    for (auto [a, pos] : lits) (pos ? g.pos : g.neg) |= bit(store.atom_name(a));
    out.edges.push_back({from, g, to});
  }
  out.num_states = order.size();
  out.initial = {0};
  std::vector<bool> accepting(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) accepting[i] = p.acc(order[i]);
  out.acceptance.push_back(std::move(accepting));
  return out;
}

bool omega_accepts(const OmegaAutomaton& a, const Word& prefix, const Word& loop) {
  if (loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  std::size_t npos = prefix.size() + loop.size();
  auto letter_at = [&](std::size_t j) { return j < prefix.size() ? prefix[j] : loop[j - prefix.size()]; };
  auto next_pos = [&](std::size_t j) { return j + 1 < npos ? j + 1 : prefix.size(); };
  std::vector<std::vector<const OmegaAutomaton::Edge*>> out(a.num_states);
  for (const auto& e : a.edges) out[static_cast<std::size_t>(e.from)].push_back(&e);
  auto node = [&](std::size_t j, int q) { return j * a.num_states + static_cast<std::size_t>(q); };
  std::size_t total = npos * a.num_states;
  std::vector<std::vector<std::size_t>> succ(total);
  for (std::size_t j = 0; j < npos; ++j)
    for (std::size_t q = 0; q < a.num_states; ++q)
      for (const auto* e : out[q])
        if (e->guard.matches(letter_at(j))) succ[node(j, static_cast<int>(q))].push_back(node(next_pos(j), e->to));
  std::vector<bool> reach(total);
  std::vector<std::size_t> stack;
  for (int q : a.initial) {
    reach[node(0, q)] = true;
    stack.push_back(node(0, q));
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto t : succ[v])
      if (!reach[t]) {
        reach[t] = true;
        stack.push_back(t);
      }
  }
  // Generalized acceptance: some reachable nontrivial SCC meets every set.
  std::vector<int> comp(total, -1), low(total), num(total, -1);
  std::vector<std::size_t> st;
  std::vector<bool> on(total);
  int counter = 0, ncomp = 0;
  std::function<void(std::size_t)> tarjan = [&](std::size_t v) {
    num[v] = low[v] = counter++;
    st.push_back(v);
    on[v] = true;
    for (auto t : succ[v]) {
      if (num[t] < 0) {
        tarjan(t);
        low[v] = std::min(low[v], low[t]);
      } else if (on[t]) {
        low[v] = std::min(low[v], num[t]);
      }
    }
    if (low[v] == num[v]) {
      for (;;) {
        auto x = st.back();
        st.pop_back();
        on[x] = false;
        comp[x] = ncomp;
        if (x == v) break;
      }
      ++ncomp;
    }
  };
  for (std::size_t v = 0; v < total; ++v)
    if (reach[v] && num[v] < 0) tarjan(v);
  for (int c = 0; c < ncomp; ++c) {
    bool nontrivial = false;
    std::vector<bool> hit(a.acceptance.size());
    for (std::size_t v = 0; v < total; ++v) {
      if (comp[v] != c || !reach[v]) continue;
      for (auto t : succ[v]) nontrivial = nontrivial || comp[t] == c;
      for (std::size_t k = 0; k < a.acceptance.size(); ++k)
        if (a.acceptance[k][v % a.num_states]) hit[k] = true;
    }
    if (nontrivial && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) return true;
  }
  return false;
}

bool path_satisfiable(Formula f, std::size_t state_cap) {
  Store store;
  CheckStats stats;
  Product p(store, nullptr, stats, state_cap);
  return p.search(-1, store.nnf(f, true), nullptr, nullptr);
}

struct ModelChecker::Impl {
  const Structure& m;
  AtomDefinitions defs;
  Store store;
  CheckStats stats;
  std::size_t cap = 5000000;
  std::map<std::string, std::vector<bool>> labels;
  std::map<std::string, std::vector<bool>> atom_cache;
  std::map<const Node*, Formula> reduced;
  std::set<std::string> in_progress;
  int fresh = 0;
  View view;
  std::unique_ptr<Product> product;

  Impl(const Structure& s, AtomDefinitions d) : m(s), defs(std::move(d)) {
    view.size = m.size();
    view.succ = [this](int w) -> const std::vector<int>& { return m.succ(w); };
    view.truth = [this](int w, int atom) { return truth(w, atom); };
    product = std::make_unique<Product>(store, &view, stats, cap);
  }

  bool truth(int w, int atom) {
    const std::string& name = store.atom_name(atom);
    auto it = labels.find(name);
    if (it != labels.end()) return it->second[static_cast<std::size_t>(w)];
    return m.has(w, name);
  }

  void prepare(Formula f) {
    for (const auto& a : atoms_of(f)) {
      if (labels.count(a)) continue;
      auto it = defs.find(a);
      if (it == defs.end()) continue;
      if (!in_progress.insert(a).second) throw DialectError("cyclic atom definition for '" + a + "'");
      std::vector<bool> v = label(it->second);
      for (std::size_t w = 0; w < m.size(); ++w)
        if (m.has(static_cast<int>(w), a)) v[w] = true;
      labels[a] = std::move(v);
      in_progress.erase(a);
    }
  }

  bool exists(int w, int root) { return product->search(w, root, nullptr, nullptr); }

  Formula reduce(Formula f) {
    auto it = reduced.find(f.node());
    if (it != reduced.end()) return it->second;
    Formula r;
    switch (f.op()) {
      case Op::True:
      case Op::False:
      case Op::Atom:
      case Op::Automaton:
        r = f;
        break;
      case Op::All: {
        Formula body = reduce(f.child(0));
        prepare(body);
        int neg = store.nnf(body, false);
        std::vector<bool> v(m.size());
        for (std::size_t w = 0; w < m.size(); ++w) v[w] = !exists(static_cast<int>(w), neg);
        std::string name = "#" + std::to_string(fresh++);
        labels[name] = std::move(v);
        r = mk_atom(name);
        break;
      }
      case Op::Exists:
        r = reduce(mk_not(mk_all(mk_not(f.child(0)))));
        break;
      case Op::Obligatory:
      case Op::Permissible:
      case Op::Robustly:
      case Op::Prone:
      case Op::Forall:
        throw DialectError("model checking expects CTL* or ALTL; translate deontic operators first");
      default:
        if (is_binary(f.op())) {
          r = mk_binary(f.op(), reduce(f.child(0)), reduce(f.child(1)));
        } else {
          r = mk_unary(f.op(), reduce(f.child(0)));
        }
    }
    reduced.emplace(f.node(), r);
    return r;
  }

  // Path formula on a fixed lasso once state subformulas are atoms: one
  // backward fixpoint per subformula over the lasso positions.
  bool on_lasso(const Lasso& l, Formula f) {
    std::size_t n = l.positions();
    std::unordered_map<const Node*, std::vector<char>> memo;
    std::function<const std::vector<char>&(Formula)> ev = [&](Formula g) -> const std::vector<char>& {
      auto it = memo.find(g.node());
      if (it != memo.end()) return it->second;
      std::vector<char> v(n, 0);
      switch (g.op()) {
        case Op::True:
          v.assign(n, 1);
          break;
        case Op::False:
          break;
        case Op::Atom: {
          int a = store.atom_id(g.name());
          for (std::size_t j = 0; j < n; ++j) v[j] = truth(l.at(j), a);
          break;
        }
        case Op::Not: {
          const auto& c = ev(g.child(0));
          for (std::size_t j = 0; j < n; ++j) v[j] = !c[j];
          break;
        }
        case Op::And: {
          std::vector<char> a = ev(g.child(0));
          const auto& c = ev(g.child(1));
          for (std::size_t j = 0; j < n; ++j) v[j] = a[j] && c[j];
          break;
        }
        case Op::Next: {
          const auto& c = ev(g.child(0));
          for (std::size_t j = 0; j < n; ++j) v[j] = c[l.next_pos(j)];
          break;
        }
        case Op::Until: {
          std::vector<char> a = ev(g.child(0));
          const auto& c = ev(g.child(1));
          v = c;
          // Two backward sweeps settle the loop.
          for (int round = 0; round < 2; ++round)
            for (std::size_t j = n; j-- > 0;)
              v[j] = c[j] || (a[j] && v[l.next_pos(j)]);
          break;
        }
        case Op::Automaton: {
          const Fsa& a = *g->aut;
          std::vector<int> ids;
          for (const auto& name : a.atoms()) ids.push_back(store.atom_id(name));
          for (std::size_t j = 0; j < n; ++j) {
            Bitset x(a.num_states());
            if (g->init.empty()) {
              x = a.initial_set();
            } else {
              for (int q : g->init) x.set(static_cast<std::size_t>(q));
            }
            bool acc = a.any_accepting(x);
            std::set<std::pair<std::size_t, Bitset>> seen;
            for (std::size_t p = j; !acc && x.any();) {
              Letter e = 0;
              for (std::size_t k = 0; k < ids.size(); ++k)
                if (truth(l.at(p), ids[k])) e |= Letter{1} << k;
              x = a.post(x, e);
              acc = a.any_accepting(x);
              p = l.next_pos(p);
              if (!seen.insert({p, x}).second) break;
            }
            v[j] = acc;
          }
          break;
        }
        default:
          v = ev(normalize(g));
      }
      return memo.emplace(g.node(), std::move(v)).first->second;
    };
    return ev(f)[0];
  }

  std::vector<bool> label(Formula f) {
    Formula g = reduce(f);
    prepare(g);
    int root = store.nnf(g, true);
    std::vector<bool> v(m.size());
    for (std::size_t w = 0; w < m.size(); ++w) v[w] = exists(static_cast<int>(w), root);
    return v;
  }
};

ModelChecker::ModelChecker(const Structure& m, AtomDefinitions defs)
    : impl_(std::make_unique<Impl>(m, std::move(defs))) {}

ModelChecker::~ModelChecker() = default;

bool ModelChecker::state(int w, Formula f) {
  if (w < 0 || static_cast<std::size_t>(w) >= impl_->m.size()) throw StructureError("world out of range");
  Formula g = impl_->reduce(f);
  impl_->prepare(g);
  return impl_->exists(w, impl_->store.nnf(g, true));
}

std::vector<bool> ModelChecker::label(Formula f) { return impl_->label(f); }

bool ModelChecker::path(const Lasso& sigma, Formula f) {
  if (!valid_lasso(impl_->m, sigma)) throw StructureError("lasso is not a fullpath of the structure");
  Formula g = impl_->reduce(f);
  impl_->prepare(g);
  return impl_->on_lasso(sigma, g);
}

std::optional<Lasso> ModelChecker::witness(int w, Formula f) {
  // A path satisfying ψ witnesses Eψ; peeling the quantifier keeps the
  // witness informative instead of any fullpath.
  while (true) {
    if (f.op() == Op::Exists) {
      f = f.child();
    } else if (f.op() == Op::Not && f.child().op() == Op::All) {
      f = mk_not(f.child().child());
    } else if (f.op() == Op::Not && f.child().op() == Op::Atom && impl_->defs.count(f.child().name()) &&
               impl_->defs.at(f.child().name()).op() == Op::All) {
      f = mk_not(impl_->defs.at(f.child().name()).child());
    } else {
      break;
    }
  }
  Formula g = impl_->reduce(f);
  impl_->prepare(g);
  // A fresh product so the search is not short-circuited by cached verdicts.
  Product p(impl_->store, &impl_->view, impl_->stats, impl_->cap);
  std::vector<int> stem, cycle;
  if (!p.search(w, impl_->store.nnf(g, true), &stem, &cycle)) return std::nullopt;
  Lasso l;
  for (int s : stem) l.prefix.push_back(p.world(s));
  for (int s : cycle) l.loop.push_back(p.world(s));
  return l.canonical();
}

const CheckStats& ModelChecker::stats() const { return impl_->stats; }

void ModelChecker::set_state_cap(std::size_t cap) {
  impl_->cap = cap;
  impl_->product = std::make_unique<Product>(impl_->store, &impl_->view, impl_->stats, cap);
}

bool check_state(const Structure& m, int w, Formula f) {
  ModelChecker mc(m);
  return mc.state(w, f);
}

bool check_path(const Structure& m, const Lasso& sigma, Formula f) {
  ModelChecker mc(m);
  return mc.path(sigma, f);
}

}  // namespace roctl
