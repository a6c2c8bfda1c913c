#include "roctl/fsa.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "roctl/util.hpp"

namespace roctl {

namespace {

Letter full_mask(std::size_t n) { return n >= 64 ? ~Letter{0} : ((Letter{1} << n) - 1); }

std::string canonical_text(const std::vector<std::string>& atoms, const std::vector<std::string>& states,
                           const std::vector<int>& init, const std::vector<int>& acc,
                           const std::vector<Transition>& trans, Flavor flavor) {
  std::ostringstream os;
  os << "A";
  for (const auto& a : atoms) os << ' ' << a;
  os << "|S";
  for (const auto& s : states) os << ' ' << s;
  os << "|I";
  for (int s : init) os << ' ' << s;
  os << "|F";
  for (int s : acc) os << ' ' << s;
  os << "|T";
  for (const auto& t : trans) os << ' ' << t.from << ':' << t.guard.pos << ':' << t.guard.neg << ':' << t.to;
  os << "|" << static_cast<int>(flavor);
  return os.str();
}

}  // namespace

Fsa::Fsa(std::vector<std::string> atoms, std::vector<std::string> states, std::vector<int> initial,
         std::vector<int> accepting, std::vector<Transition> transitions, Flavor flavor, std::string name)
    : atoms_(std::move(atoms)),
      states_(std::move(states)),
      initial_(std::move(initial)),
      accepting_list_(std::move(accepting)),
      trans_(std::move(transitions)),
      flavor_(flavor) {
  if (atoms_.size() > kMaxAtoms) throw FsaError("automaton declares more than 64 atoms");
  const int n = static_cast<int>(states_.size());
  auto check_state = [&](int s) {
    if (s < 0 || s >= n) throw FsaError("transition or state set references an undeclared state");
  };
  std::sort(initial_.begin(), initial_.end());
  initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
  std::sort(accepting_list_.begin(), accepting_list_.end());
  accepting_list_.erase(std::unique(accepting_list_.begin(), accepting_list_.end()), accepting_list_.end());
  for (int s : initial_) check_state(s);
  accepting_.assign(states_.size(), false);
  for (int s : accepting_list_) {
    check_state(s);
    accepting_[static_cast<std::size_t>(s)] = true;
  }
  Letter mask = full_mask(atoms_.size());
  for (auto& t : trans_) {
    check_state(t.from);
    check_state(t.to);
    if ((t.guard.pos | t.guard.neg) & ~mask) throw FsaError("guard mentions an undeclared atom");
  }
  std::sort(trans_.begin(), trans_.end());
  trans_.erase(std::unique(trans_.begin(), trans_.end()), trans_.end());
  out_.assign(states_.size(), {});
  for (const auto& t : trans_) out_[static_cast<std::size_t>(t.from)].push_back(t);

  if (flavor_ == Flavor::NoAcceptance && !accepting_list_.empty())
    throw FsaError("an automaton without acceptance condition cannot have accepting states");
  if (flavor_ == Flavor::AbsorbingAccept) {
    for (int s : accepting_list_) {
      std::vector<Guard> loops;
      for (const auto& t : out(s))
        if (t.to == s) loops.push_back(t.guard);
      for (const Guard& region : letter_partition(loops, mask)) {
        bool covered = std::any_of(loops.begin(), loops.end(), [&](const Guard& g) { return g.matches(region.pos); });
        if (!covered) throw FsaError("accepting state " + state_name(s) + " does not loop on every letter");
      }
    }
  }
  name_ = name.empty() ? "a" + hex64(fnv1a64(canonical_text(atoms_, states_, initial_, accepting_list_, trans_,
                                                            flavor_)),
                                     10)
                       : std::move(name);
}

int Fsa::atom_index(const std::string& a) const {
  auto it = std::find(atoms_.begin(), atoms_.end(), a);
  return it == atoms_.end() ? -1 : static_cast<int>(it - atoms_.begin());
}

int Fsa::state_index(const std::string& s) const {
  auto it = std::find(states_.begin(), states_.end(), s);
  return it == states_.end() ? -1 : static_cast<int>(it - states_.begin());
}

Letter Fsa::letter_of(const std::set<std::string>& present) const {
  Letter e = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (present.count(atoms_[i])) e |= Letter{1} << i;
  return e;
}

Letter Fsa::letter_of(const std::vector<std::string>& present) const {
  return letter_of(std::set<std::string>(present.begin(), present.end()));
}

std::set<std::string> Fsa::letter_atoms(Letter e) const {
  std::set<std::string> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if ((e >> i) & 1U) out.insert(atoms_[i]);
  return out;
}

Bitset Fsa::initial_set() const {
  Bitset b(num_states());
  for (int s : initial_) b.set(static_cast<std::size_t>(s));
  return b;
}

Bitset Fsa::post(const Bitset& from, Letter e) const {
  Bitset r(num_states());
  from.for_each([&](std::size_t s) {
    for (const auto& t : out_[s])
      if (t.guard.matches(e)) r.set(static_cast<std::size_t>(t.to));
  });
  return r;
}

bool Fsa::any_accepting(const Bitset& s) const {
  bool hit = false;
  s.for_each([&](std::size_t i) { hit = hit || accepting_[i]; });
  return hit;
}

bool accepts(const Fsa& a, const Word& word) {
  if (a.flavor() == Flavor::NoAcceptance) throw FsaError("automaton has no acceptance condition");
  Bitset cur = a.initial_set();
  for (Letter e : word) cur = a.post(cur, e);
  return a.any_accepting(cur);
}

Guard exact_guard(Letter e, std::size_t natoms) {
  Letter m = full_mask(natoms);
  return Guard{e & m, ~e & m};
}

std::vector<Guard> letter_partition(const std::vector<Guard>& guards, Letter mask) {
  std::vector<Guard> out;
  std::function<void(Guard, std::vector<const Guard*>)> split = [&](Guard cube, std::vector<const Guard*> live) {
    // Keep only guards that can still intersect the cube.
    std::vector<const Guard*> next;
    Letter undecided = 0;
    for (const Guard* g : live) {
      if ((g->pos & cube.neg) || (g->neg & cube.pos)) continue;
      Letter free = ((g->pos | g->neg) & ~(cube.pos | cube.neg)) & mask;
      if (free) {
        undecided |= free;
        next.push_back(g);
      }
    }
    if (!undecided) {
      out.push_back(cube);
      return;
    }
    Letter bit = undecided & (~undecided + 1);
    Guard with = cube, without = cube;
    with.pos |= bit;
    without.neg |= bit;
    split(with, next);
    split(without, next);
  };
  std::vector<const Guard*> all;
  for (const auto& g : guards)
    if (g.consistent()) all.push_back(&g);
  split(Guard{}, all);
  return out;
}

namespace {

std::string subset_name(const Fsa& a, const Bitset& s) {
  std::string n = "{";
  bool first = true;
  s.for_each([&](std::size_t i) {
    if (!first) n += ",";
    first = false;
    n += a.state_name(static_cast<int>(i));
  });
  return n + "}";
}

Bitset bitset_from_index(std::size_t n, std::uint64_t idx) {
  Bitset b(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((idx >> i) & 1U) b.set(i);
  return b;
}

}  // namespace

Fsa determinise(const Fsa& a, DeterminiseOptions opt) {
  const std::size_t n = a.num_states();
  const Letter mask = full_mask(a.atoms().size());
  std::vector<Bitset> states;
  std::unordered_map<Bitset, int, BitsetHash> index;
  auto intern = [&](const Bitset& b) {
    auto it = index.find(b);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(states.size());
    states.push_back(b);
    index.emplace(b, id);
    return id;
  };

  if (!opt.reachable_only) {
    if (n > 20) throw FsaError("full subset construction limited to 20 states; use reachable_only");
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) intern(bitset_from_index(n, i));
  }
  int init = intern(a.initial_set());
  std::vector<Transition> trans;
  for (std::size_t k = 0; k < states.size(); ++k) {
    Bitset cur = states[k];
    std::vector<Guard> guards;
    cur.for_each([&](std::size_t s) {
      for (const auto& t : a.out(static_cast<int>(s))) guards.push_back(t.guard);
    });
    for (const Guard& region : letter_partition(guards, mask)) {
      int to = intern(a.post(cur, region.pos));
      trans.push_back({static_cast<int>(k), region, to});
    }
  }
  std::vector<std::string> names;
  std::vector<int> acc;
  for (std::size_t k = 0; k < states.size(); ++k) {
    names.push_back(subset_name(a, states[k]));
    if (a.flavor() != Flavor::NoAcceptance && a.any_accepting(states[k])) acc.push_back(static_cast<int>(k));
  }
  Flavor fl = a.flavor() == Flavor::NoAcceptance ? Flavor::NoAcceptance : Flavor::Plain;
  return Fsa(a.atoms(), std::move(names), {init}, std::move(acc), std::move(trans), fl);
}

bool is_deterministic(const Fsa& a) {
  if (a.initial().size() != 1) return false;
  const Letter mask = full_mask(a.atoms().size());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    std::vector<Guard> guards;
    for (const auto& t : a.out(static_cast<int>(s))) guards.push_back(t.guard);
    for (const Guard& r : letter_partition(guards, mask)) {
      int hits = 0;
      for (const auto& g : guards) hits += g.matches(r.pos) ? 1 : 0;
      if (hits > 1) return false;
    }
  }
  return true;
}

bool is_complete(const Fsa& a) {
  if (a.initial().empty()) return false;
  const Letter mask = full_mask(a.atoms().size());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    std::vector<Guard> guards;
    for (const auto& t : a.out(static_cast<int>(s))) guards.push_back(t.guard);
    for (const Guard& r : letter_partition(guards, mask)) {
      bool hit = std::any_of(guards.begin(), guards.end(), [&](const Guard& g) { return g.matches(r.pos); });
      if (!hit) return false;
    }
  }
  return true;
}

namespace {

// Boolean n×n matrix stored row-major in one bit set.
struct Rel {
  std::size_t n;
  Bitset bits;
  bool get(std::size_t i, std::size_t j) const { return bits.test(i * n + j); }
  friend bool operator==(const Rel& a, const Rel& b) { return a.bits == b.bits; }
};

struct RelHash {
  std::size_t operator()(const Rel& r) const { return r.bits.hash(); }
};

Rel rel_mul(const Rel& a, const Rel& b) {
  Rel r{a.n, Bitset(a.n * a.n)};
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k)
      if (a.get(i, k))
        for (std::size_t j = 0; j < a.n; ++j)
          if (b.get(k, j)) r.bits.set(i * a.n + j);
  return r;
}

std::vector<Rel> letter_relations(const Fsa& a) {
  const std::size_t n = a.num_states();
  std::vector<Guard> guards;
  for (const auto& t : a.transitions()) guards.push_back(t.guard);
  std::vector<Rel> gens;
  std::unordered_set<Rel, RelHash> seen;
  for (const Guard& region : letter_partition(guards, full_mask(a.atoms().size()))) {
    Rel r{n, Bitset(n * n)};
    for (const auto& t : a.transitions())
      if (t.guard.matches(region.pos))
        r.bits.set(static_cast<std::size_t>(t.from) * n + static_cast<std::size_t>(t.to));
    if (seen.insert(r).second) gens.push_back(r);
  }
  return gens;
}

constexpr std::size_t kMonoidCap = 200000;

std::vector<Rel> relation_monoid(const Fsa& a) {
  std::vector<Rel> gens = letter_relations(a);
  std::vector<Rel> elems;
  std::unordered_set<Rel, RelHash> seen;
  for (const auto& g : gens)
    if (seen.insert(g).second) elems.push_back(g);
  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (const auto& g : gens) {
      Rel p = rel_mul(elems[k], g);
      if (seen.insert(p).second) {
        elems.push_back(std::move(p));
        if (elems.size() > kMonoidCap) throw FsaError("transition monoid exceeds size cap");
      }
    }
  }
  return elems;
}

Rel rel_pow(const Rel& x, std::size_t e) {
  Rel result{x.n, Bitset(x.n * x.n)};
  for (std::size_t i = 0; i < x.n; ++i) result.bits.set(i * x.n + i);
  Rel base = x;
  while (e) {
    if (e & 1U) result = rel_mul(result, base);
    e >>= 1U;
    if (e) base = rel_mul(base, base);
  }
  return result;
}

}  // namespace

bool is_counter_free(const Fsa& a) {
  std::vector<Rel> m = relation_monoid(a);
  const std::size_t big = m.size() + 1;
  for (const Rel& x : m) {
    Rel p = rel_pow(x, big);
    if (!(rel_mul(p, x) == p)) return false;
  }
  return true;
}

bool satisfies_counter_free_definition(const Fsa& a) {
  const std::size_t n = a.num_states();
  for (const Rel& x : relation_monoid(a)) {
    // Walk x, x^2, ... until the sequence cycles.
    std::unordered_set<Rel, RelHash> seen;
    Rel p = x;
    while (seen.insert(p).second) {
      for (std::size_t s = 0; s < n; ++s)
        if (p.get(s, s) && !x.get(s, s)) return false;
      p = rel_mul(p, x);
    }
  }
  return true;
}

std::set<Word> language_upto(const Fsa& a, std::size_t k) {
  if (a.flavor() == Flavor::NoAcceptance) throw FsaError("automaton has no acceptance condition");
  if (a.atoms().size() > 16) throw FsaError("alphabet too large to enumerate");
  std::set<Word> out;
  const Letter letters = a.alphabet_size();
  Word w;
  std::function<void(const Bitset&)> go = [&](const Bitset& cur) {
    if (a.any_accepting(cur)) out.insert(w);
    if (w.size() == k || cur.none()) return;
    for (Letter e = 0; e < letters; ++e) {
      w.push_back(e);
      go(a.post(cur, e));
      w.pop_back();
    }
  };
  go(a.initial_set());
  return out;
}

std::string word_to_string(const Fsa& a, const Word& w) {
  std::string s;
  for (Letter e : w) {
    s += "{";
    bool first = true;
    for (const auto& at : a.letter_atoms(e)) {
      if (!first) s += ",";
      first = false;
      s += at;
    }
    s += "}";
  }
  return s.empty() ? "ε" : s;
}

// ---------------------------------------------------------------- JSON

nlohmann::json fsa_to_json(const Fsa& a) {
  using nlohmann::json;
  json j;
  j["atoms"] = a.atoms();
  j["states"] = a.state_names();
  json init = json::array(), acc = json::array(), trans = json::array();
  for (int s : a.initial()) init.push_back(a.state_name(s));
  for (int s : a.accepting_states()) acc.push_back(a.state_name(s));
  const Letter mask = full_mask(a.atoms().size());
  for (const auto& t : a.transitions()) {
    json label;
    if ((t.guard.pos | t.guard.neg) == mask) {
      label = json::array();
      for (const auto& at : a.letter_atoms(t.guard.pos)) label.push_back(at);
    } else {
      label = json::object();
      label["pos"] = json::array();
      label["neg"] = json::array();
      for (const auto& at : a.letter_atoms(t.guard.pos)) label["pos"].push_back(at);
      for (const auto& at : a.letter_atoms(t.guard.neg)) label["neg"].push_back(at);
    }
    trans.push_back(json::array({a.state_name(t.from), label, a.state_name(t.to)}));
  }
  j["initial"] = init;
  j["accepting"] = acc;
  j["transitions"] = trans;
  if (a.flavor() == Flavor::NoAcceptance) j["flavor"] = "no-acceptance";
  if (a.flavor() == Flavor::AbsorbingAccept) j["flavor"] = "absorbing-accept";
  return j;
}

Fsa fsa_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> atoms = j.at("atoms").get<std::vector<std::string>>();
    std::vector<std::string> states = j.at("states").get<std::vector<std::string>>();
    std::map<std::string, int> sidx;
    for (std::size_t i = 0; i < states.size(); ++i)
      if (!sidx.emplace(states[i], static_cast<int>(i)).second) throw FsaError("duplicate state " + states[i]);
    std::map<std::string, int> aidx;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (!aidx.emplace(atoms[i], static_cast<int>(i)).second) throw FsaError("duplicate atom " + atoms[i]);
    auto state = [&](const std::string& s) {
      auto it = sidx.find(s);
      if (it == sidx.end()) throw FsaError("unknown state " + s);
      return it->second;
    };
    auto bits = [&](const nlohmann::json& arr) {
      Letter e = 0;
      for (const auto& x : arr) {
        auto it = aidx.find(x.get<std::string>());
        if (it == aidx.end()) throw FsaError("unknown atom " + x.get<std::string>());
        e |= Letter{1} << it->second;
      }
      return e;
    };
    std::vector<int> init, acc;
    for (const auto& s : j.at("initial")) init.push_back(state(s.get<std::string>()));
    for (const auto& s : j.at("accepting")) acc.push_back(state(s.get<std::string>()));
    std::vector<Transition> trans;
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 3) throw FsaError("transition must be [state, letter, state]");
      Guard g;
      if (t[1].is_object()) {
        g.pos = bits(t[1].value("pos", nlohmann::json::array()));
        g.neg = bits(t[1].value("neg", nlohmann::json::array()));
        if (!g.consistent()) throw FsaError("guard requires an atom both present and absent");
      } else {
        g = exact_guard(bits(t[1]), atoms.size());
      }
      trans.push_back({state(t[0].get<std::string>()), g, state(t[2].get<std::string>())});
    }
    Flavor fl = Flavor::Plain;
    std::string f = j.value("flavor", "plain");
    if (f == "no-acceptance") fl = Flavor::NoAcceptance;
    else if (f == "absorbing-accept") fl = Flavor::AbsorbingAccept;
    else if (f != "plain") throw FsaError("unknown flavor " + f);
    return Fsa(std::move(atoms), std::move(states), std::move(init), std::move(acc), std::move(trans), fl);
  } catch (const nlohmann::json::exception& e) {
    throw FsaError(std::string("malformed automaton: ") + e.what());
  }
}

}  // namespace roctl
