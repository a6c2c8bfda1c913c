#include "roctl/structure.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace roctl {

using nlohmann::json;

Lasso Lasso::suffix(std::size_t j) const {
  Lasso r;
  if (j < prefix.size()) {
    r.prefix.assign(prefix.begin() + static_cast<std::ptrdiff_t>(j), prefix.end());
    r.loop = loop;
  } else {
    std::size_t k = (j - prefix.size()) % loop.size();
    r.loop.assign(loop.begin() + static_cast<std::ptrdiff_t>(k), loop.end());
    r.loop.insert(r.loop.end(), loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return r;
}

Lasso Lasso::canonical() const {
  Lasso r = *this;
  while (!r.prefix.empty() && r.prefix.back() == r.loop.back()) {
    std::rotate(r.loop.rbegin(), r.loop.rbegin() + 1, r.loop.rend());
    r.prefix.pop_back();
  }
  std::size_t n = r.loop.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = r.loop[i] == r.loop[i - d];
    if (periodic) {
      r.loop.resize(d);
      break;
    }
  }
  return r;
}

bool valid_atom_name(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

int Structure::add_world(std::string id, std::vector<std::string> atoms) {
  if (index_of(id) >= 0) throw StructureError("duplicate world id '" + id + "'");
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  worlds_.push_back({std::move(id), std::move(atoms)});
  succ_.emplace_back();
  return static_cast<int>(worlds_.size() - 1);
}

void Structure::add_edge(int from, int to) {
  if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= size() || static_cast<std::size_t>(to) >= size())
    throw StructureError("edge references an unknown world");
  auto& s = succ_[static_cast<std::size_t>(from)];
  auto it = std::lower_bound(s.begin(), s.end(), to);
  if (it == s.end() || *it != to) s.insert(it, to);
}

void Structure::add_atom(int w, const std::string& atom) {
  auto& a = worlds_[static_cast<std::size_t>(w)].atoms;
  auto it = std::lower_bound(a.begin(), a.end(), atom);
  if (it == a.end() || *it != atom) a.insert(it, atom);
}

bool Structure::has_edge(int a, int b) const {
  const auto& s = succ(a);
  return std::binary_search(s.begin(), s.end(), b);
}

bool Structure::has(int w, std::string_view atom) const {
  const auto& a = world(w).atoms;
  auto it = std::lower_bound(a.begin(), a.end(), atom, [](const std::string& x, std::string_view y) { return x < y; });
  return it != a.end() && *it == atom;
}

int Structure::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < worlds_.size(); ++i)
    if (worlds_[i].id == id) return static_cast<int>(i);
  return -1;
}

int Structure::require(const std::string& id) const {
  int i = index_of(id);
  if (i < 0) throw StructureError("unknown world '" + id + "'");
  return i;
}

std::set<std::string> Structure::used_atoms() const {
  std::set<std::string> r;
  for (const auto& w : worlds_) r.insert(w.atoms.begin(), w.atoms.end());
  return r;
}

std::string Diagnostics::summary() const {
  std::ostringstream os;
  auto list = [&](const char* what, const std::vector<std::string>& v) {
    if (v.empty()) return;
    os << what << ":";
    for (const auto& s : v) os << ' ' << s;
    os << '\n';
  };
  list("worlds without successors", not_serial);
  list("worlds without a failure-free fullpath", no_failure_free);
  list("undeclared atoms", undeclared);
  std::string r = os.str();
  return r.empty() ? "ok\n" : r;
}

namespace {

bool viol_at(const Structure& m, int w) { return m.has(w, "viol"); }

}  // namespace

Diagnostics validate_structure(const Structure& m) {
  Diagnostics d;
  std::size_t n = m.size();
  for (std::size_t w = 0; w < n; ++w)
    if (m.succ(static_cast<int>(w)).empty()) d.not_serial.push_back(m.world(static_cast<int>(w)).id);

  // Worlds from which an infinite viol-free walk exists: greatest fixpoint of
  // "viol-free with a successor in the set".
  std::vector<bool> good(n);
  for (std::size_t w = 0; w < n; ++w) good[w] = !viol_at(m, static_cast<int>(w));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t w = 0; w < n; ++w) {
      if (!good[w]) continue;
      bool ok = false;
      for (int v : m.succ(static_cast<int>(w))) ok = ok || good[static_cast<std::size_t>(v)];
      if (!ok) {
        good[w] = false;
        changed = true;
      }
    }
  }
  // A failure-free fullpath only constrains worlds after the first.
  for (std::size_t w = 0; w < n; ++w) {
    bool ok = false;
    for (int v : m.succ(static_cast<int>(w))) ok = ok || good[static_cast<std::size_t>(v)];
    if (!ok) d.no_failure_free.push_back(m.world(static_cast<int>(w)).id);
  }
  if (m.declared_atoms) {
    for (const auto& w : m.worlds())
      for (const auto& a : w.atoms)
        if (!m.declared_atoms->count(a)) d.undeclared.push_back(w.id + ":" + a);
  }
  return d;
}

bool exact_enumerable(const Structure& m) {
  // Iterative colour DFS looking for a back edge that is not a self-loop.
  std::size_t n = m.size();
  std::vector<int> colour(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (colour[root]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [w, k] = stack.back();
      const auto& s = m.succ(w);
      if (k == s.size()) {
        colour[static_cast<std::size_t>(w)] = 2;
        stack.pop_back();
        continue;
      }
      int v = s[k++];
      if (v == w) continue;
      if (colour[static_cast<std::size_t>(v)] == 1) return false;
      if (colour[static_cast<std::size_t>(v)] == 0) {
        colour[static_cast<std::size_t>(v)] = 1;
        stack.push_back({v, 0});
      }
    }
  }
  return true;
}

PathBounds effective_bounds(const Structure& m, PathBounds b) {
  if (b.prefix_cap == 0) b.prefix_cap = m.size();
  if (b.loop_cap == 0) b.loop_cap = exact_enumerable(m) ? 1 : m.size();
  return b;
}

bool failure_free(const Structure& m, const Lasso& l) {
  for (std::size_t i = 1; i < l.prefix.size(); ++i)
    if (viol_at(m, l.prefix[i])) return false;
  for (int w : l.loop)
    if (viol_at(m, w)) {
      // The loop world only escapes the check when it is σ0 and never recurs,
      // which a loop cannot do.
      return false;
    }
  return true;
}

bool valid_lasso(const Structure& m, const Lasso& l) {
  if (l.loop.empty()) return false;
  auto ok = [&](int w) { return w >= 0 && static_cast<std::size_t>(w) < m.size(); };
  for (int w : l.prefix)
    if (!ok(w)) return false;
  for (int w : l.loop)
    if (!ok(w)) return false;
  std::size_t n = l.positions();
  for (std::size_t j = 0; j < n; ++j)
    if (!m.has_edge(l.at(j), l.at(l.next_pos(j)))) return false;
  return true;
}

std::vector<Lasso> enumerate_fullpaths(const Structure& m, int w, PathBounds b, bool failure_free_only) {
  if (w < 0 || static_cast<std::size_t>(w) >= m.size()) throw StructureError("world out of range");
  b = effective_bounds(m, b);
  if (b.loop_cap == 0) throw StructureError("loop cap must be positive");
  std::set<Lasso> out;
  std::vector<int> path{w};
  std::size_t max_len = b.prefix_cap + b.loop_cap;
  // Every lasso with |prefix| <= P and |loop| <= L is a walk of at most P+L
  // worlds whose last world steps back to position |prefix|.
  std::function<void()> dfs = [&]() {
    std::size_t k = path.size();
    int last = path.back();
    for (std::size_t s = (k > b.loop_cap ? k - b.loop_cap : 0); s < k && s <= b.prefix_cap; ++s) {
      if (!m.has_edge(last, path[s])) continue;
      Lasso l;
      l.prefix.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(s));
      l.loop.assign(path.begin() + static_cast<std::ptrdiff_t>(s), path.end());
      if (failure_free_only && s == 0 && viol_at(m, path[0])) continue;
      out.insert(l.canonical());
    }
    if (k >= max_len) return;
    for (int v : m.succ(last)) {
      if (failure_free_only && viol_at(m, v)) continue;
      path.push_back(v);
      dfs();
      path.pop_back();
    }
  };
  dfs();
  return {out.begin(), out.end()};
}

std::size_t default_deviation_window(const Lasso& sigma) { return sigma.prefix.size() + 2 * sigma.loop.size(); }

std::vector<std::pair<std::size_t, Lasso>> deviations(const Structure& m, const Lasso& sigma, PathBounds b,
                                                      std::size_t window) {
  if (window == 0) window = default_deviation_window(sigma);
  std::set<std::pair<std::size_t, Lasso>> out;
  std::map<int, std::vector<Lasso>> ff;
  for (std::size_t i = 0; i < window; ++i) {
    for (int y : m.succ(sigma.at(i))) {
      auto it = ff.find(y);
      if (it == ff.end()) it = ff.emplace(y, enumerate_fullpaths(m, y, b, true)).first;
      for (const Lasso& tau : it->second) {
        Lasso pi;
        for (std::size_t j = 0; j <= i; ++j) pi.prefix.push_back(sigma.at(j));
        pi.prefix.insert(pi.prefix.end(), tau.prefix.begin(), tau.prefix.end());
        pi.loop = tau.loop;
        out.insert({i, pi.canonical()});
      }
    }
  }
  return {out.begin(), out.end()};
}

namespace {

std::vector<int> refine(const std::vector<const World*>& worlds, const std::vector<std::vector<int>>& succ) {
  std::size_t n = worlds.size();
  std::vector<int> block(n);
  {
    std::map<std::vector<std::string>, int> ids;
    for (std::size_t i = 0; i < n; ++i)
      block[i] = ids.emplace(worlds[i]->atoms, static_cast<int>(ids.size())).first->second;
  }
  for (;;) {
    std::map<std::pair<int, std::vector<int>>, int> ids;
    std::vector<int> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> sig;
      for (int v : succ[i]) sig.push_back(block[static_cast<std::size_t>(v)]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      next[i] = ids.emplace(std::make_pair(block[i], std::move(sig)), static_cast<int>(ids.size())).first->second;
    }
    std::size_t before = std::set<int>(block.begin(), block.end()).size();
    std::size_t after = ids.size();
    block = std::move(next);
    if (before == after) return block;
  }
}

}  // namespace

std::vector<int> bisimulation_classes(const Structure& m) {
  std::vector<const World*> ws;
  std::vector<std::vector<int>> succ;
  for (std::size_t i = 0; i < m.size(); ++i) {
    ws.push_back(&m.world(static_cast<int>(i)));
    succ.push_back(m.succ(static_cast<int>(i)));
  }
  return refine(ws, succ);
}

bool bisimilar(const Pvs& a, const Pvs& b) {
  std::vector<const World*> ws;
  std::vector<std::vector<int>> succ;
  int off = static_cast<int>(a.m->size());
  for (std::size_t i = 0; i < a.m->size(); ++i) {
    ws.push_back(&a.m->world(static_cast<int>(i)));
    succ.push_back(a.m->succ(static_cast<int>(i)));
  }
  for (std::size_t i = 0; i < b.m->size(); ++i) {
    ws.push_back(&b.m->world(static_cast<int>(i)));
    auto s = b.m->succ(static_cast<int>(i));
    for (int& v : s) v += off;
    succ.push_back(std::move(s));
  }
  auto block = refine(ws, succ);
  return block[static_cast<std::size_t>(a.world)] == block[static_cast<std::size_t>(b.world + off)];
}

Unwinding unwind(const Structure& m, int w, std::size_t depth) {
  if (depth == 0) throw StructureError("unwinding depth must be at least 1");
  Unwinding u;
  struct Item {
    int node;
    int origin;
    std::size_t level;
    std::string id;
  };
  std::vector<Item> queue;
  std::string rid = m.world(w).id;
  queue.push_back({u.tree.add_world(rid, m.world(w).atoms), w, 1, rid});
  u.origin.push_back(w);
  u.leaf.push_back(false);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Item it = queue[qi];
    if (it.level == depth) {
      u.leaf[static_cast<std::size_t>(it.node)] = true;
      u.tree.add_edge(it.node, it.node);
      continue;
    }
    for (int v : m.succ(it.origin)) {
      std::string id = it.id + "." + m.world(v).id;
      int c = u.tree.add_world(id, m.world(v).atoms);
      u.origin.push_back(v);
      u.leaf.push_back(false);
      u.tree.add_edge(it.node, c);
      queue.push_back({c, v, it.level + 1, id});
    }
  }
  u.tree.start = 0;
  return u;
}

json structure_to_json(const Structure& m) {
  json j;
  j["worlds"] = json::array();
  for (const auto& w : m.worlds()) j["worlds"].push_back({{"id", w.id}, {"atoms", w.atoms}});
  j["edges"] = json::array();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int v : m.succ(static_cast<int>(i))) j["edges"].push_back({m.world(static_cast<int>(i)).id, m.world(v).id});
  if (m.start) j["start"] = m.world(*m.start).id;
  if (m.path) {
    json p;
    p["prefix"] = json::array();
    p["loop"] = json::array();
    for (int w : m.path->prefix) p["prefix"].push_back(m.world(w).id);
    for (int w : m.path->loop) p["loop"].push_back(m.world(w).id);
    j["path"] = p;
  }
  if (m.declared_atoms) j["atoms"] = *m.declared_atoms;
  return j;
}

Lasso lasso_from_json(const Structure& m, const json& j) {
  try {
    Lasso l;
    for (const auto& w : j.at("prefix")) l.prefix.push_back(m.require(w.get<std::string>()));
    for (const auto& w : j.at("loop")) l.loop.push_back(m.require(w.get<std::string>()));
    if (!valid_lasso(m, l)) throw StructureError("path is not a fullpath of the structure");
    return l;
  } catch (const json::exception& e) {
    throw StructureError(std::string("malformed path: ") + e.what());
  }
}

Structure structure_from_json(const json& j) {
  try {
    if (!j.is_object()) throw StructureError("structure must be a JSON object");
    Structure m;
    for (const auto& w : j.at("worlds")) {
      std::vector<std::string> atoms;
      if (w.contains("atoms")) atoms = w.at("atoms").get<std::vector<std::string>>();
      for (const auto& a : atoms)
        if (!valid_atom_name(a)) throw StructureError("invalid atom name '" + a + "'");
      m.add_world(w.at("id").get<std::string>(), std::move(atoms));
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw StructureError("edge must be a pair of world ids");
      m.add_edge(m.require(e[0].get<std::string>()), m.require(e[1].get<std::string>()));
    }
    if (j.contains("start")) m.start = m.require(j.at("start").get<std::string>());
    if (j.contains("path")) m.path = lasso_from_json(m, j.at("path"));
    if (j.contains("atoms")) {
      auto a = j.at("atoms").get<std::vector<std::string>>();
      m.declared_atoms = std::set<std::string>(a.begin(), a.end());
    }
    return m;
  } catch (const json::exception& e) {
    throw StructureError(std::string("malformed structure: ") + e.what());
  }
}

Structure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructureError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw StructureError("'" + path + "' is not valid JSON: " + e.what());
  }
  return structure_from_json(j);
}

std::string lasso_to_string(const Structure& m, const Lasso& l) {
  std::string s;
  for (int w : l.prefix) s += m.world(w).id + " ";
  s += "(";
  for (std::size_t i = 0; i < l.loop.size(); ++i) s += (i ? " " : "") + m.world(l.loop[i]).id;
  return s + ")^w";
}

json lasso_to_json(const Structure& m, const Lasso& l) {
  json p;
  p["prefix"] = json::array();
  p["loop"] = json::array();
  for (int w : l.prefix) p["prefix"].push_back(m.world(w).id);
  for (int w : l.loop) p["loop"].push_back(m.world(w).id);
  return p;
}

}  // namespace roctl
