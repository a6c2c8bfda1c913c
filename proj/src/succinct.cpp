#include "roctl/succinct.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "roctl/oracle.hpp"
#include "roctl/pipeline.hpp"

namespace roctl {

std::size_t Utree::nodes() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.nodes();
  return n;
}

std::string Utree::canonical() const {
  if (level == 0 && children.empty()) {
    std::string s = "{";
    for (std::size_t i = 0; i < label.size(); ++i) s += (i ? "," : "") + std::to_string(label[i]);
    return s + "}";
  }
  std::string s = std::to_string(level) + "[";
  for (std::size_t i = 0; i < children.size(); ++i) s += (i ? " " : "") + children[i].canonical();
  return s + "]";
}

Utree make_leaf(std::vector<int> label) {
  std::sort(label.begin(), label.end());
  label.erase(std::unique(label.begin(), label.end()), label.end());
  Utree t;
  t.label = std::move(label);
  return t;
}

Utree make_node(std::vector<Utree> children, int level) {
  if (level < 0) {
    if (children.empty()) throw SuccinctError("childless internal node needs an explicit level");
    level = children.front().level + 1;
  }
  if (level == 0) throw SuccinctError("internal node at level 0");
  std::sort(children.begin(), children.end(),
            [](const Utree& a, const Utree& b) { return a.canonical() < b.canonical(); });
  Utree t;
  t.children = std::move(children);
  t.level = level;
  return t;
}

bool isomorphic(const Utree& a, const Utree& b) { return a.canonical() == b.canonical(); }

namespace {

constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

// C(n, k), or nullopt once it passes `cap`.
std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > cap) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

std::optional<std::uint64_t> count_bounded(int h, int l, std::uint64_t cap) {
  if (h < 0 || l < 0) throw SuccinctError("height and label count must be non-negative");
  if (l >= 63 || (std::uint64_t{1} << l) > cap) return std::nullopt;
  std::uint64_t n = std::uint64_t{1} << l;
  for (int k = 0; k < h; ++k) {
    auto next = binomial(n, n / 2, cap);
    if (!next) return std::nullopt;
    n = *next;
  }
  return n;
}

bool valid_rec(const Utree& t, int l) {
  if (t.level == 0) {
    if (!t.children.empty()) return false;
    for (std::size_t i = 0; i < t.label.size(); ++i) {
      if (t.label[i] < 1 || t.label[i] > l) return false;
      if (i && t.label[i - 1] >= t.label[i]) return false;
    }
    return true;
  }
  if (!t.label.empty()) return false;
  auto below = count_bounded(t.level - 1, l, kUnbounded);
  if (!below || t.children.size() != *below / 2) return false;
  std::set<std::string> seen;
  for (const auto& c : t.children) {
    if (c.level != t.level - 1 || !valid_rec(c, l)) return false;
    if (!seen.insert(c.canonical()).second) return false;
  }
  return true;
}

// Calls fn on every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void sort_canonical(std::vector<Utree>& ts) {
  std::vector<std::pair<std::string, Utree>> keyed;
  keyed.reserve(ts.size());
  for (auto& t : ts) keyed.emplace_back(t.canonical(), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ts.clear();
  for (auto& [k, t] : keyed) ts.push_back(std::move(t));
}

}  // namespace

bool valid_utree(const Utree& t, int l) { return l >= 0 && valid_rec(t, l); }

std::uint64_t count_utrees(int h, int l, std::uint64_t cap) {
  auto n = count_bounded(h, l, cap);
  if (!n) throw SuccinctError("#(" + std::to_string(h) + "," + std::to_string(l) + ") exceeds the cap of " +
                              std::to_string(cap));
  return *n;
}

std::vector<Utree> enum_utrees(int h, int l, std::uint64_t cap) {
  count_utrees(h, l, cap);  // refuse early
  std::vector<Utree> level;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << l); ++mask) {
    std::vector<int> label;
    for (int i = 0; i < l; ++i)
      if (mask >> i & 1) label.push_back(i + 1);
    level.push_back(make_leaf(std::move(label)));
  }
  sort_canonical(level);
  for (int k = 1; k <= h; ++k) {
    std::vector<Utree> next;
    for_each_subset(level.size(), level.size() / 2, [&](const std::vector<std::size_t>& idx) {
      std::vector<Utree> children;
      for (std::size_t i : idx) children.push_back(level[i]);
      next.push_back(make_node(std::move(children), k));
    });
    sort_canonical(next);
    level = std::move(next);
  }
  return level;
}

namespace enc {
std::string height(int k) { return "h" + std::to_string(k); }
std::string final_height(int k) { return "hf" + std::to_string(k); }
std::string marker(int node) { return "t_" + std::to_string(node); }
std::string letter(int i) { return "b" + std::to_string(i); }
}  // namespace enc

namespace {

std::vector<std::string> letters(const Utree& t) {
  std::vector<std::string> out;
  for (int i : t.label) out.push_back(enc::letter(i));
  return out;
}

// Preorder walk emitting the open/close worlds of the prefix chain.
void emit_prefix(const Utree& t, Structure& m, int& node) {
  std::vector<std::string> open = letters(t);
  open.push_back(enc::kOpen);
  open.push_back(enc::height(t.level));
  open.push_back(enc::marker(++node));
  m.add_world("w" + std::to_string(m.size()), std::move(open));
  for (const auto& c : t.children) emit_prefix(c, m, node);
  m.add_world("w" + std::to_string(m.size()), {enc::kClose, enc::height(t.level)});
}

// Returns the index of n<k> for the subtree root.
int emit_suffix(const Utree& t, Structure& m, int sink, int& node) {
  std::string id = "n" + std::to_string(++node);
  int n = m.add_world(id, {std::string(kViol)});
  std::vector<std::string> primed = letters(t);
  primed.push_back(enc::final_height(t.level));
  int np = m.add_world(id + "p", std::move(primed));
  m.add_edge(n, np);
  m.add_edge(np, sink);
  for (const auto& c : t.children) m.add_edge(n, emit_suffix(c, m, sink, node));
  return n;
}

void append(Structure& into, const Structure& from) {
  int base = static_cast<int>(into.size());
  for (const auto& w : from.worlds()) into.add_world(w.id, w.atoms);
  for (int w = 0; w < static_cast<int>(from.size()); ++w)
    for (int v : from.succ(w)) into.add_edge(base + w, base + v);
}

}  // namespace

Structure prefix_encode(const Utree& t) {
  Structure m;
  int node = 0;
  emit_prefix(t, m, node);
  m.add_world("wZ");
  for (int w = 0; w + 1 < static_cast<int>(m.size()); ++w) m.add_edge(w, w + 1);
  m.start = 0;
  return m;
}

Structure suffix_encode(const Utree& t) {
  Structure m;
  int sink = m.add_world("nZ");
  m.add_edge(sink, sink);
  int node = 0;
  m.start = emit_suffix(t, m, sink, node);
  return m;
}

Structure join(const Utree& t, const Utree& t2) {
  Structure m = prefix_encode(t);
  append(m, suffix_encode(t2));
  m.add_edge(m.require("wZ"), m.require("n1"));
  m.start = 0;
  m.path = designated_path(m);
  return m;
}

Lasso designated_path(const Structure& m) {
  Lasso l;
  int z = m.require("wZ");
  for (int w = 0; w <= z; ++w) l.prefix.push_back(w);
  l.prefix.push_back(m.require("n1"));
  l.prefix.push_back(m.require("n1p"));
  l.loop.push_back(m.require("nZ"));
  return l;
}

namespace {

Formula atom(const std::string& s) { return mk_atom(s); }

Formula leaf_clause(int l, const std::function<Formula(Formula)>& reach) {
  std::vector<Formula> pos, neg;
  for (int i = 1; i <= l; ++i) {
    Formula b = atom(enc::letter(i));
    pos.push_back(mk_implies(b, reach(b)));
    neg.push_back(mk_implies(mk_not(b), reach(mk_not(b))));
  }
  pos.insert(pos.end(), neg.begin(), neg.end());
  if (pos.empty()) return mk_true();
  Formula f = pos.front();
  for (std::size_t i = 1; i < pos.size(); ++i) f = mk_and(f, pos[i]);
  return f;
}

Formula step(int k, Formula inner, bool weak) {
  Formula guard = mk_implies(mk_and(atom(enc::kOpen), atom(enc::height(k - 1))), mk_prone(inner));
  Formula stop = mk_and(atom(enc::kClose), atom(enc::height(k)));
  Formula body = weak ? mk_weak_until(guard, stop) : mk_until(guard, stop);
  return mk_and(mk_and(body, mk_finally(atom(enc::final_height(k)))),
                mk_and(atom(enc::kOpen), atom(enc::height(k))));
}

void require_params(int h, int l) {
  if (h < 0 || l < 0) throw SuccinctError("height and label count must be non-negative");
}

}  // namespace

Formula formula_f(int h, int l) {
  require_params(h, l);
  Formula hf0 = atom(enc::final_height(0));
  Formula f = leaf_clause(l, [&](Formula b) { return mk_finally(mk_and(hf0, b)); });
  for (int k = 1; k <= h; ++k) f = step(k, f, false);
  return f;
}

Formula formula_fprime(int h, int l) {
  require_params(h, l);
  Formula any = atom(enc::final_height(0));
  for (int k = 1; k <= h; ++k) any = mk_or(any, atom(enc::final_height(k)));
  Formula hf0 = atom(enc::final_height(0));
  Formula f =
      leaf_clause(l, [&](Formula b) { return mk_globally(mk_implies(any, mk_and(hf0, b))); });
  for (int k = 1; k <= h; ++k) f = step(k, f, true);
  return f;
}

std::size_t ExperimentReport::positives(const std::vector<std::vector<bool>>& mat) const {
  std::size_t n = 0;
  for (const auto& row : mat) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
  return n;
}

nlohmann::json ExperimentReport::to_json() const {
  auto mat = [](const std::vector<std::vector<bool>>& m) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : m) {
      nlohmann::json r = nlohmann::json::array();
      for (bool b : row) r.push_back(b ? 1 : 0);
      j.push_back(r);
    }
    return j;
  };
  nlohmann::json j;
  j["height"] = h;
  j["labels"] = l;
  j["family"] = family == Family::F ? "f" : "fprime";
  j["trees"] = trees;
  j["pairs"] = trees.size() * trees.size();
  j["isomorphism"] = mat(isomorphism);
  j["oracle"] = mat(oracle);
  j["oraclePositives"] = positives(oracle);
  j["oracleAgrees"] = oracle_agrees();
  if (!checker.empty()) {
    j["strategy"] = strategy_name(strategy);
    j["checker"] = mat(checker);
    j["checkerPositives"] = positives(checker);
    j["checkerAgrees"] = checker_agrees();
  }
  j["agrees"] = agrees();
  nlohmann::json sz = nlohmann::json::array();
  for (const auto& s : sizes)
    sz.push_back({{"depth", s.depth},
                  {"formulaLength", s.formula_length},
                  {"dagSize", s.dag_size},
                  {"altlLength", s.altl_length},
                  {"automatonStates", s.automaton_states}});
  j["sizes"] = sz;
  j["seconds"] = seconds;
  return j;
}

std::string ExperimentReport::to_text() const {
  std::ostringstream os;
  os << "utrees (" << h << "," << l << "): " << trees.size() << ", pairs: " << trees.size() * trees.size()
     << "\n";
  for (std::size_t i = 0; i < trees.size(); ++i) os << "  T" << i << " = " << trees[i] << "\n";
  auto print = [&](const char* title, const std::vector<std::vector<bool>>& m) {
    os << title << " (" << positives(m) << " positives)\n";
    for (const auto& row : m) {
      os << "  ";
      for (bool b : row) os << (b ? '1' : '.');
      os << "\n";
    }
  };
  print("isomorphism", isomorphism);
  print("oracle", oracle);
  if (!checker.empty()) print((std::string("checker/") + strategy_name(strategy)).c_str(), checker);
  os << "sizes by nesting depth:\n";
  for (const auto& s : sizes)
    os << "  depth " << s.depth << ": length " << s.formula_length << ", dag " << s.dag_size << ", altl length "
       << s.altl_length << ", automaton states " << s.automaton_states << "\n";
  os << "verdict: " << (agrees() ? "matrices agree" : "MISMATCH") << "\n";
  return os.str();
}

ExperimentReport experiment(int h, int l, ExperimentOptions opt) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Utree> ts = enum_utrees(h, l, opt.cap);
  const std::size_t n = ts.size();
  if (n * n > opt.cap) throw SuccinctError("pair count exceeds the cap");

  auto family = [&](int k) { return opt.family == Family::F ? formula_f(k, l) : formula_fprime(k, l); };
  Formula f = family(h);

  ExperimentReport r;
  r.h = h;
  r.l = l;
  r.family = opt.family;
  r.strategy = opt.strategy;
  for (const auto& t : ts) r.trees.push_back(t.canonical());
  r.isomorphism.assign(n, std::vector<bool>(n));
  r.oracle.assign(n, std::vector<bool>(n));
  if (opt.run_checker) r.checker.assign(n, std::vector<bool>(n));

  // vector<bool> rows are not safe to write concurrently, so collect bytes.
  std::vector<char> iso(n * n), orc(n * n), chk(n * n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < n * n;) {
      try {
        const Utree& a = ts[k / n];
        const Utree& b = ts[k % n];
        Structure m = join(a, b);
        iso[k] = isomorphic(a, b);
        orc[k] = eval_path(m, *m.path, f);
        if (opt.run_checker)
          chk[k] = check_roctl(m, Anchor::on(*m.path), f, opt.strategy, CheckOptions{false}).verdict;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n * n));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < n * n; ++k) {
    r.isomorphism[k / n][k % n] = iso[k];
    r.oracle[k / n][k % n] = orc[k];
    if (opt.run_checker) r.checker[k / n][k % n] = chk[k];
  }

  for (int k = 0; k <= h; ++k) {
    Formula g = family(k);
    AltlTranslation a = to_altl(g);
    SizeStat s;
    s.depth = k;
    s.formula_length = length(g);
    s.dag_size = dag_size(g);
    s.altl_length = length(a.formula);
    for (const auto& [fsa, d] : a.table.deviations()) s.automaton_states += fsa->num_states();
    r.sizes.push_back(s);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace roctl
