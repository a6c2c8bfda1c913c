#include "roctl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "roctl/fsa.hpp"

namespace roctl {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::size_t hash_mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct NodeKeyHash {
  std::size_t operator()(const Node* n) const { return n->hash; }
};

struct NodeKeyEq {
  bool operator()(const Node* a, const Node* b) const {
    return a->op == b->op && a->kid[0] == b->kid[0] && a->kid[1] == b->kid[1] &&
           a->aut == b->aut && a->name == b->name && a->init == b->init;
  }
};

struct Interner {
  std::mutex mu;
  std::unordered_set<const Node*, NodeKeyHash, NodeKeyEq> table;
};

Interner& interner() {
  static Interner* in = new Interner();  // never destroyed: nodes outlive statics
  return *in;
}

bool is_temporal(Op op) {
  switch (op) {
    case Op::Next:
    case Op::Until:
    case Op::WeakUntil:
    case Op::Finally:
    case Op::Globally:
    case Op::Robustly:
    case Op::Prone:
      return true;
    default:
      return false;
  }
}

Formula intern(Op op, std::string name, Formula a, Formula b, std::shared_ptr<const Fsa> aut = nullptr,
               std::vector<int> init = {}) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->name = std::move(name);
  n->kid[0] = a;
  n->kid[1] = b;
  n->aut = std::move(aut);
  n->init = std::move(init);
  std::size_t h = std::hash<int>()(static_cast<int>(op));
  h = hash_mix(h, std::hash<std::string>()(n->name));
  h = hash_mix(h, a ? a.hash() : 0);
  h = hash_mix(h, b ? b.hash() : 0);
  h = hash_mix(h, std::hash<const void*>()(n->aut.get()));
  for (int s : n->init) h = hash_mix(h, std::hash<int>()(s));
  n->hash = h;

  switch (op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      n->length = 1;
      n->depth = 0;
      break;
    case Op::Automaton:
      n->length = n->aut ? n->aut->num_states() : 0;
      n->depth = static_cast<int>(n->length);
      break;
    default: {
      std::uint64_t len = is_binary(op) ? sat_add(a->length, b->length) : sat_add(a->length, 1);
      int d = std::max(a->depth, b ? b->depth : 0);
      n->length = len;
      n->depth = d + (is_temporal(op) ? 1 : 0);
    }
  }

  Interner& in = interner();
  std::lock_guard<std::mutex> lock(in.mu);
  auto it = in.table.find(n.get());
  if (it != in.table.end()) return Formula(*it);
  const Node* raw = n.release();
  in.table.insert(raw);
  return Formula(raw);
}

bool is_true_c(Formula f) {
  return f.op() == Op::True || (f.op() == Op::Not && f.child().op() == Op::False);
}
bool is_false_c(Formula f) {
  return f.op() == Op::False || (f.op() == Op::Not && f.child().op() == Op::True);
}

}  // namespace

Op Formula::op() const { return n_->op; }
const std::string& Formula::name() const { return n_->name; }
Formula Formula::child(int i) const { return n_->kid[i]; }
int Formula::arity() const { return n_->kid[1] ? 2 : (n_->kid[0] ? 1 : 0); }
std::size_t Formula::hash() const { return n_ ? n_->hash : 0; }

bool is_unary(Op op) {
  switch (op) {
    case Op::Not:
    case Op::Next:
    case Op::Finally:
    case Op::Globally:
    case Op::All:
    case Op::Exists:
    case Op::Obligatory:
    case Op::Permissible:
    case Op::Robustly:
    case Op::Prone:
    case Op::Forall:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Until:
    case Op::WeakUntil:
      return true;
    default:
      return false;
  }
}

bool structural_less(Formula a, Formula b) {
  if (a == b) return false;
  if (a.op() != b.op()) return a.op() < b.op();
  if (a.name() != b.name()) return a.name() < b.name();
  if (a.op() == Op::Automaton) {
    const std::string& na = a->aut->name();
    const std::string& nb = b->aut->name();
    if (na != nb) return na < nb;
    if (a->init != b->init) return a->init < b->init;
    return a->aut.get() < b->aut.get();
  }
  for (int i = 0; i < 2; ++i) {
    Formula x = a.child(i), y = b.child(i);
    if (x == y) continue;
    if (!x || !y) return !x;
    return structural_less(x, y);
  }
  return false;
}

Formula mk_true() { return intern(Op::True, "", {}, {}); }
Formula mk_false() { return intern(Op::False, "", {}, {}); }
Formula mk_atom(std::string_view name) { return intern(Op::Atom, std::string(name), {}, {}); }
Formula mk_not(Formula a) { return intern(Op::Not, "", a, {}); }
Formula mk_and(Formula a, Formula b) { return intern(Op::And, "", a, b); }
Formula mk_or(Formula a, Formula b) { return intern(Op::Or, "", a, b); }
Formula mk_implies(Formula a, Formula b) { return intern(Op::Implies, "", a, b); }
Formula mk_iff(Formula a, Formula b) { return intern(Op::Iff, "", a, b); }
Formula mk_next(Formula a) { return intern(Op::Next, "", a, {}); }
Formula mk_until(Formula a, Formula b) { return intern(Op::Until, "", a, b); }
Formula mk_weak_until(Formula a, Formula b) { return intern(Op::WeakUntil, "", a, b); }
Formula mk_finally(Formula a) { return intern(Op::Finally, "", a, {}); }
Formula mk_globally(Formula a) { return intern(Op::Globally, "", a, {}); }
Formula mk_all(Formula a) { return intern(Op::All, "", a, {}); }
Formula mk_exists(Formula a) { return intern(Op::Exists, "", a, {}); }
Formula mk_obligatory(Formula a) { return intern(Op::Obligatory, "", a, {}); }
Formula mk_permissible(Formula a) { return intern(Op::Permissible, "", a, {}); }
Formula mk_robustly(Formula a) { return intern(Op::Robustly, "", a, {}); }
Formula mk_prone(Formula a) { return intern(Op::Prone, "", a, {}); }
Formula mk_forall(std::string_view var, Formula body) {
  return intern(Op::Forall, std::string(var), body, {});
}
Formula mk_automaton(std::shared_ptr<const Fsa> a, std::vector<int> init) {
  if (init.empty()) init = a->initial();
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  return intern(Op::Automaton, "", {}, {}, std::move(a), std::move(init));
}

Formula mk_unary(Op op, Formula a) {
  if (!is_unary(op) || op == Op::Forall) throw std::invalid_argument("mk_unary: not a unary operator");
  return intern(op, "", a, {});
}

Formula mk_binary(Op op, Formula a, Formula b) {
  if (!is_binary(op)) throw std::invalid_argument("mk_binary: not a binary operator");
  return intern(op, "", a, b);
}

Formula s_not(Formula a) {
  if (is_true_c(a)) return mk_false();
  if (is_false_c(a)) return mk_true();
  if (a.op() == Op::Not) return a.child();
  return mk_not(a);
}

Formula s_and(Formula a, Formula b) {
  if (is_false_c(a) || is_false_c(b)) return mk_false();
  if (is_true_c(a)) return b;
  if (is_true_c(b)) return a;
  if (a == b) return a;
  if ((a.op() == Op::Not && a.child() == b) || (b.op() == Op::Not && b.child() == a)) return mk_false();
  if (structural_less(b, a)) std::swap(a, b);
  return mk_and(a, b);
}

Formula s_or(Formula a, Formula b) {
  if (is_true_c(a) || is_true_c(b)) return mk_true();
  if (is_false_c(a)) return b;
  if (is_false_c(b)) return a;
  if (a == b) return a;
  if ((a.op() == Op::Not && a.child() == b) || (b.op() == Op::Not && b.child() == a)) return mk_true();
  if (structural_less(b, a)) std::swap(a, b);
  return mk_or(a, b);
}

Formula s_implies(Formula a, Formula b) { return s_or(s_not(a), b); }

Formula s_next(Formula a) {
  if (is_false_c(a)) return mk_false();
  return mk_next(a);
}

Formula s_until(Formula a, Formula b) {
  if (is_true_c(b) || is_false_c(b)) return is_true_c(b) ? mk_true() : mk_false();
  if (is_false_c(a)) return b;
  return mk_until(a, b);
}

Formula s_finally(Formula a) { return s_until(mk_true(), a); }
Formula s_globally(Formula a) { return s_not(s_finally(s_not(a))); }

Formula s_and_all(const std::vector<Formula>& fs) {
  Formula r = mk_true();
  for (Formula f : fs) r = s_and(r, f);
  return r;
}

Formula s_or_all(const std::vector<Formula>& fs) {
  Formula r = mk_false();
  for (Formula f : fs) r = s_or(r, f);
  return r;
}

Formula rewrite(Formula f, const std::function<Formula(Formula, const std::vector<Formula>&)>& fn) {
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    auto it = memo.find(g.node());
    if (it != memo.end()) return it->second;
    std::vector<Formula> kids;
    for (int i = 0; i < g.arity(); ++i) kids.push_back(go(g.child(i)));
    Formula r = fn(g, kids);
    memo.emplace(g.node(), r);
    return r;
  };
  return go(f);
}

namespace {

Formula rebuild(Formula g, const std::vector<Formula>& k) {
  switch (g.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Automaton:
      return g;
    case Op::Forall:
      return mk_forall(g.name(), k[0]);
    default:
      return is_binary(g.op()) ? mk_binary(g.op(), k[0], k[1]) : mk_unary(g.op(), k[0]);
  }
}

}  // namespace

Formula normalize(Formula f) {
  return rewrite(f, [](Formula g, const std::vector<Formula>& k) -> Formula {
    switch (g.op()) {
      case Op::False:
        return mk_not(mk_true());
      case Op::Or:
        return mk_not(mk_and(mk_not(k[0]), mk_not(k[1])));
      case Op::Implies:
        return mk_not(mk_and(k[0], mk_not(k[1])));
      case Op::Iff:
        return mk_and(mk_not(mk_and(k[0], mk_not(k[1]))), mk_not(mk_and(k[1], mk_not(k[0]))));
      case Op::Finally:
        return mk_until(mk_true(), k[0]);
      case Op::Globally:
        return mk_not(mk_until(mk_true(), mk_not(k[0])));
      case Op::WeakUntil: {
        Formula g_a = mk_not(mk_until(mk_true(), mk_not(k[0])));
        return mk_not(mk_and(mk_not(mk_until(k[0], k[1])), mk_not(g_a)));
      }
      case Op::Exists:
        return mk_not(mk_all(mk_not(k[0])));
      case Op::Permissible:
        return mk_not(mk_obligatory(mk_not(k[0])));
      case Op::Prone:
        return mk_not(mk_robustly(mk_not(k[0])));
      default:
        return rebuild(g, k);
    }
  });
}

bool is_core(Formula f) {
  switch (f.op()) {
    case Op::False:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Finally:
    case Op::Globally:
    case Op::WeakUntil:
    case Op::Exists:
    case Op::Permissible:
    case Op::Prone:
      return false;
    default:
      for (int i = 0; i < f.arity(); ++i)
        if (!is_core(f.child(i))) return false;
      return true;
  }
}

namespace {

template <typename Fn>
void visit_dag(Formula f, Fn&& fn) {
  std::unordered_set<const Node*> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g.node()).second) continue;
    fn(g);
    for (int i = 0; i < g.arity(); ++i) stack.push_back(g.child(i));
  }
}

}  // namespace

std::vector<std::string> atoms_of(Formula f) {
  std::set<std::string> out;
  visit_dag(f, [&](Formula g) {
    if (g.op() == Op::Atom) out.insert(g.name());
    if (g.op() == Op::Automaton)
      for (const auto& a : g->aut->atoms()) out.insert(a);
  });
  return {out.begin(), out.end()};
}

bool contains_op(Formula f, Op op) {
  bool found = false;
  visit_dag(f, [&](Formula g) { found = found || g.op() == op; });
  return found;
}

bool contains_atom(Formula f, std::string_view name) {
  bool found = false;
  visit_dag(f, [&](Formula g) { found = found || (g.op() == Op::Atom && g.name() == name); });
  return found;
}

std::size_t dag_size(Formula f) {
  std::size_t n = 0;
  visit_dag(f, [&](Formula) { ++n; });
  return n;
}

Formula substitute(Formula f, const std::map<std::string, Formula>& sub) {
  return rewrite(f, [&](Formula g, const std::vector<Formula>& k) -> Formula {
    if (g.op() == Op::Atom) {
      auto it = sub.find(g.name());
      return it == sub.end() ? g : it->second;
    }
    return rebuild(g, k);
  });
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { Ident, Kw, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::islower(static_cast<unsigned char>(c))) {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (s.substr(i, 2) == "Rb" || s.substr(i, 2) == "Pn") {
        out.push_back({Tok::Kw, std::string(s.substr(i, 2)), start});
        i += 2;
        continue;
      }
      static const std::string single = "AEOPNFGUW";
      if (single.find(c) == std::string::npos) throw ParseError(std::string("unknown operator '") + c + "'", i);
      out.push_back({Tok::Kw, std::string(1, c), start});
      ++i;
      continue;
    }
    if (s.substr(i, 3) == "<->") {
      out.push_back({Tok::Sym, "<->", start});
      i += 3;
      continue;
    }
    if (s.substr(i, 2) == "->") {
      out.push_back({Tok::Sym, "->", start});
      i += 2;
      continue;
    }
    if (c == '~' || c == '&' || c == '|' || c == '(' || c == ')' || c == '.') {
      out.push_back({Tok::Sym, std::string(1, c), start});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, ParseOptions opt) : t_(std::move(toks)), opt_(opt) {}

  Formula parse_all() {
    Formula f = expr();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return t_[i_]; }
  bool is_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_kw(const char* s) const { return peek().kind == Tok::Kw && peek().text == s; }
  void expect_sym(const char* s) {
    if (!is_sym(s)) throw ParseError(std::string("expected '") + s + "'", peek().pos);
    ++i_;
  }

  Formula expr() { return iff(); }

  Formula iff() {
    Formula l = imp();
    while (is_sym("<->")) {
      ++i_;
      l = mk_iff(l, imp());
    }
    return l;
  }

  Formula imp() {
    Formula l = disj();
    if (is_sym("->")) {
      ++i_;
      return mk_implies(l, imp());
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (is_sym("|")) {
      ++i_;
      l = mk_or(l, conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = until();
    while (is_sym("&")) {
      ++i_;
      l = mk_and(l, until());
    }
    return l;
  }

  Formula until() {
    Formula l = unary();
    if (is_kw("U")) {
      ++i_;
      return mk_until(l, until());
    }
    if (is_kw("W")) {
      ++i_;
      return mk_weak_until(l, until());
    }
    return l;
  }

  Formula unary() {
    const Token& t = peek();
    if (is_sym("~")) {
      ++i_;
      return mk_not(unary());
    }
    if (t.kind == Tok::Kw) {
      static const std::map<std::string, Op> ops = {
          {"A", Op::All},         {"E", Op::Exists},   {"O", Op::Obligatory}, {"P", Op::Permissible},
          {"N", Op::Next},        {"F", Op::Finally},  {"G", Op::Globally},   {"Rb", Op::Robustly},
          {"Pn", Op::Prone}};
      auto it = ops.find(t.text);
      if (it == ops.end()) throw ParseError("binary operator '" + t.text + "' without left operand", t.pos);
      ++i_;
      return mk_unary(it->second, unary());
    }
    if (t.kind == Tok::Ident && t.text == "forall") {
      ++i_;
      const Token& v = peek();
      if (v.kind != Tok::Ident || v.text == "true" || v.text == "false" || v.text == "forall")
        throw ParseError("expected variable after 'forall'", v.pos);
      std::string var = v.text;
      check_name(var, v.pos);
      ++i_;
      expect_sym(".");
      return mk_forall(var, expr());
    }
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    if (is_sym("(")) {
      ++i_;
      Formula f = expr();
      expect_sym(")");
      return f;
    }
    if (t.kind == Tok::Ident) {
      ++i_;
      if (t.text == "true") return mk_true();
      if (t.text == "false") return mk_false();
      if (t.text == "forall") throw ParseError("misplaced 'forall'", t.pos);
      check_name(t.text, t.pos);
      return mk_atom(t.text);
    }
    if (t.kind == Tok::End) throw ParseError("unexpected end of input", t.pos);
    throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  void check_name(const std::string& name, std::size_t pos) const {
    if (opt_.allow_reserved) return;
    for (std::string_view p : {kFreshVarPrefix, kLabelPrefix, kTriggerPrefix})
      if (name.compare(0, p.size(), p) == 0)
        throw ParseError("atom '" + name + "' uses a reserved prefix", pos);
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  ParseOptions opt_;
};

}  // namespace

Formula parse_formula(std::string_view text, Dialect d, ParseOptions opt) {
  Parser p(lex(text), opt);
  Formula f = p.parse_all();
  check_dialect(f, d);
  return f;
}

// ---------------------------------------------------------------- printer

namespace {

int prec(Op op) {
  switch (op) {
    case Op::Forall:
      return 0;
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    case Op::Until:
    case Op::WeakUntil:
      return 5;
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Automaton:
      return 7;
    default:
      return 6;
  }
}

const char* keyword(Op op) {
  switch (op) {
    case Op::All: return "A";
    case Op::Exists: return "E";
    case Op::Obligatory: return "O";
    case Op::Permissible: return "P";
    case Op::Next: return "N";
    case Op::Finally: return "F";
    case Op::Globally: return "G";
    case Op::Robustly: return "Rb";
    case Op::Prone: return "Pn";
    default: return nullptr;
  }
}

const char* infix(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    case Op::Until: return " U ";
    case Op::WeakUntil: return " W ";
    default: return nullptr;
  }
}

bool right_assoc(Op op) { return op == Op::Implies || op == Op::Until || op == Op::WeakUntil; }

// Unary expressions that read ambiguously next to an infix operator.
bool needs_guard(Formula f) {
  if (keyword(f.op())) return true;
  if (f.op() == Op::Not) return needs_guard(f.child());
  return false;
}

class Printer {
 public:
  std::string print(Formula f) {
    out_.clear();
    emit(f);
    return out_;
  }

 private:
  void emit(Formula f) {
    Op op = f.op();
    switch (op) {
      case Op::True:
        out_ += "true";
        return;
      case Op::False:
        out_ += "false";
        return;
      case Op::Atom:
        out_ += f.name();
        return;
      case Op::Automaton: {
        out_ += "@" + f->aut->name();
        if (f->init != f->aut->initial()) {
          out_ += "{";
          for (std::size_t i = 0; i < f->init.size(); ++i) {
            if (i) out_ += ",";
            out_ += f->aut->state_name(f->init[i]);
          }
          out_ += "}";
        }
        return;
      }
      case Op::Forall:
        out_ += "forall " + f.name() + " . ";
        emit(f.child());
        return;
      case Op::Not: {
        Formula c = f.child();
        out_ += "~";
        if (is_binary(c.op()) || c.op() == Op::Forall) {
          paren(c);
        } else {
          emit(c);
        }
        return;
      }
      default:
        break;
    }
    if (const char* kw = keyword(op)) {
      Formula c = f.child();
      out_ += kw;
      if (is_binary(c.op()) || c.op() == Op::Forall) {
        paren(c);
      } else {
        out_ += " ";
        emit(c);
      }
      return;
    }
    const char* sym = infix(op);
    int p = prec(op);
    Formula l = f.child(0), r = f.child(1);
    operand(l, right_assoc(op) ? p + 1 : p, op);
    out_ += sym;
    operand(r, right_assoc(op) ? p : p + 1, op);
  }

  void operand(Formula c, int min_prec, Op parent) {
    int pc = prec(c.op());
    bool wrap = pc < min_prec || needs_guard(c);
    // Same precedence but a different operator on a left-associative level
    // would silently regroup.
    if (!wrap && pc == prec(parent) && c.op() != parent && is_binary(c.op())) wrap = true;
    if (wrap) {
      paren(c);
    } else {
      emit(c);
    }
  }

  void paren(Formula c) {
    out_ += "(";
    emit(c);
    out_ += ")";
  }

  std::string out_;
};

}  // namespace

std::string render_formula(Formula f) { return Printer().print(f); }

// ---------------------------------------------------------------- dialects

const char* dialect_name(Dialect d) {
  switch (d) {
    case Dialect::Ltl: return "LTL";
    case Dialect::CtlStar: return "CTL*";
    case Dialect::QctlStar: return "QCTL*";
    case Dialect::RoctlStar: return "RoCTL*";
    case Dialect::Altl: return "ALTL";
  }
  return "?";
}

namespace {

// Returns a description of the first construct not allowed in `d`, or "".
std::string first_violation(Formula f, Dialect d) {
  std::string bad;
  visit_dag(f, [&](Formula g) {
    if (!bad.empty()) return;
    Op op = g.op();
    bool path_q = op == Op::All || op == Op::Exists;
    bool deontic = op == Op::Obligatory || op == Op::Permissible || op == Op::Robustly || op == Op::Prone;
    bool forall = op == Op::Forall;
    bool aut = op == Op::Automaton;
    switch (d) {
      case Dialect::Ltl:
        if (path_q || deontic || forall || aut) bad = "operator not allowed";
        break;
      case Dialect::CtlStar:
        if (deontic || forall || aut) bad = "operator not allowed";
        break;
      case Dialect::QctlStar:
        if (deontic || aut) bad = "operator not allowed";
        break;
      case Dialect::RoctlStar:
        if (forall || aut) bad = "operator not allowed";
        if (op == Op::Atom && g.name() == kViol) bad = "the reserved atom 'viol' is not allowed";
        break;
      case Dialect::Altl:
        if (path_q || deontic || forall) bad = "operator not allowed";
        break;
    }
    if (!bad.empty() && bad == "operator not allowed") {
      std::string shown = render_formula(g);
      if (shown.size() > 40) shown = shown.substr(0, 40) + "...";
      bad = "operator not allowed in " + std::string(dialect_name(d)) + ": " + shown;
    }
  });
  return bad;
}

}  // namespace

bool in_dialect(Formula f, Dialect d) { return first_violation(f, d).empty(); }

void check_dialect(Formula f, Dialect d) {
  std::string bad = first_violation(f, d);
  if (!bad.empty()) throw DialectError(bad);
}

// ---------------------------------------------------------------- measures

std::uint64_t length(Formula f) { return f->length; }

std::uint64_t complexity(Formula f, const AtomDefinitions& labels) {
  std::unordered_map<const Node*, std::uint64_t> memo;
  std::function<std::uint64_t(Formula)> go = [&](Formula g) -> std::uint64_t {
    auto it = memo.find(g.node());
    if (it != memo.end()) return it->second;
    std::uint64_t r;
    switch (g.op()) {
      case Op::Atom: {
        auto d = labels.find(g.name());
        r = d == labels.end() ? 1 : go(d->second);
        break;
      }
      case Op::True:
      case Op::False:
      case Op::Automaton:
        r = g->length;
        break;
      default:
        r = is_binary(g.op()) ? sat_add(go(g.child(0)), go(g.child(1))) : sat_add(go(g.child(0)), 1);
    }
    memo.emplace(g.node(), r);
    return r;
  };
  return go(f);
}

std::uint64_t robust_complexity(Formula f) {
  std::uint64_t best = 0;
  visit_dag(f, [&](Formula g) {
    if (g.op() == Op::Robustly) best = std::max(best, length(g.child()));
    if (g.op() == Op::Prone) best = std::max(best, sat_add(length(g.child()), 1));
  });
  return best;
}

}  // namespace roctl
