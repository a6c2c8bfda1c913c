// Formula AST shared by every logic in the toolkit (LTL, CTL*, QCTL*,
// RoCTL* and ALTL), together with parsing, printing and size measures.
//
// Formulas are hash-consed: structurally equal formulas are the same
// object, so equality is pointer equality and hashing is O(1). Nodes are
// interned for the lifetime of the process.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace roctl {

class Fsa;

enum class Op : std::uint8_t {
  True,
  False,  // sugar for ~true
  Atom,
  Not,
  And,
  Or,       // sugar
  Implies,  // sugar
  Iff,      // sugar
  Next,
  Until,
  WeakUntil,  // sugar
  Finally,    // sugar
  Globally,   // sugar
  All,
  Exists,  // sugar for ~A~
  Obligatory,
  Permissible,  // sugar for ~O~
  Robustly,
  Prone,  // sugar for ~Rb~
  Forall,
  Automaton,
};

enum class Dialect { Ltl, CtlStar, QctlStar, RoctlStar, Altl };

/// Name of the reserved violation atom.
inline constexpr std::string_view kViol = "viol";

/// Prefixes reserved for generated atoms. User input using them is rejected
/// by the parser unless explicitly allowed.
inline constexpr std::string_view kFreshVarPrefix = "qv_";
inline constexpr std::string_view kLabelPrefix = "la_";
inline constexpr std::string_view kTriggerPrefix = "dv_";

struct Node;

class Formula {
 public:
  Formula() = default;
  explicit Formula(const Node* n) : n_(n) {}

  const Node* node() const { return n_; }
  explicit operator bool() const { return n_ != nullptr; }
  const Node* operator->() const { return n_; }
  const Node& operator*() const { return *n_; }

  Op op() const;
  const std::string& name() const;
  Formula child(int i = 0) const;
  int arity() const;
  std::size_t hash() const;

  friend bool operator==(Formula a, Formula b) { return a.n_ == b.n_; }
  friend bool operator!=(Formula a, Formula b) { return a.n_ != b.n_; }

 private:
  const Node* n_ = nullptr;
};

struct Node {
  Op op;
  std::string name;  // atom name, or bound variable for Forall
  Formula kid[2];
  std::shared_ptr<const Fsa> aut;  // Automaton only
  std::vector<int> init;           // Automaton only: initial states used
  std::size_t hash;
  std::uint64_t length;  // saturating
  int depth;             // nesting depth of temporal/path operators
};

/// Strict weak order that depends only on structure (stable across runs).
bool structural_less(Formula a, Formula b);

struct FormulaHash {
  std::size_t operator()(Formula f) const { return f.hash(); }
};
struct StructuralLess {
  bool operator()(Formula a, Formula b) const { return structural_less(a, b); }
};

// Exact constructors: build precisely the requested node.
Formula mk_true();
Formula mk_false();
Formula mk_atom(std::string_view name);
Formula mk_not(Formula a);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_implies(Formula a, Formula b);
Formula mk_iff(Formula a, Formula b);
Formula mk_next(Formula a);
Formula mk_until(Formula a, Formula b);
Formula mk_weak_until(Formula a, Formula b);
Formula mk_finally(Formula a);
Formula mk_globally(Formula a);
Formula mk_all(Formula a);
Formula mk_exists(Formula a);
Formula mk_obligatory(Formula a);
Formula mk_permissible(Formula a);
Formula mk_robustly(Formula a);
Formula mk_prone(Formula a);
Formula mk_forall(std::string_view var, Formula body);
/// Automaton operator. An empty `init` means the automaton's own initial set.
Formula mk_automaton(std::shared_ptr<const Fsa> a, std::vector<int> init = {});
Formula mk_unary(Op op, Formula a);
Formula mk_binary(Op op, Formula a, Formula b);

// Simplifying constructors for generated formulas: fold constants,
// collapse double negation and idempotent conjunction/disjunction.
Formula s_not(Formula a);
Formula s_and(Formula a, Formula b);
Formula s_or(Formula a, Formula b);
Formula s_implies(Formula a, Formula b);
Formula s_next(Formula a);
Formula s_until(Formula a, Formula b);
Formula s_finally(Formula a);
Formula s_globally(Formula a);
Formula s_and_all(const std::vector<Formula>& fs);
Formula s_or_all(const std::vector<Formula>& fs);

/// Rewrites derived operators into the core set
/// {true, atom, ~, &, U, N, A, O, Rb, forall, automaton}.
Formula normalize(Formula f);

bool is_core(Formula f);
bool is_unary(Op op);
bool is_binary(Op op);

/// Atom names occurring in `f` (automaton alphabets included).
std::vector<std::string> atoms_of(Formula f);
bool contains_op(Formula f, Op op);
bool contains_atom(Formula f, std::string_view name);

/// Replaces atoms according to `sub` (memoised on the DAG).
Formula substitute(Formula f, const std::map<std::string, Formula>& sub);

/// Generic bottom-up rewrite with memoisation on shared subterms.
Formula rewrite(Formula f, const std::function<Formula(Formula, const std::vector<Formula>&)>& fn);

// ---- parsing and printing ----

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at offset " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct DialectError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseOptions {
  bool allow_reserved = false;  // accept generated-atom prefixes
};

Formula parse_formula(std::string_view text, Dialect d, ParseOptions opt = {});
std::string render_formula(Formula f);

bool in_dialect(Formula f, Dialect d);
/// Throws DialectError naming the first offending construct.
void check_dialect(Formula f, Dialect d);
const char* dialect_name(Dialect d);

// ---- size measures ----

/// Table giving the formula abbreviated by each labelled atom.
using AtomDefinitions = std::map<std::string, Formula>;

std::uint64_t length(Formula f);
std::uint64_t complexity(Formula f, const AtomDefinitions& labels);
std::uint64_t robust_complexity(Formula f);
/// Number of distinct subformulas (DAG size).
std::size_t dag_size(Formula f);

}  // namespace roctl

template <>
struct std::hash<roctl::Formula> {
  std::size_t operator()(roctl::Formula f) const noexcept { return f.hash(); }
};
