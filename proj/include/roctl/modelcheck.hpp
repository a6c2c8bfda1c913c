// Explicit-state CTL* model checking (with ALTL automaton operators allowed
// inside path formulas).
//
// Path formulas are put in negation normal form and expanded on the fly in
// product with the structure. Eventualities (until formulas and pending
// automaton operators) are tracked with a breakpoint set, which yields a
// plain Büchi product whose emptiness is decided by nested depth-first
// search. State subformulas are labelled bottom-up.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "roctl/formula.hpp"
#include "roctl/fsa.hpp"
#include "roctl/structure.hpp"

namespace roctl {

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckStats {
  std::size_t product_states = 0;  // product states created
  std::size_t searches = 0;        // emptiness checks run
};

/// Generalized Büchi automaton over letters = subsets of `atoms`.
struct OmegaAutomaton {
  struct Edge {
    int from;
    Guard guard;
    int to;
  };
  std::vector<std::string> atoms;
  std::size_t num_states = 0;
  std::vector<int> initial;
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> acceptance;  // each set must be visited infinitely often
};

/// Automaton accepting exactly the infinite words satisfying the path formula
/// `f` (LTL, optionally with automaton operators).
OmegaAutomaton ltl_to_omega(Formula f, std::size_t state_cap = 200000);

/// Lasso membership: does the automaton accept prefix·loop^ω?
bool omega_accepts(const OmegaAutomaton& a, const Word& prefix, const Word& loop);

/// Satisfiability of an ALTL/LTL path formula over infinite words; every atom
/// (labelled and trigger atoms included) is treated as a free proposition.
bool path_satisfiable(Formula f, std::size_t state_cap = 2000000);

class ModelChecker {
 public:
  /// `defs` supplies the state formula behind atoms missing from the
  /// valuation (labelled atoms, deviation triggers); they are labelled on
  /// demand by recursive checking.
  explicit ModelChecker(const Structure& m, AtomDefinitions defs = {});
  ~ModelChecker();
  ModelChecker(const ModelChecker&) = delete;
  ModelChecker& operator=(const ModelChecker&) = delete;

  /// Truth at a world: some fullpath from `w` satisfies `f`.
  bool state(int w, Formula f);
  /// Truth on the given fullpath.
  bool path(const Lasso& sigma, Formula f);
  /// Truth at every world.
  std::vector<bool> label(Formula f);
  /// A fullpath from `w` satisfying `f`, if any.
  std::optional<Lasso> witness(int w, Formula f);

  const CheckStats& stats() const;
  void set_state_cap(std::size_t cap);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool check_state(const Structure& m, int w, Formula f);
bool check_path(const Structure& m, const Lasso& sigma, Formula f);

}  // namespace roctl
