// Tableau automaton A_φ of an ALTL formula: closure, maximally
// propositionally consistent state sets, temporal successor relation and
// the letter-labelled transition relation. A_φ has no acceptance condition;
// it accepts a pair (π, i) when some state reachable on π_{<i} holds on π_{≥i}.
#pragma once

#include <string>
#include <vector>

#include "roctl/formula.hpp"
#include "roctl/fsa.hpp"
#include "roctl/oracle.hpp"
#include "roctl/structure.hpp"

namespace roctl {

using FormulaSet = std::vector<Formula>;  // sorted by structural order

/// Closure of the normalized formula, ordered by length then structure.
/// Automaton operators are given explicit initial sets, and every state x of
/// an embedded automaton contributes A^x.
std::vector<Formula> closure(Formula f);

/// Every subset of the closure passing S1–S4.
std::vector<FormulaSet> tableau_states(Formula f);

/// R1–R4.
bool temporal_successor(const FormulaSet& s, const FormulaSet& t);

struct TableauOptions {
  /// Keep only states reachable from an initial state. Pair acceptance and
  /// the derived deviation automaton are unaffected.
  bool reachable_only = true;
  /// Replace the exact S4 check by propositional consistency only.
  bool approximate_s4 = false;
};

struct Tableau {
  Formula formula;                   // normalized input
  std::vector<Formula> closure;
  std::vector<std::string> letters;  // V_f: atoms fixed by T2
  std::vector<FormulaSet> states;    // index-aligned with automaton states
  FsaPtr automaton;                  // no-acceptance flavor
};

Tableau build_aphi(Formula f, TableauOptions opt = {});

/// Some state reached on g_V(π_{≤i-1}) from an initial state holds on π_{≥i}
/// (checked by the oracle).
bool accepts_pair(const Tableau& t, const Structure& m, const Lasso& pi, std::size_t i, EvalBounds b = {},
                  const AtomDefinitions& defs = {});

/// Satisfiability of an ALTL formula over infinite words. Results are memoised.
bool altl_sat(Formula f);

/// Throws FsaError unless every embedded automaton is counter-free.
void require_counter_free(Formula f);

}  // namespace roctl
