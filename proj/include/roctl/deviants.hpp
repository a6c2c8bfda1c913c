// Deviation automaton A_Λφ: the tableau automaton plus an absorbing accept
// state entered whenever the current world can start a deviation on which
// the current tableau state holds. Trigger atoms stand for those
// possibilities and are grounded on a concrete structure.
#pragma once

#include <string>
#include <vector>

#include "roctl/formula.hpp"
#include "roctl/fsa.hpp"
#include "roctl/oracle.hpp"
#include "roctl/structure.hpp"
#include "roctl/tableau.hpp"

namespace roctl {

struct DeviationAutomaton {
  FsaPtr automaton;                       // absorbing-accept flavor
  FsaPtr base;                            // the tableau automaton it extends
  // Per tableau state s. Literals over the letter atoms are checked by the
  // guard into s_F, so states differing only in those share a trigger.
  std::vector<std::string> triggers;      // trigger atom
  std::vector<Formula> trigger_formulas;  // E(⋀(s minus literals) ∧ tail)
  std::vector<Formula> fire;              // trigger atom ∧ literals of s
  int accept = -1;                        // index of s_F

  AtomDefinitions definitions() const;
};

/// Formula required of the deviation after its first step; NNG¬viol for a
/// single deviation.
Formula default_deviation_tail();

/// Name of the trigger atom standing for `psi`.
std::string trigger_name(Formula psi);

DeviationAutomaton build_deviation_automaton(const Tableau& t, Formula tail = default_deviation_tail());

/// Copy of `m` where each trigger atom holds exactly where its formula does.
/// `defs` supplies definitions for labelled atoms occurring in the triggers.
/// Throws StructureError if `m` already carries a trigger atom with a
/// different valuation.
Structure ground_triggers(const Structure& m, const DeviationAutomaton& d, const AtomDefinitions& defs = {});

/// M,σ ⊨ A_Λf after grounding, evaluated by the oracle; equals the
/// existence of a deviation from σ satisfying `f`.
bool check_lambda(const Structure& m, const Lasso& sigma, Formula f, EvalBounds b = {},
                  const AtomDefinitions& defs = {});

}  // namespace roctl
