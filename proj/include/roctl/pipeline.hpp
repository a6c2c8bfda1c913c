// RoCTL* → ALTL → CTL*. State subformulas become labelled atoms, Robustly
// becomes a deviation automaton operator, and for CTL* output the labels are
// expanded again and each automaton operator replaced by its LTL lift.
#pragma once

#include <map>
#include <string>

#include "roctl/deviants.hpp"
#include "roctl/formula.hpp"

namespace roctl {

/// Generated atoms and the state formulas they abbreviate: labelled atoms
/// (la_) for A-formulas and trigger atoms (dv_) of deviation automata.
class LabelledAtomTable {
 public:
  /// Atom standing for the state formula `f`; the same formula always gets
  /// the same name.
  Formula label(Formula f);
  /// Registers the triggers of `d` and remembers it as the source of its automaton.
  void add_deviation(const DeviationAutomaton& d);

  const AtomDefinitions& definitions() const { return defs_; }
  const DeviationAutomaton* deviation(const Fsa* a) const;
  const std::map<const Fsa*, DeviationAutomaton>& deviations() const { return devs_; }

 private:
  AtomDefinitions defs_;
  std::map<const Node*, std::string> names_;
  std::map<const Fsa*, DeviationAutomaton> devs_;
};

struct AltlTranslation {
  Formula formula;
  LabelledAtomTable table;
};

/// ρ: requires RoCTL*; output is ALTL over original, labelled and trigger atoms.
AltlTranslation to_altl(Formula f);

/// f ∨ A_Λf, registering the deviation automaton in `t`.
Formula f_prone(Formula f, LabelledAtomTable& t);

/// Labels expanded, automaton operators replaced by LTL lifts; CTL* output.
Formula to_ctlstar(Formula f);
/// Same, for an existing ALTL translation.
Formula expand_to_ctlstar(const AltlTranslation& a);

/// RC(f) ∧ AGEN¬viol.
Formula to_ctlstar_sat(Formula f);

/// At most n violations strictly after the current position.
Formula gamma_n(std::size_t n);

enum class BoundedMode { Robust, Prone, ObligatoryRobust };

/// Fast paths for chained operators on an already translated operand:
/// ▲^n f, △^n f (as f ∨ Λf ∨ … ∨ Λ^n f) and O▲^n f (as A(γ^n → f)).
/// Deviation automata created are registered in `t`.
Formula translate_bounded_robustly(BoundedMode mode, std::size_t n, Formula f, LabelledAtomTable& t);

}  // namespace roctl
