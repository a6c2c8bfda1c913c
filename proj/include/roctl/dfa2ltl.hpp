// Counter-free DFA to LTL. The translation recurses on the DFA: either every
// letter acts as the identity, or some letter b shrinks the state set, and
// words are split by their occurrences of b into a b-free part (restriction
// automaton over the other letters) and a sequence of b-terminated blocks
// (quotient automaton on the image of b). The same recursion yields, for
// each behaviour α, a formula saying that some prefix of an infinite word
// has behaviour α, which gives the prefix-existence lift used for automaton
// operators whose accepting states are absorbing.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "roctl/deviants.hpp"
#include "roctl/formula.hpp"
#include "roctl/fsa.hpp"

namespace roctl {

/// Total map from states to states; entry q is the state reached from q.
using Behavior = std::vector<int>;

/// Behaviours of all nonempty words. Requires a deterministic complete DFA.
std::set<Behavior> behaviors(const Fsa& d);

struct WilkeOptions {
  bool reachable_only = true;  // drop states unreachable from the initial state
  bool minimize = true;        // merge language-equivalent states first
};

struct WilkeResult {
  /// Finite-word LTL formula over the DFA's atoms defining its language.
  Formula formula;
  /// θ_α for every behaviour of the DFA actually translated (indices refer
  /// to that DFA's states): a nonempty word satisfies θ_α iff its behaviour is α.
  std::map<Behavior, Formula> theta;
  std::size_t states = 0;  // states of the translated DFA
  std::uint64_t length = 0;
  std::size_t dag = 0;
};

/// Throws FsaError on nondeterministic or incomplete input, or when the
/// recursion meets a letter permuting the states nontrivially.
WilkeResult wilke_translate(const Fsa& d, WilkeOptions opt = {});

/// Finite-word semantics at position 0. N is false at the last position, and
/// on the empty word every atom, N and U formula is false.
bool finite_eval(const std::vector<std::set<std::string>>& word, Formula f);
/// Same, with letters given as bitmasks over `atoms`.
bool finite_eval(const std::vector<std::string>& atoms, const Word& word, Formula f);

/// Infinite-word LTL formula that holds iff some prefix (possibly empty) is
/// accepted. The automaton is determinised when needed; its accepting
/// states must be absorbing (FsaError otherwise).
Formula prefix_existence_lift(const Fsa& a);

/// Lift of a deviation automaton: after the prefix σ<i drives the tableau
/// part to a subset X, the trigger of some state in X holds at σi. Trigger
/// atoms are kept as atoms. A nonempty `init` replaces the initial states
/// (indices of the deviation automaton).
Formula prefix_existence_lift(const DeviationAutomaton& d, const std::vector<int>& init = {});

}  // namespace roctl
