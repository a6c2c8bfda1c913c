// Finite-state automata over letters that are sets of atoms.
//
// A letter is a bitmask over the automaton's declared atoms. Transitions
// carry cube guards (atoms required present / required absent); a guard
// mentioning every atom denotes a single letter.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "roctl/bitset.hpp"

namespace roctl {

using Letter = std::uint64_t;
using Word = std::vector<Letter>;

inline constexpr std::size_t kMaxAtoms = 64;

struct Guard {
  Letter pos = 0;
  Letter neg = 0;

  bool matches(Letter e) const { return (e & pos) == pos && (e & neg) == 0; }
  bool consistent() const { return (pos & neg) == 0; }
  friend bool operator==(const Guard&, const Guard&) = default;
  friend auto operator<=>(const Guard&, const Guard&) = default;
};

struct Transition {
  int from;
  Guard guard;
  int to;
  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

enum class Flavor { Plain, NoAcceptance, AbsorbingAccept };

class Fsa {
 public:
  Fsa(std::vector<std::string> atoms, std::vector<std::string> states, std::vector<int> initial,
      std::vector<int> accepting, std::vector<Transition> transitions, Flavor flavor = Flavor::Plain,
      std::string name = "");

  const std::vector<std::string>& atoms() const { return atoms_; }
  int atom_index(const std::string& a) const;
  std::size_t num_states() const { return states_.size(); }
  const std::string& state_name(int s) const { return states_[static_cast<std::size_t>(s)]; }
  int state_index(const std::string& s) const;
  const std::vector<std::string>& state_names() const { return states_; }
  const std::vector<int>& initial() const { return initial_; }
  const std::vector<int>& accepting_states() const { return accepting_list_; }
  bool accepting(int s) const { return accepting_[static_cast<std::size_t>(s)]; }
  const std::vector<Transition>& transitions() const { return trans_; }
  /// Transitions leaving `s`.
  const std::vector<Transition>& out(int s) const { return out_[static_cast<std::size_t>(s)]; }
  Flavor flavor() const { return flavor_; }
  /// Stable content-derived identifier, e.g. "a1f09c3d".
  const std::string& name() const { return name_; }

  Letter letter_of(const std::set<std::string>& present) const;
  Letter letter_of(const std::vector<std::string>& present) const;
  std::set<std::string> letter_atoms(Letter e) const;
  std::size_t alphabet_size() const { return std::size_t{1} << atoms_.size(); }

  Bitset initial_set() const;
  Bitset post(const Bitset& from, Letter e) const;
  bool any_accepting(const Bitset& s) const;

 private:
  std::vector<std::string> atoms_;
  std::vector<std::string> states_;
  std::vector<int> initial_;
  std::vector<int> accepting_list_;
  std::vector<bool> accepting_;
  std::vector<Transition> trans_;
  std::vector<std::vector<Transition>> out_;
  Flavor flavor_;
  std::string name_;
};

using FsaPtr = std::shared_ptr<const Fsa>;

struct FsaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// True iff some run over `word` from an initial state ends accepting.
bool accepts(const Fsa& a, const Word& word);

struct DeterminiseOptions {
  bool reachable_only = false;
};

/// Subset construction. The result is deterministic and complete: every
/// state has exactly one successor per letter.
Fsa determinise(const Fsa& a, DeterminiseOptions opt = {});

bool is_deterministic(const Fsa& a);
bool is_complete(const Fsa& a);

/// Aperiodicity of the transition monoid of the determinised, completed
/// automaton. The subset automaton's monoid is isomorphic to the monoid of
/// boolean transition matrices, which is what gets computed.
bool is_counter_free(const Fsa& a);

/// Literal per-state definition: u^m in L(s,s) implies u in L(s,s).
bool satisfies_counter_free_definition(const Fsa& a);

/// All accepted words of length at most k (the empty word included).
std::set<Word> language_upto(const Fsa& a, std::size_t k);

/// Disjoint cubes covering all letters, each contained in or disjoint from
/// every given guard. Atoms outside `mask` are never split on.
std::vector<Guard> letter_partition(const std::vector<Guard>& guards, Letter mask);

/// Guard matching exactly letter `e` over `natoms` atoms.
Guard exact_guard(Letter e, std::size_t natoms);

nlohmann::json fsa_to_json(const Fsa& a);
Fsa fsa_from_json(const nlohmann::json& j);

std::string word_to_string(const Fsa& a, const Word& w);

}  // namespace roctl
