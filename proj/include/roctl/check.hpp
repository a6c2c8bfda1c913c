// End-to-end RoCTL* model checking through either the CTL* translation or
// the ALTL form with deviation automata simulated directly.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "roctl/formula.hpp"
#include "roctl/structure.hpp"

namespace roctl {

enum class Strategy { Translate, AutomatonDirect };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& s);  // throws std::invalid_argument

/// Where the formula is evaluated: a world (existentially over its
/// fullpaths, as for state formulas) or a given fullpath.
struct Anchor {
  std::optional<int> world;
  std::optional<Lasso> path;
  static Anchor at(int w) { return {w, std::nullopt}; }
  static Anchor on(Lasso l) { return {std::nullopt, std::move(l)}; }
};

struct Verdict {
  bool verdict = false;
  Strategy strategy = Strategy::Translate;
  std::optional<Lasso> witness;     // a satisfying fullpath for world anchors
  std::size_t automaton_states = 0; // states over all automaton operators used
  std::uint64_t formula_length = 0; // length of the formula actually checked

  nlohmann::json to_json(const Structure& m) const;
};

struct CheckOptions {
  /// When false only seriality is required. Encodings whose prefix worlds
  /// lack a failure-free fullpath are still meaningful for ▲/△ formulas.
  bool require_roctl_structure = true;
};

/// Throws StructureError unless `m` is a RoCTL-structure (or merely serial,
/// per `opt`).
Verdict check_roctl(const Structure& m, const Anchor& anchor, Formula f, Strategy s, CheckOptions opt = {});

}  // namespace roctl
