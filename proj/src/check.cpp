#include "roctl/check.hpp"

#include <set>
#include <stdexcept>

#include "roctl/modelcheck.hpp"
#include "roctl/pipeline.hpp"

namespace roctl {

const char* strategy_name(Strategy s) { return s == Strategy::Translate ? "translate" : "automaton-direct"; }

Strategy parse_strategy(const std::string& s) {
  if (s == "translate") return Strategy::Translate;
  if (s == "automaton-direct" || s == "direct") return Strategy::AutomatonDirect;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

nlohmann::json Verdict::to_json(const Structure& m) const {
  nlohmann::json j;
  j["verdict"] = verdict;
  j["strategy"] = strategy_name(strategy);
  j["witness"] = witness ? lasso_to_json(m, *witness) : nlohmann::json(nullptr);
  j["stats"] = {{"automatonStates", automaton_states}, {"formulaLength", formula_length}};
  return j;
}

namespace {

std::size_t automaton_states(const AltlTranslation& a) {
  std::size_t n = 0;
  for (const auto& [fsa, d] : a.table.deviations()) n += fsa->num_states();
  return n;
}

}  // namespace

Verdict check_roctl(const Structure& m, const Anchor& anchor, Formula f, Strategy s, CheckOptions opt) {
  Diagnostics diag = validate_structure(m);
  if (!diag.serial() || !diag.undeclared.empty())
    throw StructureError("not a structure: " + diag.summary());
  if (opt.require_roctl_structure && !diag.roctl_structure()) throw StructureError("not a RoCTL-structure: " + diag.summary());
  if (anchor.world.has_value() == anchor.path.has_value())
    throw std::invalid_argument("anchor must be either a world or a path");

  AltlTranslation altl = to_altl(f);
  Verdict v;
  v.strategy = s;
  v.automaton_states = automaton_states(altl);

  Formula g;
  AtomDefinitions defs;
  if (s == Strategy::Translate) {
    g = expand_to_ctlstar(altl);
  } else {
    g = altl.formula;
    defs = altl.table.definitions();
  }
  v.formula_length = length(g);

  ModelChecker mc(m, defs);
  if (anchor.path) {
    v.verdict = mc.path(*anchor.path, g);
  } else {
    int w = *anchor.world;
    v.witness = mc.witness(w, g);
    v.verdict = v.witness.has_value();
  }
  return v;
}

}  // namespace roctl
