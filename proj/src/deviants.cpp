#include "roctl/deviants.hpp"

#include <algorithm>
#include <set>

#include "roctl/modelcheck.hpp"
#include "roctl/util.hpp"

namespace roctl {

AtomDefinitions DeviationAutomaton::definitions() const {
  AtomDefinitions out;
  for (std::size_t i = 0; i < triggers.size(); ++i) out.emplace(triggers[i], trigger_formulas[i]);
  return out;
}

Formula default_deviation_tail() {
  return mk_next(mk_next(mk_globally(mk_not(mk_atom(kViol)))));
}

std::string trigger_name(Formula psi) {
  return std::string(kTriggerPrefix) + hex64(fnv1a64(render_formula(psi)));
}

DeviationAutomaton build_deviation_automaton(const Tableau& t, Formula tail) {
  const Fsa& a = *t.automaton;
  std::size_t n = a.num_states();
  DeviationAutomaton d;
  std::vector<std::string> atoms = a.atoms();
  std::vector<Guard> literals(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Formula> core, lits;
    for (Formula g : t.states[s]) {
      bool neg = g.op() == Op::Not;
      Formula at = neg ? g.child() : g;
      int k = at.op() == Op::Atom ? a.atom_index(at.name()) : -1;
      if (k < 0) {
        core.push_back(g);
        continue;
      }
      lits.push_back(g);
      (neg ? literals[s].neg : literals[s].pos) |= Letter{1} << k;
    }
    std::sort(core.begin(), core.end(), StructuralLess{});
    Formula psi = mk_exists(s_and(s_and_all(core), tail));
    std::string name = trigger_name(psi);
    d.triggers.push_back(name);
    d.trigger_formulas.push_back(psi);
    d.fire.push_back(s_and(mk_atom(name), s_and_all(lits)));
    if (std::find(atoms.begin(), atoms.end(), name) == atoms.end()) atoms.push_back(name);
  }
  if (atoms.size() > kMaxAtoms) throw FsaError("deviation automaton alphabet exceeds 64 atoms");

  std::vector<Transition> trans = a.transitions();
  int sf = static_cast<int>(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto k = std::find(atoms.begin(), atoms.end(), d.triggers[s]) - atoms.begin();
    Guard g = literals[s];
    g.pos |= Letter{1} << k;
    trans.push_back({static_cast<int>(s), g, sf});
  }
  trans.push_back({sf, Guard{}, sf});
  std::vector<std::string> names = a.state_names();
  names.push_back("sF");
  d.accept = sf;
  d.base = t.automaton;
  d.automaton = std::make_shared<Fsa>(atoms, names, a.initial(), std::vector<int>{sf}, trans,
                                      Flavor::AbsorbingAccept);
  return d;
}

Structure ground_triggers(const Structure& m, const DeviationAutomaton& d, const AtomDefinitions& defs) {
  Structure out = m;
  ModelChecker mc(m, defs);
  std::set<std::string> done;
  for (std::size_t i = 0; i < d.triggers.size(); ++i) {
    const std::string& name = d.triggers[i];
    if (!done.insert(name).second) continue;
    std::vector<bool> truth = mc.label(d.trigger_formulas[i]);
    bool present = false;
    for (std::size_t w = 0; w < m.size(); ++w) present = present || m.has(static_cast<int>(w), name);
    for (std::size_t w = 0; w < m.size(); ++w) {
      int wi = static_cast<int>(w);
      if (present && m.has(wi, name) != truth[w])
        throw StructureError("atom '" + name + "' already present with a different valuation");
      if (truth[w] && !m.has(wi, name)) out.add_atom(wi, name);
    }
    if (out.declared_atoms) out.declared_atoms->insert(name);
  }
  return out;
}

bool check_lambda(const Structure& m, const Lasso& sigma, Formula f, EvalBounds b, const AtomDefinitions& defs) {
  Tableau t = build_aphi(f);
  DeviationAutomaton d = build_deviation_automaton(t);
  Structure g = ground_triggers(m, d, defs);
  Oracle o(g, b, defs);
  return o.path(sigma, mk_automaton(d.automaton));
}

}  // namespace roctl
