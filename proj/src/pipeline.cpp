#include "roctl/pipeline.hpp"

#include <functional>
#include <unordered_map>

#include "roctl/dfa2ltl.hpp"
#include "roctl/qctl.hpp"
#include "roctl/tableau.hpp"
#include "roctl/util.hpp"

namespace roctl {

Formula LabelledAtomTable::label(Formula f) {
  auto it = names_.find(f.node());
  if (it != names_.end()) return mk_atom(it->second);
  std::string name = std::string(kLabelPrefix) + hex64(fnv1a64(render_formula(f)));
  auto [d, fresh] = defs_.emplace(name, f);
  if (!fresh && d->second != f) throw std::logic_error("labelled atom name collision: " + name);
  names_.emplace(f.node(), name);
  return mk_atom(name);
}

void LabelledAtomTable::add_deviation(const DeviationAutomaton& d) {
  for (const auto& [name, psi] : d.definitions()) {
    auto [it, fresh] = defs_.emplace(name, psi);
    if (!fresh && it->second != psi) throw std::logic_error("trigger atom name collision: " + name);
  }
  devs_.emplace(d.automaton.get(), d);
}

const DeviationAutomaton* LabelledAtomTable::deviation(const Fsa* a) const {
  auto it = devs_.find(a);
  return it == devs_.end() ? nullptr : &it->second;
}

namespace {

Formula lambda(Formula f, Formula tail, LabelledAtomTable& t) {
  DeviationAutomaton d = build_deviation_automaton(build_aphi(f), tail);
  t.add_deviation(d);
  return mk_automaton(d.automaton);
}

}  // namespace

Formula f_prone(Formula f, LabelledAtomTable& t) {
  return mk_or(f, lambda(f, default_deviation_tail(), t));
}

AltlTranslation to_altl(Formula f) {
  check_dialect(f, Dialect::RoctlStar);
  AltlTranslation out;
  LabelledAtomTable& t = out.table;
  std::unordered_map<const Node*, Formula> memo;
  Formula safe = mk_next(mk_globally(mk_not(mk_atom(kViol))));
  std::function<Formula(Formula)> rho = [&](Formula g) -> Formula {
    auto it = memo.find(g.node());
    if (it != memo.end()) return it->second;
    Formula r;
    switch (g.op()) {
      case Op::True:
      case Op::False:
      case Op::Atom:
        r = g;
        break;
      case Op::All:
        r = t.label(mk_all(rho(g.child(0))));
        break;
      case Op::Exists:
        r = mk_not(t.label(mk_all(mk_not(rho(g.child(0))))));
        break;
      case Op::Obligatory:
        r = t.label(mk_all(mk_implies(safe, rho(g.child(0)))));
        break;
      case Op::Permissible:
        r = mk_not(t.label(mk_all(mk_implies(safe, mk_not(rho(g.child(0)))))));
        break;
      case Op::Robustly:
        r = mk_not(f_prone(mk_not(rho(g.child(0))), t));
        break;
      case Op::Prone:
        r = f_prone(rho(g.child(0)), t);
        break;
      default:
        r = is_binary(g.op()) ? mk_binary(g.op(), rho(g.child(0)), rho(g.child(1))) : mk_unary(g.op(), rho(g.child(0)));
    }
    memo.emplace(g.node(), r);
    return r;
  };
  out.formula = rho(f);
  return out;
}

Formula expand_to_ctlstar(const AltlTranslation& a) {
  const LabelledAtomTable& t = a.table;
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    auto it = memo.find(g.node());
    if (it != memo.end()) return it->second;
    Formula r;
    switch (g.op()) {
      case Op::True:
      case Op::False:
        r = g;
        break;
      case Op::Atom: {
        auto d = t.definitions().find(g.name());
        r = d == t.definitions().end() ? g : go(d->second);
        break;
      }
      case Op::Automaton: {
        const DeviationAutomaton* d = t.deviation(g->aut.get());
        Formula lifted = d ? prefix_existence_lift(*d, g->init) : prefix_existence_lift(*g->aut);
        r = go(lifted);
        break;
      }
      default:
        r = is_binary(g.op()) ? mk_binary(g.op(), go(g.child(0)), go(g.child(1))) : mk_unary(g.op(), go(g.child(0)));
    }
    memo.emplace(g.node(), r);
    return r;
  };
  Formula r = go(a.formula);
  check_dialect(r, Dialect::CtlStar);
  return r;
}

Formula to_ctlstar(Formula f) { return expand_to_ctlstar(to_altl(f)); }

Formula to_ctlstar_sat(Formula f) {
  Formula agen = mk_all(mk_globally(mk_exists(mk_next(mk_not(mk_atom(kViol))))));
  return mk_and(to_ctlstar(f), agen);
}

Formula gamma_n(std::size_t n) {
  Formula g = mk_next(mk_globally(mk_not(mk_atom(kViol))));
  for (std::size_t k = 0; k < n; ++k) g = mk_next(mk_until(mk_not(mk_atom(kViol)), g));
  return g;
}

Formula translate_bounded_robustly(BoundedMode mode, std::size_t n, Formula f, LabelledAtomTable& t) {
  auto prone = [&](Formula g) {
    Formula r = g;
    for (std::size_t k = 1; k <= n; ++k) r = mk_or(r, lambda(g, mk_next(gamma_n(k - 1)), t));
    return r;
  };
  switch (mode) {
    case BoundedMode::Prone:
      return prone(f);
    case BoundedMode::Robust:
      return n == 0 ? f : mk_not(prone(mk_not(f)));
    case BoundedMode::ObligatoryRobust:
      return mk_all(mk_implies(gamma_n(n), f));
  }
  return f;
}

}  // namespace roctl
