#include "roctl/qctl.hpp"

#include <functional>
#include <unordered_map>

namespace roctl {

std::string FreshVarSource::next() {
  for (;;) {
    std::string name = std::string(kFreshVarPrefix) + std::to_string(counter_++);
    if (!avoid_.count(name)) return name;
  }
}

Formula no_failure_after_next() { return mk_next(mk_next(mk_globally(mk_not(mk_atom(kViol))))); }

Formula translate_O(Formula f) { return mk_all(mk_implies(mk_next(mk_globally(mk_not(mk_atom(kViol)))), f)); }

Formula translate_prone(Formula f, FreshVarSource& v) {
  std::string name = v.next();
  Formula y = mk_atom(name);
  Formula marked = mk_or(mk_globally(y), mk_finally(mk_and(y, no_failure_after_next())));
  return mk_forall(name, mk_implies(mk_globally(y), mk_exists(mk_and(marked, f))));
}

Formula to_qctl(Formula f) {
  check_dialect(f, Dialect::RoctlStar);
  std::vector<std::string> used = atoms_of(f);
  FreshVarSource vars(std::set<std::string>(used.begin(), used.end()));
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    auto it = memo.find(g.node());
    if (it != memo.end()) return it->second;
    Formula r;
    switch (g.op()) {
      case Op::True:
      case Op::False:
      case Op::Atom:
        r = g;
        break;
      case Op::Obligatory:
        r = translate_O(go(g.child(0)));
        break;
      case Op::Permissible:
        r = mk_not(translate_O(mk_not(go(g.child(0)))));
        break;
      case Op::Robustly:
        r = mk_not(translate_prone(mk_not(go(g.child(0))), vars));
        break;
      case Op::Prone:
        r = translate_prone(go(g.child(0)), vars);
        break;
      default:
        r = is_binary(g.op()) ? mk_binary(g.op(), go(g.child(0)), go(g.child(1))) : mk_unary(g.op(), go(g.child(0)));
    }
    // Reusing a shared subterm is harmless: its quantifiers stay scoped.
    memo.emplace(g.node(), r);
    return r;
  };
  return go(f);
}

Formula qctl_sat_wrapper(Formula f) {
  Formula agen = mk_all(mk_globally(mk_exists(mk_next(mk_not(mk_atom(kViol))))));
  return mk_and(agen, to_qctl(f));
}

}  // namespace roctl
