// Linear translation of RoCTL* into QCTL*. Obligatory becomes a universal
// path quantifier over failure-free continuations; Robustly quantifies over
// a fresh atom y marking the path followed until a deviation.
#pragma once

#include <set>
#include <string>

#include "roctl/formula.hpp"

namespace roctl {

/// Names for quantified atoms: reserved prefix plus a counter, skipping any
/// name listed in `avoid`.
class FreshVarSource {
 public:
  explicit FreshVarSource(std::set<std::string> avoid = {}) : avoid_(std::move(avoid)) {}
  std::string next();

 private:
  std::set<std::string> avoid_;
  std::size_t counter_ = 0;
};

/// NNG¬viol: no failure after the next step.
Formula no_failure_after_next();

/// A(NG¬viol → f).
Formula translate_O(Formula f);

/// ∀y[Gy → E[(Gy ∨ F(y ∧ NNG¬viol)) ∧ f]] with y fresh.
Formula translate_prone(Formula f, FreshVarSource& v);

/// Structural translation; throws DialectError outside RoCTL*.
Formula to_qctl(Formula f);

/// AGEN¬viol ∧ to_qctl(f).
Formula qctl_sat_wrapper(Formula f);

}  // namespace roctl
