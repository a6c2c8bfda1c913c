// Direct evaluator of RoCTL*, CTL*, LTL and ALTL formulas on lassos. It
// quantifies over explicitly enumerated fullpaths and deviations, so it is
// independent of every translation and serves as ground truth in tests.
#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "roctl/formula.hpp"
#include "roctl/structure.hpp"

namespace roctl {

struct EvalBounds {
  std::size_t prefix_cap = 0;        // 0: number of worlds
  std::size_t loop_cap = 0;          // 0: 1 on exact-enumerable structures, else number of worlds
  std::size_t deviation_window = 0;  // 0: derived from the lasso and the formula depth
};

/// True iff `m` is exact-enumerable, self-loops occur only at worlds with no
/// other successor, and the bounds reach every simple path. Under these
/// conditions fullpath enumeration is complete and the oracle is exact.
bool exactness_certificate(const Structure& m, EvalBounds b = {});

/// Deviation window used when none is configured.
std::size_t auto_deviation_window(const Lasso& sigma, Formula f);

class Oracle {
 public:
  /// `defs` gives the state formula behind each labelled or trigger atom
  /// that is not part of the valuation.
  explicit Oracle(const Structure& m, EvalBounds b = {}, AtomDefinitions defs = {});
  ~Oracle();
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  bool path(const Lasso& sigma, Formula f);
  /// Existential: some enumerated fullpath from `w` satisfies `f`.
  bool world(int w, Formula f);
  /// Truth on every suffix position of `sigma` (prefix positions, then one loop copy).
  const std::vector<bool>& positions(const Lasso& sigma, Formula f);

  /// Whether results are guaranteed exact (see exactness_certificate).
  bool exact() const { return exact_; }

  const std::vector<Lasso>& fullpaths(int w, bool failure_free_only);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool exact_;
};

bool eval_path(const Structure& m, const Lasso& sigma, Formula f, EvalBounds b = {}, const AtomDefinitions& defs = {});
bool eval_world(const Structure& m, int w, Formula f, EvalBounds b = {}, const AtomDefinitions& defs = {});

}  // namespace roctl
