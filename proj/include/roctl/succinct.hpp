// Labelled trees of bounded height with pairwise distinct children, their
// encodings as structures, the formula family that recognises isomorphic
// pairs, and a driver that compares checker verdicts with isomorphism.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "roctl/check.hpp"
#include "roctl/formula.hpp"
#include "roctl/structure.hpp"

namespace roctl {

struct SuccinctError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tree whose leaves carry a subset of {b1..bl} and whose internal nodes are
/// unlabelled. Children are kept sorted by canonical form.
struct Utree {
  std::vector<int> label;  // 1-based indices of b atoms, sorted; leaves only
  std::vector<Utree> children;
  int level = 0;  // height; every leaf sits at depth `level`

  int height() const { return level; }
  std::size_t nodes() const;
  std::string canonical() const;

  friend bool operator==(const Utree& a, const Utree& b) { return a.canonical() == b.canonical(); }
};

Utree make_leaf(std::vector<int> label);
/// `level` defaults to one above the first child; childless internal nodes
/// (only possible when l = 0) need it explicitly.
Utree make_node(std::vector<Utree> children, int level = -1);

/// True when `t` is a ⟨h,l⟩-utree for its own height and the given l.
bool valid_utree(const Utree& t, int l);

inline constexpr std::uint64_t kDefaultUtreeCap = 10000;

/// #(h,l). Throws SuccinctError when it exceeds `cap`.
std::uint64_t count_utrees(int h, int l, std::uint64_t cap = kDefaultUtreeCap);
/// All pairwise non-isomorphic ⟨h,l⟩-utrees in canonical order.
std::vector<Utree> enum_utrees(int h, int l, std::uint64_t cap = kDefaultUtreeCap);

bool isomorphic(const Utree& a, const Utree& b);

/// Reserved atom names used by the encodings.
namespace enc {
inline constexpr const char* kOpen = "iopen";
inline constexpr const char* kClose = "iclose";
std::string height(int k);         // prefix heights
std::string final_height(int k);   // suffix heights
std::string marker(int node);      // start of a subtree's description
std::string letter(int i);         // tree label b_i
}  // namespace enc

/// Chain w0 -> ... -> w_{2n-1} -> wZ; wZ has no successor.
Structure prefix_encode(const Utree& t);
/// Nodes n<k> (viol), their primed copies n<k>p and the sink nZ.
Structure suffix_encode(const Utree& t);
/// prefix(t) followed by suffix(t2), with start w0 and the path σ^t through
/// the primed root.
Structure join(const Utree& t, const Utree& t2);
/// ⟨w0, …, wZ, n1, n1p, nZ, nZ, …⟩ in join(t, ·).
Lasso designated_path(const Structure& joined);

Formula formula_f(int h, int l);
Formula formula_fprime(int h, int l);

enum class Family { F, FPrime };

struct ExperimentOptions {
  Family family = Family::F;
  Strategy strategy = Strategy::AutomatonDirect;
  std::uint64_t cap = kDefaultUtreeCap;
  bool run_checker = true;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SizeStat {
  int depth = 0;
  std::uint64_t formula_length = 0;
  std::size_t dag_size = 0;
  std::uint64_t altl_length = 0;
  std::size_t automaton_states = 0;
};

struct ExperimentReport {
  int h = 0, l = 0;
  Family family = Family::F;
  Strategy strategy = Strategy::AutomatonDirect;
  std::vector<std::string> trees;  // canonical forms
  std::vector<std::vector<bool>> isomorphism, oracle, checker;
  std::vector<SizeStat> sizes;
  double seconds = 0;

  std::size_t positives(const std::vector<std::vector<bool>>& mat) const;
  bool oracle_agrees() const { return oracle == isomorphism; }
  bool checker_agrees() const { return checker.empty() || checker == isomorphism; }
  bool agrees() const { return oracle_agrees() && checker_agrees(); }

  nlohmann::json to_json() const;
  std::string to_text() const;
};

ExperimentReport experiment(int h, int l, ExperimentOptions opt = {});

}  // namespace roctl
