// Kripke-style structures, fullpaths represented as lassos, deviations,
// bisimulation and the structure file format.
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace roctl {

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ultimately periodic fullpath prefix·loop^ω over world indices.
struct Lasso {
  std::vector<int> prefix;
  std::vector<int> loop;

  /// Number of distinct positions (prefix plus one copy of the loop).
  std::size_t positions() const { return prefix.size() + loop.size(); }
  /// World at position j of the ω-sequence (any j).
  int at(std::size_t j) const {
    return j < prefix.size() ? prefix[j] : loop[(j - prefix.size()) % loop.size()];
  }
  /// Successor of a distinct position j < positions().
  std::size_t next_pos(std::size_t j) const { return j + 1 < positions() ? j + 1 : prefix.size(); }
  /// The suffix σ≥j as a lasso.
  Lasso suffix(std::size_t j) const;
  /// Shortest prefix and primitive loop denoting the same ω-word.
  Lasso canonical() const;

  friend bool operator==(const Lasso&, const Lasso&) = default;
  friend auto operator<=>(const Lasso&, const Lasso&) = default;
};

struct World {
  std::string id;
  std::vector<std::string> atoms;  // sorted, unique
};

class Structure {
 public:
  Structure() = default;

  int add_world(std::string id, std::vector<std::string> atoms = {});
  void add_edge(int from, int to);
  void add_atom(int w, const std::string& atom);

  std::size_t size() const { return worlds_.size(); }
  const World& world(int w) const { return worlds_[static_cast<std::size_t>(w)]; }
  const std::vector<World>& worlds() const { return worlds_; }
  const std::vector<int>& succ(int w) const { return succ_[static_cast<std::size_t>(w)]; }
  bool has_edge(int a, int b) const;
  bool has(int w, std::string_view atom) const;
  int index_of(const std::string& id) const;  // -1 when absent
  int require(const std::string& id) const;   // throws StructureError

  /// Atoms appearing in some valuation.
  std::set<std::string> used_atoms() const;

  std::optional<int> start;
  std::optional<Lasso> path;
  /// Optional declared atom set; when present valuations must draw from it.
  std::optional<std::set<std::string>> declared_atoms;

 private:
  std::vector<World> worlds_;
  std::vector<std::vector<int>> succ_;
};

/// Pointed structure: a structure with a distinguished world.
struct Pvs {
  const Structure* m;
  int world;
};

struct Diagnostics {
  std::vector<std::string> not_serial;       // worlds without successors
  std::vector<std::string> no_failure_free;  // worlds without a failure-free fullpath
  std::vector<std::string> undeclared;       // "world:atom" pairs outside the declared set
  bool serial() const { return not_serial.empty(); }
  bool roctl_structure() const { return serial() && no_failure_free.empty() && undeclared.empty(); }
  std::string summary() const;
};

Diagnostics validate_structure(const Structure& m);

/// Every cycle of the edge relation is a self-loop.
bool exact_enumerable(const Structure& m);

struct PathBounds {
  std::size_t prefix_cap = 0;  // 0: number of worlds
  std::size_t loop_cap = 0;    // 0: number of worlds
};

/// Bounds that make enumeration exhaustive on exact-enumerable structures
/// and fall back to the defaults otherwise.
PathBounds effective_bounds(const Structure& m, PathBounds b);

/// Failure-free: no world at index > 0 carries `viol`.
bool failure_free(const Structure& m, const Lasso& l);
bool valid_lasso(const Structure& m, const Lasso& l);

/// All canonical lassos from `w` within the bounds, sorted.
std::vector<Lasso> enumerate_fullpaths(const Structure& m, int w, PathBounds b, bool failure_free_only);

/// Default deviation index window |prefix| + 2|loop|.
std::size_t default_deviation_window(const Lasso& sigma);

/// Pairs (i, π) where π is an i-deviation of σ, for i < window.
std::vector<std::pair<std::size_t, Lasso>> deviations(const Structure& m, const Lasso& sigma, PathBounds b,
                                                      std::size_t window = 0);

/// Largest bisimulation on the disjoint union, by partition refinement.
bool bisimilar(const Pvs& a, const Pvs& b);

/// Block index of every world under the coarsest bisimulation of `m`.
std::vector<int> bisimulation_classes(const Structure& m);

struct Unwinding {
  Structure tree;           // leaves carry a self-loop so the result stays serial
  std::vector<int> origin;  // world of `m` each node copies
  std::vector<bool> leaf;
};

Unwinding unwind(const Structure& m, int w, std::size_t depth);

nlohmann::json structure_to_json(const Structure& m);
Structure structure_from_json(const nlohmann::json& j);
Structure load_structure(const std::string& path);

std::string lasso_to_string(const Structure& m, const Lasso& l);
nlohmann::json lasso_to_json(const Structure& m, const Lasso& l);
/// {"prefix": [ids], "loop": [ids]}; throws StructureError unless a fullpath.
Lasso lasso_from_json(const Structure& m, const nlohmann::json& j);

bool valid_atom_name(std::string_view s);

}  // namespace roctl
