// Worked examples shipped as data: a model file plus claims with expected
// verdicts, checked by the oracle and both model-checking strategies.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "roctl/structure.hpp"

namespace roctl {

struct Claim {
  std::string formula;
  std::optional<int> world;  // exactly one of world / path
  std::optional<Lasso> path;
  bool expected = false;
};

struct Example {
  std::string name;
  std::string description;
  std::string model_file;
  Structure model;
  std::vector<Claim> claims;
};

/// Example names in the order they are run.
const std::vector<std::string>& example_names();

/// Reads <dir>/examples/<name>.json and its model from <dir>/models.
/// Dashes in `name` map to underscores in file names.
Example load_example(const std::string& data_dir, const std::string& name);

struct ClaimResult {
  Claim claim;
  bool oracle = false;
  bool oracle_exact = false;  // bounds cover every fullpath
  bool translate = false;
  bool direct = false;
  /// Both strategies give the expected verdict, and so does the oracle when
  /// it is exact.
  bool ok() const;
};

struct ExampleResult {
  std::string name;
  std::vector<ClaimResult> claims;
  bool ok() const;
  nlohmann::json to_json(const Structure& m) const;
};

ExampleResult run_example(const Example& ex);

}  // namespace roctl
