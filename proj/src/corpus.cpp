#include "roctl/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "roctl/check.hpp"
#include "roctl/formula.hpp"
#include "roctl/oracle.hpp"

namespace roctl {

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"chisholm", "onno", "coordinated-attack", "cat", "bitflip", "fuse"};
  return names;
}

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructureError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw StructureError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

Example load_example(const std::string& data_dir, const std::string& name) {
  std::string file = name;
  std::replace(file.begin(), file.end(), '-', '_');
  nlohmann::json j = read_json(data_dir + "/examples/" + file + ".json");
  Example ex;
  ex.name = name;
  try {
    ex.description = j.value("description", "");
    ex.model_file = data_dir + "/models/" + j.at("model").get<std::string>();
    ex.model = load_structure(ex.model_file);
    for (const auto& c : j.at("claims")) {
      Claim cl;
      cl.formula = c.at("formula").get<std::string>();
      cl.expected = c.at("expected").get<bool>();
      if (c.contains("at")) cl.world = ex.model.require(c.at("at").get<std::string>());
      if (c.contains("path")) cl.path = lasso_from_json(ex.model, c.at("path"));
      if (cl.world.has_value() == cl.path.has_value())
        throw StructureError("claim '" + cl.formula + "' needs exactly one of \"at\" and \"path\"");
      ex.claims.push_back(std::move(cl));
    }
  } catch (const nlohmann::json::exception& e) {
    throw StructureError("malformed example '" + name + "': " + e.what());
  }
  return ex;
}

bool ClaimResult::ok() const {
  bool agree = translate == claim.expected && direct == claim.expected;
  return agree && (!oracle_exact || oracle == claim.expected);
}

bool ExampleResult::ok() const {
  return std::all_of(claims.begin(), claims.end(), [](const ClaimResult& r) { return r.ok(); });
}

nlohmann::json ExampleResult::to_json(const Structure& m) const {
  nlohmann::json j;
  j["name"] = name;
  j["ok"] = ok();
  j["claims"] = nlohmann::json::array();
  for (const auto& r : claims) {
    nlohmann::json c;
    c["formula"] = r.claim.formula;
    if (r.claim.world) c["at"] = m.world(*r.claim.world).id;
    if (r.claim.path) c["path"] = lasso_to_json(m, *r.claim.path);
    c["expected"] = r.claim.expected;
    c["oracle"] = r.oracle;
    c["oracleExact"] = r.oracle_exact;
    c["translate"] = r.translate;
    c["automatonDirect"] = r.direct;
    c["ok"] = r.ok();
    j["claims"].push_back(c);
  }
  return j;
}

ExampleResult run_example(const Example& ex) {
  ExampleResult res;
  res.name = ex.name;
  Oracle oracle(ex.model);
  for (const auto& c : ex.claims) {
    Formula f = parse_formula(c.formula, Dialect::RoctlStar);
    Anchor anchor = c.world ? Anchor::at(*c.world) : Anchor::on(*c.path);
    ClaimResult r;
    r.claim = c;
    r.oracle = c.world ? oracle.world(*c.world, f) : oracle.path(*c.path, f);
    r.oracle_exact = oracle.exact();
    r.translate = check_roctl(ex.model, anchor, f, Strategy::Translate).verdict;
    r.direct = check_roctl(ex.model, anchor, f, Strategy::AutomatonDirect).verdict;
    res.claims.push_back(std::move(r));
  }
  return res;
}

}  // namespace roctl
