#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "roctl/corpus.hpp"
#include "support/generators.hpp"

using namespace roctl;

TEST_CASE("every shipped example matches its expected verdicts") {
  for (const std::string& name : example_names()) {
    CAPTURE(name);
    Example ex = load_example(testing::data_dir(), name);
    CHECK(validate_structure(ex.model).serial());
    CHECK_FALSE(ex.claims.empty());
    ExampleResult r = run_example(ex);
    for (const ClaimResult& c : r.claims) {
      CAPTURE(c.claim.formula);
      CHECK(c.ok());
      CHECK(c.translate == c.direct);
      if (c.oracle_exact) CHECK(c.oracle == c.claim.expected);
    }
    CHECK(r.ok());
    CHECK(r.to_json(ex.model).contains("claims"));
  }
}

TEST_CASE("unknown examples are reported") {
  CHECK_THROWS(load_example(testing::data_dir(), "no-such-example"));
}
