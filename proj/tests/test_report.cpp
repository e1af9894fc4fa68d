#include <catch_amalgamated.hpp>

#include <sstream>

#include "oracle.hpp"

using namespace lrswap;

TEST_CASE("identity report JSON schema", "[report]") {
  const auto rep = verify_identities(3, 2, RuleType::NonIntegrableAlt);
  const Json j = to_json(rep);
  CHECK(j["rule_type"] == "non-integrable");
  CHECK(j["n"] == 3);
  CHECK(j["N"] == 2);
  REQUIRE(j["checks"].is_array());
  bool saw_witness = false;
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("pass"));
    if (!c["pass"].get<bool>()) {
      CHECK(c.contains("witness_word"));
      saw_witness = true;
    }
  }
  CHECK(saw_witness);

  CheckResult ybe{"ybe[0]", "ybe", true, std::nullopt, 0.0, 17};
  const Json k = to_json(ybe);
  CHECK(k["seed"] == 17);
  CHECK(k["discrepancy"] == 0.0);
}

TEST_CASE("CSV layout", "[report]") {
  ComparisonRow a;
  a.state = Configuration({0, 1}, {1, 2});
  a.p_bethe = 0.25;
  a.p_series = 0.5;
  ComparisonRow b;
  b.state = Configuration({0, 2}, {2, 1});
  b.p_mc = 0.125;
  std::ostringstream os;
  write_csv(os, {{"rule", "drop-push"}, {"seed", "7"}}, 2, {a, b});
  const std::string expected =
      std::string("# lrswap ") + kVersion +
      "\n"
      "# rule=drop-push\n"
      "# seed=7\n"
      "x_1,x_2,word,p_bethe,p_series,p_mc,abs_diff,imag_residual,conv_delta\n"
      "0,1,12,0.25,0.5,,0.25,,\n"
      "0,2,21,,,0.125,,,\n";
  CHECK(os.str() == expected);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-12) == "1e-12");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("generator JSON carries labels and matrices", "[report]") {
  const auto rep = compare_generator({0, 1}, 2, RuleType::DropPushType);
  const Json j = generator_json(rep);
  CHECK(j["labels"] == Json::array({"11", "12", "21", "22"}));
  CHECK(j["pass"] == true);
  REQUIRE(j["sources"].size() == 3);
  for (const auto& s : j["sources"]) CHECK(s["extracted"] == s["predicted"]);
}

TEST_CASE("error kinds have stable names", "[report]") {
  CHECK(std::string(to_string(ErrorKind::ResourceLimit)) == "resource-limit");
  CHECK(parse_rule("tasep") == RuleType::TasepType);
  CHECK_THROWS_AS(parse_rule("bogus"), Error);
}
