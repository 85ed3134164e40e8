#include <doctest.h>

#include <fstream>

#include "onevar/calibration.hpp"
#include "onevar/json_io.hpp"

using namespace onevar;
using nlohmann::json;

namespace {

CorpusSpec small_corpus(FactorMode mode) {
  CorpusSpec c = mode == FactorMode::T ? CorpusSpec::default_t() : CorpusSpec::default_k();
  c.formulas = {"F", "p1 -> [1]p1", "<2>p1 -> [2]p1", "[1]p1 -> [2]p1"};
  c.class_tuples.resize(1);
  c.budget.max_worlds_per_factor = 2;
  c.budget.max_worlds.clear();
  c.reduce_budget.max_models = 3000;
  return c;
}

json load_fixture(const char* name) {
  std::ifstream in(std::string(ONEVAR_FIXTURES) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("small calibration is deterministic and selects the default") {
  const CorpusSpec c = small_corpus(FactorMode::T);
  const auto grid = VariantConfig::grid();
  const CalibrationReport a = calibrate_variants(grid, c);
  const CalibrationReport b = calibrate_variants(grid, c);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.instances > 0);
  REQUIRE(a.selected);
  CHECK(*a.selected == default_variant(FactorMode::T));
  CHECK(require_selected(a) == default_variant(FactorMode::T));
  for (const auto& v : a.verdicts)
    if (v.passes_all()) CHECK(v.star.passed > 0);
}

TEST_CASE("a grid without the guard has no passing variant in T") {
  const CorpusSpec c = small_corpus(FactorMode::T);
  const std::vector<VariantConfig> grid{VariantConfig::from_name("plain"), VariantConfig::from_name("composite+w0")};
  const CalibrationReport r = calibrate_variants(grid, c);
  CHECK(r.passing.empty());
  CHECK_FALSE(r.selected);
  CHECK(r.to_json()["selected"].is_null());
  try {
    require_selected(r);
    FAIL("expected NoPassingVariant");
  } catch (const NoPassingVariant& e) {
    CHECK(e.table()["variants"].size() == 2);
  }
  const auto& plain = r.verdicts.front();
  CHECK_FALSE(plain.star.ok());
  REQUIRE(plain.star.first_failure);
  CHECK(plain.star.failed > 0);
}

TEST_CASE("K mode calibration selects the first passing variant") {
  const CalibrationReport r = calibrate_variants(VariantConfig::grid(), small_corpus(FactorMode::K));
  REQUIRE(r.selected);
  CHECK(*r.selected == default_variant(FactorMode::K));
  CHECK(r.passing.front() == r.selected->name());
}

TEST_CASE("corpus JSON round trip") {
  for (const CorpusSpec& c : {CorpusSpec::default_t(), CorpusSpec::default_k(), small_corpus(FactorMode::T)}) {
    const json j = to_json(c);
    const CorpusSpec back = corpus_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.formulas == c.formulas);
    CHECK(back.class_tuples == c.class_tuples);
  }
  CHECK_THROWS_AS(corpus_from_json(json{{"arity", 2}}), FormatError);
  json bad = to_json(CorpusSpec::default_t());
  bad["mode"] = "S7";
  CHECK_THROWS_AS(corpus_from_json(bad), FormatError);
  bad = to_json(CorpusSpec::default_t());
  bad["classes"] = json::array({"T"});
  CHECK_THROWS_AS(corpus_from_json(bad), FormatError);
}

TEST_CASE("committed calibration reports name the compiled defaults") {
  const json t = load_fixture("calibration_T.json");
  const json k = load_fixture("calibration_K.json");
  CHECK(t["selected"] == default_variant(FactorMode::T).name());
  CHECK(k["selected"] == default_variant(FactorMode::K).name());
  CHECK(t["mode"] == "T");
  CHECK(k["mode"] == "K");
  CHECK(t["corpus"] == to_json(CorpusSpec::default_t()));
  CHECK(k["corpus"] == to_json(CorpusSpec::default_k()));
}

TEST_CASE("small differential suite") {
  const CorpusSpec c = small_corpus(FactorMode::T);
  const SuiteReport r = differential_suite(c, default_variant(FactorMode::T));
  CHECK(r.ok());
  CHECK(r.transfers() > 0);
  CHECK(r.entries.size() == c.formulas.size());
  const SuiteReport plain = differential_suite(c, VariantConfig::from_name("plain"));
  CHECK_FALSE(plain.ok());
}
