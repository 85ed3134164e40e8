// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "generators.hpp"
#include "onevar/calibration.hpp"
#include "onevar/syntax.hpp"
#include "onevar/translation.hpp"

using namespace onevar;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

// Pinned limits.
constexpr double kContractSeconds = 10.0;
constexpr double kGrowthSeconds = 5.0;
constexpr double kLongSeconds = 600.0;
constexpr std::size_t kContractFormulas = 500;
constexpr std::size_t kMinTransferFormulas = 30;

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %d %s  %s: %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
}

json load_fixture(const std::string& name) {
  std::ifstream in(std::string(ONEVAR_FIXTURES) + "/" + name);
  if (!in) return nullptr;
  return json::parse(in, nullptr, false);
}

std::string fmt(double secs) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", secs);
  return buf;
}

void single_variable_contract() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20261016);
  FormulaStore store(2);
  testing::FormulaShape shape;
  shape.max_var = 3;
  shape.max_depth = 3;
  shape.max_nodes = 20;
  std::set<Formula> corpus;
  while (corpus.size() < kContractFormulas) corpus.insert(testing::random_formula(store, rng, shape));
  std::size_t ok = 0;
  for (Formula f : corpus) {
    TranslationContext ctx(store, f, default_variant(FactorMode::T));
    const auto& vars = store.variables(ctx.reduce());
    const bool in_range = store.modal_depth(f) <= 3 && ctx.variable_bound() <= 3;
    if (in_range && (vars.empty() || vars == std::vector<std::uint32_t>{0})) ++ok;
  }
  const double secs = seconds_since(start);
  report(1, ok == corpus.size() && secs < kContractSeconds, "single-variable contract",
         std::to_string(ok) + "/" + std::to_string(corpus.size()) + " distinct formulas, " + fmt(secs) +
             " (limit 10s)");
}

void size_growth() {
  const auto start = Clock::now();
  constexpr unsigned n = 2;
  std::vector<std::uint64_t> tree, dag;
  for (unsigned d = 1; d <= 5; ++d) {
    FormulaStore store(n);
    Formula f = store.var(1);
    for (unsigned i = 0; i < d; ++i) f = store.box(1 + i % n, f);
    TranslationContext ctx(store, f, default_variant(FactorMode::T));
    tree.push_back(store.tree_size(ctx.guard_a()));
    dag.push_back(store.dag_size(ctx.guard_a()));
  }
  bool pass = true;
  std::string detail = "tree";
  for (std::size_t i = 0; i + 1 < tree.size(); ++i) {
    const double ratio = static_cast<double>(tree[i + 1]) / static_cast<double>(tree[i]);
    pass = pass && ratio >= n + 1;
    char buf[32];
    std::snprintf(buf, sizeof buf, " x%.2f", ratio);
    detail += buf;
  }
  detail += "; dag";
  const std::uint64_t step = dag[1] - dag[0];
  for (std::size_t i = 0; i + 1 < dag.size(); ++i) {
    pass = pass && dag[i + 1] - dag[i] == step;
    detail += " +" + std::to_string(dag[i + 1] - dag[i]);
  }
  const double secs = seconds_since(start);
  pass = pass && secs < kGrowthSeconds;
  report(2, pass, "guard size growth", detail + " (ratio >= 3, constant dag step), " + fmt(secs) + " (limit 5s)");
}

const VariantVerdict* verdict_of(const CalibrationReport& r) {
  if (!r.selected) return nullptr;
  for (const auto& v : r.verdicts)
    if (v.variant == *r.selected) return &v;
  return nullptr;
}

std::string tally(const CheckTally& t) { return std::to_string(t.passed) + "/" + std::to_string(t.passed + t.failed); }

void calibration(int criterion, const CalibrationReport& r, double secs, const char* fixture) {
  const VariantVerdict* v = verdict_of(r);
  const json committed = load_fixture(fixture);
  const bool matches = !committed.is_discarded() && committed == r.to_json();
  bool pass = v && v->passes_all() && v->star.passed > 0 && v->extraction.passed > 0 && v->round_trip.passed > 0 &&
              matches && secs < kLongSeconds;
  std::string detail = "selected " + (r.selected ? r.selected->name() : std::string("none"));
  if (v)
    detail += ", star " + tally(v->star) + ", B " + tally(v->b_exact) + ", transfer " + tally(v->transfer) +
              ", extraction " + tally(v->extraction) + ", round trip " + tally(v->round_trip);
  detail += std::string(", report ") + (matches ? "matches " : "differs from ") + fixture + ", " + fmt(secs) +
            " (limit 600s)";
  report(criterion, pass, r.mode == FactorMode::T ? "calibration" : "K-mode calibration", detail);
}

struct SuiteTotals {
  std::uint64_t formulas_with_counter = 0;
  std::uint64_t transfers = 0, transfers_ok = 0;
  std::uint64_t extractions = 0, extractions_ok = 0, from_reduce = 0;
  std::uint64_t star_failures = 0, sublemma_failures = 0;
};

SuiteTotals totals(const SuiteReport& r) {
  SuiteTotals t;
  for (const auto& e : r.entries) {
    if (e.transfers > 0) ++t.formulas_with_counter;
    t.transfers += e.transfers;
    t.transfers_ok += e.transfers_verified;
    t.extractions += e.extractions;
    t.extractions_ok += e.extractions_verified;
    t.from_reduce += e.extractions - e.transfers_verified;
    t.star_failures += e.star_failures;
    t.sublemma_failures += e.sublemma_failures;
  }
  return t;
}

void known_validities() {
  const auto start = Clock::now();
  SearchBudget budget;
  budget.max_worlds_per_factor = 3;
  budget.exhaustive_bits = 63;
  const std::vector<FactorClass> tt{FactorClass::T, FactorClass::T};
  struct Case {
    const char* formula;
    SearchStatus expected;
  };
  const Case cases[] = {{"[1]p1 -> p1", SearchStatus::NoneWithinBounds},
                        {"[1][2]p1 -> [2][1]p1", SearchStatus::NoneWithinBounds},
                        {"p1 -> [1]p1", SearchStatus::Found}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    FormulaStore store(2);
    const SearchResult r = search_countermodel(store, parse(store, c.formula), tt, budget);
    pass = pass && r.status == c.expected;
    if (!detail.empty()) detail += "; ";
    detail += std::string(c.formula) + " -> " + std::string(to_string(r.status));
  }
  report(7, pass, "known validities over T x T", detail + ", " + fmt(seconds_since(start)));
}

}  // namespace

int main() {
  single_variable_contract();
  size_growth();

  const CorpusSpec t_corpus = CorpusSpec::default_t();
  auto start = Clock::now();
  const CalibrationReport t_report = calibrate_variants(VariantConfig::grid(), t_corpus);
  calibration(3, t_report, seconds_since(start), "calibration_T.json");

  CorpusSpec tt = t_corpus;
  tt.class_tuples = {{FactorClass::T, FactorClass::T}};
  start = Clock::now();
  const SuiteReport suite = differential_suite(tt, default_variant(FactorMode::T));
  const double suite_secs = seconds_since(start);
  const SuiteTotals s = totals(suite);
  const std::set<std::string> distinct(tt.formulas.begin(), tt.formulas.end());
  report(4, s.transfers > 0 && s.transfers == s.transfers_ok && distinct.size() >= kMinTransferFormulas &&
                suite_secs < kLongSeconds,
         "transfer soundness",
         std::to_string(s.transfers_ok) + "/" + std::to_string(s.transfers) + " verified with naive re-check over " +
             std::to_string(distinct.size()) + " formulas (" + std::to_string(s.formulas_with_counter) +
             " refutable), " + fmt(suite_secs) + " (limit 600s)");
  report(5, s.extractions > 0 && s.extractions == s.extractions_ok && suite_secs < kLongSeconds,
         "extraction soundness",
         std::to_string(s.extractions_ok) + "/" + std::to_string(s.extractions) + " verified (" +
             std::to_string(s.from_reduce) + " from reduce countermodels, rest round trips), " + fmt(suite_secs));

  const VariantVerdict* tv = verdict_of(t_report);
  report(6, tv && tv->star.ok() && tv->sublemma.ok() && tv->star.passed > 0 && tv->sublemma.passed > 0 &&
                s.star_failures == 0 && s.sublemma_failures == 0,
         "star equivalence and sublemma",
         tv ? "calibrated star " + tally(tv->star) + ", sublemma " + tally(tv->sublemma) + "; suite failures " +
                  std::to_string(s.star_failures) + "/" + std::to_string(s.sublemma_failures)
            : std::string("no calibrated variant"));

  known_validities();

  const CorpusSpec k_corpus = CorpusSpec::default_k();
  start = Clock::now();
  const CalibrationReport k_report = calibrate_variants(VariantConfig::grid(), k_corpus);
  const double k_secs = seconds_since(start);
  const VariantVerdict* kv = verdict_of(k_report);
  start = Clock::now();
  const SuiteReport k_suite = differential_suite(k_corpus, default_variant(FactorMode::K));
  const double k_suite_secs = seconds_since(start);
  const SuiteTotals ks = totals(k_suite);
  const json k_committed = load_fixture("calibration_K.json");
  const bool k_matches = !k_committed.is_discarded() && k_committed == k_report.to_json();
  report(8,
         kv && kv->passes_all() && k_report.selected == default_variant(FactorMode::K) && k_matches && k_suite.ok() &&
             ks.transfers > 0 && k_secs + k_suite_secs < kLongSeconds,
         "K-mode regression",
         "selected " + (k_report.selected ? k_report.selected->name() : std::string("none")) +
             (kv ? ", star " + tally(kv->star) + ", sublemma " + tally(kv->sublemma) : std::string()) +
             ", report " + (k_matches ? "matches" : "differs from") + " calibration_K.json, suite transfers " +
             std::to_string(ks.transfers_ok) + "/" + std::to_string(ks.transfers) + ", extractions " +
             std::to_string(ks.extractions_ok) + "/" + std::to_string(ks.extractions) + ", " +
             fmt(k_secs + k_suite_secs) + " (limit 600s)");

  return failures == 0 ? 0 : 1;
}
