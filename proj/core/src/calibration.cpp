#include "onevar/calibration.hpp"

#include <map>
#include <stdexcept>

#include "onevar/json_io.hpp"
#include "onevar/lemma.hpp"
#include "onevar/model_check.hpp"
#include "onevar/syntax.hpp"

namespace onevar {

using nlohmann::json;

std::string_view to_string(FactorMode mode) { return mode == FactorMode::T ? "T" : "K"; }

FactorMode factor_mode_from_string(std::string_view name) {
  if (name == "T") return FactorMode::T;
  if (name == "K") return FactorMode::K;
  throw std::invalid_argument("unknown factor mode '" + std::string(name) + "'");
}

namespace {

// n = 2, m <= 2, md <= 2. Formulas with two variables are all refutable at
// small sizes; the valid ones use a single variable so that exhaustive
// search over 3x3 products stays cheap.
const std::vector<std::string> kDefaultFormulas = {
    "F",
    "p1",
    "~p1",
    "p1 & ~p1",
    "p1 | p2",
    "p1 -> p2",
    "[1]p1",
    "[2]p1",
    "<1>p1",
    "[1]F",
    "p1 -> [1]p1",
    "p1 -> [2]p1",
    "[1]p1 -> p1",
    "[2]p1 -> p1",
    "[1][1]p1 -> [1]p1",
    "[1]p1 -> [1][1]p1",
    "p1 -> [1]<1>p1",
    "<2>p1 -> [2]p1",
    "[1]p1 -> [2]p1",
    "[1][2]p1 -> [2][1]p1",
    "<1>[2]p1 -> [2]<1>p1",
    "<1><2>p1 -> <2><1>p1",
    "[2]<1>p1 -> <1>[2]p1",
    "[1](p1 | p2) -> [1]p1 | [1]p2",
    "p1 & p2 -> [1]p2",
    "p2 -> [2][1]p2",
    "<1>p1 & <1>~p1 -> [2]p2",
    "[1]~p1 | [2]p1",
    "<2>(p1 & [1]p2) -> p1",
    "[1](p1 -> [2]p1)",
    "~[1]p1 | [1][2]p1",
    "p1 -> [1]p1 | [2]p1",
};

std::string classes_name(const std::vector<FactorClass>& classes) {
  std::string out;
  for (auto c : classes) {
    if (!out.empty()) out += ",";
    out += to_string(c);
  }
  return out;
}

}  // namespace

CorpusSpec CorpusSpec::default_t() {
  CorpusSpec spec;
  spec.arity = 2;
  spec.mode = FactorMode::T;
  spec.formulas = kDefaultFormulas;
  spec.class_tuples = {{FactorClass::T, FactorClass::T}, {FactorClass::T, FactorClass::S5}};
  spec.budget.max_worlds_per_factor = 3;
  spec.budget.exhaustive_bits = 18;
  spec.budget.seed = 1;
  // B with the □₁¬p guard needs four first-factor worlds, so the reduce search
  // reaches one step further there and stays small elsewhere.
  spec.reduce_budget.max_worlds_per_factor = 2;
  spec.reduce_budget.max_worlds = {4, 2};
  spec.reduce_budget.exhaustive_bits = 18;
  spec.reduce_budget.max_models = 150000;
  spec.reduce_budget.seed = 1;
  return spec;
}

CorpusSpec CorpusSpec::default_k() {
  CorpusSpec spec = default_t();
  spec.mode = FactorMode::K;
  spec.class_tuples = {{FactorClass::K, FactorClass::K}};
  spec.reduce_budget.max_worlds = {3, 2};
  return spec;
}

json to_json(const SearchBudget& b) {
  json j{{"max_worlds_per_factor", b.max_worlds_per_factor},
         {"max_valuations", b.max_valuations},
         {"exhaustive_bits", b.exhaustive_bits},
         {"max_models", b.max_models},
         {"time_limit_ms", b.time_limit.count()},
         {"seed", b.seed}};
  if (!b.max_worlds.empty()) j["max_worlds"] = b.max_worlds;
  return j;
}

SearchBudget budget_from_json(const json& j) {
  SearchBudget b;
  try {
    b.max_worlds_per_factor = j.value("max_worlds_per_factor", b.max_worlds_per_factor);
    b.max_worlds = j.value("max_worlds", b.max_worlds);
    b.max_valuations = j.value("max_valuations", b.max_valuations);
    b.exhaustive_bits = j.value("exhaustive_bits", b.exhaustive_bits);
    b.max_models = j.value("max_models", b.max_models);
    b.time_limit = std::chrono::milliseconds(j.value("time_limit_ms", std::int64_t{0}));
    b.seed = j.value("seed", b.seed);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed budget: ") + e.what());
  }
  return b;
}

json to_json(const CorpusSpec& spec) {
  json tuples = json::array();
  for (const auto& t : spec.class_tuples) tuples.push_back(classes_name(t));
  return json{{"arity", spec.arity},
              {"mode", to_string(spec.mode)},
              {"formulas", spec.formulas},
              {"classes", std::move(tuples)},
              {"budget", to_json(spec.budget)},
              {"reduce_budget", to_json(spec.reduce_budget)}};
}

CorpusSpec corpus_from_json(const json& j) {
  CorpusSpec spec;
  try {
    spec.arity = j.at("arity").get<unsigned>();
    spec.mode = factor_mode_from_string(j.value("mode", std::string("T")));
    spec.formulas = j.at("formulas").get<std::vector<std::string>>();
    for (const auto& t : j.at("classes")) spec.class_tuples.push_back(factor_classes_from_string(t.get<std::string>()));
    if (j.contains("budget")) spec.budget = budget_from_json(j.at("budget"));
    if (j.contains("reduce_budget")) spec.reduce_budget = budget_from_json(j.at("reduce_budget"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed corpus: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed corpus: ") + e.what());
  }
  if (spec.arity == 0) throw FormatError("corpus arity must be at least 1");
  for (const auto& t : spec.class_tuples)
    if (t.size() != spec.arity) throw FormatError("class tuple '" + classes_name(t) + "' does not match the arity");
  return spec;
}

void CheckTally::record(bool pass, const json& witness) {
  if (pass) {
    ++passed;
    return;
  }
  ++failed;
  if (!first_failure) first_failure = witness;
}

bool VariantVerdict::passes_all() const noexcept {
  return star.ok() && b_exact.ok() && transfer.ok() && extraction.ok() && round_trip.ok() && sublemma.ok() &&
         preservation.ok() && selectivity.ok();
}

namespace {

json tally_json(const CheckTally& t) {
  json j{{"passed", t.passed}, {"failed", t.failed}};
  if (t.first_failure) j["first_failure"] = *t.first_failure;
  return j;
}

struct Instance {
  Formula formula;
  std::string text;
  std::vector<FactorClass> classes;
  ProductModel model;
};

/// First countermodel of f for every factor-size tuple within the budget.
std::vector<ProductModel> first_per_size_tuple(const FormulaStore& store, Formula f,
                                               const std::vector<FactorClass>& classes, const SearchBudget& budget,
                                               SearchStatus* status = nullptr) {
  std::vector<ProductModel> out;
  const SearchStatus s = for_each_countermodel(store, f, classes, budget, [&](const ProductModel& m) {
    out.push_back(m);
    return VisitAction::NextSizeTuple;
  });
  if (status != nullptr) *status = s;
  return out;
}

std::vector<Formula> parse_corpus(FormulaStore& store, const CorpusSpec& corpus) {
  std::vector<Formula> out;
  for (const auto& text : corpus.formulas) out.push_back(parse(store, text));
  return out;
}

void require_mode_classes(const CorpusSpec& corpus) {
  if (corpus.mode != FactorMode::T) return;
  for (const auto& t : corpus.class_tuples)
    if (t.front() == FactorClass::K) throw std::invalid_argument("T mode needs a reflexive first factor class");
}

/// restricted world -> base world, through counter = transfer output.
bool valuation_matches_base(const ExtractionResult& extraction, const TransferResult& transfer,
                            const ProductModel& base, unsigned m) {
  std::map<World, World> to_base;
  for (World z = 0; z < transfer.embed.size(); ++z) to_base.emplace(transfer.embed[z], z);
  for (World r = 0; r < extraction.restricted.product.world_count(); ++r) {
    const auto it = to_base.find(extraction.embed[r]);
    if (it == to_base.end()) return false;
    for (unsigned k = 1; k <= m; ++k) {
      const WorldSet* a = extraction.restricted.valuation.find(k);
      const WorldSet* b = base.valuation.find(k);
      const bool lhs = a != nullptr && a->contains(r);
      const bool rhs = b != nullptr && b->contains(it->second);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

}  // namespace

CalibrationReport calibrate_variants(std::span<const VariantConfig> grid, const CorpusSpec& corpus) {
  require_mode_classes(corpus);
  FormulaStore store(corpus.arity);
  const std::vector<Formula> formulas = parse_corpus(store, corpus);

  std::vector<Instance> instances;
  for (std::size_t i = 0; i < formulas.size(); ++i)
    for (const auto& classes : corpus.class_tuples)
      for (auto& m : first_per_size_tuple(store, formulas[i], classes, corpus.budget))
        instances.push_back({formulas[i], corpus.formulas[i], classes, std::move(m)});

  CalibrationReport report;
  report.mode = corpus.mode;
  report.corpus = to_json(corpus);
  report.instances = instances.size();

  for (const VariantConfig& variant : grid) {
    VariantVerdict verdict{variant, {}, {}, {}, {}, {}, {}, {}, {}};
    std::map<Formula, TranslationContext> contexts;
    auto context_of = [&](Formula f) -> TranslationContext& {
      auto it = contexts.find(f);
      if (it == contexts.end()) it = contexts.try_emplace(f, store, f, variant).first;
      return it->second;
    };

    for (const Instance& inst : instances) {
      TranslationContext& ctx = context_of(inst.formula);
      const json witness{{"formula", inst.text}, {"classes", classes_name(inst.classes)}, {"model", to_json(inst.model)}};

      const TransferResult transfer = build_transfer(inst.model, ctx, corpus.mode);
      verdict.transfer.record(transfer.verified(), witness);

      const StarReport star = check_star(transfer, inst.model, ctx);
      json star_witness = witness;
      star_witness["report"] = to_json(star);
      verdict.star.record(star.ok(), star_witness);

      const BExactReport exact = check_b_exact(transfer, ctx);
      json exact_witness = witness;
      exact_witness["report"] = to_json(exact);
      verdict.b_exact.record(exact.ok(), exact_witness);

      const PreservationReport preservation = check_preservation(transfer, inst.model, ctx);
      json preservation_witness = witness;
      preservation_witness["report"] = to_json(preservation, store);
      verdict.preservation.record(preservation.ok(), preservation_witness);

      verdict.selectivity.record(check_gadget_selectivity(transfer, ctx).ok(), witness);

      if (!transfer.verified()) continue;
      const ExtractionResult extraction = build_extraction(transfer.extended, ctx);
      json round_witness = witness;
      round_witness["path"] = "round-trip";
      verdict.extraction.record(extraction.verified(), round_witness);
      verdict.round_trip.record(
          extraction.verified() && valuation_matches_base(extraction, transfer, inst.model, ctx.variable_bound()),
          round_witness);
      verdict.sublemma.record(check_sublemma(transfer.extended, extraction, ctx).ok(), round_witness);
    }

    for (std::size_t i = 0; i < formulas.size(); ++i) {
      TranslationContext& ctx = context_of(formulas[i]);
      for (const auto& classes : corpus.class_tuples) {
        for (const auto& counter : first_per_size_tuple(store, ctx.reduce(), classes, corpus.reduce_budget)) {
          const json witness{{"formula", corpus.formulas[i]},
                             {"classes", classes_name(classes)},
                             {"path", "reduce-search"},
                             {"model", to_json(counter)}};
          const ExtractionResult extraction = build_extraction(counter, ctx);
          verdict.extraction.record(extraction.verified(), witness);
          verdict.sublemma.record(check_sublemma(counter, extraction, ctx).ok(), witness);
        }
      }
    }

    if (verdict.passes_all()) {
      report.passing.push_back(variant.name());
      if (!report.selected) report.selected = variant;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

json CalibrationReport::to_json() const {
  json variants = json::array();
  for (const auto& v : verdicts) {
    variants.push_back({{"name", v.variant.name()},
                        {"passes_all", v.passes_all()},
                        {"star", tally_json(v.star)},
                        {"b_exact", tally_json(v.b_exact)},
                        {"transfer", tally_json(v.transfer)},
                        {"extraction", tally_json(v.extraction)},
                        {"round_trip", tally_json(v.round_trip)},
                        {"sublemma", tally_json(v.sublemma)},
                        {"preservation", tally_json(v.preservation)},
                        {"selectivity", tally_json(v.selectivity)}});
  }
  return json{{"mode", onevar::to_string(mode)},
              {"corpus", corpus},
              {"instances", instances},
              {"variants", std::move(variants)},
              {"passing", passing},
              {"selected", selected ? json(selected->name()) : json(nullptr)}};
}

VariantConfig require_selected(const CalibrationReport& report) {
  if (!report.selected) throw NoPassingVariant(report.to_json());
  return *report.selected;
}

bool SuiteReport::ok() const noexcept {
  for (const auto& e : entries)
    if (!e.ok()) return false;
  return true;
}

std::uint64_t SuiteReport::transfers() const noexcept {
  std::uint64_t n = 0;
  for (const auto& e : entries) n += e.transfers;
  return n;
}

std::uint64_t SuiteReport::extractions() const noexcept {
  std::uint64_t n = 0;
  for (const auto& e : entries) n += e.extractions;
  return n;
}

json SuiteReport::to_json() const {
  json rows = json::array();
  for (const auto& e : entries) {
    rows.push_back({{"formula", e.formula},
                    {"classes", e.classes},
                    {"source_search", onevar::to_string(e.source_search)},
                    {"reduce_search", onevar::to_string(e.reduce_search)},
                    {"transfers", e.transfers},
                    {"transfers_verified", e.transfers_verified},
                    {"extractions", e.extractions},
                    {"extractions_verified", e.extractions_verified},
                    {"star_failures", e.star_failures},
                    {"sublemma_failures", e.sublemma_failures},
                    {"failures", e.failures},
                    {"ok", e.ok()}});
  }
  return json{{"variant", variant},
              {"mode", onevar::to_string(mode)},
              {"ok", ok()},
              {"transfers", transfers()},
              {"extractions", extractions()},
              {"entries", std::move(rows)}};
}

SuiteReport differential_suite(const CorpusSpec& corpus, const VariantConfig& variant, SuiteOptions options) {
  require_mode_classes(corpus);
  FormulaStore store(corpus.arity);
  const std::vector<Formula> formulas = parse_corpus(store, corpus);

  SuiteReport report;
  report.variant = variant.name();
  report.mode = corpus.mode;

  for (std::size_t i = 0; i < formulas.size(); ++i) {
    TranslationContext ctx(store, formulas[i], variant);
    for (const auto& classes : corpus.class_tuples) {
      SuiteEntry entry;
      entry.formula = corpus.formulas[i];
      entry.classes = classes_name(classes);

      auto extract = [&](const ProductModel& counter, const std::string& origin) -> std::optional<ExtractionResult> {
        ++entry.extractions;
        ExtractionResult extraction = build_extraction(counter, ctx);
        bool ok = extraction.verified();
        if (ok && options.naive_recheck)
          ok = !naive_holds(store, extraction.restricted.product, extraction.restricted.valuation,
                            extraction.restricted.point, ctx.source());
        if (!ok) {
          entry.failures.push_back(origin + ": extraction not verified");
          return std::nullopt;
        }
        ++entry.extractions_verified;
        if (!check_sublemma(counter, extraction, ctx).ok()) ++entry.sublemma_failures;
        return extraction;
      };

      for (const auto& base : first_per_size_tuple(store, formulas[i], classes, corpus.budget, &entry.source_search)) {
        ++entry.transfers;
        const TransferResult transfer = build_transfer(base, ctx, corpus.mode);
        bool ok = transfer.verified();
        if (ok && options.naive_recheck) {
          const auto& ext = transfer.extended;
          ok = !naive_holds(store, ext.product, ext.valuation, ext.point, ctx.reduce()) &&
               naive_holds(store, ext.product, ext.valuation, ext.point, ctx.guard_a());
        }
        if (!ok) {
          entry.failures.push_back("transfer not verified on " + to_json(base).dump());
          continue;
        }
        ++entry.transfers_verified;
        if (!check_star(transfer, base, ctx).ok()) ++entry.star_failures;
        extract(transfer.extended, "round trip");
      }

      for (const auto& counter :
           first_per_size_tuple(store, ctx.reduce(), classes, corpus.reduce_budget, &entry.reduce_search))
        extract(counter, "reduce countermodel " + to_json(counter).dump());

      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace onevar
