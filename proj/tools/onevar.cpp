// onevar: command-line front end for the single-variable reduction.
//
// Exit status: 0 success, 1 negative verdict, 2 usage/input error,
// 3 internal check failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "onevar/calibration.hpp"
#include "onevar/defined.hpp"
#include "onevar/json_io.hpp"
#include "onevar/lemma.hpp"
#include "onevar/model_check.hpp"
#include "onevar/search.hpp"
#include "onevar/syntax.hpp"
#include "onevar/translation.hpp"

namespace {

using nlohmann::json;
using namespace onevar;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  unsigned arity = 0;
  std::string classes;
  std::string variant;
  std::optional<unsigned> max_worlds;
  std::optional<std::uint64_t> max_models;
  std::optional<std::uint64_t> seed;
  bool exhaustive = false;
  bool k_mode = false;
  bool expand = false;
  bool sat_set = false;
  bool reduce = false;
  bool no_naive = false;
  unsigned max_depth = 5;
  std::string out;
  std::string format;
  std::string corpus;
  std::string formula;
  std::string model;
};

FactorMode mode_of(const Options& o) { return o.k_mode ? FactorMode::K : FactorMode::T; }

VariantConfig variant_of(const Options& o) {
  if (o.variant.empty()) return default_variant(mode_of(o));
  try {
    return VariantConfig::from_name(o.variant);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void write_json(const json& j, const std::string& path) { write_text(j.dump(2), path); }

json metrics(const FormulaStore& store, Formula f) {
  json vars = json::array();
  for (auto v : store.variables(f)) vars.push_back(variable_name(v));
  return {{"tree_size", store.tree_size(f)},
          {"dag_size", store.dag_size(f)},
          {"modal_depth", store.modal_depth(f)},
          {"variables", std::move(vars)}};
}

ProductModel load_model(const std::string& path) { return product_model_from_json(read_json_file(path)); }

int cmd_translate(const Options& o) {
  if (o.arity == 0) throw UsageError("--arity must be at least 1");
  FormulaStore store(o.arity);
  const Formula source = parse(store, o.formula);
  TranslationContext ctx(store, source, variant_of(o));

  std::vector<std::pair<std::string, Formula>> defs;
  for (unsigned k = 1; k <= ctx.variable_bound(); ++k) defs.emplace_back("beta" + std::to_string(k), ctx.beta(k));
  defs.emplace_back("B", ctx.big_b());
  defs.emplace_back("A", ctx.guard_a());
  defs.emplace_back("reduce", ctx.reduce());
  const std::string shared = render_shared(store, defs);

  json j{{"formula", render(store, source)},
         {"arity", o.arity},
         {"variant", ctx.variant().name()},
         {"m", ctx.variable_bound()},
         {"d", ctx.depth()},
         {"metrics",
          {{"source", metrics(store, source)},
           {"B", metrics(store, ctx.big_b())},
           {"A", metrics(store, ctx.guard_a())},
           {"reduce", metrics(store, ctx.reduce())}}}};
  json lines = json::array();
  std::istringstream split(shared);
  for (std::string line; std::getline(split, line);) lines.push_back(line);
  j["shared"] = std::move(lines);
  if (o.expand) j["expanded"] = render(store, ctx.reduce());

  if (o.format == "json") {
    write_json(j, o.out);
  } else {
    std::string text = o.expand ? render(store, ctx.reduce()) + "\n" : shared;
    const json& mr = j["metrics"]["reduce"];
    text += "# variant " + ctx.variant().name() + ", m = " + std::to_string(ctx.variable_bound()) +
            ", d = " + std::to_string(ctx.depth()) + ", tree_size = " + mr["tree_size"].dump() +
            ", dag_size = " + mr["dag_size"].dump() + ", modal_depth = " + mr["modal_depth"].dump() + "\n";
    write_text(text, o.out);
  }
  return kOk;
}

int cmd_check(const Options& o) {
  const ProductModel model = load_model(o.model);
  FormulaStore store(model.product.arity());
  const Formula f = parse(store, o.formula);
  ModelChecker checker(store, model.product, model.valuation);
  const bool holds = checker.holds(model.point, f);
  json j{{"formula", render(store, f)}, {"point", coords_json(model.product, model.point)}, {"holds", holds}};
  if (o.sat_set) {
    json points = json::array();
    checker.sat(f).for_each([&](World w) { points.push_back(coords_json(model.product, w)); });
    j["sat_set"] = std::move(points);
  }
  if (o.format == "text")
    write_text(holds ? "true" : "false", o.out);
  else
    write_json(j, o.out);
  std::cerr << (holds ? "holds" : "fails") << " at the point\n";
  return holds ? kOk : kNegative;
}

SearchBudget budget_of(const Options& o) {
  SearchBudget b;
  if (o.max_worlds) {
    if (*o.max_worlds == 0) throw UsageError("--max-worlds must be at least 1");
    if (*o.max_worlds > 4) throw UsageError("--max-worlds is limited to 4");
    b.max_worlds_per_factor = *o.max_worlds;
  }
  if (o.max_models) b.max_models = *o.max_models;
  if (o.seed) b.seed = *o.seed;
  if (o.exhaustive) b.exhaustive_bits = 63;
  return b;
}

std::vector<FactorClass> classes_of(const Options& o, unsigned arity) {
  std::vector<FactorClass> classes;
  try {
    classes = o.classes.empty() ? std::vector<FactorClass>(arity, o.k_mode ? FactorClass::K : FactorClass::T)
                                : factor_classes_from_string(o.classes);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (classes.size() != arity)
    throw UsageError("--classes lists " + std::to_string(classes.size()) + " classes for arity " +
                     std::to_string(arity));
  return classes;
}

int cmd_search(const Options& o) {
  const unsigned arity = o.arity != 0 ? o.arity : (o.classes.empty() ? 2 : static_cast<unsigned>(
                                                                               factor_classes_from_string(o.classes).size()));
  const auto classes = classes_of(o, arity);
  const SearchBudget budget = budget_of(o);
  FormulaStore store(arity);
  const Formula source = parse(store, o.formula);
  Formula target = source;
  std::optional<TranslationContext> ctx;
  if (o.reduce) {
    ctx.emplace(store, source, variant_of(o));
    target = ctx->reduce();
  }
  const SearchResult result = search_countermodel(store, target, classes, budget);
  json j{{"formula", render(store, source)},
         {"target", o.reduce ? "reduce" : "source"},
         {"status", to_string(result.status)},
         {"frame_tuples", result.stats.frame_tuples},
         {"models", result.stats.models}};
  if (result.model) j["model"] = to_json(*result.model);
  write_json(j, o.out);
  std::cerr << to_string(result.status) << " after " << result.stats.models << " models\n";
  return result.model ? kOk : kNegative;
}

void write_with_report(const json& model, const json& report, const std::string& out) {
  if (out.empty()) {
    write_json(json{{"model", model}, {"report", report}}, "");
    return;
  }
  write_json(model, out);
  write_json(report, out + ".report.json");
}

int cmd_transfer(const Options& o) {
  const ProductModel base = load_model(o.model);
  FormulaStore store(base.product.arity());
  const Formula source = parse(store, o.formula);
  TranslationContext ctx(store, source, variant_of(o));
  const TransferResult result = build_transfer(base, ctx, mode_of(o));

  json report{{"formula", render(store, source)},
              {"variant", ctx.variant().name()},
              {"mode", to_string(mode_of(o))},
              {"verified", result.verified()},
              {"refutes_reduce", result.refutes_reduce},
              {"guard_holds", result.guard_holds},
              {"star", to_json(check_star(result, base, ctx))},
              {"b_exact", to_json(check_b_exact(result, ctx))},
              {"preservation", to_json(check_preservation(result, base, ctx), store)},
              {"selectivity_ok", check_gadget_selectivity(result, ctx).ok()}};
  write_with_report(to_json(result.extended), report, o.out);
  std::cerr << (result.verified() ? "verified" : "NOT verified") << ": extended model has "
            << result.extended.product.world_count() << " worlds\n";
  return result.verified() ? kOk : kInternal;
}

int cmd_extract(const Options& o) {
  const ProductModel counter = load_model(o.model);
  FormulaStore store(counter.product.arity());
  const Formula source = parse(store, o.formula);
  TranslationContext ctx(store, source, variant_of(o));
  const ExtractionResult result = build_extraction(counter, ctx);
  const SublemmaReport sublemma = check_sublemma(counter, result, ctx, true);

  json kept = json::array();
  result.kept_first_factor.for_each([&](World w) { kept.push_back(w); });
  json report{{"formula", render(store, source)},
              {"variant", ctx.variant().name()},
              {"verified", result.verified()},
              {"kept_first_factor", std::move(kept)},
              {"sublemma", to_json(sublemma, counter.product)}};
  write_with_report(to_json(result.restricted), report, o.out);
  std::cerr << (result.verified() ? "verified" : "NOT verified") << ": restricted model has "
            << result.restricted.product.world_count() << " worlds\n";
  return result.verified() && sublemma.ok() ? kOk : kInternal;
}

CorpusSpec corpus_of(const Options& o) {
  CorpusSpec spec = o.corpus.empty() ? (o.k_mode ? CorpusSpec::default_k() : CorpusSpec::default_t())
                                     : corpus_from_json(read_json_file(o.corpus));
  if (o.seed) spec.budget.seed = spec.reduce_budget.seed = *o.seed;
  if (o.max_worlds) {
    if (*o.max_worlds == 0 || *o.max_worlds > 4) throw UsageError("--max-worlds must lie in 1..4");
    spec.budget.max_worlds_per_factor = *o.max_worlds;
  }
  if (o.max_models) spec.reduce_budget.max_models = *o.max_models;
  return spec;
}

int cmd_calibrate(const Options& o) {
  const CorpusSpec corpus = corpus_of(o);
  const auto grid = VariantConfig::grid();
  const CalibrationReport report = calibrate_variants(grid, corpus);
  write_json(report.to_json(), o.out);
  for (const auto& v : report.verdicts)
    std::cerr << v.variant.name() << ": " << (v.passes_all() ? "pass" : "fail") << '\n';
  std::cerr << "selected: " << (report.selected ? report.selected->name() : std::string("none")) << '\n';
  return report.selected ? kOk : kNegative;
}

int cmd_suite(const Options& o) {
  const CorpusSpec corpus = corpus_of(o);
  SuiteOptions options;
  options.naive_recheck = !o.no_naive;
  const SuiteReport report = differential_suite(corpus, variant_of(o), options);
  write_json(report.to_json(), o.out);
  std::cerr << report.transfers() << " transfers, " << report.extractions() << " extractions: "
            << (report.ok() ? "all verified" : "FAILURES") << '\n';
  return report.ok() ? kOk : kInternal;
}

int cmd_bench(const Options& o) {
  const unsigned arity = o.arity == 0 ? 2 : o.arity;
  std::ostringstream csv;
  csv << "n,d,tree_size,dag_size,micros\n";
  for (unsigned d = 0; d <= o.max_depth; ++d) {
    FormulaStore store(arity);
    // A source formula of depth d over p1: [1]...[1]p1.
    Formula f = store.var(1);
    for (unsigned i = 0; i < d; ++i) f = store.box(1, f);
    const auto start = std::chrono::steady_clock::now();
    TranslationContext ctx(store, f, variant_of(o));
    const auto micros =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
    csv << arity << ',' << d << ',' << store.tree_size(ctx.guard_a()) << ',' << store.dag_size(ctx.guard_a()) << ','
        << micros << '\n';
  }
  write_text(csv.str(), o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-variable reduction for products of modal logics"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (default: standard output)");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--variant", o.variant, "Variant name, e.g. composite+w0+guard");
    sub->add_flag("--k-mode", o.k_mode, "First factor ranges over K instead of T");
  };

  auto* translate = app.add_subcommand("translate", "Print A -> sigma(phi) and its metrics");
  translate->add_option("formula", o.formula)->required();
  translate->add_option("--arity", o.arity, "Number of modalities")->default_val(2);
  translate->add_flag("--expand", o.expand, "Print the fully expanded tree instead of the shared form");
  common(translate);

  auto* check = app.add_subcommand("check", "Evaluate a formula at the point of a JSON model");
  check->add_option("model", o.model)->required();
  check->add_option("formula", o.formula)->required();
  check->add_flag("--sat-set", o.sat_set, "Also list every world where the formula holds");
  common(check);

  auto* search = app.add_subcommand("search", "Bounded countermodel search");
  search->add_option("formula", o.formula)->required();
  search->add_option("--arity", o.arity, "Number of modalities (default: number of classes)");
  search->add_option("--classes", o.classes, "Comma-separated factor classes, e.g. T,S5");
  search->add_option("--max-worlds", o.max_worlds, "Largest factor size (1..4)");
  search->add_option("--max-models", o.max_models, "Cap on examined models");
  search->add_option("--seed", o.seed, "Seed for sampled valuations");
  search->add_flag("--exhaustive", o.exhaustive, "Never sample valuations");
  search->add_flag("--reduce", o.reduce, "Search for countermodels of A -> sigma(phi) instead");
  common(search);

  auto* transfer = app.add_subcommand("transfer", "Countermodel of phi -> countermodel of A -> sigma(phi)");
  transfer->add_option("model", o.model)->required();
  transfer->add_option("formula", o.formula)->required();
  common(transfer);

  auto* extract = app.add_subcommand("extract", "Countermodel of A -> sigma(phi) -> countermodel of phi");
  extract->add_option("model", o.model)->required();
  extract->add_option("formula", o.formula)->required();
  common(extract);

  auto* calibrate = app.add_subcommand("calibrate", "Run every variant over the calibration corpus");
  calibrate->add_option("--corpus", o.corpus, "Corpus JSON (default: built-in corpus for the mode)");
  calibrate->add_option("--seed", o.seed);
  calibrate->add_option("--max-worlds", o.max_worlds);
  calibrate->add_option("--max-models", o.max_models, "Cap on models per reduce search");
  common(calibrate);

  auto* suite = app.add_subcommand("suite", "Differential suite for both directions of the reduction");
  suite->add_option("--corpus", o.corpus, "Corpus JSON (default: built-in corpus for the mode)");
  suite->add_option("--seed", o.seed);
  suite->add_option("--max-worlds", o.max_worlds);
  suite->add_option("--max-models", o.max_models, "Cap on models per reduce search");
  suite->add_flag("--no-naive", o.no_naive, "Skip the naive evaluator re-check");
  common(suite);

  auto* bench = app.add_subcommand("bench", "CSV of guard size growth and construction time");
  bench->add_option("--arity", o.arity);
  bench->add_option("--max-depth", o.max_depth)->default_val(5);
  common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (translate->parsed()) {
      if (o.format.empty()) o.format = "text";
      return cmd_translate(o);
    }
    if (o.format.empty()) o.format = "json";
    if (check->parsed()) return cmd_check(o);
    if (search->parsed()) return cmd_search(o);
    if (transfer->parsed()) return cmd_transfer(o);
    if (extract->parsed()) return cmd_extract(o);
    if (calibrate->parsed()) return cmd_calibrate(o);
    if (suite->parsed()) return cmd_suite(o);
    if (bench->parsed()) return cmd_bench(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.position() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const ModalityOutOfRange& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ReservedVariable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionFailed& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
