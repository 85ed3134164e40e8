#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "onevar/formula.hpp"
#include "onevar/search.hpp"
#include "onevar/translation.hpp"

namespace onevar {

/// Formulas, factor classes and budgets shared by calibration and the
/// differential suite.
struct CorpusSpec {
  unsigned arity = 2;
  FactorMode mode = FactorMode::T;
  std::vector<std::string> formulas;
  std::vector<std::vector<FactorClass>> class_tuples;
  /// Search for countermodels of the source formulas. The first countermodel
  /// of every factor-size tuple becomes an instance.
  SearchBudget budget;
  /// Search for countermodels of reduce(φ); every one found is extracted.
  SearchBudget reduce_budget;

  /// n = 2, m <= 2, md <= 2 over T×T and T×S5 with factors of at most 3 worlds.
  static CorpusSpec default_t();
  /// The same formulas over K×K.
  static CorpusSpec default_k();
};

nlohmann::json to_json(const CorpusSpec& spec);
/// Throws FormatError.
CorpusSpec corpus_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SearchBudget& budget);
SearchBudget budget_from_json(const nlohmann::json& j);

/// One check family for one variant: counts plus the first failing instance.
struct CheckTally {
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::optional<nlohmann::json> first_failure;

  bool ok() const noexcept { return failed == 0; }
  void record(bool pass, const nlohmann::json& witness);
};

struct VariantVerdict {
  VariantConfig variant;
  CheckTally star;
  CheckTally b_exact;
  CheckTally transfer;
  CheckTally extraction;
  CheckTally round_trip;
  CheckTally sublemma;
  CheckTally preservation;
  CheckTally selectivity;

  bool passes_all() const noexcept;
};

struct CalibrationReport {
  FactorMode mode = FactorMode::T;
  nlohmann::json corpus;
  std::uint64_t instances = 0;
  std::vector<VariantVerdict> verdicts;
  /// Names of every variant passing all families, in grid order.
  std::vector<std::string> passing;
  /// First passing variant in grid order.
  std::optional<VariantConfig> selected;

  /// Deterministic: keys sorted, no timings.
  nlohmann::json to_json() const;
};

class NoPassingVariant : public Error {
 public:
  explicit NoPassingVariant(nlohmann::json table)
      : Error("no variant passes every check family"), table_(std::move(table)) {}
  const nlohmann::json& table() const noexcept { return table_; }

 private:
  nlohmann::json table_;
};

CalibrationReport calibrate_variants(std::span<const VariantConfig> grid, const CorpusSpec& corpus);

/// The selected variant; throws NoPassingVariant with the full report otherwise.
VariantConfig require_selected(const CalibrationReport& report);

struct SuiteEntry {
  std::string formula;
  std::string classes;
  SearchStatus source_search = SearchStatus::NoneWithinBounds;
  SearchStatus reduce_search = SearchStatus::NoneWithinBounds;
  /// Direction (a): source countermodels transferred / verified.
  std::uint64_t transfers = 0;
  std::uint64_t transfers_verified = 0;
  /// Direction (b): reduce countermodels and transfer outputs extracted / verified.
  std::uint64_t extractions = 0;
  std::uint64_t extractions_verified = 0;
  std::uint64_t star_failures = 0;
  std::uint64_t sublemma_failures = 0;
  std::vector<std::string> failures;

  bool ok() const noexcept {
    return transfers == transfers_verified && extractions == extractions_verified && star_failures == 0 &&
           sublemma_failures == 0 && failures.empty();
  }
};

struct SuiteReport {
  std::string variant;
  FactorMode mode = FactorMode::T;
  std::vector<SuiteEntry> entries;

  bool ok() const noexcept;
  std::uint64_t transfers() const noexcept;
  std::uint64_t extractions() const noexcept;
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  /// Re-verify every produced witness with the naive evaluator as well.
  bool naive_recheck = true;
};

/// Lemma transfer and extraction in both directions over every corpus
/// formula and class tuple. Every produced witness is model-checked.
SuiteReport differential_suite(const CorpusSpec& corpus, const VariantConfig& variant, SuiteOptions options = {});

std::string_view to_string(FactorMode mode);
FactorMode factor_mode_from_string(std::string_view name);

}  // namespace onevar
