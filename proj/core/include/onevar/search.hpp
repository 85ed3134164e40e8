#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "onevar/formula.hpp"
#include "onevar/kripke.hpp"

namespace onevar {

enum class FactorClass { K, T, S4, S5 };

std::string_view to_string(FactorClass c);
/// Accepts "K", "T", "S4", "S5"; throws std::invalid_argument otherwise.
FactorClass factor_class_from_string(std::string_view name);
/// Parses a comma-separated list such as "T,S5".
std::vector<FactorClass> factor_classes_from_string(std::string_view list);

bool in_class(const Frame1& frame, FactorClass c);

/// All frames of the class on `size` worlds in canonical adjacency-matrix
/// order. K and T enumerate relations directly; S4 and S5 close T-generators
/// and drop repeats. No isomorphism reduction.
std::vector<Frame1> enumerate_frames(FactorClass c, unsigned size);

struct SearchBudget {
  unsigned max_worlds_per_factor = 3;
  /// Per-factor overrides of max_worlds_per_factor; empty = uniform.
  std::vector<unsigned> max_worlds;
  /// Valuation assignments per frame tuple when exhaustive enumeration is
  /// not allowed (|W̄|·|vars| > exhaustive_bits).
  std::uint64_t max_valuations = 4096;
  unsigned exhaustive_bits = 18;
  /// Deterministic cap on (frame tuple, valuation) pairs; 0 = unlimited.
  std::uint64_t max_models = 0;
  /// 0 = unlimited.
  std::chrono::milliseconds time_limit{0};
  std::uint64_t seed = 0;

  unsigned max_worlds_of(unsigned factor) const {
    return factor < max_worlds.size() ? max_worlds[factor] : max_worlds_per_factor;
  }
};

enum class VisitAction {
  Continue,
  NextSizeTuple,  // skip the rest of the current factor-size tuple
  Stop,
};

enum class SearchStatus {
  Found,
  NoneWithinBounds,      // every frame tuple and every valuation was examined
  NoneFoundIncomplete,   // some valuation spaces were only sampled
  BudgetExhausted,       // time or model cap hit before the space was covered
};

std::string_view to_string(SearchStatus s);

struct SearchStats {
  std::uint64_t frame_tuples = 0;
  std::uint64_t models = 0;
};

struct SearchResult {
  SearchStatus status;
  std::optional<ProductModel> model;
  SearchStats stats;
};

/// Visits countermodels of f over products of the given classes in a fixed
/// order: size tuples by total size then lexicographically, frames in
/// enumeration order, valuations in counting order (or seeded samples). For
/// each (frame tuple, valuation) the first refuting world becomes the point.
/// Every visited model has been re-checked with naive_holds.
SearchStatus for_each_countermodel(const FormulaStore& store, Formula f, std::span<const FactorClass> classes,
                                   const SearchBudget& budget,
                                   const std::function<VisitAction(const ProductModel&)>& visit,
                                   SearchStats* stats = nullptr);

/// First countermodel in search order. Throws std::invalid_argument when
/// |classes| differs from the arity or the budget allows no worlds
/// for some factor.
SearchResult search_countermodel(const FormulaStore& store, Formula f, std::span<const FactorClass> classes,
                                 const SearchBudget& budget);

}  // namespace onevar
