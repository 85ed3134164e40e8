#pragma once

#include <unordered_map>

#include "onevar/formula.hpp"
#include "onevar/kripke.hpp"

namespace onevar {

/// Bottom-up labeling of formulas on one model. Results are memoized per
/// interned node, so checking many formulas that share structure (σ(θ) for
/// every subformula θ, all β_k, B) costs one pass over the union DAG.
class ModelChecker {
 public:
  ModelChecker(const FormulaStore& store, const NFrame& frame, const Valuation& valuation);

  const WorldSet& sat(Formula f);
  bool holds(World w, Formula f);

  const NFrame& frame() const noexcept { return frame_; }

 private:
  const FormulaStore& store_;
  const NFrame& frame_;
  const Valuation& valuation_;
  std::unordered_map<Formula, WorldSet> memo_;
};

WorldSet sat_set(const FormulaStore& store, const NFrame& frame, const Valuation& valuation, Formula f);
WorldSet sat_set(const FormulaStore& store, const ProductModel& model, Formula f);

/// Throws std::out_of_range for a world outside the model.
bool check(const FormulaStore& store, const ProductModel& model, World w, Formula f);

/// Direct recursive reading of the truth clauses: no memoization, box
/// clauses scan the edge list. Exponential on shared DAGs; meant for
/// cross-checking small instances.
bool naive_holds(const FormulaStore& store, const NFrame& frame, const Valuation& valuation, World w, Formula f);

}  // namespace onevar
