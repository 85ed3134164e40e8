#pragma once

#include "onevar/formula.hpp"

namespace onevar {

// Defined modalities built from the primitive connectives. All of them are
// ordinary interned formulas; sharing keeps their DAG size linear in k.

/// ◇₁(¬p ∧ ◇₁(p ∧ body)): one rung of a p/¬p alternating path along modality 1.
Formula composite_dia(FormulaStore& store, Formula body);

/// Box over every path of length <= k using modalities 1..n.
Formula box_upto(FormulaStore& store, unsigned k, Formula body);
Formula dia_upto(FormulaStore& store, unsigned k, Formula body);

/// Same as box_upto but only along modalities 2..n (identity when n = 1).
Formula box_upto_minus1(FormulaStore& store, unsigned k, Formula body);
Formula dia_upto_minus1(FormulaStore& store, unsigned k, Formula body);

}  // namespace onevar
