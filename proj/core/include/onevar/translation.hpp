#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "onevar/formula.hpp"

namespace onevar {

class ReservedVariable : public Error {
 public:
  ReservedVariable() : Error("source formula uses the reserved variable p") {}
};

/// Factor-logic regime of the first coordinate. T keeps every constructed
/// first factor reflexive; K drops reflexivity and all reflexive closures.
enum class FactorMode { T, K };

enum class BetaDiamond {
  Plain,      // β_k = ¬p ∧ ◇₁(p ∧ α_k)
  Composite,  // β_k = ¬p ∧ ◇₁(¬p ∧ ◇₁(p ∧ p ∧ α_k))
};

/// Readings of the gadget encoding that the calibration grid ranges over.
struct VariantConfig {
  BetaDiamond beta_diamond = BetaDiamond::Composite;
  /// Whether w_0 of an active ladder carries p (else only w_1..w_k do).
  bool w0_carries_p = true;
  /// Adds the conjunct □₁¬p to B.
  bool box_not_p_guard = true;

  /// Canonical name, e.g. "composite+w0+guard" or "plain".
  std::string name() const;
  /// Throws std::invalid_argument for an unknown name.
  static VariantConfig from_name(std::string_view name);
  /// All eight combinations in a fixed order.
  static std::vector<VariantConfig> grid();

  friend bool operator==(const VariantConfig&, const VariantConfig&) = default;
};

/// Variants selected by calibration (see tests/fixtures/calibration_*.json).
VariantConfig default_variant(FactorMode mode);

/// Single-variable translation of one source formula.
///
/// m is the largest variable index of the source and d its modal depth;
/// both are frozen at construction. Every formula produced here mentions only
/// the reserved variable p.
class TranslationContext {
 public:
  TranslationContext(FormulaStore& store, Formula source, VariantConfig variant = {});

  FormulaStore& store() const noexcept { return store_; }
  Formula source() const noexcept { return source_; }
  unsigned arity() const noexcept { return store_.arity(); }
  unsigned variable_bound() const noexcept { return m_; }
  unsigned depth() const noexcept { return d_; }
  const VariantConfig& variant() const noexcept { return variant_; }

  /// α_k for 1 <= k <= m+1.
  Formula alpha(unsigned k) const;
  /// β_k for 1 <= k <= m+1.
  Formula beta(unsigned k) const;
  Formula big_b() const noexcept { return big_b_; }
  Formula guard_a() const noexcept { return guard_a_; }

  /// σ for any formula whose variables lie in 1..m.
  Formula sigma(Formula f);
  /// A → σ(source).
  Formula reduce() const noexcept { return reduced_; }
  Formula reduce(Formula f) { return store_.imp(guard_a_, sigma(f)); }

 private:
  FormulaStore& store_;
  Formula source_;
  VariantConfig variant_;
  unsigned m_;
  unsigned d_;
  std::vector<Formula> alpha_;  // index k-1
  std::vector<Formula> beta_;   // index k-1
  Formula big_b_;
  Formula guard_a_;
  Formula reduced_;
  std::unordered_map<Formula, Formula> sigma_memo_;
};

}  // namespace onevar
