#pragma once

#include <optional>
#include <string>
#include <vector>

#include "onevar/formula.hpp"
#include "onevar/kripke.hpp"
#include "onevar/translation.hpp"

namespace onevar {

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// The constructed countermodel did not survive model checking.
class TransferFailed : public Error {
 public:
  using Error::Error;
};

class ExtractionFailed : public Error {
 public:
  using Error::Error;
};

struct GadgetPoint {
  unsigned ladder;  // k in 1..m+1
  bool is_w;        // w_i (true) or v_i (false)
  unsigned rung;    // i in 0..k
  World column;     // base world the copy hangs below
};

/// World numbering of a first factor with ladders attached: the base worlds
/// keep their indices 0..b-1, followed by one block per ladder k = 1..m+1,
/// each holding a copy of ladder(k) for every base world.
class GadgetLayout {
 public:
  GadgetLayout(std::size_t base_count, unsigned m);

  std::size_t base_count() const noexcept { return base_count_; }
  unsigned m() const noexcept { return m_; }
  std::size_t world_count() const noexcept { return world_count_; }

  World v(unsigned ladder, unsigned rung, World column) const;
  World w(unsigned ladder, unsigned rung, World column) const;
  bool is_base(World x) const noexcept { return x < base_count_; }
  /// nullopt for base worlds.
  std::optional<GadgetPoint> gadget_point(World x) const;
  /// "v2^3@1" for v_2 of the ladder k = 3 hanging below base world 1; "base1" for base worlds.
  std::string label(World x) const;

 private:
  World index(unsigned ladder, unsigned local, World column) const;

  std::size_t base_count_;
  unsigned m_;
  std::vector<std::size_t> offset_;  // offset_[k] = first world of ladder block k
  std::size_t world_count_;
};

struct ExtendedFactor {
  Frame1 frame;
  GadgetLayout layout;
};

/// Attaches copies of ladder(1..m+1) below every world of f1. In T mode f1
/// must be reflexive and the whole relation is reflexively closed; in K mode
/// no closure is taken.
ExtendedFactor attach_gadgets(const Frame1& f1, unsigned m, FactorMode mode);

/// Extension of p on the product extended_product = attached × F_2 × ... × F_n.
WorldSet lift_valuation(const ProductModel& base, const NFrame& extended_product, const GadgetLayout& layout,
                        const VariantConfig& variant);

struct TransferResult {
  ExtendedFactor first_factor;
  ProductModel extended;
  /// Image of the base product inside the extended product.
  WorldSet base_points;
  /// base product world -> extended product world
  std::vector<World> embed;
  /// Model-checking record at the image of the base point.
  bool refutes_reduce = false;
  bool guard_holds = false;

  bool verified() const noexcept { return refutes_reduce && guard_holds; }
};

/// Builds the extended model and records the verification outcome without
/// throwing on a failed verification. Throws PreconditionFailed when the base
/// model does not refute the source at its point, or when mode is T and the
/// first factor is not reflexive.
TransferResult build_transfer(const ProductModel& base, TranslationContext& ctx, FactorMode mode);

/// As build_transfer, but throws TransferFailed unless the result is verified.
TransferResult transfer_countermodel(const ProductModel& base, TranslationContext& ctx, FactorMode mode);

struct StarViolation {
  World base_world;
  unsigned k;
  bool beta_holds;
  bool variable_holds;
};

struct StarReport {
  std::size_t checked = 0;
  std::vector<StarViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// β_k at every base point of the extended model against p_k in the base, k = 1..m.
StarReport check_star(const TransferResult& result, const ProductModel& base, TranslationContext& ctx);

struct BExactReport {
  std::vector<World> missing;  // base points where B fails
  std::vector<std::pair<World, std::string>> extras;  // non-base points where B holds, with labels
  bool ok() const noexcept { return missing.empty() && extras.empty(); }
};

BExactReport check_b_exact(const TransferResult& result, TranslationContext& ctx);

struct PreservationViolation {
  Formula subformula;
  World base_world;
};

struct PreservationReport {
  std::size_t checked = 0;
  std::vector<PreservationViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// For every subformula θ of the source and every base point x:
/// base, x ⊨ θ  iff  extended, x ⊨ σ(θ).
PreservationReport check_preservation(const TransferResult& result, const ProductModel& base, TranslationContext& ctx);

struct SelectivityReport {
  std::size_t checked = 0;
  /// (extended world of w_0 of ladder j, k) pairs where p ∧ α_k holds with j != k.
  std::vector<std::pair<World, unsigned>> violations;
  bool ok() const noexcept { return violations.empty(); }
};

SelectivityReport check_gadget_selectivity(const TransferResult& result, TranslationContext& ctx);

struct ExtractionResult {
  /// Surviving worlds of the counter model's first factor.
  WorldSet kept_first_factor;
  ProductModel restricted;
  /// restricted product world -> counter product world
  std::vector<World> embed;
  bool refutes_source = false;

  bool verified() const noexcept { return refutes_source; }
};

/// Throws PreconditionFailed when the point of `counter` satisfies
/// reduce(source) or does not satisfy A.
ExtractionResult build_extraction(const ProductModel& counter, TranslationContext& ctx);

/// As build_extraction, but throws ExtractionFailed unless verified.
ExtractionResult extract_countermodel(const ProductModel& counter, TranslationContext& ctx);

struct SublemmaWitness {
  World y;
  World x;                 // sibling with the same first coordinate satisfying B
  std::optional<World> z;  // common R_{-1}^{<=d} successor of x and y, if any
};

struct SublemmaReport {
  std::size_t checked = 0;
  std::vector<World> violations;  // counter worlds y where B fails
  std::vector<SublemmaWitness> witnesses;
  bool ok() const noexcept { return violations.empty(); }
};

/// Every y in W̄' ∩ R^{<=d}(u) satisfies B in the counter model.
SublemmaReport check_sublemma(const ProductModel& counter, const ExtractionResult& extraction,
                              TranslationContext& ctx, bool trace = false);

}  // namespace onevar
