#include "onevar/lemma.hpp"

#include <algorithm>
#include <stdexcept>

#include "onevar/model_check.hpp"

namespace onevar {

GadgetLayout::GadgetLayout(std::size_t base_count, unsigned m) : base_count_(base_count), m_(m) {
  offset_.assign(m + 3, 0);
  offset_[1] = base_count;
  for (unsigned k = 1; k <= m + 1; ++k) offset_[k + 1] = offset_[k] + base_count * 2 * (k + 1);
  world_count_ = offset_[m + 2];
}

World GadgetLayout::index(unsigned ladder, unsigned local, World column) const {
  if (ladder < 1 || ladder > m_ + 1) throw std::out_of_range("ladder index outside 1..m+1");
  if (local >= 2 * (ladder + 1)) throw std::out_of_range("rung outside the ladder");
  if (column >= base_count_) throw std::out_of_range("column outside the base frame");
  return static_cast<World>(offset_[ladder] + column * 2 * (ladder + 1) + local);
}

World GadgetLayout::v(unsigned ladder, unsigned rung, World column) const {
  return index(ladder, LadderFrame::v(rung), column);
}

World GadgetLayout::w(unsigned ladder, unsigned rung, World column) const {
  return index(ladder, LadderFrame::w(rung), column);
}

std::optional<GadgetPoint> GadgetLayout::gadget_point(World x) const {
  if (x >= world_count_) throw std::out_of_range("world outside the extended factor");
  if (is_base(x)) return std::nullopt;
  unsigned k = 1;
  while (x >= offset_[k + 1]) ++k;
  const std::size_t width = 2 * (k + 1);
  const std::size_t rel = x - offset_[k];
  const auto local = static_cast<unsigned>(rel % width);
  return GadgetPoint{k, local % 2 == 1, local / 2, static_cast<World>(rel / width)};
}

std::string GadgetLayout::label(World x) const {
  const auto g = gadget_point(x);
  if (!g) return "base" + std::to_string(x);
  return std::string(g->is_w ? "w" : "v") + std::to_string(g->rung) + "^" + std::to_string(g->ladder) + "@" +
         std::to_string(g->column);
}

ExtendedFactor attach_gadgets(const Frame1& f1, unsigned m, FactorMode mode) {
  if (mode == FactorMode::T && !f1.relation.is_reflexive())
    throw PreconditionFailed("first factor must be reflexive in T mode");

  GadgetLayout layout(f1.world_count(), m);
  std::vector<Edge> edges = f1.relation.edges();
  for (unsigned k = 1; k <= m + 1; ++k) {
    for (World x = 0; x < f1.world_count(); ++x) {
      for (unsigned i = 0; i <= k; ++i) edges.emplace_back(layout.v(k, i, x), layout.w(k, i, x));
      for (unsigned i = 0; i < k; ++i) edges.emplace_back(layout.w(k, i, x), layout.v(k, i + 1, x));
      edges.emplace_back(x, layout.v(k, 0, x));
    }
  }
  Relation rel(layout.world_count(), std::move(edges));
  if (mode == FactorMode::T) rel = reflexive_closure(rel);

  Frame1 frame{std::move(rel), f1.labels};
  for (World x = f1.world_count(); x < layout.world_count(); ++x) frame.labels[layout.label(x)] = x;
  return ExtendedFactor{std::move(frame), std::move(layout)};
}

WorldSet lift_valuation(const ProductModel& base, const NFrame& extended_product, const GadgetLayout& layout,
                        const VariantConfig& variant) {
  const unsigned m = layout.m();
  const unsigned first_rung = variant.w0_carries_p ? 0 : 1;
  WorldSet p(extended_product.world_count());
  for (World z = 0; z < base.product.world_count(); ++z) {
    auto coords = base.product.coords_of(z);
    const World column = coords[0];
    for (unsigned k = 1; k <= m + 1; ++k) {
      if (k <= m) {
        const WorldSet* ext = base.valuation.find(k);
        if (ext == nullptr || !ext->contains(z)) continue;
      }
      for (unsigned i = first_rung; i <= k; ++i) {
        coords[0] = layout.w(k, i, column);
        p.insert(extended_product.world_at(coords));
      }
    }
  }
  return p;
}

namespace {

void require_arity(const ProductModel& model, const FormulaStore& store) {
  if (model.product.arity() != store.arity())
    throw std::invalid_argument("model arity " + std::to_string(model.product.arity()) +
                                " does not match formula arity " + std::to_string(store.arity()));
}

}  // namespace

TransferResult build_transfer(const ProductModel& base, TranslationContext& ctx, FactorMode mode) {
  const FormulaStore& store = ctx.store();
  require_arity(base, store);
  {
    ModelChecker checker(store, base.product, base.valuation);
    if (checker.holds(base.point, ctx.source()))
      throw PreconditionFailed("base model does not refute the source formula at its point");
  }

  ExtendedFactor first = attach_gadgets(base.factors[0], ctx.variable_bound(), mode);
  std::vector<Frame1> factors = base.factors;
  factors[0] = first.frame;
  NFrame frame = product(factors);

  Valuation valuation;
  valuation.set(kReservedVar, lift_valuation(base, frame, first.layout, ctx.variant()));

  std::vector<World> embed(base.product.world_count());
  WorldSet base_points(frame.world_count());
  for (World z = 0; z < base.product.world_count(); ++z) {
    embed[z] = frame.world_at(base.product.coords_of(z));
    base_points.insert(embed[z]);
  }

  const World point = embed[base.point];
  TransferResult result{std::move(first),
                        ProductModel{std::move(factors), std::move(frame), std::move(valuation), point},
                        std::move(base_points),
                        std::move(embed)};

  ModelChecker checker(store, result.extended.product, result.extended.valuation);
  result.refutes_reduce = !checker.holds(point, ctx.reduce());
  result.guard_holds = checker.holds(point, ctx.guard_a());
  return result;
}

TransferResult transfer_countermodel(const ProductModel& base, TranslationContext& ctx, FactorMode mode) {
  TransferResult result = build_transfer(base, ctx, mode);
  if (!result.verified())
    throw TransferFailed(std::string("extended model under variant ") + ctx.variant().name() +
                         (result.guard_holds ? " satisfies σ(φ)" : " violates A") + " at the point");
  return result;
}

StarReport check_star(const TransferResult& result, const ProductModel& base, TranslationContext& ctx) {
  StarReport report;
  ModelChecker checker(ctx.store(), result.extended.product, result.extended.valuation);
  for (unsigned k = 1; k <= ctx.variable_bound(); ++k) {
    const WorldSet& beta = checker.sat(ctx.beta(k));
    const WorldSet* var = base.valuation.find(k);
    for (World z = 0; z < base.product.world_count(); ++z) {
      ++report.checked;
      const bool b = beta.contains(result.embed[z]);
      const bool v = var != nullptr && var->contains(z);
      if (b != v) report.violations.push_back({z, k, b, v});
    }
  }
  return report;
}

BExactReport check_b_exact(const TransferResult& result, TranslationContext& ctx) {
  BExactReport report;
  const WorldSet b = sat_set(ctx.store(), result.extended, ctx.big_b());
  const NFrame& frame = result.extended.product;
  for (World x = 0; x < frame.world_count(); ++x) {
    const bool is_base = result.base_points.contains(x);
    const bool holds = b.contains(x);
    if (is_base && !holds) report.missing.push_back(x);
    if (!is_base && holds) {
      const auto coords = frame.coords_of(x);
      std::string label = result.first_factor.layout.label(coords[0]);
      for (std::size_t i = 1; i < coords.size(); ++i) label += "," + std::to_string(coords[i]);
      report.extras.emplace_back(x, std::move(label));
    }
  }
  return report;
}

PreservationReport check_preservation(const TransferResult& result, const ProductModel& base,
                                      TranslationContext& ctx) {
  PreservationReport report;
  FormulaStore& store = ctx.store();
  const auto subformulas = store.topological(ctx.source());
  ModelChecker base_checker(store, base.product, base.valuation);
  ModelChecker ext_checker(store, result.extended.product, result.extended.valuation);
  for (Formula theta : subformulas) {
    const Formula translated = ctx.sigma(theta);
    const WorldSet& lhs = base_checker.sat(theta);
    const WorldSet& rhs = ext_checker.sat(translated);
    for (World z = 0; z < base.product.world_count(); ++z) {
      ++report.checked;
      if (lhs.contains(z) != rhs.contains(result.embed[z])) report.violations.push_back({theta, z});
    }
  }
  return report;
}

SelectivityReport check_gadget_selectivity(const TransferResult& result, TranslationContext& ctx) {
  SelectivityReport report;
  FormulaStore& store = ctx.store();
  const unsigned top = ctx.variable_bound() + 1;
  std::vector<Formula> marked;
  for (unsigned k = 1; k <= top; ++k) marked.push_back(store.conj(store.p(), ctx.alpha(k)));

  const NFrame& frame = result.extended.product;
  const GadgetLayout& layout = result.first_factor.layout;
  ModelChecker checker(store, frame, result.extended.valuation);
  for (World x = 0; x < frame.world_count(); ++x) {
    const auto g = layout.gadget_point(frame.coords_of(x)[0]);
    if (!g || !g->is_w || g->rung != 0) continue;
    for (unsigned k = 1; k <= top; ++k) {
      if (k == g->ladder) continue;
      ++report.checked;
      if (checker.holds(x, marked[k - 1])) report.violations.emplace_back(x, k);
    }
  }
  return report;
}

namespace {

WorldSet kept_first_coordinates(const ProductModel& counter, const WorldSet& reach, const WorldSet& b) {
  WorldSet kept(counter.factors[0].world_count());
  (reach & b).for_each([&](World x) { kept.insert(counter.product.coords_of(x)[0]); });
  return kept;
}

}  // namespace

ExtractionResult build_extraction(const ProductModel& counter, TranslationContext& ctx) {
  FormulaStore& store = ctx.store();
  require_arity(counter, store);
  ModelChecker checker(store, counter.product, counter.valuation);
  const World u = counter.point;
  if (!checker.holds(u, ctx.guard_a())) throw PreconditionFailed("guard A does not hold at the point");
  if (checker.holds(u, ctx.sigma(ctx.source())))
    throw PreconditionFailed("point satisfies the translated formula; nothing to extract");

  const auto modalities = all_modalities(store.arity());
  const WorldSet reach = bounded_reach(counter.product, u, ctx.depth(), modalities);
  WorldSet kept = kept_first_coordinates(counter, reach, checker.sat(ctx.big_b()));

  const std::vector<World> kept_list = kept.to_vector();
  std::vector<Frame1> factors = counter.factors;
  factors[0] = restrict(counter.factors[0], kept);
  NFrame frame = product(factors);

  std::vector<World> embed(frame.world_count());
  for (World r = 0; r < frame.world_count(); ++r) {
    auto coords = frame.coords_of(r);
    coords[0] = kept_list[coords[0]];
    embed[r] = counter.product.world_at(coords);
  }

  Valuation valuation;
  for (unsigned k = 1; k <= ctx.variable_bound(); ++k) {
    const WorldSet& beta = checker.sat(ctx.beta(k));
    WorldSet ext(frame.world_count());
    for (World r = 0; r < frame.world_count(); ++r)
      if (beta.contains(embed[r])) ext.insert(r);
    valuation.set(k, std::move(ext));
  }

  auto point_coords = counter.product.coords_of(u);
  point_coords[0] = static_cast<World>(
      std::lower_bound(kept_list.begin(), kept_list.end(), point_coords[0]) - kept_list.begin());
  const World point = frame.world_at(point_coords);

  ExtractionResult result{std::move(kept),
                          ProductModel{std::move(factors), std::move(frame), std::move(valuation), point},
                          std::move(embed)};
  ModelChecker verify(store, result.restricted.product, result.restricted.valuation);
  result.refutes_source = !verify.holds(point, ctx.source());
  return result;
}

ExtractionResult extract_countermodel(const ProductModel& counter, TranslationContext& ctx) {
  ExtractionResult result = build_extraction(counter, ctx);
  if (!result.verified())
    throw ExtractionFailed("restricted model does not refute the source formula under variant " +
                           ctx.variant().name());
  return result;
}

SublemmaReport check_sublemma(const ProductModel& counter, const ExtractionResult& extraction,
                              TranslationContext& ctx, bool trace) {
  SublemmaReport report;
  FormulaStore& store = ctx.store();
  ModelChecker checker(store, counter.product, counter.valuation);
  const WorldSet& b = checker.sat(ctx.big_b());
  const unsigned d = ctx.depth();
  const WorldSet reach = bounded_reach(counter.product, counter.point, d, all_modalities(store.arity()));
  const auto others = modalities_except_first(store.arity());

  reach.for_each([&](World y) {
    const World y1 = counter.product.coords_of(y)[0];
    if (!extraction.kept_first_factor.contains(y1)) return;
    ++report.checked;
    if (!b.contains(y)) report.violations.push_back(y);
    if (!trace) return;

    std::optional<World> sibling;
    (reach & b).for_each([&](World x) {
      if (!sibling && counter.product.coords_of(x)[0] == y1) sibling = x;
    });
    if (!sibling) return;
    const WorldSet common =
        bounded_reach(counter.product, *sibling, d, others) & bounded_reach(counter.product, y, d, others);
    std::optional<World> z;
    if (!common.empty()) z = common.to_vector().front();
    report.witnesses.push_back({y, *sibling, z});
  });
  return report;
}

}  // namespace onevar
