#include <doctest.h>

#include <random>

#include "onevar/kripke.hpp"
#include "onevar/lemma.hpp"
#include "onevar/model_check.hpp"
#include "onevar/search.hpp"
#include "onevar/syntax.hpp"
#include "onevar/translation.hpp"

using namespace onevar;

namespace {

Frame1 frame(std::size_t n, std::vector<Edge> edges) { return Frame1{Relation(n, std::move(edges)), {}}; }

const Frame1 kPoint = frame(1, {{0, 0}});
const Frame1 kChain = frame(2, {{0, 0}, {0, 1}, {1, 1}});

/// Countermodels of `text`, first per size tuple, at factor sizes <= max.
std::vector<ProductModel> countermodels(FormulaStore& s, const std::string& text, std::vector<FactorClass> classes,
                                        unsigned max = 3) {
  SearchBudget budget;
  budget.max_worlds_per_factor = max;
  std::vector<ProductModel> out;
  for_each_countermodel(s, parse(s, text), classes, budget, [&](const ProductModel& m) {
    out.push_back(m);
    return VisitAction::NextSizeTuple;
  });
  return out;
}

const char* const kFormulas[] = {"p1", "[1]p1", "p1 -> [2]p1", "p1 -> [1]p1", "[1](p1 | p2) -> [1]p1 | [1]p2",
                                 "<1>p1 & <1>~p1 -> [2]p2", "p2 -> [2][1]p2", "[1]p1 -> [1][1]p1"};

}  // namespace

TEST_CASE("gadget layout numbering") {
  const GadgetLayout layout(2, 1);
  CHECK(layout.world_count() == 2 + 2 * (4 + 6));
  CHECK(layout.is_base(1));
  CHECK_FALSE(layout.is_base(2));
  CHECK(layout.v(1, 0, 0) == 2);
  CHECK(layout.w(1, 0, 0) == 3);
  CHECK(layout.v(1, 0, 1) == 6);
  CHECK(layout.v(2, 0, 0) == 10);
  CHECK(layout.label(layout.w(2, 1, 1)) == "w1^2@1");
  CHECK(layout.label(0) == "base0");
  const auto g = layout.gadget_point(layout.v(2, 2, 1));
  REQUIRE(g);
  CHECK(g->ladder == 2);
  CHECK_FALSE(g->is_w);
  CHECK(g->rung == 2);
  CHECK(g->column == 1);
  CHECK_THROWS_AS(layout.v(3, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(layout.w(1, 2, 0), std::out_of_range);
}

TEST_CASE("attach gadgets") {
  const ExtendedFactor one = attach_gadgets(kPoint, 1, FactorMode::T);
  CHECK(one.frame.world_count() == 11);
  CHECK(one.frame.relation.is_reflexive());

  const Frame1 f1 = frame(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {2, 0}});
  for (unsigned m = 0; m <= 2; ++m) {
    const ExtendedFactor ext = attach_gadgets(f1, m, FactorMode::T);
    CHECK(ext.frame.relation.is_reflexive());
    WorldSet base(ext.frame.world_count());
    for (World x = 0; x < 3; ++x) base.insert(x);
    CHECK(restrict(ext.frame, base).relation == f1.relation);
    for (unsigned k = 1; k <= m + 1; ++k)
      for (World x = 0; x < 3; ++x) {
        CHECK(ext.frame.relation.contains(x, ext.layout.v(k, 0, x)));
        WorldSet copy(ext.frame.world_count());
        for (unsigned i = 0; i <= k; ++i) {
          copy.insert(ext.layout.v(k, i, x));
          copy.insert(ext.layout.w(k, i, x));
        }
        CHECK(restrict(ext.frame, copy).relation == ladder(k).frame.relation);
        CHECK(ext.frame.labels.at(ext.layout.label(ext.layout.w(k, k, x))) == ext.layout.w(k, k, x));
      }
  }

  const Frame1 bare = frame(2, {{0, 1}});
  CHECK_THROWS_AS(attach_gadgets(bare, 1, FactorMode::T), PreconditionFailed);
  const ExtendedFactor k_ext = attach_gadgets(bare, 1, FactorMode::K);
  CHECK_FALSE(k_ext.frame.relation.is_reflexive());
  CHECK_FALSE(k_ext.frame.relation.contains(0, 0));
}

TEST_CASE("lifted valuation") {
  FormulaStore s(2);
  const Formula phi = parse(s, "p1 -> p2");
  Valuation v;
  WorldSet p1(4), p2(4);
  p1.insert(0);
  p1.insert(3);
  p2.insert(3);
  v.set(1, p1);
  v.set(2, p2);
  const ProductModel base = ProductModel::make({kChain, kChain}, v, 0);
  for (const auto& variant : VariantConfig::grid()) {
    TranslationContext ctx(s, phi, variant);
    const TransferResult t = build_transfer(base, ctx, FactorMode::T);
    const WorldSet& p = *t.extended.valuation.find(0);
    const GadgetLayout& layout = t.first_factor.layout;
    CHECK_FALSE(p.intersects(t.base_points));
    for (World x = 0; x < t.extended.product.world_count(); ++x) {
      const auto coords = t.extended.product.coords_of(x);
      const auto g = layout.gadget_point(coords[0]);
      if (!g) continue;
      auto base_coords = coords;
      base_coords[0] = g->column;
      const World z = base.product.world_at(base_coords);
      bool expected = g->is_w && (g->rung >= 1 || variant.w0_carries_p);
      if (g->ladder <= 2) expected = expected && base.valuation.find(g->ladder)->contains(z);
      CHECK(p.contains(x) == expected);
    }
  }
}

TEST_CASE("transfer examples") {
  FormulaStore s(2);
  {
    const Formula phi = s.var(1);
    TranslationContext ctx(s, phi);
    const ProductModel base = ProductModel::make({kPoint, kPoint}, Valuation{}, 0);
    const TransferResult t = transfer_countermodel(base, ctx, FactorMode::T);
    CHECK(t.verified());
    CHECK_FALSE(check(s, t.extended, t.extended.point, s.imp(ctx.guard_a(), ctx.beta(1))));
  }
  {
    const Formula phi = s.box(1, s.var(1));
    TranslationContext ctx(s, phi);
    Valuation v;
    WorldSet ext(2);
    ext.insert(0);
    v.set(1, ext);
    const ProductModel base = ProductModel::make({kChain, kPoint}, v, 0);
    const TransferResult t = transfer_countermodel(base, ctx, FactorMode::T);
    CHECK(t.verified());
    CHECK(t.extended.point == t.embed[0]);
    CHECK_FALSE(check(s, t.extended, t.extended.point,
                      s.imp(ctx.guard_a(), s.box(1, s.imp(ctx.big_b(), ctx.beta(1))))));
  }
  {
    TranslationContext ctx(s, s.var(1));
    Valuation v;
    v.set(1, WorldSet::all(1));
    const ProductModel satisfied = ProductModel::make({kPoint, kPoint}, v, 0);
    CHECK_THROWS_AS(build_transfer(satisfied, ctx, FactorMode::T), PreconditionFailed);
  }
}

TEST_CASE("default variant: every sub-claim on searched instances over T x T and T x S5") {
  for (auto second : {FactorClass::T, FactorClass::S5}) {
    for (const char* text : kFormulas) {
      FormulaStore s(2);
      CAPTURE(text);
      for (const ProductModel& base : countermodels(s, text, {FactorClass::T, second})) {
        TranslationContext ctx(s, parse(s, text), default_variant(FactorMode::T));
        const TransferResult t = transfer_countermodel(base, ctx, FactorMode::T);
        CHECK(t.first_factor.frame.relation.is_reflexive());
        CHECK(check_star(t, base, ctx).ok());
        CHECK(check_b_exact(t, ctx).ok());
        CHECK(check_preservation(t, base, ctx).ok());
        CHECK(check_gadget_selectivity(t, ctx).ok());

        // The base model sits inside the extended one as a subframe.
        const NFrame inner = restrict(t.extended.product, t.base_points);
        for (unsigned i = 1; i <= 2; ++i) CHECK(inner.relation(i) == base.product.relation(i));

        const ExtractionResult e = extract_countermodel(t.extended, ctx);
        CHECK(e.verified());
        CHECK(e.kept_first_factor.contains(t.extended.product.coords_of(t.extended.point)[0]));
        CHECK(e.restricted.factors[0].relation.is_reflexive());
        const SublemmaReport sub = check_sublemma(t.extended, e, ctx, true);
        CHECK(sub.ok());
        for (const auto& w : sub.witnesses) {
          if (!w.z) continue;
          const auto& prod = t.extended.product;
          CHECK(prod.coords_of(*w.z)[0] == prod.coords_of(w.x)[0]);
          CHECK(prod.coords_of(w.x)[0] == prod.coords_of(w.y)[0]);
        }
      }
    }
  }
}

TEST_CASE("star check on the empty valuation") {
  FormulaStore s(2);
  TranslationContext ctx(s, parse(s, "p1 | p2"));
  const ProductModel base = ProductModel::make({kChain, kChain}, Valuation{}, 1);
  const TransferResult t = build_transfer(base, ctx, FactorMode::T);
  ModelChecker checker(s, t.extended.product, t.extended.valuation);
  for (unsigned k = 1; k <= 2; ++k) CHECK_FALSE(checker.sat(ctx.beta(k)).intersects(t.base_points));
  CHECK(check_star(t, base, ctx).ok());
}

TEST_CASE("wrong variants are caught by the checkers") {
  FormulaStore s(2);
  const Formula phi = s.var(1);
  Valuation v;
  WorldSet ext(2);
  ext.insert(1);
  v.set(1, ext);
  const ProductModel base = ProductModel::make({kChain, kPoint}, v, 0);

  // The plain outer diamond never reaches a p-point from a base world.
  TranslationContext plain(s, phi, VariantConfig::from_name("plain"));
  const TransferResult tp = build_transfer(base, plain, FactorMode::T);
  const StarReport star = check_star(tp, base, plain);
  CHECK_FALSE(star.ok());
  CHECK_FALSE(tp.verified());
  CHECK_THROWS_AS(transfer_countermodel(base, plain, FactorMode::T), TransferFailed);

  // Without the guard, B also holds at the reflexive root of the top ladder.
  TranslationContext unguarded(s, phi, VariantConfig::from_name("composite+w0"));
  const TransferResult tu = build_transfer(base, unguarded, FactorMode::T);
  CHECK(check_star(tu, base, unguarded).ok());
  const BExactReport exact = check_b_exact(tu, unguarded);
  CHECK(exact.missing.empty());
  REQUIRE_FALSE(exact.extras.empty());
  for (const auto& [w, label] : exact.extras) CHECK(label.rfind("v0^2@", 0) == 0);
}

TEST_CASE("extraction preconditions and vacuous sublemma") {
  FormulaStore s(2);
  TranslationContext ctx(s, s.var(1));
  // p false everywhere: A fails at the point.
  const ProductModel empty = ProductModel::make({kChain, kPoint}, Valuation{}, 0);
  CHECK_THROWS_AS(build_extraction(empty, ctx), PreconditionFailed);

  // A countermodel whose extraction keeps exactly the point's column.
  Valuation v;
  const ProductModel base = ProductModel::make({kPoint, kPoint}, v, 0);
  const TransferResult t = transfer_countermodel(base, ctx, FactorMode::T);
  const ExtractionResult e = extract_countermodel(t.extended, ctx);
  CHECK(e.kept_first_factor.count() == 1);
  CHECK(e.restricted.product.world_count() == 1);

  // Extraction refuses a point that satisfies σ(φ).
  Valuation holds;
  holds.set(1, WorldSet::all(1));
  TranslationContext ctx2(s, s.neg(s.var(1)));
  const TransferResult t2 = transfer_countermodel(ProductModel::make({kPoint, kPoint}, holds, 0), ctx2, FactorMode::T);
  CHECK_THROWS_AS(build_extraction(t2.extended, ctx), PreconditionFailed);

  // d = 0 keeps only the point itself in the bounded neighbourhood.
  const SublemmaReport sub = check_sublemma(t.extended, e, ctx);
  CHECK(sub.checked == 1);
  CHECK(sub.ok());
}

TEST_CASE("extraction of searched reduce countermodels") {
  FormulaStore s(2);
  const Formula phi = parse(s, "~p1");
  TranslationContext ctx(s, phi);
  SearchBudget budget;
  budget.max_worlds = {4, 1};
  std::size_t found = 0;
  const FactorClass tt[] = {FactorClass::T, FactorClass::T};
  for_each_countermodel(s, ctx.reduce(), tt, budget, [&](const ProductModel& counter) {
    const ExtractionResult e = extract_countermodel(counter, ctx);
    CHECK(e.verified());
    CHECK(check_sublemma(counter, e, ctx).ok());
    return ++found < 5 ? VisitAction::Continue : VisitAction::Stop;
  });
  CHECK(found == 5);
}

TEST_CASE("K mode round trip") {
  for (const char* text : {"p1", "[1]p1 -> p1", "[1]p1 -> [1][1]p1", "[2]p1 -> p1"}) {
    FormulaStore s(2);
    CAPTURE(text);
    for (const ProductModel& base : countermodels(s, text, {FactorClass::K, FactorClass::K}, 2)) {
      TranslationContext ctx(s, parse(s, text), default_variant(FactorMode::K));
      const TransferResult t = transfer_countermodel(base, ctx, FactorMode::K);
      CHECK(check_star(t, base, ctx).ok());
      CHECK(check_b_exact(t, ctx).ok());
      const ExtractionResult e = extract_countermodel(t.extended, ctx);
      CHECK(check_sublemma(t.extended, e, ctx).ok());
    }
  }
}
