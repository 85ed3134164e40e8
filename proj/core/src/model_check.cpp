#include "onevar/model_check.hpp"

#include <algorithm>
#include <stdexcept>

namespace onevar {

ModelChecker::ModelChecker(const FormulaStore& store, const NFrame& frame, const Valuation& valuation)
    : store_(store), frame_(frame), valuation_(valuation) {
  if (frame.arity() != store.arity())
    throw std::invalid_argument("frame arity " + std::to_string(frame.arity()) + " does not match formula arity " +
                                std::to_string(store.arity()));
}

const WorldSet& ModelChecker::sat(Formula f) {
  if (auto it = memo_.find(f); it != memo_.end()) return it->second;

  const std::size_t n = frame_.world_count();
  for (Formula g : store_.topological(f)) {
    if (memo_.contains(g)) continue;
    const Node& node = store_.node(g);
    WorldSet result(n);
    switch (node.kind) {
      case Kind::Bottom:
        break;
      case Kind::Var:
        if (const WorldSet* ext = valuation_.find(node.payload)) result = *ext;
        break;
      case Kind::And:
        result = memo_.at(node.left) & memo_.at(node.right);
        break;
      case Kind::Or:
        result = memo_.at(node.left) | memo_.at(node.right);
        break;
      case Kind::Imp:
        result.assign_implication(memo_.at(node.left), memo_.at(node.right));
        break;
      case Kind::Box: {
        const Relation& rel = frame_.relation(node.payload);
        const WorldSet& body = memo_.at(node.left);
        for (World w = 0; w < n; ++w)
          if (rel.successors(w).subset_of(body)) result.insert(w);
        break;
      }
    }
    memo_.emplace(g, std::move(result));
  }
  return memo_.at(f);
}

bool ModelChecker::holds(World w, Formula f) {
  if (w >= frame_.world_count()) throw std::out_of_range("world outside the model");
  return sat(f).contains(w);
}

WorldSet sat_set(const FormulaStore& store, const NFrame& frame, const Valuation& valuation, Formula f) {
  ModelChecker checker(store, frame, valuation);
  return checker.sat(f);
}

WorldSet sat_set(const FormulaStore& store, const ProductModel& model, Formula f) {
  return sat_set(store, model.product, model.valuation, f);
}

bool check(const FormulaStore& store, const ProductModel& model, World w, Formula f) {
  if (w >= model.product.world_count()) throw std::out_of_range("world outside the model");
  return sat_set(store, model, f).contains(w);
}

namespace {

bool naive(const FormulaStore& store, const NFrame& frame, const Valuation& valuation, World w, Formula f) {
  const Node& node = store.node(f);
  switch (node.kind) {
    case Kind::Bottom:
      return false;
    case Kind::Var: {
      const WorldSet* ext = valuation.find(node.payload);
      return ext != nullptr && ext->contains(w);
    }
    case Kind::And:
      return naive(store, frame, valuation, w, node.left) && naive(store, frame, valuation, w, node.right);
    case Kind::Or:
      return naive(store, frame, valuation, w, node.left) || naive(store, frame, valuation, w, node.right);
    case Kind::Imp:
      return !naive(store, frame, valuation, w, node.left) || naive(store, frame, valuation, w, node.right);
    case Kind::Box: {
      const auto& edges = frame.relation(node.payload).edges();
      for (auto it = std::lower_bound(edges.begin(), edges.end(), Edge{w, 0}); it != edges.end() && it->first == w; ++it)
        if (!naive(store, frame, valuation, it->second, node.left)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

bool naive_holds(const FormulaStore& store, const NFrame& frame, const Valuation& valuation, World w, Formula f) {
  if (frame.arity() != store.arity()) throw std::invalid_argument("frame arity does not match formula arity");
  if (w >= frame.world_count()) throw std::out_of_range("world outside the model");
  return naive(store, frame, valuation, w, f);
}

}  // namespace onevar
