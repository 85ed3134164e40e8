#include "onevar/search.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "onevar/model_check.hpp"

namespace onevar {

std::string_view to_string(FactorClass c) {
  switch (c) {
    case FactorClass::K: return "K";
    case FactorClass::T: return "T";
    case FactorClass::S4: return "S4";
    case FactorClass::S5: return "S5";
  }
  return "?";
}

FactorClass factor_class_from_string(std::string_view name) {
  if (name == "K") return FactorClass::K;
  if (name == "T") return FactorClass::T;
  if (name == "S4") return FactorClass::S4;
  if (name == "S5") return FactorClass::S5;
  throw std::invalid_argument("unknown factor class '" + std::string(name) + "'");
}

std::vector<FactorClass> factor_classes_from_string(std::string_view list) {
  std::vector<FactorClass> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    out.push_back(factor_class_from_string(list.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NoneWithinBounds: return "none-within-bounds";
    case SearchStatus::NoneFoundIncomplete: return "none-found-incomplete";
    case SearchStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

bool in_class(const Frame1& frame, FactorClass c) {
  const Relation& r = frame.relation;
  switch (c) {
    case FactorClass::K: return true;
    case FactorClass::T: return r.is_reflexive();
    case FactorClass::S4: return r.is_reflexive() && r.is_transitive();
    case FactorClass::S5: return r.is_reflexive() && r.is_symmetric() && r.is_transitive();
  }
  return false;
}

namespace {

// Adjacency matrix as a bitmask, bit i*size+j for the edge (i, j).
using Matrix = std::uint64_t;

Matrix transitive_closure(Matrix m, unsigned size) {
  for (unsigned k = 0; k < size; ++k)
    for (unsigned i = 0; i < size; ++i)
      if ((m >> (i * size + k)) & 1U)
        for (unsigned j = 0; j < size; ++j)
          if ((m >> (k * size + j)) & 1U) m |= Matrix{1} << (i * size + j);
  return m;
}

Matrix symmetric_closure(Matrix m, unsigned size) {
  for (unsigned i = 0; i < size; ++i)
    for (unsigned j = 0; j < size; ++j)
      if ((m >> (i * size + j)) & 1U) m |= Matrix{1} << (j * size + i);
  return m;
}

Frame1 frame_from_matrix(Matrix m, unsigned size) {
  std::vector<Edge> edges;
  for (unsigned i = 0; i < size; ++i)
    for (unsigned j = 0; j < size; ++j)
      if ((m >> (i * size + j)) & 1U) edges.emplace_back(i, j);
  return Frame1{Relation(size, std::move(edges)), {}};
}

}  // namespace

std::vector<Frame1> enumerate_frames(FactorClass c, unsigned size) {
  if (size == 0) throw std::invalid_argument("frames need at least one world");
  if (size > 4) throw std::invalid_argument("frame enumeration is limited to 4 worlds");

  Matrix diagonal = 0;
  std::vector<unsigned> off_diagonal;
  for (unsigned i = 0; i < size; ++i)
    for (unsigned j = 0; j < size; ++j) {
      if (i == j)
        diagonal |= Matrix{1} << (i * size + j);
      else
        off_diagonal.push_back(i * size + j);
    }

  std::vector<Frame1> out;
  if (c == FactorClass::K) {
    const Matrix count = Matrix{1} << (size * size);
    for (Matrix m = 0; m < count; ++m) out.push_back(frame_from_matrix(m, size));
    return out;
  }

  std::set<Matrix> seen;
  const Matrix count = Matrix{1} << off_diagonal.size();
  for (Matrix g = 0; g < count; ++g) {
    Matrix m = diagonal;
    for (std::size_t b = 0; b < off_diagonal.size(); ++b)
      if ((g >> b) & 1U) m |= Matrix{1} << off_diagonal[b];
    if (c == FactorClass::S4) m = transitive_closure(m, size);
    if (c == FactorClass::S5) m = transitive_closure(symmetric_closure(m, size), size);
    if (c != FactorClass::T && !seen.insert(m).second) continue;
    out.push_back(frame_from_matrix(m, size));
  }
  return out;
}

namespace {

/// Formula compiled to a straight-line program over 64-bit world masks.
class MaskProgram {
 public:
  MaskProgram(const FormulaStore& store, Formula f, const std::vector<std::uint32_t>& vars) {
    const auto order = store.topological(f);
    std::unordered_map<Formula, std::uint32_t> slot;
    for (Formula g : order) {
      const Node& n = store.node(g);
      Op op{n.kind, 0, 0, n.payload};
      if (n.kind == Kind::Var)
        op.payload = static_cast<std::uint32_t>(std::find(vars.begin(), vars.end(), n.payload) - vars.begin());
      if (n.kind == Kind::Box || n.kind == Kind::And || n.kind == Kind::Or || n.kind == Kind::Imp)
        op.a = slot.at(n.left);
      if (n.kind == Kind::And || n.kind == Kind::Or || n.kind == Kind::Imp) op.b = slot.at(n.right);
      slot.emplace(g, static_cast<std::uint32_t>(ops_.size()));
      ops_.push_back(op);
    }
    values_.resize(ops_.size());
  }

  // succ[(modality-1) * worlds + w] is the successor mask of w.
  std::uint64_t run(const std::vector<std::uint64_t>& succ, unsigned worlds, const std::vector<std::uint64_t>& var_masks) {
    const std::uint64_t all = worlds == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << worlds) - 1;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const Op& op = ops_[i];
      std::uint64_t v = 0;
      switch (op.kind) {
        case Kind::Bottom: v = 0; break;
        case Kind::Var: v = var_masks[op.payload]; break;
        case Kind::And: v = values_[op.a] & values_[op.b]; break;
        case Kind::Or: v = values_[op.a] | values_[op.b]; break;
        case Kind::Imp: v = (~values_[op.a] | values_[op.b]) & all; break;
        case Kind::Box: {
          const std::uint64_t body = values_[op.a];
          const std::uint64_t* s = succ.data() + static_cast<std::size_t>(op.payload - 1) * worlds;
          for (unsigned w = 0; w < worlds; ++w)
            if ((s[w] & ~body) == 0) v |= std::uint64_t{1} << w;
          break;
        }
      }
      values_[i] = v;
    }
    return values_.back();
  }

 private:
  struct Op {
    Kind kind;
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t payload;
  };
  std::vector<Op> ops_;
  std::vector<std::uint64_t> values_;
};

std::vector<std::vector<unsigned>> size_tuples(unsigned arity, const SearchBudget& budget) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> t(arity, 1);
  while (true) {
    out.push_back(t);
    std::size_t i = arity;
    while (i > 0 && t[i - 1] == budget.max_worlds_of(static_cast<unsigned>(i - 1))) t[--i] = 1;
    if (i == 0) break;
    ++t[i - 1];
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    unsigned sa = 0, sb = 0;
    for (auto x : a) sa += x;
    for (auto x : b) sb += x;
    return sa < sb;
  });
  return out;
}

}  // namespace

SearchStatus for_each_countermodel(const FormulaStore& store, Formula f, std::span<const FactorClass> classes,
                                   const SearchBudget& budget,
                                   const std::function<VisitAction(const ProductModel&)>& visit,
                                   SearchStats* stats_out) {
  const unsigned arity = store.arity();
  if (classes.size() != arity)
    throw std::invalid_argument("expected " + std::to_string(arity) + " factor classes, got " +
                                std::to_string(classes.size()));
  for (unsigned i = 0; i < arity; ++i)
    if (budget.max_worlds_of(i) == 0) throw std::invalid_argument("search budget allows no worlds");

  const auto started = std::chrono::steady_clock::now();
  const std::vector<std::uint32_t> vars = store.variables(f);
  MaskProgram program(store, f, vars);
  SearchStats stats;
  bool sampled = false;
  bool exhausted = false;
  bool found_any = false;
  bool stop = false;

  std::map<std::pair<FactorClass, unsigned>, std::vector<Frame1>> frame_cache;
  auto frames_of = [&](FactorClass c, unsigned size) -> const std::vector<Frame1>& {
    auto key = std::make_pair(c, size);
    auto it = frame_cache.find(key);
    if (it == frame_cache.end()) it = frame_cache.emplace(key, enumerate_frames(c, size)).first;
    return it->second;
  };

  auto out_of_budget = [&] {
    if (budget.max_models != 0 && stats.models >= budget.max_models) return true;
    if (budget.time_limit.count() > 0 && (stats.models & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() - started > budget.time_limit)
      return true;
    return false;
  };

  for (const auto& sizes : size_tuples(arity, budget)) {
    std::size_t worlds = 1;
    for (auto s : sizes) worlds *= s;

    std::vector<const std::vector<Frame1>*> lists;
    for (unsigned i = 0; i < arity; ++i) lists.push_back(&frames_of(classes[i], sizes[i]));
    if (std::any_of(lists.begin(), lists.end(), [](auto* l) { return l->empty(); })) continue;

    std::vector<std::size_t> stride(arity, 1);
    for (std::size_t i = arity - 1; i-- > 0;) stride[i] = stride[i + 1] * sizes[i + 1];

    const std::size_t bits = worlds * vars.size();
    const bool exhaustive = bits <= budget.exhaustive_bits;
    const std::uint64_t assignments = exhaustive ? (std::uint64_t{1} << bits) : budget.max_valuations;
    if (!exhaustive) sampled = true;
    const std::uint64_t world_mask = worlds >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << worlds) - 1;

    std::vector<std::size_t> pick(arity, 0);
    bool next_sizes = false;
    while (!stop && !exhausted && !next_sizes) {
      ++stats.frame_tuples;
      std::vector<Frame1> factors;
      for (unsigned i = 0; i < arity; ++i) factors.push_back((*lists[i])[pick[i]]);

      std::optional<NFrame> big_frame;
      std::vector<std::uint64_t> succ;
      if (worlds <= 64) {
        succ.assign(static_cast<std::size_t>(arity) * worlds, 0);
        for (unsigned i = 0; i < arity; ++i) {
          for (std::size_t w = 0; w < worlds; ++w) {
            const std::size_t coord = (w / stride[i]) % sizes[i];
            const std::size_t base = w - coord * stride[i];
            factors[i].relation.successors(static_cast<World>(coord)).for_each([&](World c) {
              succ[i * worlds + w] |= std::uint64_t{1} << (base + c * stride[i]);
            });
          }
        }
      } else {
        big_frame.emplace(product(factors));
      }

      std::mt19937_64 rng(budget.seed ^ (stats.frame_tuples * 0x9e3779b97f4a7c15ULL));
      std::vector<std::uint64_t> var_masks(vars.size());
      for (std::uint64_t code = 0; code < assignments; ++code) {
        if (out_of_budget()) {
          exhausted = true;
          break;
        }
        ++stats.models;

        Valuation valuation;
        if (big_frame) {
          for (std::size_t j = 0; j < vars.size(); ++j) {
            WorldSet ext(worlds);
            for (std::size_t w = 0; w < worlds; ++w)
              if (exhaustive ? ((code >> (j * worlds + w)) & 1U) : (rng() & 1U)) ext.insert(static_cast<World>(w));
            valuation.set(vars[j], std::move(ext));
          }
          const WorldSet holds = sat_set(store, *big_frame, valuation, f);
          if (holds.count() == worlds) continue;
          std::optional<World> point;
          for (World w = 0; w < worlds && !point; ++w)
            if (!holds.contains(w)) point = w;
          ProductModel model{factors, *big_frame, std::move(valuation), *point};
          if (naive_holds(store, model.product, model.valuation, model.point, f))
            throw std::logic_error("model checker disagreement during search");
          found_any = true;
          const VisitAction action = visit(model);
          if (action != VisitAction::Continue) {
            stop = action == VisitAction::Stop;
            next_sizes = action == VisitAction::NextSizeTuple;
            break;
          }
          continue;
        }

        for (std::size_t j = 0; j < vars.size(); ++j)
          var_masks[j] = exhaustive ? (code >> (j * worlds)) & world_mask : rng() & world_mask;
        const std::uint64_t refuted = ~program.run(succ, static_cast<unsigned>(worlds), var_masks) & world_mask;
        if (refuted == 0) continue;

        for (std::size_t j = 0; j < vars.size(); ++j) {
          WorldSet ext(worlds);
          for (std::size_t w = 0; w < worlds; ++w)
            if ((var_masks[j] >> w) & 1U) ext.insert(static_cast<World>(w));
          valuation.set(vars[j], std::move(ext));
        }
        const auto point = static_cast<World>(std::countr_zero(refuted));
        ProductModel model = ProductModel::make(factors, std::move(valuation), point);
        if (naive_holds(store, model.product, model.valuation, model.point, f))
          throw std::logic_error("model checker disagreement during search");
        found_any = true;
        const VisitAction action = visit(model);
        if (action != VisitAction::Continue) {
          stop = action == VisitAction::Stop;
          next_sizes = action == VisitAction::NextSizeTuple;
          break;
        }
      }

      if (next_sizes) break;
      // Advance the frame odometer; the last factor varies fastest.
      std::size_t i = arity;
      while (i > 0 && pick[i - 1] + 1 == lists[i - 1]->size()) pick[--i] = 0;
      if (i == 0) break;
      ++pick[i - 1];
    }
    if (stop || exhausted) break;
  }

  if (stats_out != nullptr) *stats_out = stats;
  if (found_any) return SearchStatus::Found;
  if (exhausted) return SearchStatus::BudgetExhausted;
  return sampled ? SearchStatus::NoneFoundIncomplete : SearchStatus::NoneWithinBounds;
}

SearchResult search_countermodel(const FormulaStore& store, Formula f, std::span<const FactorClass> classes,
                                 const SearchBudget& budget) {
  SearchResult result{SearchStatus::NoneWithinBounds, std::nullopt, {}};
  result.status = for_each_countermodel(
      store, f, classes, budget,
      [&](const ProductModel& m) {
        result.model = m;
        return VisitAction::Stop;
      },
      &result.stats);
  return result;
}

}  // namespace onevar
