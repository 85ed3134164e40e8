#include "onevar/kripke.hpp"

#include <algorithm>
#include <stdexcept>

namespace onevar {

Relation::Relation(std::size_t world_count, std::vector<Edge> edges)
    : world_count_(world_count), edges_(std::move(edges)) {
  for (const auto& [a, b] : edges_)
    if (a >= world_count_ || b >= world_count_) throw std::out_of_range("edge endpoint outside the frame");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  successors_.assign(world_count_, WorldSet(world_count_));
  for (const auto& [a, b] : edges_) successors_[a].insert(b);
}

bool Relation::contains(World from, World to) const {
  return from < world_count_ && successors_[from].contains(to);
}

bool Relation::is_reflexive() const {
  for (World w = 0; w < world_count_; ++w)
    if (!successors_[w].contains(w)) return false;
  return true;
}

bool Relation::is_symmetric() const {
  return std::all_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return contains(e.second, e.first); });
}

bool Relation::is_transitive() const {
  for (const auto& [a, b] : edges_)
    if (!successors_[b].subset_of(successors_[a])) return false;
  return true;
}

Relation reflexive_closure(const Relation& r) {
  std::vector<Edge> edges = r.edges();
  for (World w = 0; w < r.world_count(); ++w) edges.emplace_back(w, w);
  return Relation(r.world_count(), std::move(edges));
}

std::optional<std::string> Frame1::label_of(World w) const {
  for (const auto& [name, world] : labels)
    if (world == w) return name;
  return std::nullopt;
}

NFrame::NFrame(std::size_t world_count, std::vector<Relation> relations, std::vector<std::size_t> factor_sizes)
    : world_count_(world_count), relations_(std::move(relations)), factor_sizes_(std::move(factor_sizes)) {
  if (relations_.empty()) throw std::invalid_argument("n-frame needs at least one relation");
  for (const auto& r : relations_)
    if (r.world_count() != world_count_) throw std::invalid_argument("relation universe does not match the frame");
  if (!factor_sizes_.empty()) {
    if (factor_sizes_.size() != relations_.size()) throw std::invalid_argument("one factor per modality expected");
    std::size_t total = 1;
    for (auto s : factor_sizes_) total *= s;
    if (total != world_count_) throw std::invalid_argument("factor sizes do not multiply to the world count");
  }
}

const Relation& NFrame::relation(unsigned modality) const {
  if (modality < 1 || modality > arity()) throw ModalityOutOfRange(modality, arity());
  return relations_[modality - 1];
}

std::vector<World> NFrame::coords_of(World w) const {
  if (!is_product()) throw std::logic_error("frame carries no coordinate tags");
  if (w >= world_count_) throw std::out_of_range("world outside the frame");
  std::vector<World> coords(factor_sizes_.size());
  for (std::size_t i = factor_sizes_.size(); i-- > 0;) {
    coords[i] = static_cast<World>(w % factor_sizes_[i]);
    w = static_cast<World>(w / factor_sizes_[i]);
  }
  return coords;
}

World NFrame::world_at(std::span<const World> coords) const {
  if (!is_product()) throw std::logic_error("frame carries no coordinate tags");
  if (coords.size() != factor_sizes_.size()) throw std::invalid_argument("coordinate tuple has the wrong length");
  std::size_t w = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= factor_sizes_[i]) throw std::out_of_range("coordinate outside its factor");
    w = w * factor_sizes_[i] + coords[i];
  }
  return static_cast<World>(w);
}

const WorldSet* Valuation::find(std::uint32_t var) const {
  auto it = sets_.find(var);
  return it == sets_.end() ? nullptr : &it->second;
}

ProductModel ProductModel::make(std::vector<Frame1> factors, Valuation valuation, World point) {
  NFrame frame = onevar::product(factors);
  for (const auto& [var, set] : valuation.entries())
    if (set.universe() != frame.world_count())
      throw std::invalid_argument("valuation of variable " + std::to_string(var) + " has the wrong universe");
  if (point >= frame.world_count()) throw std::out_of_range("point outside the product");
  return ProductModel{std::move(factors), std::move(frame), std::move(valuation), point};
}

LadderFrame ladder(unsigned k, bool reflexive) {
  if (k == 0) throw std::invalid_argument("ladder requires k >= 1");
  const std::size_t count = 2 * (static_cast<std::size_t>(k) + 1);
  std::vector<Edge> edges;
  for (unsigned i = 0; i <= k; ++i) edges.emplace_back(LadderFrame::v(i), LadderFrame::w(i));
  for (unsigned i = 0; i < k; ++i) edges.emplace_back(LadderFrame::w(i), LadderFrame::v(i + 1));
  Relation rel(count, std::move(edges));
  if (reflexive) rel = reflexive_closure(rel);

  Frame1 frame{std::move(rel), {}};
  for (unsigned i = 0; i <= k; ++i) {
    frame.labels["v" + std::to_string(i)] = LadderFrame::v(i);
    frame.labels["w" + std::to_string(i)] = LadderFrame::w(i);
  }
  return LadderFrame{k, std::move(frame)};
}

NFrame product(std::span<const Frame1> factors) {
  if (factors.empty()) throw std::invalid_argument("product of an empty list of frames");
  std::vector<std::size_t> sizes;
  std::size_t total = 1;
  for (const auto& f : factors) {
    if (f.world_count() == 0) throw std::invalid_argument("product factor has no worlds");
    sizes.push_back(f.world_count());
    total *= f.world_count();
  }

  // Stride of coordinate i in the mixed-radix world index.
  std::vector<std::size_t> stride(sizes.size(), 1);
  for (std::size_t i = sizes.size() - 1; i-- > 0;) stride[i] = stride[i + 1] * sizes[i + 1];

  std::vector<Relation> relations;
  relations.reserve(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::vector<Edge> edges;
    edges.reserve(factors[i].relation.edge_count() * (total / sizes[i]));
    for (std::size_t w = 0; w < total; ++w) {
      const std::size_t coord = (w / stride[i]) % sizes[i];
      const std::size_t base = w - coord * stride[i];
      factors[i].relation.successors(static_cast<World>(coord)).for_each([&](World c) {
        edges.emplace_back(static_cast<World>(w), static_cast<World>(base + c * stride[i]));
      });
    }
    relations.emplace_back(total, std::move(edges));
  }
  return NFrame(total, std::move(relations), std::move(sizes));
}

namespace {

std::vector<World> renumbering(const WorldSet& keep, std::size_t universe) {
  if (keep.universe() != universe) throw std::invalid_argument("keep set has the wrong universe");
  if (keep.empty()) throw std::invalid_argument("cannot restrict to an empty set of worlds");
  std::vector<World> index(universe, static_cast<World>(-1));
  World next = 0;
  keep.for_each([&](World w) { index[w] = next++; });
  return index;
}

Relation restrict_relation(const Relation& r, const std::vector<World>& index, std::size_t count) {
  std::vector<Edge> edges;
  for (const auto& [a, b] : r.edges())
    if (index[a] != static_cast<World>(-1) && index[b] != static_cast<World>(-1)) edges.emplace_back(index[a], index[b]);
  return Relation(count, std::move(edges));
}

}  // namespace

Frame1 restrict(const Frame1& frame, const WorldSet& keep) {
  const auto index = renumbering(keep, frame.world_count());
  Frame1 out{restrict_relation(frame.relation, index, keep.count()), {}};
  for (const auto& [name, w] : frame.labels)
    if (index[w] != static_cast<World>(-1)) out.labels[name] = index[w];
  return out;
}

NFrame restrict(const NFrame& frame, const WorldSet& keep) {
  const auto index = renumbering(keep, frame.world_count());
  std::vector<Relation> relations;
  for (unsigned i = 1; i <= frame.arity(); ++i)
    relations.push_back(restrict_relation(frame.relation(i), index, keep.count()));
  return NFrame(keep.count(), std::move(relations));
}

WorldSet bounded_reach(const NFrame& frame, World start, unsigned k, std::span<const unsigned> modalities) {
  if (start >= frame.world_count()) throw std::out_of_range("start world outside the frame");
  WorldSet reached(frame.world_count());
  reached.insert(start);
  WorldSet frontier = reached;
  for (unsigned step = 0; step < k && !frontier.empty(); ++step) {
    WorldSet next(frame.world_count());
    frontier.for_each([&](World w) {
      for (unsigned i : modalities) next |= frame.relation(i).successors(w);
    });
    frontier = next & reached.complement();
    reached |= next;
  }
  return reached;
}

std::vector<unsigned> all_modalities(unsigned arity) {
  std::vector<unsigned> out;
  for (unsigned i = 1; i <= arity; ++i) out.push_back(i);
  return out;
}

std::vector<unsigned> modalities_except_first(unsigned arity) {
  std::vector<unsigned> out;
  for (unsigned i = 2; i <= arity; ++i) out.push_back(i);
  return out;
}

}  // namespace onevar
