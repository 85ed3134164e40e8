#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "onevar/formula.hpp"
#include "onevar/world_set.hpp"

namespace onevar {

using Edge = std::pair<World, World>;

/// Binary relation over 0..world_count-1, kept as a sorted edge list plus a
/// successor index.
class Relation {
 public:
  Relation() = default;
  /// Sorts and deduplicates; throws std::out_of_range on an edge outside the universe.
  Relation(std::size_t world_count, std::vector<Edge> edges);

  std::size_t world_count() const noexcept { return world_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool contains(World from, World to) const;
  const WorldSet& successors(World from) const { return successors_.at(from); }

  bool is_reflexive() const;
  bool is_symmetric() const;
  bool is_transitive() const;

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.world_count_ == b.world_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t world_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<WorldSet> successors_;
};

Relation reflexive_closure(const Relation& r);

/// Unimodal frame with optional point labels.
struct Frame1 {
  Relation relation;
  std::map<std::string, World> labels;

  std::size_t world_count() const noexcept { return relation.world_count(); }
  std::optional<std::string> label_of(World w) const;
};

/// n-modal frame. When produced by product(), each world also carries its
/// factor coordinates (mixed radix, first coordinate most significant).
class NFrame {
 public:
  NFrame(std::size_t world_count, std::vector<Relation> relations, std::vector<std::size_t> factor_sizes = {});

  unsigned arity() const noexcept { return static_cast<unsigned>(relations_.size()); }
  std::size_t world_count() const noexcept { return world_count_; }
  /// Relation of modality i, 1-based.
  const Relation& relation(unsigned modality) const;

  bool is_product() const noexcept { return !factor_sizes_.empty(); }
  const std::vector<std::size_t>& factor_sizes() const noexcept { return factor_sizes_; }
  std::vector<World> coords_of(World w) const;
  World world_at(std::span<const World> coords) const;

 private:
  std::size_t world_count_;
  std::vector<Relation> relations_;
  std::vector<std::size_t> factor_sizes_;
};

/// Variable index -> extension. Variables without an entry are false everywhere.
class Valuation {
 public:
  void set(std::uint32_t var, WorldSet extension) { sets_[var] = std::move(extension); }
  const WorldSet* find(std::uint32_t var) const;
  const std::map<std::uint32_t, WorldSet>& entries() const noexcept { return sets_; }
  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  std::map<std::uint32_t, WorldSet> sets_;
};

struct ProductModel {
  std::vector<Frame1> factors;
  NFrame product;
  Valuation valuation;
  World point;

  /// Builds the product frame and validates valuation and point.
  static ProductModel make(std::vector<Frame1> factors, Valuation valuation, World point);
};

/// The gadget chain v_0 -> w_0 -> v_1 -> ... -> v_k -> w_k.
struct LadderFrame {
  unsigned k;
  Frame1 frame;

  static constexpr World v(unsigned i) noexcept { return 2 * i; }
  static constexpr World w(unsigned i) noexcept { return 2 * i + 1; }
};

/// Reflexive ladder for k >= 1; throws std::invalid_argument for k = 0.
/// With reflexive = false the self-loops are omitted.
LadderFrame ladder(unsigned k, bool reflexive = true);

/// Throws std::invalid_argument on an empty list or an empty factor.
NFrame product(std::span<const Frame1> factors);

/// Subframe on `keep`; surviving worlds are renumbered in increasing order.
/// Throws std::invalid_argument when keep is empty.
Frame1 restrict(const Frame1& frame, const WorldSet& keep);
NFrame restrict(const NFrame& frame, const WorldSet& keep);

/// Worlds reachable from start in at most k steps along the given modalities.
WorldSet bounded_reach(const NFrame& frame, World start, unsigned k, std::span<const unsigned> modalities);

/// Modalities 1..n and 2..n respectively.
std::vector<unsigned> all_modalities(unsigned arity);
std::vector<unsigned> modalities_except_first(unsigned arity);

}  // namespace onevar
