#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace onevar {

using World = std::uint32_t;

/// Fixed-universe bitset of worlds.
class WorldSet {
 public:
  WorldSet() = default;
  explicit WorldSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static WorldSet all(std::size_t universe) {
    WorldSet s(universe);
    s.fill();
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(World w) const noexcept {
    return w < universe_ && ((words_[w >> 6] >> (w & 63)) & 1U) != 0;
  }
  void insert(World w) { words_.at(w >> 6) |= std::uint64_t{1} << (w & 63); }
  void erase(World w) { words_.at(w >> 6) &= ~(std::uint64_t{1} << (w & 63)); }

  void fill() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  bool subset_of(const WorldSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
  }
  bool intersects(const WorldSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }

  WorldSet& operator&=(const WorldSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  WorldSet& operator|=(const WorldSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// this := ¬this ∪ o
  void assign_implication(const WorldSet& a, const WorldSet& b) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = ~a.words_[i] | b.words_[i];
    trim();
  }
  WorldSet complement() const {
    WorldSet s = *this;
    for (auto& w : s.words_) w = ~w;
    s.trim();
    return s;
  }

  friend WorldSet operator&(WorldSet a, const WorldSet& b) { return a &= b; }
  friend WorldSet operator|(WorldSet a, const WorldSet& b) { return a |= b; }
  friend bool operator==(const WorldSet&, const WorldSet&) = default;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        const int bit = std::countr_zero(w);
        fn(static_cast<World>(i * 64 + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  std::vector<World> to_vector() const {
    std::vector<World> out;
    out.reserve(count());
    for_each([&](World w) { out.push_back(w); });
    return out;
  }

 private:
  void trim() noexcept {
    if (universe_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace onevar
