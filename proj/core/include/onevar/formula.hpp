#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace onevar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModalityOutOfRange : public Error {
 public:
  ModalityOutOfRange(unsigned modality, unsigned arity);
  unsigned modality() const noexcept { return modality_; }
  unsigned arity() const noexcept { return arity_; }

 private:
  unsigned modality_;
  unsigned arity_;
};

enum class Kind : std::uint8_t { Bottom, Var, And, Or, Imp, Box };

/// Handle to an interned node. Two handles from the same store compare equal
/// iff the formulas are structurally equal.
struct Formula {
  std::uint32_t id = 0;
  friend constexpr auto operator<=>(Formula, Formula) = default;
};

struct Node {
  Kind kind;
  // Var: variable index. Box: modality (1-based). Otherwise 0.
  std::uint32_t payload;
  Formula left;
  Formula right;
};

/// Variable index 0 is the reserved single variable `p`; index k >= 1 is p_k.
inline constexpr std::uint32_t kReservedVar = 0;

/// Append-only hash-consed table of n-modal formulas.
///
/// Modal depth, variable set and tree size are computed at intern time.
/// DAG size needs a reachability walk and is filled in lazily on first query.
/// A store is not synchronized; confine it to one thread.
class FormulaStore {
 public:
  explicit FormulaStore(unsigned arity);

  unsigned arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  Formula bottom();
  Formula var(std::uint32_t index);
  Formula p() { return var(kReservedVar); }
  Formula conj(Formula a, Formula b);
  Formula disj(Formula a, Formula b);
  Formula imp(Formula a, Formula b);
  Formula box(unsigned modality, Formula body);

  // Sugar; these do not introduce new node kinds.
  Formula neg(Formula a) { return imp(a, bottom()); }
  Formula dia(unsigned modality, Formula body) { return neg(box(modality, neg(body))); }
  Formula top() { return neg(bottom()); }
  /// Left-nested conjunction; empty input yields top().
  Formula conj_all(std::span<const Formula> parts);

  const Node& node(Formula f) const { return nodes_.at(f.id); }
  Kind kind(Formula f) const { return node(f).kind; }

  unsigned modal_depth(Formula f) const { return info_.at(f.id).depth; }
  /// Sorted distinct variable indices occurring in f.
  const std::vector<std::uint32_t>& variables(Formula f) const { return info_.at(f.id).vars; }
  /// Largest variable index in f, or 0 when f is variable-free.
  std::uint32_t max_variable(Formula f) const;
  /// Node count of the fully expanded tree; saturates at UINT64_MAX.
  std::uint64_t tree_size(Formula f) const { return info_.at(f.id).tree; }
  /// Number of distinct nodes reachable from f.
  std::uint64_t dag_size(Formula f) const;

  /// Post-order list of the distinct nodes reachable from f (children first).
  std::vector<Formula> topological(Formula f) const;

 private:
  struct Info {
    unsigned depth = 0;
    std::uint64_t tree = 1;
    std::vector<std::uint32_t> vars;
    mutable std::uint64_t dag = 0;  // 0 = not yet computed
  };

  struct KeyHash {
    std::size_t operator()(const Node& n) const noexcept;
  };
  struct KeyEq {
    bool operator()(const Node& a, const Node& b) const noexcept {
      return a.kind == b.kind && a.payload == b.payload && a.left == b.left && a.right == b.right;
    }
  };

  Formula intern(Node n);
  void check_handle(Formula f) const;

  unsigned arity_;
  std::vector<Node> nodes_;
  std::vector<Info> info_;
  std::unordered_map<Node, std::uint32_t, KeyHash, KeyEq> index_;
};

}  // namespace onevar

template <>
struct std::hash<onevar::Formula> {
  std::size_t operator()(onevar::Formula f) const noexcept { return std::hash<std::uint32_t>{}(f.id); }
};
