#include "onevar/formula.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace onevar {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

std::vector<std::uint32_t> merge_vars(const std::vector<std::uint32_t>& a,
                                      const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

ModalityOutOfRange::ModalityOutOfRange(unsigned modality, unsigned arity)
    : Error("modality index " + std::to_string(modality) + " outside 1.." + std::to_string(arity)),
      modality_(modality),
      arity_(arity) {}

std::size_t FormulaStore::KeyHash::operator()(const Node& n) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(n.kind) * 0x9e3779b97f4a7c15ULL;
  h ^= n.payload + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= n.left.id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= n.right.id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

FormulaStore::FormulaStore(unsigned arity) : arity_(arity) {
  if (arity == 0) throw std::invalid_argument("formula store arity must be at least 1");
  bottom();  // id 0 is always ⊥
}

void FormulaStore::check_handle(Formula f) const {
  if (f.id >= nodes_.size()) throw std::out_of_range("formula handle does not belong to this store");
}

Formula FormulaStore::intern(Node n) {
  if (auto it = index_.find(n); it != index_.end()) return Formula{it->second};

  Info info;
  switch (n.kind) {
    case Kind::Bottom:
      break;
    case Kind::Var:
      info.vars = {n.payload};
      break;
    case Kind::Box: {
      const Info& body = info_[n.left.id];
      info.depth = body.depth + 1;
      info.tree = sat_add(body.tree, 1);
      info.vars = body.vars;
      break;
    }
    case Kind::And:
    case Kind::Or:
    case Kind::Imp: {
      const Info& l = info_[n.left.id];
      const Info& r = info_[n.right.id];
      info.depth = std::max(l.depth, r.depth);
      info.tree = sat_add(sat_add(l.tree, r.tree), 1);
      info.vars = merge_vars(l.vars, r.vars);
      break;
    }
  }

  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(n);
  info_.push_back(std::move(info));
  index_.emplace(n, id);
  return Formula{id};
}

Formula FormulaStore::bottom() { return intern(Node{Kind::Bottom, 0, {}, {}}); }

Formula FormulaStore::var(std::uint32_t index) { return intern(Node{Kind::Var, index, {}, {}}); }

Formula FormulaStore::conj(Formula a, Formula b) {
  check_handle(a);
  check_handle(b);
  return intern(Node{Kind::And, 0, a, b});
}

Formula FormulaStore::disj(Formula a, Formula b) {
  check_handle(a);
  check_handle(b);
  return intern(Node{Kind::Or, 0, a, b});
}

Formula FormulaStore::imp(Formula a, Formula b) {
  check_handle(a);
  check_handle(b);
  return intern(Node{Kind::Imp, 0, a, b});
}

Formula FormulaStore::box(unsigned modality, Formula body) {
  if (modality < 1 || modality > arity_) throw ModalityOutOfRange(modality, arity_);
  check_handle(body);
  return intern(Node{Kind::Box, modality, body, {}});
}

Formula FormulaStore::conj_all(std::span<const Formula> parts) {
  if (parts.empty()) return top();
  Formula acc = parts.front();
  for (auto it = parts.begin() + 1; it != parts.end(); ++it) acc = conj(acc, *it);
  return acc;
}

std::uint32_t FormulaStore::max_variable(Formula f) const {
  const auto& vars = variables(f);
  return vars.empty() ? 0 : vars.back();
}

std::vector<Formula> FormulaStore::topological(Formula f) const {
  check_handle(f);
  std::vector<Formula> order;
  std::vector<char> seen(nodes_.size(), 0);
  // Iterative post-order; formulas from σ and A can be deep.
  std::vector<std::pair<Formula, bool>> stack{{f, false}};
  while (!stack.empty()) {
    auto [g, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(g);
      continue;
    }
    if (seen[g.id]) continue;
    seen[g.id] = 1;
    stack.emplace_back(g, true);
    const Node& n = nodes_[g.id];
    switch (n.kind) {
      case Kind::Bottom:
      case Kind::Var:
        break;
      case Kind::Box:
        if (!seen[n.left.id]) stack.emplace_back(n.left, false);
        break;
      default:
        if (!seen[n.right.id]) stack.emplace_back(n.right, false);
        if (!seen[n.left.id]) stack.emplace_back(n.left, false);
        break;
    }
  }
  return order;
}

std::uint64_t FormulaStore::dag_size(Formula f) const {
  check_handle(f);
  auto& cached = info_[f.id].dag;
  if (cached == 0) cached = topological(f).size();
  return cached;
}

}  // namespace onevar
