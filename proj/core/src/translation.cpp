#include "onevar/translation.hpp"

#include <stdexcept>

#include "onevar/defined.hpp"

namespace onevar {

std::string VariantConfig::name() const {
  std::string out = beta_diamond == BetaDiamond::Plain ? "plain" : "composite";
  if (w0_carries_p) out += "+w0";
  if (box_not_p_guard) out += "+guard";
  return out;
}

VariantConfig VariantConfig::from_name(std::string_view name) {
  for (const auto& v : grid())
    if (v.name() == name) return v;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

std::vector<VariantConfig> VariantConfig::grid() {
  std::vector<VariantConfig> out;
  for (auto diamond : {BetaDiamond::Plain, BetaDiamond::Composite})
    for (bool w0 : {false, true})
      for (bool guard : {false, true}) out.push_back(VariantConfig{diamond, w0, guard});
  return out;
}

VariantConfig default_variant(FactorMode mode) {
  if (mode == FactorMode::K) return VariantConfig{BetaDiamond::Composite, true, false};
  return VariantConfig{BetaDiamond::Composite, true, true};
}

TranslationContext::TranslationContext(FormulaStore& store, Formula source, VariantConfig variant)
    : store_(store), source_(source), variant_(variant) {
  const auto& vars = store.variables(source);
  if (!vars.empty() && vars.front() == kReservedVar) throw ReservedVariable();
  m_ = store.max_variable(source);
  d_ = store.modal_depth(source);

  const Formula p = store.p();
  const Formula not_p = store.neg(p);

  Formula a = store.box(1, p);
  for (unsigned k = 1; k <= m_ + 1; ++k) {
    a = composite_dia(store, a);
    alpha_.push_back(a);
  }
  for (unsigned k = 1; k <= m_ + 1; ++k) {
    const Formula target = store.conj(p, alpha_[k - 1]);
    const Formula reach =
        variant.beta_diamond == BetaDiamond::Plain ? store.dia(1, target) : composite_dia(store, target);
    beta_.push_back(store.conj(not_p, reach));
  }

  big_b_ = beta_.back();
  if (variant.box_not_p_guard) big_b_ = store.conj(big_b_, store.box(1, not_p));

  const Formula spread = box_upto(store, d_, store.imp(big_b_, box_upto_minus1(store, d_, big_b_)));
  const Formula gather = box_upto(store, d_, store.imp(dia_upto_minus1(store, d_, big_b_), big_b_));
  guard_a_ = store.conj(store.conj(big_b_, spread), gather);

  reduced_ = store.imp(guard_a_, sigma(source));
}

Formula TranslationContext::alpha(unsigned k) const {
  if (k == 0) throw std::invalid_argument("alpha requires k >= 1");
  if (k > m_ + 1) throw std::out_of_range("alpha index exceeds m+1");
  return alpha_[k - 1];
}

Formula TranslationContext::beta(unsigned k) const {
  if (k == 0 || k > m_ + 1) throw std::out_of_range("beta index outside 1..m+1");
  return beta_[k - 1];
}

Formula TranslationContext::sigma(Formula f) {
  if (auto it = sigma_memo_.find(f); it != sigma_memo_.end()) return it->second;

  for (Formula g : store_.topological(f)) {
    if (sigma_memo_.contains(g)) continue;
    const Node node = store_.node(g);  // copy: interning below may reallocate
    Formula out;
    switch (node.kind) {
      case Kind::Bottom:
        out = g;
        break;
      case Kind::Var:
        if (node.payload == kReservedVar) throw ReservedVariable();
        if (node.payload > m_)
          throw std::out_of_range("variable p" + std::to_string(node.payload) + " exceeds the context bound m = " +
                                  std::to_string(m_));
        out = beta_[node.payload - 1];
        break;
      case Kind::And:
        out = store_.conj(sigma_memo_.at(node.left), sigma_memo_.at(node.right));
        break;
      case Kind::Or:
        out = store_.disj(sigma_memo_.at(node.left), sigma_memo_.at(node.right));
        break;
      case Kind::Imp:
        out = store_.imp(sigma_memo_.at(node.left), sigma_memo_.at(node.right));
        break;
      case Kind::Box:
        out = store_.box(node.payload, store_.imp(big_b_, sigma_memo_.at(node.left)));
        break;
    }
    sigma_memo_.emplace(g, out);
  }
  return sigma_memo_.at(f);
}

}  // namespace onevar
