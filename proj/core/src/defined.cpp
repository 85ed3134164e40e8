#include "onevar/defined.hpp"

#include <vector>

namespace onevar {

namespace {

Formula box_upto_from(FormulaStore& store, unsigned k, Formula body, unsigned first_modality) {
  Formula acc = body;
  std::vector<Formula> parts;
  for (unsigned step = 0; step < k; ++step) {
    parts.clear();
    parts.push_back(acc);
    for (unsigned i = first_modality; i <= store.arity(); ++i) parts.push_back(store.box(i, acc));
    acc = store.conj_all(parts);
  }
  return acc;
}

}  // namespace

Formula composite_dia(FormulaStore& store, Formula body) {
  const Formula p = store.p();
  return store.dia(1, store.conj(store.neg(p), store.dia(1, store.conj(p, body))));
}

Formula box_upto(FormulaStore& store, unsigned k, Formula body) { return box_upto_from(store, k, body, 1); }

// ◇^{<=0}ψ is ψ itself rather than ¬¬ψ, matching □^{<=0}ψ = ψ.
Formula dia_upto(FormulaStore& store, unsigned k, Formula body) {
  if (k == 0) return body;
  return store.neg(box_upto(store, k, store.neg(body)));
}

Formula box_upto_minus1(FormulaStore& store, unsigned k, Formula body) {
  return box_upto_from(store, k, body, 2);
}

Formula dia_upto_minus1(FormulaStore& store, unsigned k, Formula body) {
  if (k == 0 || store.arity() < 2) return body;
  return store.neg(box_upto_minus1(store, k, store.neg(body)));
}

}  // namespace onevar
