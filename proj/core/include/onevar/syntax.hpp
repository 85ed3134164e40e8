#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "onevar/formula.hpp"

namespace onevar {

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message);
  /// 0-based byte offset into the input.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Parses the external syntax:
///
///   fml   := imp
///   imp   := or ("->" imp)?
///   or    := and ("|" and)*
///   and   := unary ("&" unary)*
///   unary := "~" unary | "[" INT "]" unary | "<" INT ">" unary | atom
///   atom  := "F" | "p" | "p" INT | "(" fml ")"
///
/// Throws ParseError on malformed input and ModalityOutOfRange when a modal
/// index exceeds the store's arity.
Formula parse(FormulaStore& store, std::string_view text);

/// Renders with the minimal parentheses under the grammar above. Negation and
/// diamonds are printed in their primitive form, so parse(render(f)) == f.
std::string render(const FormulaStore& store, Formula f);

/// Renders a list of named definitions. Inside each body, any occurrence of a
/// formula that has its own (earlier) definition is printed by name.
std::string render_shared(const FormulaStore& store, const std::vector<std::pair<std::string, Formula>>& defs);

}  // namespace onevar
