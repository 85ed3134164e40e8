#include "onevar/syntax.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace onevar {

ParseError::ParseError(std::size_t position, const std::string& message)
    : Error("parse error at offset " + std::to_string(position) + ": " + message), position_(position) {}

namespace {

enum class Tok { End, Arrow, Bar, Amp, Tilde, LBrack, RBrack, Lt, Gt, LParen, RParen, Falsum, Var, Int };

struct Token {
  Tok kind;
  std::size_t pos;
  std::uint32_t value = 0;  // Var index or Int value
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  std::uint32_t read_int(std::size_t& i) {
    const std::size_t start = i;
    while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + i, value);
    if (ec != std::errc{} || ptr != text_.data() + i) throw ParseError(start, "integer out of range");
    return value;
  }

  void advance() {
    std::size_t i = pos_;
    while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
    if (i >= text_.size()) {
      current_ = {Tok::End, i};
      pos_ = i;
      return;
    }
    const std::size_t start = i;
    const char c = text_[i];
    auto single = [&](Tok t) {
      current_ = {t, start};
      pos_ = i + 1;
    };
    switch (c) {
      case '|': return single(Tok::Bar);
      case '&': return single(Tok::Amp);
      case '~': return single(Tok::Tilde);
      case '[': return single(Tok::LBrack);
      case ']': return single(Tok::RBrack);
      case '<': return single(Tok::Lt);
      case '>': return single(Tok::Gt);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case 'F': return single(Tok::Falsum);
      case '-':
        if (i + 1 < text_.size() && text_[i + 1] == '>') {
          current_ = {Tok::Arrow, start};
          pos_ = i + 2;
          return;
        }
        throw ParseError(start, "expected '->'");
      case 'p': {
        ++i;
        std::uint32_t index = kReservedVar;
        if (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) {
          index = read_int(i);
          if (index == 0) throw ParseError(start, "variable p0 is not allowed; the reserved variable is written 'p'");
        }
        current_ = {Tok::Var, start, index};
        pos_ = i;
        return;
      }
      default:
        if (std::isdigit(static_cast<unsigned char>(c))) {
          const std::uint32_t v = read_int(i);
          current_ = {Tok::Int, start, v};
          pos_ = i;
          return;
        }
        throw ParseError(start, std::string("unexpected character '") + c + "'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, 0};
};

class Parser {
 public:
  Parser(FormulaStore& store, std::string_view text) : store_(store), lex_(text) {}

  Formula parse_all() {
    Formula f = parse_imp();
    if (lex_.peek().kind != Tok::End) throw ParseError(lex_.peek().pos, "unexpected trailing input");
    return f;
  }

 private:
  Formula parse_imp() {
    Formula lhs = parse_or();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return store_.imp(lhs, parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula acc = parse_and();
    while (lex_.peek().kind == Tok::Bar) {
      lex_.take();
      acc = store_.disj(acc, parse_and());
    }
    return acc;
  }

  Formula parse_and() {
    Formula acc = parse_unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      acc = store_.conj(acc, parse_unary());
    }
    return acc;
  }

  unsigned modality(Tok close) {
    const Token t = lex_.take();
    if (t.kind != Tok::Int) throw ParseError(t.pos, "expected modality index");
    if (t.value < 1 || t.value > store_.arity()) throw ModalityOutOfRange(t.value, store_.arity());
    expect(close, close == Tok::RBrack ? "']'" : "'>'");
    return t.value;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Tilde:
        lex_.take();
        return store_.neg(parse_unary());
      case Tok::LBrack: {
        lex_.take();
        const unsigned i = modality(Tok::RBrack);
        return store_.box(i, parse_unary());
      }
      case Tok::Lt: {
        lex_.take();
        const unsigned i = modality(Tok::Gt);
        return store_.dia(i, parse_unary());
      }
      default:
        return parse_atom();
    }
  }

  Formula parse_atom() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Tok::Falsum:
        return store_.bottom();
      case Tok::Var:
        return store_.var(t.value);
      case Tok::LParen: {
        Formula inner = parse_imp();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::End:
        throw ParseError(t.pos, "unexpected end of input");
      default:
        throw ParseError(t.pos, "expected a formula");
    }
  }

  void expect(Tok kind, const char* what) {
    const Token t = lex_.take();
    if (t.kind != kind) throw ParseError(t.pos, std::string("expected ") + what);
  }

  FormulaStore& store_;
  Lexer lex_;
};

// Binding strength; larger binds tighter.
constexpr int kPrecImp = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecUnary = 4;

class Renderer {
 public:
  Renderer(const FormulaStore& store, const std::unordered_map<Formula, std::string>* names)
      : store_(store), names_(names) {}

  void emit(Formula f, int context, bool is_root, std::string& out) const {
    if (!is_root && names_ != nullptr) {
      if (auto it = names_->find(f); it != names_->end()) {
        out += it->second;
        return;
      }
    }
    const Node& n = store_.node(f);
    switch (n.kind) {
      case Kind::Bottom:
        out += 'F';
        return;
      case Kind::Var:
        out += 'p';
        if (n.payload != kReservedVar) out += std::to_string(n.payload);
        return;
      case Kind::Box:
        out += '[';
        out += std::to_string(n.payload);
        out += ']';
        emit(n.left, kPrecUnary, false, out);
        return;
      case Kind::Imp:
        binary(n, kPrecImp, kPrecOr, kPrecImp, " -> ", context, out);
        return;
      case Kind::Or:
        binary(n, kPrecOr, kPrecOr, kPrecAnd, " | ", context, out);
        return;
      case Kind::And:
        binary(n, kPrecAnd, kPrecAnd, kPrecUnary, " & ", context, out);
        return;
    }
  }

 private:
  void binary(const Node& n, int own, int left_ctx, int right_ctx, const char* op, int context,
              std::string& out) const {
    const bool paren = context > own;
    if (paren) out += '(';
    emit(n.left, left_ctx, false, out);
    out += op;
    emit(n.right, right_ctx, false, out);
    if (paren) out += ')';
  }

  const FormulaStore& store_;
  const std::unordered_map<Formula, std::string>* names_;
};

}  // namespace

Formula parse(FormulaStore& store, std::string_view text) { return Parser(store, text).parse_all(); }

std::string render(const FormulaStore& store, Formula f) {
  std::string out;
  Renderer(store, nullptr).emit(f, kPrecImp, true, out);
  return out;
}

std::string render_shared(const FormulaStore& store, const std::vector<std::pair<std::string, Formula>>& defs) {
  std::unordered_map<Formula, std::string> names;
  std::string out;
  const Renderer renderer(store, &names);
  for (const auto& [name, f] : defs) {
    out += name;
    out += " := ";
    renderer.emit(f, kPrecImp, true, out);
    out += '\n';
    names.emplace(f, name);
  }
  return out;
}

}  // namespace onevar
