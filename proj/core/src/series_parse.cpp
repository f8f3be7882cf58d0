#include "themelab/series_parse.hpp"

#include <cctype>

#include "themelab/errors.hpp"

namespace themelab {
namespace expr {

namespace {

struct Token {
  enum class Kind { Number, Ident, Op, End };
  Kind kind;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Kind::Number, std::string(s.substr(i, j - i))});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, std::string(s.substr(i, j - i))});
      i = j;
    } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Op, std::string(1, c)});
      ++i;
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "' in '" + std::string(s) +
                       "'");
    }
  }
  out.push_back({Token::Kind::End, ""});
  return out;
}

NodePtr make(Node::Kind kind) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  return n;
}

NodePtr make_binary(Node::Kind kind, NodePtr l, NodePtr r) {
  auto n = make(kind);
  n->children.push_back(std::move(l));
  n->children.push_back(std::move(r));
  return n;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string_view source)
      : tokens_(std::move(tokens)), source_(source) {}

  NodePtr parse_all() {
    auto n = parse_expr();
    if (peek().kind != Token::Kind::End) fail("trailing input near '" + peek().text + "'");
    return n;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool is_op(const char* op) const {
    return peek().kind == Token::Kind::Op && peek().text == op;
  }
  void expect(const char* op) {
    if (!is_op(op)) fail(std::string("expected '") + op + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " in '" + std::string(source_) + "'");
  }

  NodePtr parse_expr() {
    auto lhs = parse_term();
    while (is_op("+") || is_op("-")) {
      const bool plus = is_op("+");
      ++pos_;
      lhs = make_binary(plus ? Node::Kind::Add : Node::Kind::Sub, std::move(lhs), parse_term());
    }
    return lhs;
  }

  bool starts_primary() const {
    return peek().kind == Token::Kind::Number || peek().kind == Token::Kind::Ident || is_op("(");
  }

  NodePtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      if (is_op("*")) {
        ++pos_;
        lhs = make_binary(Node::Kind::Mul, std::move(lhs), parse_unary());
      } else if (is_op("/")) {
        ++pos_;
        lhs = make_binary(Node::Kind::Div, std::move(lhs), parse_unary());
      } else if (starts_primary()) {
        lhs = make_binary(Node::Kind::Mul, std::move(lhs), parse_power());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (is_op("-")) {
      ++pos_;
      auto n = make(Node::Kind::Neg);
      n->children.push_back(parse_unary());
      return n;
    }
    if (is_op("+")) {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    if (is_op("^")) {
      ++pos_;
      return make_binary(Node::Kind::Pow, std::move(base), parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      ++pos_;
      auto n = make(Node::Kind::Number);
      n->number = Rational(Integer(t.text, 10));
      return n;
    }
    if (t.kind == Token::Kind::Ident) {
      std::string name = t.text;
      ++pos_;
      if (is_op("(")) {
        ++pos_;
        auto n = make(Node::Kind::Call);
        n->name = std::move(name);
        if (!is_op(")")) {
          n->children.push_back(parse_expr());
          while (is_op(",")) {
            ++pos_;
            n->children.push_back(parse_expr());
          }
        }
        expect(")");
        return n;
      }
      auto n = make(Node::Kind::Ident);
      n->name = std::move(name);
      return n;
    }
    if (is_op("(")) {
      ++pos_;
      auto n = parse_expr();
      expect(")");
      return n;
    }
    if (t.kind == Token::Kind::End) fail("unexpected end of input");
    fail("unexpected token '" + t.text + "'");
  }

  std::vector<Token> tokens_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

}  // namespace

NodePtr parse(std::string_view text) { return Parser(tokenize(text), text).parse_all(); }

Rational evaluate_scalar(const Node& node, const ParameterMap& params) {
  switch (node.kind) {
    case Node::Kind::Number:
      return node.number;
    case Node::Kind::Ident: {
      auto it = params.find(node.name);
      if (it == params.end()) throw ParseError("unknown parameter '" + node.name + "'");
      return it->second;
    }
    case Node::Kind::Neg:
      return -evaluate_scalar(*node.children[0], params);
    case Node::Kind::Add:
      return evaluate_scalar(*node.children[0], params) + evaluate_scalar(*node.children[1], params);
    case Node::Kind::Sub:
      return evaluate_scalar(*node.children[0], params) - evaluate_scalar(*node.children[1], params);
    case Node::Kind::Mul:
      return evaluate_scalar(*node.children[0], params) * evaluate_scalar(*node.children[1], params);
    case Node::Kind::Div: {
      const Rational d = evaluate_scalar(*node.children[1], params);
      if (d == 0) throw ParseError("division by zero");
      return evaluate_scalar(*node.children[0], params) / d;
    }
    case Node::Kind::Pow: {
      const Rational base = evaluate_scalar(*node.children[0], params);
      const Rational e = evaluate_scalar(*node.children[1], params);
      if (!is_integer(e)) throw ParseError("non-integer power of a scalar");
      long n = to_long(e);
      if (n < 0 && base == 0) throw ParseError("division by zero");
      Rational r = 1;
      const Rational f = n < 0 ? Rational(1 / base) : base;
      for (long i = 0; i < (n < 0 ? -n : n); ++i) r *= f;
      return r;
    }
    case Node::Kind::Call:
      throw ParseError("function '" + node.name + "' is not allowed in a scalar");
  }
  throw ParseError("bad expression");
}

void collect_identifiers(const Node& node, std::vector<std::string>& out) {
  if (node.kind == Node::Kind::Ident) out.push_back(node.name);
  for (const auto& c : node.children) collect_identifiers(*c, out);
}

}  // namespace expr

TruncSeries evaluate_series(const expr::Node& node, int prec, const ParameterMap& params) {
  using K = expr::Node::Kind;
  switch (node.kind) {
    case K::Number:
      return TruncSeries::constant(node.number, prec);
    case K::Ident:
      if (node.name == "b") return TruncSeries::monomial(Rational(1), 1, prec);
      return TruncSeries::constant(expr::evaluate_scalar(node, params), prec);
    case K::Neg:
      return -evaluate_series(*node.children[0], prec, params);
    case K::Add:
      return evaluate_series(*node.children[0], prec, params) +
             evaluate_series(*node.children[1], prec, params);
    case K::Sub:
      return evaluate_series(*node.children[0], prec, params) -
             evaluate_series(*node.children[1], prec, params);
    case K::Mul:
      return evaluate_series(*node.children[0], prec, params) *
             evaluate_series(*node.children[1], prec, params);
    case K::Div:
      return evaluate_series(*node.children[0], prec, params) *
             evaluate_series(*node.children[1], prec, params).inverse();
    case K::Pow: {
      const Rational e = expr::evaluate_scalar(*node.children[1], params);
      if (!is_integer(e) || e < 0) throw ParseError("series powers must be non-negative integers");
      const long n = to_long(e);
      const auto base = evaluate_series(*node.children[0], prec, params);
      auto r = TruncSeries::one(prec);
      for (long i = 0; i < n; ++i) r = r * base;
      return r;
    }
    case K::Call:
      if (node.name == "inv" && node.children.size() == 1)
        return evaluate_series(*node.children[0], prec, params).inverse();
      throw ParseError("unknown function '" + node.name + "' in series literal");
  }
  throw ParseError("bad series expression");
}

TruncSeries parse_series(std::string_view text, int prec, const ParameterMap& params) {
  const auto tree = expr::parse(text);
  return evaluate_series(*tree, prec, params);
}

}  // namespace themelab
