#include "themelab/xi_expr.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "themelab/errors.hpp"

namespace themelab {

namespace {

using K = expr::Node::Kind;

// Either a bare series in b, or a sum of series times s^e (Log s)^j.
struct Value {
  std::optional<TruncSeries> bare;
  std::map<std::pair<Rational, int>, TruncSeries> terms;
};

bool is_scalar_series(const TruncSeries& s) {
  for (int m = 1; m < s.prec(); ++m)
    if (s[m] != 0) return false;
  return true;
}

std::map<std::pair<Rational, int>, TruncSeries> as_terms(const Value& v) {
  if (!v.bare) return v.terms;
  return {{{Rational(0), 0}, *v.bare}};
}

Value bare(TruncSeries s) { return Value{std::move(s), {}}; }

void add_term(std::map<std::pair<Rational, int>, TruncSeries>& terms, const std::pair<Rational, int>& key,
              const TruncSeries& c) {
  auto it = terms.find(key);
  if (it == terms.end())
    terms.emplace(key, c);
  else
    it->second += c;
}

Value add(const Value& x, const Value& y, bool subtract) {
  if (x.bare && y.bare) return bare(subtract ? *x.bare - *y.bare : *x.bare + *y.bare);
  auto terms = as_terms(x);
  for (const auto& [key, c] : as_terms(y)) add_term(terms, key, subtract ? -c : c);
  return Value{std::nullopt, std::move(terms)};
}

Value scale(const Value& x, const TruncSeries& s) {
  if (x.bare) return bare(*x.bare * s);
  Value r;
  for (const auto& [key, c] : x.terms) r.terms.emplace(key, s * c);
  return r;
}

Value multiply(const Value& x, const Value& y) {
  if (x.bare) return scale(y, *x.bare);
  if (y.bare) return scale(x, *y.bare);
  // product of functions of s: only allowed with b-free coefficients
  Value r;
  for (const auto& [kx, cx] : x.terms)
    for (const auto& [ky, cy] : y.terms) {
      if (!is_scalar_series(cx) || !is_scalar_series(cy))
        throw ParseError("cannot multiply two s-terms whose coefficients involve b");
      add_term(r.terms, {kx.first + ky.first, kx.second + ky.second}, cx * cy);
    }
  return r;
}

Value eval(const expr::Node& node, int prec, const ParameterMap& params) {
  switch (node.kind) {
    case K::Number:
      return bare(TruncSeries::constant(node.number, prec));
    case K::Ident:
      if (node.name == "s") return Value{std::nullopt, {{{Rational(1), 0}, TruncSeries::one(prec)}}};
      if (node.name == "log") return Value{std::nullopt, {{{Rational(0), 1}, TruncSeries::one(prec)}}};
      return bare(evaluate_series(node, prec, params));
    case K::Neg:
      return scale(eval(*node.children[0], prec, params), TruncSeries::constant(Rational(-1), prec));
    case K::Add:
    case K::Sub:
      return add(eval(*node.children[0], prec, params), eval(*node.children[1], prec, params),
                 node.kind == K::Sub);
    case K::Mul:
      return multiply(eval(*node.children[0], prec, params), eval(*node.children[1], prec, params));
    case K::Div: {
      const Value d = eval(*node.children[1], prec, params);
      if (!d.bare) throw ParseError("division by an s-term is not supported");
      return scale(eval(*node.children[0], prec, params), d.bare->inverse());
    }
    case K::Pow: {
      const Rational e = expr::evaluate_scalar(*node.children[1], params);
      const Value base = eval(*node.children[0], prec, params);
      if (base.bare) {
        if (!is_integer(e) || e < 0) throw ParseError("series powers must be non-negative integers");
        auto r = TruncSeries::one(prec);
        for (long i = 0; i < to_long(e); ++i) r = r * *base.bare;
        return bare(r);
      }
      if (base.terms.size() != 1) throw ParseError("only single s-monomials can be raised to a power");
      const auto& [key, c] = *base.terms.begin();
      if (c[0] != 1 || !is_scalar_series(c))
        throw ParseError("powers of s-terms need coefficient 1");
      if (key.second != 0 && (!is_integer(e) || e < 0))
        throw ParseError("log(s) powers must be non-negative integers");
      const Rational log_power = key.second * e;
      return Value{std::nullopt, {{{key.first * e, static_cast<int>(to_long(log_power))}, c}}};
    }
    case K::Call:
      if (node.name == "log") {
        if (node.children.size() != 1 || node.children[0]->kind != K::Ident ||
            node.children[0]->name != "s")
          throw ParseError("log takes the single argument s");
        return Value{std::nullopt, {{{Rational(0), 1}, TruncSeries::one(prec)}}};
      }
      if (node.name == "inv") {
        const Value v = eval(*node.children.at(0), prec, params);
        if (!v.bare) throw ParseError("inv() applies to series only");
        return bare(v.bare->inverse());
      }
      throw ParseError("unknown function '" + node.name + "'");
  }
  throw ParseError("bad expression");
}

}  // namespace

XiExpression::XiExpression(std::string_view text) : text_(text) {
  tree_ = std::shared_ptr<const expr::Node>(expr::parse(text).release());
  std::vector<std::string> ids;
  expr::collect_identifiers(*tree_, ids);
  for (const auto& id : ids)
    if (id != "s" && id != "b" && id != "log" &&
        std::find(parameters_.begin(), parameters_.end(), id) == parameters_.end())
      parameters_.push_back(id);
}

XiElement XiExpression::evaluate(const ParameterMap& params, int prec, int min_log_bound) const {
  const Value v = eval(*tree_, prec, params);
  const auto terms = as_terms(v);
  std::optional<Rational> lambda;
  int n = min_log_bound;
  for (const auto& [key, c] : terms) {
    if (c.is_zero()) continue;
    const Rational cls = class_representative(key.first + 1);
    if (lambda && *lambda != cls)
      throw ParseError("expression mixes the classes " + to_string(*lambda) + " and " + to_string(cls));
    lambda = cls;
    n = std::max(n, key.second);
  }
  if (!lambda) throw ParseError("expression is zero");
  XiElement out(*lambda, n, prec);
  for (const auto& [key, c] : terms) {
    if (c.is_zero()) continue;
    Rational factorial = 1;
    for (int i = 2; i <= key.second; ++i) factorial *= i;
    out += (c * factorial) * power_monomial(key.first + 1, key.second, *lambda, n, prec);
  }
  return out;
}

}  // namespace themelab
