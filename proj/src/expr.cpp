// Parser, constant folding and canonical printer for field expressions.

#include "curvhom/errors.hpp"
#include "curvhom/field.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace curvhom {

namespace {

using Kind = Expr::Kind;

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Number;
  e->number = v;
  return e;
}

ExprPtr make_var(int index) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->index = index;
  return e;
}

bool is_number(const ExprPtr& e) { return e->kind == Kind::Number; }

// A folded value replaces the subtree only when it is finite; anything else
// is left for evaluation to report.
ExprPtr folded_or(double v, ExprPtr fallback) {
  return std::isfinite(v) ? make_number(v) : std::move(fallback);
}

ExprPtr make_binary(Kind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = lhs;
  e->rhs = rhs;
  if (!is_number(lhs) || !is_number(rhs)) return e;
  const double a = lhs->number, b = rhs->number;
  switch (kind) {
    case Kind::Add: return folded_or(a + b, e);
    case Kind::Sub: return folded_or(a - b, e);
    case Kind::Mul: return folded_or(a * b, e);
    case Kind::Div: return b == 0.0 ? ExprPtr(e) : folded_or(a / b, e);
    default: throw std::logic_error("make_binary: not a binary kind");
  }
}

ExprPtr make_pow(ExprPtr base, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->lhs = base;
  e->index = exponent;
  if (!is_number(base)) return e;
  if (base->number == 0.0 && exponent < 0) return e;
  return folded_or(std::pow(base->number, exponent), e);
}

ExprPtr make_unary(Kind kind, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = arg;
  if (!is_number(arg)) return e;
  const double a = arg->number;
  switch (kind) {
    case Kind::Neg: return make_number(-a);
    case Kind::Sin: return folded_or(std::sin(a), e);
    case Kind::Cos: return folded_or(std::cos(a), e);
    case Kind::Exp: return folded_or(std::exp(a), e);
    case Kind::Log: return a > 0.0 ? folded_or(std::log(a), e) : ExprPtr(e);
    default: throw std::logic_error("make_unary: not a unary kind");
  }
}

class Parser {
 public:
  Parser(std::string_view src, int p) : src_(src), p_(p) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Kind::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr factor() {
    const bool negate = accept('-');
    ExprPtr b = base();
    if (accept('^')) b = make_pow(b, integer());
    return negate ? make_unary(Kind::Neg, b) : b;
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
      negative = src_[pos_] == '-';
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer exponent");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
    if (ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    return negative ? -value : value;
  }

  ExprPtr base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'x') return variable();
    if (std::isalpha(static_cast<unsigned char>(c))) return function();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = mark;
        fail("malformed exponent in number");
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make_number(v);
  }

  ExprPtr variable() {
    const std::size_t start = pos_;
    ++pos_;  // 'x'
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected variable index after 'x'");
    }
    int index = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, index);
    if (ec != std::errc() || index < 1) {
      pos_ = start;
      fail("variable index must be a positive integer");
    }
    if (index > p_) {
      pos_ = start;
      fail("variable index x" + std::to_string(index) + " exceeds p=" + std::to_string(p_));
    }
    return make_var(index - 1);
  }

  ExprPtr function() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    Kind kind;
    if (name == "sin") {
      kind = Kind::Sin;
    } else if (name == "cos") {
      kind = Kind::Cos;
    } else if (name == "exp") {
      kind = Kind::Exp;
    } else if (name == "log") {
      kind = Kind::Log;
    } else {
      pos_ = start;
      fail("unknown function '" + std::string(name) + "'");
    }
    expect('(');
    ExprPtr arg = expr();
    expect(')');
    return make_unary(kind, arg);
  }

  std::string_view src_;
  int p_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), ptr);
  return std::signbit(v) ? "(" + s + ")" : s;
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  print(e, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Kind::Number: out += format_number(e.number); return;
    case Kind::Var: out += 'x' + std::to_string(e.index + 1); return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int prec = precedence(e);
      // Left-associative: only the right operand needs parentheses at equal precedence.
      print_child(*e.lhs, precedence(*e.lhs) < prec, out);
      out += e.kind == Kind::Add ? '+' : e.kind == Kind::Sub ? '-' : e.kind == Kind::Mul ? '*' : '/';
      print_child(*e.rhs, precedence(*e.rhs) <= prec, out);
      return;
    }
    case Kind::Neg:
      out += '-';
      print_child(*e.lhs, precedence(*e.lhs) < 4, out);
      return;
    case Kind::Pow:
      print_child(*e.lhs, precedence(*e.lhs) < 5, out);
      out += '^' + std::to_string(e.index);
      return;
    case Kind::Sin: out += "sin("; break;
    case Kind::Cos: out += "cos("; break;
    case Kind::Exp: out += "exp("; break;
    case Kind::Log: out += "log("; break;
  }
  print(*e.lhs, out);
  out += ')';
}

int max_var(const Expr& e) {
  if (e.kind == Kind::Var) return e.index + 1;
  int m = 0;
  if (e.lhs) m = std::max(m, max_var(*e.lhs));
  if (e.rhs) m = std::max(m, max_var(*e.rhs));
  return m;
}

}  // namespace

bool same_tree(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number:
      return std::bit_cast<std::uint64_t>(a.number) == std::bit_cast<std::uint64_t>(b.number);
    case Kind::Var: return a.index == b.index;
    case Kind::Pow: return a.index == b.index && same_tree(*a.lhs, *b.lhs);
    default: break;
  }
  if (!same_tree(*a.lhs, *b.lhs)) return false;
  if (a.rhs || b.rhs) return a.rhs && b.rhs && same_tree(*a.rhs, *b.rhs);
  return true;
}

FieldSpec::FieldSpec(int p, ExprPtr body) : p_(p), body_(std::move(body)) {
  if (p_ < 1) throw std::invalid_argument("field dimension p must be >= 1");
  if (!body_) throw std::invalid_argument("field body is empty");
  if (max_variable() > p_) throw std::invalid_argument("field references a variable beyond p");
}

int FieldSpec::max_variable() const { return max_var(*body_); }

std::string FieldSpec::to_string() const {
  std::string out;
  print(*body_, out);
  return out;
}

FieldSpec parse_field(std::string_view source, int p, const ParseOptions& options) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (p > options.max_dimension) {
    throw std::invalid_argument("p=" + std::to_string(p) + " exceeds the dimension cap " +
                                std::to_string(options.max_dimension));
  }
  return FieldSpec(p, Parser(source, p).parse());
}

FieldSpec canonical_f(const FieldSpec& theta, int p) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (theta.max_variable() > 1) {
    throw std::invalid_argument("theta must depend on x1 only, found x" +
                                std::to_string(theta.max_variable()));
  }
  ExprPtr sum = make_pow(make_var(0), 2);
  for (int i = 1; i < p; ++i) sum = make_binary(Kind::Add, sum, make_pow(make_var(i), 2));
  ExprPtr quad = make_binary(Kind::Mul, make_number(0.5), sum);
  return FieldSpec(p, make_binary(Kind::Add, quad, theta.body_ptr()));
}

}  // namespace curvhom
