#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "symart/expr.hpp"

namespace symart {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      detail_(message) {}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Collapse a node whose operands are all constants. Non-finite results stay
// unfolded so the pole is still visible in the tree.
Expr fold(Expr e) {
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (!e.child(i).is_constant()) return e;
  }
  if (e.arity() == 0) return e;
  const Complex v = evaluate(e, Complex{0.0, 0.0});
  if (!is_finite(v)) return e;
  return Expr::constant(v);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& message) const { throw ParseError(at, message); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr sum() {
    Expr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = fold(Expr::add(lhs, product()));
      } else if (accept('-')) {
        lhs = fold(Expr::sub(lhs, product()));
      } else {
        return lhs;
      }
    }
  }

  Expr product() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = fold(Expr::mul(lhs, unary()));
      } else if (accept('/')) {
        lhs = fold(Expr::div(lhs, unary()));
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return fold(Expr::neg(unary()));
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '^') return base;

    std::vector<std::pair<long long, std::size_t>> exps;
    while (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      exps.emplace_back(signed_integer("exponent"), at);
    }
    // Right-associative: z^a^b = z^(a^b).
    long long k = exps.back().first;
    for (std::size_t i = exps.size() - 1; i-- > 0;) {
      k = integer_power(exps[i].first, k, exps[i].second);
    }
    if (k > kMaxExponent || k < -kMaxExponent) {
      fail_at(exps.front().second, "exponent " + std::to_string(k) + " outside [-64, 64]");
    }
    return fold(Expr::pow(base, static_cast<int>(k)));
  }

  long long integer_power(long long base, long long e, std::size_t at) const {
    if (e < 0) fail_at(at, "negative exponent inside an exponent tower");
    long long result = 1;
    for (long long i = 0; i < e; ++i) {
      result *= base;
      if (result > kMaxExponent || result < -kMaxExponent) {
        fail_at(at, "exponent outside [-64, 64]");
      }
    }
    return result;
  }

  long long signed_integer(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_space();
    }
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ == digits) {
      pos_ = digits;
      fail(std::string("expected integer ") + what);
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail_at(start, std::string(what) + " must be an integer");
    }
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (ec != std::errc{} || value > std::numeric_limits<int>::max()) {
      fail_at(start, std::string(what) + " out of range");
    }
    (void)ptr;
    return negative ? -value : value;
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ == start + 1 && text_[start] == '.') fail_at(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) fail_at(start, "malformed number");

    // A trailing `i` (not the start of a longer identifier) makes it imaginary.
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 >= text_.size() || !is_ident_char(text_[pos_ + 1]))) {
      ++pos_;
      return Expr::constant({0.0, value});
    }
    if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
      fail("missing operator before identifier");
    }
    return Expr::constant({value, 0.0});
  }

  Expr call_one(Expr (*make)(Expr), const std::string& name) {
    expect('(');
    Expr arg = sum();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ',') fail(name + " takes exactly 1 argument");
    expect(')');
    return fold(make(arg));
  }

  std::pair<int, int> index_pair(const std::string& name) {
    expect('(');
    const auto m = signed_integer("index");
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ')') fail(name + " takes exactly 2 integer arguments");
    expect(',');
    const auto n = signed_integer("index");
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ',') fail(name + " takes exactly 2 integer arguments");
    expect(')');
    return {static_cast<int>(m), static_cast<int>(n)};
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (is_digit(c) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr inner = sum();
      expect(')');
      return inner;
    }
    if (!is_ident_start(c)) fail(std::string("unexpected '") + c + "'");

    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (name == "z") return Expr::var();
    if (name == "i") return Expr::constant({0.0, 1.0});
    if (name == "pi") return Expr::constant({kPi, 0.0});
    if (name == "conj") return call_one(&Expr::conj, name);
    if (name == "exp") return call_one(&Expr::exp, name);
    if (name == "log") return call_one(&Expr::log, name);
    if (name == "sin") return call_one(&Expr::sin, name);
    if (name == "cos") return call_one(&Expr::cos, name);
    if (name == "E") {
      const auto [m, n] = index_pair(name);
      return Expr::lattice_exp(m, n);
    }
    if (name == "W2" || name == "W3" || name == "W4") {
      const auto [m, n] = index_pair(name);
      return Expr::group_avg(name[1] - '0', m, n);
    }
    fail_at(start, "unknown identifier '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace symart
