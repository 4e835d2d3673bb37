#include "symart/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace symart {

struct Expr::Node {
  ExprKind kind;
  Complex value{};
  int a = 0;  // exponent, or group order
  int m = 0;
  int n = 0;
  std::array<std::shared_ptr<const Node>, 2> children{};
};

namespace {

std::size_t arity_of(ExprKind k) {
  switch (k) {
    case ExprKind::Const:
    case ExprKind::Var:
    case ExprKind::LatticeExp:
    case ExprKind::GroupAvg:
      return 0;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

Expr Expr::constant(Complex c) {
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Const;
  node->value = c;
  return Expr(std::move(node));
}

Expr Expr::var() {
  static const Expr z = [] {
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::Var;
    return Expr(std::move(node));
  }();
  return z;
}

#define SYMART_UNARY(fn, K)                     \
  Expr Expr::fn(Expr arg) {                     \
    auto node = std::make_shared<Node>();       \
    node->kind = ExprKind::K;                   \
    node->children[0] = std::move(arg.node_);   \
    return Expr(std::move(node));               \
  }

#define SYMART_BINARY(fn, K)                    \
  Expr Expr::fn(Expr lhs, Expr rhs) {           \
    auto node = std::make_shared<Node>();       \
    node->kind = ExprKind::K;                   \
    node->children[0] = std::move(lhs.node_);   \
    node->children[1] = std::move(rhs.node_);   \
    return Expr(std::move(node));               \
  }

SYMART_UNARY(conj, Conj)
SYMART_UNARY(neg, Neg)
SYMART_UNARY(exp, Exp)
SYMART_UNARY(log, Log)
SYMART_UNARY(sin, Sin)
SYMART_UNARY(cos, Cos)
SYMART_BINARY(add, Add)
SYMART_BINARY(sub, Sub)
SYMART_BINARY(mul, Mul)
SYMART_BINARY(div, Div)

#undef SYMART_UNARY
#undef SYMART_BINARY

Expr Expr::pow(Expr base, int k) {
  if (k > kMaxExponent || k < -kMaxExponent) {
    throw std::invalid_argument("exponent " + std::to_string(k) + " outside [-64, 64]");
  }
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::IntPow;
  node->a = k;
  node->children[0] = std::move(base.node_);
  return Expr(std::move(node));
}

Expr Expr::lattice_exp(int m, int n) {
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::LatticeExp;
  node->m = m;
  node->n = n;
  return Expr(std::move(node));
}

Expr Expr::group_avg(int order, int m, int n) {
  if (order != 2 && order != 3 && order != 4) {
    throw std::invalid_argument("group average order must be 2, 3 or 4, got " + std::to_string(order));
  }
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::GroupAvg;
  node->a = order;
  node->m = m;
  node->n = n;
  return Expr(std::move(node));
}

ExprKind Expr::kind() const { return node_->kind; }
Complex Expr::value() const { return node_->value; }
int Expr::exponent() const { return node_->a; }
int Expr::order() const { return node_->a; }
int Expr::m() const { return node_->m; }
int Expr::n() const { return node_->n; }
std::size_t Expr::arity() const { return arity_of(node_->kind); }

Expr Expr::child(std::size_t i) const {
  if (i >= arity()) throw std::out_of_range("Expr::child index out of range");
  return Expr(node_->children[i]);
}

std::size_t Expr::node_count() const {
  std::size_t total = 1;
  for (std::size_t i = 0; i < arity(); ++i) total += child(i).node_count();
  return total;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Const:
      return x.value == y.value;
    case ExprKind::IntPow:
      if (x.a != y.a) return false;
      break;
    case ExprKind::LatticeExp:
      return x.m == y.m && x.n == y.n;
    case ExprKind::GroupAvg:
      return x.a == y.a && x.m == y.m && x.n == y.n;
    default:
      break;
  }
  for (std::size_t i = 0; i < arity_of(x.kind); ++i) {
    if (!(Expr(x.children[i]) == Expr(y.children[i]))) return false;
  }
  return true;
}

Expr operator+(Expr a, Expr b) { return Expr::add(std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::sub(std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::mul(std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::div(std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_const(Complex c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) {
    return std::signbit(re) && re != 0.0 ? "(-" + format_real(-re) + ")" : format_real(re);
  }
  const std::string imag_abs = format_real(std::fabs(im)) + "*i";
  if (re == 0.0) return im < 0 ? "(-" + imag_abs + ")" : "(" + imag_abs + ")";
  const std::string real_part = re < 0 ? "-" + format_real(-re) : format_real(re);
  return "(" + real_part + (im < 0 ? " - " : " + ") + imag_abs + ")";
}

void print(const Expr& e, std::string& out) {
  auto fn = [&](const char* name) {
    out += name;
    out += '(';
    print(e.child(0), out);
    out += ')';
  };
  auto bin = [&](const char* op) {
    out += '(';
    print(e.child(0), out);
    out += op;
    print(e.child(1), out);
    out += ')';
  };
  switch (e.kind()) {
    case ExprKind::Const: out += format_const(e.value()); break;
    case ExprKind::Var: out += 'z'; break;
    case ExprKind::Conj: fn("conj"); break;
    case ExprKind::Neg:
      out += "(-";
      print(e.child(0), out);
      out += ')';
      break;
    case ExprKind::Add: bin(" + "); break;
    case ExprKind::Sub: bin(" - "); break;
    case ExprKind::Mul: bin(" * "); break;
    case ExprKind::Div: bin(" / "); break;
    case ExprKind::IntPow: {
      const Expr base = e.child(0);
      if (base.kind() == ExprKind::Var) {
        out += 'z';
      } else {
        out += '(';
        print(base, out);
        out += ')';
      }
      out += '^';
      out += std::to_string(e.exponent());
      break;
    }
    case ExprKind::Exp: fn("exp"); break;
    case ExprKind::Log: fn("log"); break;
    case ExprKind::Sin: fn("sin"); break;
    case ExprKind::Cos: fn("cos"); break;
    case ExprKind::LatticeExp:
      out += "E(" + std::to_string(e.m()) + "," + std::to_string(e.n()) + ")";
      break;
    case ExprKind::GroupAvg:
      out += "W" + std::to_string(e.order()) + "(" + std::to_string(e.m()) + "," + std::to_string(e.n()) + ")";
      break;
  }
}

}  // namespace

std::string to_string(const Expr& expr) {
  std::string out;
  print(expr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Numeric kernels shared by both evaluators

Complex int_pow(Complex z, int k) {
  if (k == 0) return {1.0, 0.0};
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  Complex result{1.0, 0.0};
  Complex base = z;
  bool first = true;
  while (e != 0) {
    if (e & 1u) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1u;
    if (e != 0) base *= base;
  }
  if (k < 0) {
    if (result == Complex{0.0, 0.0}) return nonfinite_marker();
    return Complex{1.0, 0.0} / result;
  }
  return result;
}

namespace {

Complex safe_div(Complex a, Complex b) {
  if (b == Complex{0.0, 0.0}) return nonfinite_marker();
  return a / b;
}

Complex unit_phase(double t) {
  // e^{2 pi i t}, with the integer part of t removed first for accuracy.
  const double frac = t - std::nearbyint(t);
  const double angle = kTwoPi * frac;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

LatticeCoords lattice_coords(Complex z, Lattice lattice) {
  if (lattice == Lattice::Square) return {z.real(), z.imag()};
  const double v = z.imag() / kOmega.imag();
  const double u = z.real() - v * kOmega.real();
  return {u, v};
}

Complex lattice_exp(int m, int n, Complex z, Lattice lattice) {
  if (!is_finite(z)) return nonfinite_marker();
  const auto [u, v] = lattice_coords(z, lattice);
  return unit_phase(static_cast<double>(m) * u + static_cast<double>(n) * v);
}

Complex group_average(int order, int m, int n, Complex z, Lattice lattice) {
  Complex sum{0.0, 0.0};
  switch (order) {
    case 2:
      sum = lattice_exp(m, n, z, lattice) + lattice_exp(m, n, -z, lattice);
      return sum / 2.0;
    case 3: {
      const Complex omega2 = std::conj(kOmega);
      sum = lattice_exp(m, n, z, lattice) + lattice_exp(m, n, kOmega * z, lattice) +
            lattice_exp(m, n, omega2 * z, lattice);
      return sum / 3.0;
    }
    case 4: {
      const Complex iz{-z.imag(), z.real()};
      sum = lattice_exp(m, n, z, lattice) + lattice_exp(m, n, iz, lattice) + lattice_exp(m, n, -z, lattice) +
            lattice_exp(m, n, -iz, lattice);
      return sum / 4.0;
    }
    default:
      throw std::invalid_argument("group average order must be 2, 3 or 4");
  }
}

namespace {

Complex apply_unary(ExprKind kind, Complex x) {
  switch (kind) {
    case ExprKind::Conj: return std::conj(x);
    case ExprKind::Neg: return -x;
    case ExprKind::Exp: return std::exp(x);
    case ExprKind::Log:
      if (x == Complex{0.0, 0.0}) return nonfinite_marker();
      return std::log(x);
    case ExprKind::Sin: return std::sin(x);
    case ExprKind::Cos: return std::cos(x);
    default: throw std::logic_error("not a unary node");
  }
}

Complex apply_binary(ExprKind kind, Complex a, Complex b) {
  switch (kind) {
    case ExprKind::Add: return a + b;
    case ExprKind::Sub: return a - b;
    case ExprKind::Mul: return a * b;
    case ExprKind::Div: return safe_div(a, b);
    default: throw std::logic_error("not a binary node");
  }
}

}  // namespace

Complex evaluate(const Expr& e, Complex z, const EvalEnv& env) {
  switch (e.kind()) {
    case ExprKind::Const: return e.value();
    case ExprKind::Var: return z;
    case ExprKind::IntPow: return int_pow(evaluate(e.child(0), z, env), e.exponent());
    case ExprKind::LatticeExp: return lattice_exp(e.m(), e.n(), z, env.lattice);
    case ExprKind::GroupAvg: return group_average(e.order(), e.m(), e.n(), z, env.lattice);
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
      return apply_binary(e.kind(), evaluate(e.child(0), z, env), evaluate(e.child(1), z, env));
    default:
      return apply_unary(e.kind(), evaluate(e.child(0), z, env));
  }
}

// ---------------------------------------------------------------------------
// Compiled form

namespace {
constexpr int kCompiledStack = 64;
}

CompiledExpr::CompiledExpr(const Expr& expr, EvalEnv env) : env_(env), source_(expr) {
  program_.reserve(expr.node_count());
  emit(expr, 1);
}

void CompiledExpr::emit(const Expr& e, int depth) {
  if (depth > max_stack_) max_stack_ = depth;
  const std::size_t ar = e.arity();
  for (std::size_t i = 0; i < ar; ++i) emit(e.child(i), depth + static_cast<int>(i));
  Instr ins{e.kind(), {}, 0, 0, 0};
  switch (e.kind()) {
    case ExprKind::Const: ins.value = e.value(); break;
    case ExprKind::IntPow: ins.a = e.exponent(); break;
    case ExprKind::LatticeExp: ins.b = e.m(); ins.c = e.n(); break;
    case ExprKind::GroupAvg: ins.a = e.order(); ins.b = e.m(); ins.c = e.n(); break;
    default: break;
  }
  program_.push_back(ins);
}

Complex CompiledExpr::operator()(Complex z) const {
  if (max_stack_ > kCompiledStack) return evaluate(source_, z, env_);
  std::array<Complex, kCompiledStack> stack;
  int top = 0;
  for (const Instr& ins : program_) {
    switch (ins.kind) {
      case ExprKind::Const: stack[top++] = ins.value; break;
      case ExprKind::Var: stack[top++] = z; break;
      case ExprKind::LatticeExp: stack[top++] = lattice_exp(ins.b, ins.c, z, env_.lattice); break;
      case ExprKind::GroupAvg: stack[top++] = group_average(ins.a, ins.b, ins.c, z, env_.lattice); break;
      case ExprKind::IntPow: stack[top - 1] = int_pow(stack[top - 1], ins.a); break;
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div:
        --top;
        stack[top - 1] = apply_binary(ins.kind, stack[top - 1], stack[top]);
        break;
      default: stack[top - 1] = apply_unary(ins.kind, stack[top - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace symart
