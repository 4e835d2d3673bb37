#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symart/numeric.hpp"

namespace symart {

enum class Lattice { Square, Rhombic };

/// omega = e^{2 pi i / 3}, the second basis vector of the rhombic lattice.
inline const Complex kOmega{-0.5, 0.86602540378443864676};

struct EvalEnv {
  Lattice lattice = Lattice::Square;
  friend constexpr bool operator==(EvalEnv, EvalEnv) = default;
};

enum class ExprKind {
  Const,
  Var,
  Conj,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  IntPow,
  Exp,
  Log,
  Sin,
  Cos,
  LatticeExp,
  GroupAvg,
};

inline constexpr int kMaxExponent = 64;

/// Immutable expression tree for a function of one complex variable z.
/// Copies share structure; every node is const after construction, so one
/// Expr may be evaluated from any number of threads.
class Expr {
 public:
  static Expr constant(Complex c);
  static Expr var();
  static Expr conj(Expr arg);
  static Expr neg(Expr arg);
  static Expr add(Expr lhs, Expr rhs);
  static Expr sub(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr div(Expr lhs, Expr rhs);
  /// Throws std::invalid_argument when |k| > kMaxExponent.
  static Expr pow(Expr base, int k);
  static Expr exp(Expr arg);
  static Expr log(Expr arg);
  static Expr sin(Expr arg);
  static Expr cos(Expr arg);
  /// E_{m,n}(z) = e^{2 pi i (m u + n v)} with z = u + v*b in the active lattice basis (1, b).
  static Expr lattice_exp(int m, int n);
  /// W_{m,n}: average of E_{m,n} over the cyclic rotation group of the given order (2, 3 or 4).
  static Expr group_avg(int order, int m, int n);

  ExprKind kind() const;
  Complex value() const;   // Const
  int exponent() const;    // IntPow
  int order() const;       // GroupAvg
  int m() const;           // LatticeExp, GroupAvg
  int n() const;           // LatticeExp, GroupAvg
  std::size_t arity() const;
  Expr child(std::size_t i) const;

  bool is_constant() const { return kind() == ExprKind::Const; }
  std::size_t node_count() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

/// Grammar, loosest to tightest binding:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' int)*          right-associative, integer exponents only
///   primary := number | number 'i' | 'i' | 'z' | 'pi' | '(' sum ')'
///            | ('conj'|'exp'|'log'|'sin'|'cos') '(' sum ')'
///            | ('E'|'W2'|'W3'|'W4') '(' int ',' int ')'
/// Subtrees made only of constants are folded into a single Const node.
Expr parse_expression(std::string_view text);

/// Fully parenthesised text that parses back to a structurally equal tree.
std::string to_string(const Expr& expr);

/// Direct tree-walking evaluation. Poles and undefined values yield
/// nonfinite_marker() rather than throwing.
Complex evaluate(const Expr& expr, Complex z, const EvalEnv& env = {});

/// Coordinates (u, v) with z = u + v*b for the lattice basis (1, b).
struct LatticeCoords {
  double u = 0.0;
  double v = 0.0;
};
LatticeCoords lattice_coords(Complex z, Lattice lattice);

Complex lattice_exp(int m, int n, Complex z, Lattice lattice);
Complex group_average(int order, int m, int n, Complex z, Lattice lattice);
Complex int_pow(Complex z, int k);

/// The tree flattened into a postfix program; produces bit-identical results
/// to evaluate() at a fraction of the cost. Used by the renderer.
class CompiledExpr {
 public:
  CompiledExpr(const Expr& expr, EvalEnv env = {});

  Complex operator()(Complex z) const;
  const EvalEnv& env() const { return env_; }

 private:
  struct Instr {
    ExprKind kind;
    Complex value;
    int a = 0;
    int b = 0;
    int c = 0;
  };

  void emit(const Expr& e, int depth);

  std::vector<Instr> program_;
  EvalEnv env_;
  int max_stack_ = 0;
  Expr source_;
};

}  // namespace symart
