#pragma once

// Polynomial expressions in z_1..z_n and conj(z_1)..conj(z_n) with exact
// Wirtinger differentiation.
//
// Surface grammar (whitespace is ignored):
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := number | number 'i' | 'i' | 'z' uint
//           | 'conj(' expr ')' | 're(' expr ')' | 'im(' expr ')'
//           | 'abs2(' expr ')' | '(' expr ')'
//
// The builtins are desugared while parsing, so a parsed tree only contains
// the core node kinds: re(e) = 0.5*(e + conj(e)), im(e) = -0.5i*(e - conj(e)),
// abs2(e) = e*conj(e), and conj(.) is pushed down to the leaves.

#include "levi/common.hpp"
#include "levi/wirtinger.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace levi::zexpr {

inline constexpr int kMaxExponent = 16;

enum class NodeKind { constant, var, conj_var, neg, sum, product, power };

enum class Wirtinger { hol, anti };

/// Immutable expression tree handle. Copies share structure.
class Expr {
public:
  Expr(); ///< the constant 0

  static Expr constant(Complex c);
  /// Variable z_{index+1}; indices are zero-based internally.
  static Expr var(int index);
  static Expr conj_var(int index);
  static Expr neg(Expr e);
  /// A sum with one term collapses to that term; an empty sum is 0.
  static Expr sum(std::vector<Expr> terms);
  /// A product with one factor collapses to that factor; an empty product is 1.
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, int exponent);

  NodeKind kind() const;
  Complex value() const;  ///< constant nodes
  int index() const;      ///< var / conj_var nodes
  int exponent() const;   ///< power nodes
  std::span<const Expr> children() const;

  bool is_constant(Complex c) const;
  bool is_zero() const { return is_constant(Complex(0.0, 0.0)); }

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Byte offset and expected-token set of a syntax error.
class ParseError : public Error {
public:
  ParseError(std::size_t offset, std::string message, std::vector<std::string> expected);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Parses and desugars `text`; variables must lie in z1..zn.
Expr parse(std::string_view text, int n);

/// Prints in the surface grammar. For parsed trees, parse(to_string(e)) == e.
std::string to_string(const Expr& e);

/// Complex conjugate, pushed to the leaves.
Expr conjugate(const Expr& e);

/// d/dz_j (hol) or d/dzbar_j (anti); the other family is held constant.
Expr derivative(const Expr& e, int index, Wirtinger direction);

/// Replaces z_j by components[j] and conj(z_j) by conjugate(components[j]).
Expr substitute(const Expr& e, std::span<const Expr> components);

/// Children of sums and products sorted by printed form.
Expr canonicalize(const Expr& e);

/// Largest zero-based variable index, or -1 for a constant expression.
int max_variable_index(const Expr& e);

Complex eval(const Expr& e, const CVec& z);

/// conj(e) == e after canonical ordering. Can report false for real
/// expressions whose conjugate differs only by rearrangement beyond ordering.
bool is_structurally_real(const Expr& e);

/// Structural check, then 64 fixed-seed points in the unit ball with
/// |Im e| <= 1e-12 * max(1, |e|).
bool is_real_valued(const Expr& e, int n);

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

struct PolyMapSpec {
  int n = 0;
  std::vector<Expr> components;

  static PolyMapSpec parse(int n, const std::vector<std::string>& components);
  std::vector<std::string> component_strings() const;
  void validate() const;
};

struct ScalarSpec {
  int n = 0;
  Expr expr;
  bool real_valued = false;

  /// Parses and runs the realness check, recording the result.
  static ScalarSpec parse(int n, std::string_view text);
  /// Parses and throws RealnessError unless the expression is real-valued.
  static ScalarSpec parse_real(int n, std::string_view text);
};

/// A map spec with its Wirtinger derivative trees precomputed; evaluating
/// jets at many points reuses the trees.
class CompiledMap {
public:
  explicit CompiledMap(const PolyMapSpec& spec);

  int dim() const { return n_; }
  CVec eval(const CVec& z) const;
  MapJet2 jet(const CVec& z) const;
  FullMapJet2 full_jet(const CVec& z) const;

private:
  int n_;
  std::vector<Expr> components_;
  std::vector<std::vector<Expr>> d_hol_;   // [k][a]
  std::vector<std::vector<Expr>> d_anti_;  // [k][a]
  std::vector<std::vector<std::vector<Expr>>> mixed_;     // [k][a][b]
  std::vector<std::vector<std::vector<Expr>>> holhol_;    // [k][a][b]
  std::vector<std::vector<std::vector<Expr>>> antianti_;  // [k][a][b]
};

class CompiledScalar {
public:
  /// Throws RealnessError for specs that are not real-valued.
  explicit CompiledScalar(const ScalarSpec& spec);

  int dim() const { return n_; }
  double value(const CVec& z) const;
  ScalarJet2 jet(const CVec& z) const;

private:
  int n_;
  Expr expr_;
  std::vector<Expr> dz_;
  std::vector<std::vector<Expr>> hzz_;
  std::vector<std::vector<Expr>> hzzbar_;
};

MapJet2 analytic_map_jet(const PolyMapSpec& spec, const CVec& z);
ScalarJet2 analytic_scalar_jet(const ScalarSpec& spec, const CVec& z);

} // namespace levi::zexpr
