#pragma once

// Hermitian forms, real-linear maps of C^n and vector-valued sesquilinear
// maps, with the span/trace machinery for B(zeta, conj(eta)).
//
// Hermitian product convention: (a, b) = sum_j a_j conj(b_j).

#include "levi/common.hpp"
#include "levi/wirtinger.hpp"

#include <vector>

namespace levi {

struct HermitianForm {
  CMat matrix; ///< L(zeta) = zeta^* matrix zeta

  Index dim() const { return matrix.rows(); }
};

/// Levi form of a scalar jet: L(zeta) = sum_{i,j} hzzbar(i,j) zeta_i conj(zeta_j).
HermitianForm levi_form(const ScalarJet2& jet);

/// zeta^* M zeta; the imaginary rounding residue is discarded.
double levi_eval(const HermitianForm& h, const CVec& zeta);

/// Smallest eigenvalue. Throws PreconditionError when the matrix is not
/// Hermitian to 1e-12 relative, or is empty.
double min_eig_hermitian(const HermitianForm& h);

/// The k x k form b_i^* M b_j. Throws DegeneracyError for a dependent basis.
HermitianForm restrict_form(const HermitianForm& h, const std::vector<CVec>& basis);

/// zeta -> c10 zeta + c01 conj(zeta).
struct RLinearMap {
  CMat c10;
  CMat c01;

  Index dim() const { return c10.rows(); }
  CVec apply(const CVec& zeta) const;
  RMat real_matrix() const;
  /// min singular value > 1e-10 * max singular value.
  bool invertible() const;
  RLinearMap inverse() const;

  static RLinearMap identity(Index n);
  static RLinearMap conjugation(Index n);
  static RLinearMap differential(const MapJet2& m);
};

RLinearMap split_rlinear(const RMat& real_matrix);

/// B(zeta, conj(eta)), component k = sum_{i,j} tensor[k](i,j) zeta_i conj(eta_j).
struct SesquilinearMapW {
  std::vector<CMat> tensor;

  Index out_dim() const { return static_cast<Index>(tensor.size()); }
  Index in_dim() const { return tensor.empty() ? 0 : tensor.front().rows(); }
  CVec apply(const CVec& zeta, const CVec& eta) const;

  static SesquilinearMapW zero(Index out_dim, Index in_dim);
  static SesquilinearMapW from_mixed(const MapJet2& m);
};

/// component k = sum_a B[k](a, a).
CVec trace_sesquilinear(const SesquilinearMapW& b);

/// B(zeta, conj(eta)) = (v, eta) c10 zeta + (zeta, v) c01 conj(eta).
SesquilinearMapW lemma33_build(const CVec& v, const RLinearMap& c);

/// Least-squares fit of `target` by a u1 + b u2 with real a, b.
struct SpanFit {
  double a = 0.0;
  double b = 0.0;
  CVec orthogonal;       ///< target - a u1 - b u2
  double distance = 0.0; ///< |orthogonal|
};

/// Throws DegeneracyError when u1, u2 are real-dependent.
SpanFit real_span_fit(const CVec& target, const CVec& u1, const CVec& u2);

/// Distance of B(zeta, conj(zeta)) from span_R{C(zeta), C(i zeta)}, divided
/// by max(|B(zeta, conj(zeta))|, 1e-300).
double lemma33_span_residual(const SesquilinearMapW& b, const RLinearMap& c, const CVec& zeta);

/// v = C^{-1}(Tr B). Throws DegeneracyError for singular C.
CVec recover_v(const SesquilinearMapW& b, const RLinearMap& c);

} // namespace levi
