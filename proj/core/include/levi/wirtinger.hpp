#pragma once

// Second-order Wirtinger jets.
//
// Real coordinates of C^n are always ordered (x_1..x_n, y_1..y_n) with
// z_j = x_j + i y_j. The Wirtinger operators are
//   d/dz    = (d/dx - i d/dy) / 2,
//   d/dzbar = (d/dx + i d/dy) / 2.

#include "levi/common.hpp"

#include <functional>
#include <vector>

namespace levi {

/// Value, gradient and Hessian of a real function on R^2n.
struct RealJet2 {
  double value = 0.0;
  RVec gradient; ///< 2n entries, (d/dx_1..d/dx_n, d/dy_1..d/dy_n)
  RMat hessian;  ///< 2n x 2n, symmetric

  Index real_dim() const { return gradient.size(); }
};

/// Second-order jet of a real-valued function in complex coordinates.
///
/// Only the holomorphic blocks are stored. The dzbar block is conj(dz) and
/// the zbar-zbar block is conj(hzz) because the function is real.
struct ScalarJet2 {
  double value = 0.0;
  CVec dz;     ///< d rho / dz_j
  CMat hzz;    ///< d^2 rho / dz_i dz_j, symmetric
  CMat hzzbar; ///< d^2 rho / dz_i dzbar_j, Hermitian

  Index dim() const { return dz.size(); }
  CVec dzbar() const { return dz.conjugate(); }
};

/// Second-order Wirtinger jet of a map Phi: C^n -> C^n.
struct MapJet2 {
  CVec value;               ///< Phi(z)
  CMat jhol;                ///< (k, a) -> d Phi_k / dz_a
  CMat janti;               ///< (k, a) -> d Phi_k / dzbar_a
  std::vector<CMat> mixed;  ///< mixed[k](a, b) = d^2 Phi_k / dz_a dzbar_b

  Index dim() const { return value.size(); }
};

/// MapJet2 plus the pure second-order blocks, needed to compose jets.
struct FullMapJet2 {
  MapJet2 jet;
  std::vector<CMat> holhol;   ///< [k](a, b) = d^2 Phi_k / dz_a dz_b
  std::vector<CMat> antianti; ///< [k](a, b) = d^2 Phi_k / dzbar_a dzbar_b
};

// ---------------------------------------------------------------------------
// Scalar jets
// ---------------------------------------------------------------------------

ScalarJet2 real_to_complex_scalar_jet(const RealJet2& jet);
RealJet2 complex_to_real_scalar_jet(const ScalarJet2& jet);

/// The 2n x 2n real Hessian rebuilt from the complex blocks.
RMat real_hessian(const ScalarJet2& jet);

/// Real Hessian quadratic form in complex coordinates:
///   2 Re(zeta^T hzz zeta) + 2 sum_{i,j} hzzbar(i,j) zeta_i conj(zeta_j).
double eval_real_hessian(const ScalarJet2& jet, const CVec& zeta);

/// Same quadratic form from real second derivatives with (xi, eta) = (Re zeta, Im zeta).
double eval_real_hessian(const RealJet2& jet, const CVec& zeta);

/// Real gradient as a complex vector, g_j = d rho/dx_j + i d rho/dy_j = 2 conj(dz_j).
CVec real_gradient(const ScalarJet2& jet);

/// dz block matching a prescribed real gradient (inverse of real_gradient).
CVec dz_from_real_gradient(const CVec& gradient);

// ---------------------------------------------------------------------------
// Map jets applied to tangent vectors
// ---------------------------------------------------------------------------

/// dPhi(zeta) = jhol zeta + janti conj(zeta).
CVec apply_differential(const MapJet2& m, const CVec& zeta);

struct NuMu {
  CVec nu; ///< jhol zeta, the holomorphic part of dPhi(zeta)
  CVec mu; ///< janti conj(zeta)
};

NuMu nu_mu(const MapJet2& m, const CVec& zeta);

/// Sesquilinear extension of the mixed Hessian:
///   component k = sum_{a,b} mixed[k](a,b) zeta_a conj(eta_b).
CVec mixed_apply(const MapJet2& m, const CVec& zeta, const CVec& eta);

/// component k = sum_a mixed[k](a, a). Four times this is the real Laplacian.
CVec trace_mixed(const MapJet2& m);

/// Real 2n x 2n Jacobian of Phi in the (x, y) ordering.
RMat real_jacobian(const MapJet2& m);

/// Real 2n x 2n matrix of zeta -> c10 zeta + c01 conj(zeta).
RMat real_matrix_of(const CMat& c10, const CMat& c01);

struct ComplexParts {
  CMat c10; ///< complex-linear part
  CMat c01; ///< conjugate-linear part
};

/// Splits a real 2n x 2n matrix into its complex-linear and antilinear parts.
ComplexParts complex_parts(const RMat& real_matrix);

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

using MapEvaluator = std::function<CVec(const CVec&)>;
using ScalarEvaluator = std::function<double(const CVec&)>;

/// Central-difference step h = base_step * max(1, |z|_inf).
/// The default base step eps^(1/4) balances O(h^2) truncation against
/// O(eps/h^2) rounding in the second differences.
struct StepPolicy {
  double base_step = default_base_step();

  static double default_base_step();
  void validate() const;
  double step_at(const CVec& z) const;
};

/// Central-difference Wirtinger jet of a black-box map, O(h^2) accurate.
MapJet2 fd_map_jet(const MapEvaluator& f, const CVec& z, const StepPolicy& policy = {});

RealJet2 fd_real_jet(const ScalarEvaluator& f, const CVec& z, const StepPolicy& policy = {});

inline ScalarJet2 fd_scalar_jet(const ScalarEvaluator& f, const CVec& z,
                                const StepPolicy& policy = {}) {
  return real_to_complex_scalar_jet(fd_real_jet(f, z, policy));
}

// ---------------------------------------------------------------------------
// Jet composition
// ---------------------------------------------------------------------------

/// Chain rule for second-order jets: `outer` must be taken at inner.jet.value.
FullMapJet2 compose(const FullMapJet2& outer, const FullMapJet2& inner);

/// Jet of the real-linear map x -> lambda x (real 2n x 2n) at `point`.
FullMapJet2 rlinear_jet(const RMat& lambda, const CVec& point);

} // namespace levi
