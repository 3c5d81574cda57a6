#pragma once

// Real hypersurfaces {rho = 0} of C^n: quadratic defining functions,
// complex tangent frames and pointwise convexity / pseudoconvexity tests.

#include "levi/common.hpp"
#include "levi/forms.hpp"
#include "levi/wirtinger.hpp"
#include "levi/zexpr.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace levi {

/// rho(z) = c0 + 2 Re(sum_j lin_j z_j) + Re(z^T hzz z) + sum_{i,j} hzzbar(i,j) z_i conj(z_j).
struct Quadric {
  double c0 = 0.0;
  CVec lin;
  CMat hzz;    ///< symmetric
  CMat hzzbar; ///< Hermitian

  Index dim() const { return lin.size(); }
  void validate() const;
  double value(const CVec& z) const;
  ScalarJet2 jet(const CVec& z) const;
  zexpr::Expr to_expr() const;
  std::string to_dsl() const;
};

/// sum_j (z_j^2 + conj(z_j)^2 + eps |z_j|^2) + L(z) + conj(L(z)), L(z) = sum_j l_j z_j.
Quadric quadric_34(Index n, double eps, const CVec& l);

/// Quadric with the given second-order blocks, vanishing at p with real
/// gradient `gradient` there (gradient_j = d/dx_j + i d/dy_j).
Quadric centered_quadric(const CVec& p, const CVec& gradient, const CMat& hzz, const CMat& hzzbar);

/// z -> q(z - shift).
Quadric translate(const Quadric& q, const CVec& shift);

/// Strictly convex quadric through `through` with real gradient `gradient`,
/// real Hessian G^T G + 0.1 I for a Gaussian G.
Quadric random_convex_quadric(Rng& rng, const CVec& through, const CVec& gradient);

/// q + t <grad q(base), z - base>: same quadratic part, gradient at base scaled by 1 + t.
Quadric deform_family(const Quadric& q, const CVec& base, double t);

// ---------------------------------------------------------------------------

class DefiningFunction {
public:
  static DefiningFunction from_spec(const zexpr::ScalarSpec& spec);
  static DefiningFunction from_quadric(Quadric q);
  static DefiningFunction from_evaluator(Index n, ScalarEvaluator f, StepPolicy policy = {});

  Index dim() const { return n_; }
  bool analytic() const { return analytic_; }
  double value(const CVec& z) const;
  ScalarJet2 jet(const CVec& z) const;

private:
  Index n_ = 0;
  bool analytic_ = false;
  std::function<double(const CVec&)> value_;
  std::function<ScalarJet2(const CVec&)> jet_;
};

inline constexpr double kGradientFloor = 1e-8;

/// With require_regular, throws DegeneracyError when |dz| <= 1e-8.
ScalarJet2 jet_at(const DefiningFunction& d, const CVec& z, bool require_regular = false);

struct TangentFrame {
  CVec base_point;
  std::vector<CVec> basis; ///< orthonormal, sum_j dz_j zeta_j = 0
  CVec gradient_dz;
};

/// Throws DegeneracyError when |dz| <= 1e-8.
TangentFrame complex_tangent_basis(const ScalarJet2& jet, const CVec& base_point = CVec());

struct ConvexityVerdict {
  bool strictly_convex = false;
  double min_eig = 0.0;  ///< of the full real Hessian
  double spectral_norm = 0.0;
};

ConvexityVerdict convexity_verdict(const ScalarJet2& jet, double tol = 1e-10);
bool is_strictly_convex_at(const ScalarJet2& jet, double tol = 1e-10);

struct PseudoconvexityVerdict {
  bool strictly_pseudoconvex = false;
  bool trivially_pseudoconvex = false; ///< n = 1, empty complex tangent space
  double min_eig = 0.0;                ///< of the Levi form restricted to T^c
  double norm = 0.0;
};

PseudoconvexityVerdict pseudoconvexity_verdict(const ScalarJet2& jet, double tol = 1e-10);
bool is_strictly_pseudoconvex_at(const ScalarJet2& jet, double tol = 1e-10);

struct SurfaceSampleOptions {
  double spread = 0.25;  ///< radius of the random perturbation of the seed
  int max_iterations = 50;
  double tol = 1e-10;    ///< |rho| <= tol * max(1, |z|_inf^2)
};

/// Random perturbations of `seed` projected back to {rho = 0} by Newton steps
/// along the gradient. Throws DegeneracyError on non-convergence or a vanishing gradient.
std::vector<CVec> surface_sample(const DefiningFunction& d, const CVec& seed, std::size_t count,
                                 Rng& rng, const SurfaceSampleOptions& options = {});

} // namespace levi
