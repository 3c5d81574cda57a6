#include "levi/hypersurface.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace levi {

namespace {

// Everything except c0, so that c0 = -quadratic_part(p) makes rho(p) exactly 0.
double non_constant_part(const Quadric& q, const CVec& z) {
  const Complex linear = (q.lin.transpose() * z)(0, 0);
  const Complex pure = (z.transpose() * q.hzz * z)(0, 0);
  const Complex mixed = (z.transpose() * q.hzzbar * z.conjugate())(0, 0);
  return 2.0 * linear.real() + pure.real() + mixed.real();
}

void require_quadric_dim(const Quadric& q, const CVec& z, const char* what) {
  q.validate();
  require_dim(z, q.dim(), what);
}

} // namespace

void Quadric::validate() const {
  const Index n = dim();
  if (n < 1) throw DimensionError("Quadric: dimension must be at least 1");
  if (hzz.rows() != n || hzz.cols() != n || hzzbar.rows() != n || hzzbar.cols() != n) {
    throw DimensionError("Quadric: block shapes inconsistent with lin");
  }
  const double scale = std::max({1.0, max_abs(hzz), max_abs(hzzbar)});
  if ((hzz - hzz.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw PreconditionError("Quadric: hzz must be symmetric");
  }
  if ((hzzbar - hzzbar.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw PreconditionError("Quadric: hzzbar must be Hermitian");
  }
}

double Quadric::value(const CVec& z) const {
  require_quadric_dim(*this, z, "Quadric::value");
  return c0 + non_constant_part(*this, z);
}

ScalarJet2 Quadric::jet(const CVec& z) const {
  require_quadric_dim(*this, z, "Quadric::jet");
  ScalarJet2 j;
  j.value = c0 + non_constant_part(*this, z);
  j.dz = lin + hzz * z + hzzbar * z.conjugate();
  j.hzz = hzz;
  j.hzzbar = hzzbar;
  return j;
}

zexpr::Expr Quadric::to_expr() const {
  validate();
  using zexpr::Expr;
  std::vector<Expr> terms;
  auto add = [&](Complex c, std::vector<Expr> factors) {
    if (c == Complex(0.0, 0.0)) return;
    if (c != Complex(1.0, 0.0)) factors.insert(factors.begin(), Expr::constant(c));
    terms.push_back(Expr::product(std::move(factors)));
  };
  if (c0 != 0.0) terms.push_back(Expr::constant(c0));
  const int n = static_cast<int>(dim());
  for (int j = 0; j < n; ++j) {
    add(lin[j], {Expr::var(j)});
    add(std::conj(lin[j]), {Expr::conj_var(j)});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      add(0.5 * hzz(i, j), {Expr::var(i), Expr::var(j)});
      add(0.5 * std::conj(hzz(i, j)), {Expr::conj_var(i), Expr::conj_var(j)});
      add(hzzbar(i, j), {Expr::var(i), Expr::conj_var(j)});
    }
  }
  return Expr::sum(std::move(terms));
}

std::string Quadric::to_dsl() const { return zexpr::to_string(to_expr()); }

Quadric quadric_34(Index n, double eps, const CVec& l) {
  if (n < 1) throw DimensionError("quadric_34: dimension must be at least 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("quadric_34: eps must be > 0");
  require_dim(l, n, "quadric_34");
  Quadric q;
  q.c0 = 0.0;
  q.lin = l;
  q.hzz = 2.0 * CMat::Identity(n, n);
  q.hzzbar = eps * CMat::Identity(n, n);
  return q;
}

Quadric centered_quadric(const CVec& p, const CVec& gradient, const CMat& hzz, const CMat& hzzbar) {
  const Index n = p.size();
  require_dim(gradient, n, "centered_quadric");
  Quadric q;
  q.hzz = hzz;
  q.hzzbar = hzzbar;
  q.lin = dz_from_real_gradient(gradient) - hzz * p - hzzbar * p.conjugate();
  q.validate();
  q.c0 = -non_constant_part(q, p);
  return q;
}

Quadric translate(const Quadric& q, const CVec& shift) {
  require_quadric_dim(q, shift, "translate");
  Quadric out = q;
  out.lin = q.lin - q.hzz * shift - q.hzzbar * shift.conjugate();
  out.c0 = q.value(-shift);
  return out;
}

Quadric random_convex_quadric(Rng& rng, const CVec& through, const CVec& gradient) {
  const Index n = through.size();
  require_dim(gradient, n, "random_convex_quadric");
  if (gradient.norm() == 0.0) throw PreconditionError("random_convex_quadric: zero gradient");
  std::normal_distribution<double> normal(0.0, 1.0);
  RMat g(2 * n, 2 * n);
  for (Index i = 0; i < g.rows(); ++i) {
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = normal(rng);
  }
  RealJet2 real;
  real.gradient = RVec::Zero(2 * n);
  real.hessian = g.transpose() * g + 0.1 * RMat::Identity(2 * n, 2 * n);
  real.hessian = 0.5 * (real.hessian + real.hessian.transpose()).eval();
  const ScalarJet2 blocks = real_to_complex_scalar_jet(real);
  const CMat hzz = 0.5 * (blocks.hzz + blocks.hzz.transpose());
  const CMat hzzbar = 0.5 * (blocks.hzzbar + blocks.hzzbar.adjoint());
  return centered_quadric(through, gradient, hzz, hzzbar);
}

Quadric deform_family(const Quadric& q, const CVec& base, double t) {
  require_quadric_dim(q, base, "deform_family");
  if (t == -1.0) throw PreconditionError("deform_family: t = -1 is excluded");
  if (!std::isfinite(t)) throw PreconditionError("deform_family: t must be finite");
  if (t == 0.0) return q;
  const CVec dz = q.jet(base).dz;
  Quadric out = q;
  out.lin = q.lin + t * dz;
  out.c0 = q.c0 - t * 2.0 * (dz.transpose() * base)(0, 0).real();
  return out;
}

// ---------------------------------------------------------------------------

DefiningFunction DefiningFunction::from_spec(const zexpr::ScalarSpec& spec) {
  auto compiled = std::make_shared<const zexpr::CompiledScalar>(spec);
  DefiningFunction d;
  d.n_ = spec.n;
  d.analytic_ = true;
  d.value_ = [compiled](const CVec& z) { return compiled->value(z); };
  d.jet_ = [compiled](const CVec& z) { return compiled->jet(z); };
  return d;
}

DefiningFunction DefiningFunction::from_quadric(Quadric q) {
  q.validate();
  auto shared = std::make_shared<const Quadric>(std::move(q));
  DefiningFunction d;
  d.n_ = shared->dim();
  d.analytic_ = true;
  d.value_ = [shared](const CVec& z) { return shared->value(z); };
  d.jet_ = [shared](const CVec& z) { return shared->jet(z); };
  return d;
}

DefiningFunction DefiningFunction::from_evaluator(Index n, ScalarEvaluator f, StepPolicy policy) {
  if (n < 1) throw DimensionError("DefiningFunction: dimension must be at least 1");
  if (!f) throw PreconditionError("DefiningFunction: empty evaluator");
  policy.validate();
  DefiningFunction d;
  d.n_ = n;
  d.analytic_ = false;
  d.value_ = f;
  d.jet_ = [f, policy](const CVec& z) { return fd_scalar_jet(f, z, policy); };
  return d;
}

double DefiningFunction::value(const CVec& z) const {
  require_dim(z, n_, "DefiningFunction::value");
  return value_(z);
}

ScalarJet2 DefiningFunction::jet(const CVec& z) const {
  require_dim(z, n_, "DefiningFunction::jet");
  return jet_(z);
}

ScalarJet2 jet_at(const DefiningFunction& d, const CVec& z, bool require_regular) {
  ScalarJet2 j = d.jet(z);
  if (require_regular && j.dz.norm() <= kGradientFloor) {
    throw DegeneracyError("defining function has a vanishing gradient at the point");
  }
  return j;
}

TangentFrame complex_tangent_basis(const ScalarJet2& jet, const CVec& base_point) {
  const Index n = jet.dim();
  if (jet.dz.norm() <= kGradientFloor) {
    throw DegeneracyError("complex_tangent_basis: vanishing gradient");
  }
  TangentFrame frame;
  frame.base_point = base_point;
  frame.gradient_dz = jet.dz;
  // sum_j dz_j zeta_j = (zeta, conj(dz)), so T^c is the orthogonal complement of conj(dz).
  const CMat w = jet.dz.conjugate();
  Eigen::HouseholderQR<CMat> qr(w);
  const CMat q = qr.householderQ() * CMat::Identity(n, n);
  for (Index j = 1; j < n; ++j) frame.basis.push_back(q.col(j));
  return frame;
}

ConvexityVerdict convexity_verdict(const ScalarJet2& jet, double tol) {
  const RMat h = real_hessian(jet);
  Eigen::SelfAdjointEigenSolver<RMat> solver(h, Eigen::EigenvaluesOnly);
  ConvexityVerdict v;
  v.min_eig = solver.eigenvalues().minCoeff();
  v.spectral_norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  v.strictly_convex = v.min_eig > tol * std::max(1.0, v.spectral_norm);
  return v;
}

bool is_strictly_convex_at(const ScalarJet2& jet, double tol) {
  return convexity_verdict(jet, tol).strictly_convex;
}

PseudoconvexityVerdict pseudoconvexity_verdict(const ScalarJet2& jet, double tol) {
  const TangentFrame frame = complex_tangent_basis(jet);
  PseudoconvexityVerdict v;
  if (frame.basis.empty()) {
    v.strictly_pseudoconvex = true;
    v.trivially_pseudoconvex = true;
    return v;
  }
  const HermitianForm restricted = restrict_form(levi_form(jet), frame.basis);
  const CMat sym = 0.5 * (restricted.matrix + restricted.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym, Eigen::EigenvaluesOnly);
  v.min_eig = solver.eigenvalues().minCoeff();
  v.norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  v.strictly_pseudoconvex = v.min_eig > tol * std::max(1.0, v.norm);
  return v;
}

bool is_strictly_pseudoconvex_at(const ScalarJet2& jet, double tol) {
  return pseudoconvexity_verdict(jet, tol).strictly_pseudoconvex;
}

std::vector<CVec> surface_sample(const DefiningFunction& d, const CVec& seed, std::size_t count,
                                 Rng& rng, const SurfaceSampleOptions& options) {
  require_dim(seed, d.dim(), "surface_sample");
  std::vector<CVec> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    CVec z = random_in_ball(rng, seed, options.spread);
    bool converged = false;
    for (int it = 0; it <= options.max_iterations; ++it) {
      const double rho = d.value(z);
      const double scale = std::max(1.0, std::pow(z.cwiseAbs().maxCoeff(), 2));
      if (std::abs(rho) <= options.tol * scale) {
        converged = true;
        break;
      }
      if (it == options.max_iterations) break;
      const CVec g = real_gradient(d.jet(z));
      const double g2 = g.squaredNorm();
      if (g2 <= kGradientFloor * kGradientFloor) {
        throw DegeneracyError("surface_sample: vanishing gradient during projection");
      }
      z -= (rho / g2) * g;
    }
    if (!converged) {
      throw DegeneracyError("surface_sample: Newton projection did not converge in " +
                            std::to_string(options.max_iterations) + " iterations");
    }
    if (real_gradient(d.jet(z)).norm() <= kGradientFloor) {
      throw DegeneracyError("surface_sample: sample lies on the singular set");
    }
    out.push_back(std::move(z));
  }
  return out;
}

} // namespace levi
