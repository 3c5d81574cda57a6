#include "levi/forms.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace levi {

namespace {

constexpr Complex kI{0.0, 1.0};

double hermitian_defect(const CMat& m) {
  return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_shape(const RLinearMap& c, const char* what) {
  const Index n = c.c10.rows();
  if (c.c10.cols() != n || c.c01.rows() != n || c.c01.cols() != n) {
    throw DimensionError(std::string(what) + ": RLinearMap blocks must be square and equal");
  }
}

} // namespace

HermitianForm levi_form(const ScalarJet2& jet) {
  if (jet.hzzbar.rows() != jet.dim() || jet.hzzbar.cols() != jet.dim()) {
    throw DimensionError("levi_form: hzzbar shape mismatch");
  }
  return HermitianForm{jet.hzzbar.transpose()};
}

double levi_eval(const HermitianForm& h, const CVec& zeta) {
  require_dim(zeta, h.dim(), "levi_eval");
  const Complex v = zeta.dot(h.matrix * zeta);
  return v.real();
}

double min_eig_hermitian(const HermitianForm& h) {
  if (h.dim() == 0) throw PreconditionError("min_eig_hermitian: empty form");
  if (h.matrix.cols() != h.dim()) throw DimensionError("min_eig_hermitian: matrix not square");
  const double scale = max_abs(h.matrix);
  if (hermitian_defect(h.matrix) > 1e-12 * std::max(scale, 1e-300)) {
    throw PreconditionError("min_eig_hermitian: matrix is not Hermitian");
  }
  const CMat sym = 0.5 * (h.matrix + h.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DegeneracyError("Hermitian eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

HermitianForm restrict_form(const HermitianForm& h, const std::vector<CVec>& basis) {
  const Index n = h.dim();
  const Index k = static_cast<Index>(basis.size());
  CMat b(n, k);
  for (Index j = 0; j < k; ++j) {
    require_dim(basis[static_cast<std::size_t>(j)], n, "restrict_form");
    b.col(j) = basis[static_cast<std::size_t>(j)];
  }
  if (k > 0) {
    if (k > n) throw DegeneracyError("restrict_form: more basis vectors than the dimension");
    Eigen::JacobiSVD<CMat> svd(b);
    const auto& s = svd.singularValues();
    if (s.minCoeff() <= 1e-10 * std::max(1.0, s.maxCoeff())) {
      throw DegeneracyError("restrict_form: basis is linearly dependent");
    }
  }
  return HermitianForm{b.adjoint() * h.matrix * b};
}

// ---------------------------------------------------------------------------

CVec RLinearMap::apply(const CVec& zeta) const {
  require_dim(zeta, c10.cols(), "RLinearMap::apply");
  return c10 * zeta + c01 * zeta.conjugate();
}

RMat RLinearMap::real_matrix() const {
  require_shape(*this, "RLinearMap::real_matrix");
  return real_matrix_of(c10, c01);
}

bool RLinearMap::invertible() const {
  if (dim() == 0) return false;
  Eigen::JacobiSVD<RMat> svd(real_matrix());
  const auto& s = svd.singularValues();
  return s.minCoeff() > 1e-10 * s.maxCoeff();
}

RLinearMap RLinearMap::inverse() const {
  if (!invertible()) throw DegeneracyError("RLinearMap::inverse: singular real-linear map");
  return split_rlinear(real_matrix().inverse());
}

RLinearMap RLinearMap::identity(Index n) {
  return RLinearMap{CMat::Identity(n, n), CMat::Zero(n, n)};
}

RLinearMap RLinearMap::conjugation(Index n) {
  return RLinearMap{CMat::Zero(n, n), CMat::Identity(n, n)};
}

RLinearMap RLinearMap::differential(const MapJet2& m) { return RLinearMap{m.jhol, m.janti}; }

RLinearMap split_rlinear(const RMat& real_matrix) {
  if (real_matrix.rows() != real_matrix.cols()) {
    throw DimensionError("split_rlinear: matrix must be square");
  }
  if (real_matrix.rows() % 2 != 0) throw DimensionError("split_rlinear: odd dimension");
  ComplexParts parts = complex_parts(real_matrix);
  return RLinearMap{std::move(parts.c10), std::move(parts.c01)};
}

// ---------------------------------------------------------------------------

CVec SesquilinearMapW::apply(const CVec& zeta, const CVec& eta) const {
  const Index n = in_dim();
  require_dim(zeta, n, "SesquilinearMapW::apply");
  require_dim(eta, n, "SesquilinearMapW::apply");
  CVec out(out_dim());
  const CVec eta_bar = eta.conjugate();
  for (Index k = 0; k < out_dim(); ++k) {
    out[k] = zeta.transpose() * tensor[static_cast<std::size_t>(k)] * eta_bar;
  }
  return out;
}

SesquilinearMapW SesquilinearMapW::zero(Index out_dim, Index in_dim) {
  return SesquilinearMapW{std::vector<CMat>(static_cast<std::size_t>(out_dim),
                                            CMat::Zero(in_dim, in_dim))};
}

SesquilinearMapW SesquilinearMapW::from_mixed(const MapJet2& m) { return SesquilinearMapW{m.mixed}; }

CVec trace_sesquilinear(const SesquilinearMapW& b) {
  CVec out(b.out_dim());
  for (Index k = 0; k < b.out_dim(); ++k) out[k] = b.tensor[static_cast<std::size_t>(k)].trace();
  return out;
}

SesquilinearMapW lemma33_build(const CVec& v, const RLinearMap& c) {
  require_shape(c, "lemma33_build");
  const Index n = c.dim();
  require_dim(v, n, "lemma33_build");
  SesquilinearMapW b = SesquilinearMapW::zero(n, n);
  for (Index k = 0; k < n; ++k) {
    CMat& t = b.tensor[static_cast<std::size_t>(k)];
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        t(i, j) = v[j] * c.c10(k, i) + std::conj(v[i]) * c.c01(k, j);
      }
    }
  }
  return b;
}

SpanFit real_span_fit(const CVec& target, const CVec& u1, const CVec& u2) {
  if (target.size() != u1.size() || target.size() != u2.size()) {
    throw DimensionError("real_span_fit: size mismatch");
  }
  RMat a(2 * target.size(), 2);
  a.col(0) = realify(u1);
  a.col(1) = realify(u2);
  Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s[1] <= 1e-12 * std::max(s[0], 1e-300)) {
    throw DegeneracyError("real_span_fit: spanning vectors are real-dependent");
  }
  const RVec coef = svd.solve(realify(target));
  SpanFit fit;
  fit.a = coef[0];
  fit.b = coef[1];
  fit.orthogonal = target - fit.a * u1 - fit.b * u2;
  fit.distance = fit.orthogonal.norm();
  return fit;
}

double lemma33_span_residual(const SesquilinearMapW& b, const RLinearMap& c, const CVec& zeta) {
  require_dim(zeta, c.dim(), "lemma33_span_residual");
  if (zeta.norm() == 0.0) throw PreconditionError("lemma33_span_residual: zeta must be non-zero");
  const CVec target = b.apply(zeta, zeta);
  const SpanFit fit = real_span_fit(target, c.apply(zeta), c.apply(kI * zeta));
  return fit.distance / std::max(target.norm(), 1e-300);
}

CVec recover_v(const SesquilinearMapW& b, const RLinearMap& c) {
  require_shape(c, "recover_v");
  if (b.out_dim() != c.dim()) throw DimensionError("recover_v: B and C dimensions differ");
  if (!c.invertible()) throw DegeneracyError("recover_v: C is singular");
  const RMat m = c.real_matrix();
  const RVec x = m.partialPivLu().solve(realify(trace_sesquilinear(b)));
  return complexify(x);
}

} // namespace levi
