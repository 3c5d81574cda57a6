#include "levi/wirtinger.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace levi {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_square_jet(const MapJet2& m) {
  const Index n = m.value.size();
  if (m.jhol.rows() != n || m.jhol.cols() != n || m.janti.rows() != n || m.janti.cols() != n ||
      static_cast<Index>(m.mixed.size()) != n) {
    throw DimensionError("MapJet2: inconsistent block shapes");
  }
}

} // namespace

ScalarJet2 real_to_complex_scalar_jet(const RealJet2& jet) {
  const Index two_n = jet.gradient.size();
  if (two_n % 2 != 0) throw DimensionError("real_to_complex_scalar_jet: odd real dimension");
  if (jet.hessian.rows() != two_n || jet.hessian.cols() != two_n) {
    throw DimensionError("real_to_complex_scalar_jet: Hessian shape mismatch");
  }
  const Index n = two_n / 2;
  const RMat& h = jet.hessian;
  ScalarJet2 out;
  out.value = jet.value;
  out.dz.resize(n);
  out.hzz.resize(n, n);
  out.hzzbar.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.dz[j] = 0.5 * Complex(jet.gradient[j], -jet.gradient[n + j]);
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double xx = h(i, j);
      const double yy = h(n + i, n + j);
      const double xy = h(i, n + j);
      const double yx = h(n + i, j);
      out.hzz(i, j) = 0.25 * Complex(xx - yy, -(xy + yx));
      out.hzzbar(i, j) = 0.25 * Complex(xx + yy, xy - yx);
    }
  }
  return out;
}

RMat real_hessian(const ScalarJet2& jet) {
  const Index n = jet.dim();
  if (jet.hzz.rows() != n || jet.hzz.cols() != n || jet.hzzbar.rows() != n ||
      jet.hzzbar.cols() != n) {
    throw DimensionError("ScalarJet2: block shapes inconsistent with dz");
  }
  RMat h(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Complex a = jet.hzz(i, j);
      const Complex b = jet.hzzbar(i, j);
      h(i, j) = 2.0 * (a.real() + b.real());
      h(n + i, n + j) = 2.0 * (b.real() - a.real());
      h(i, n + j) = 2.0 * (b.imag() - a.imag());
      h(n + j, i) = h(i, n + j);
    }
  }
  return h;
}

RealJet2 complex_to_real_scalar_jet(const ScalarJet2& jet) {
  const Index n = jet.dim();
  RealJet2 out;
  out.value = jet.value;
  out.gradient.resize(2 * n);
  out.gradient.head(n) = 2.0 * jet.dz.real();
  out.gradient.tail(n) = -2.0 * jet.dz.imag();
  out.hessian = real_hessian(jet);
  return out;
}

double eval_real_hessian(const ScalarJet2& jet, const CVec& zeta) {
  require_dim(zeta, jet.dim(), "eval_real_hessian");
  const Complex holo = (zeta.transpose() * jet.hzz * zeta)(0, 0);
  const Complex herm = (zeta.transpose() * jet.hzzbar * zeta.conjugate())(0, 0);
  return 2.0 * holo.real() + 2.0 * herm.real();
}

double eval_real_hessian(const RealJet2& jet, const CVec& zeta) {
  if (2 * zeta.size() != jet.real_dim()) throw DimensionError("eval_real_hessian: dimension mismatch");
  const RVec x = realify(zeta);
  return x.dot(jet.hessian * x);
}

CVec real_gradient(const ScalarJet2& jet) { return 2.0 * jet.dz.conjugate(); }

CVec dz_from_real_gradient(const CVec& gradient) { return 0.5 * gradient.conjugate(); }

CVec apply_differential(const MapJet2& m, const CVec& zeta) {
  require_square_jet(m);
  require_dim(zeta, m.dim(), "apply_differential");
  return m.jhol * zeta + m.janti * zeta.conjugate();
}

NuMu nu_mu(const MapJet2& m, const CVec& zeta) {
  require_square_jet(m);
  require_dim(zeta, m.dim(), "nu_mu");
  return NuMu{m.jhol * zeta, m.janti * zeta.conjugate()};
}

CVec mixed_apply(const MapJet2& m, const CVec& zeta, const CVec& eta) {
  require_square_jet(m);
  require_dim(zeta, m.dim(), "mixed_apply");
  require_dim(eta, m.dim(), "mixed_apply");
  const CVec eta_bar = eta.conjugate();
  CVec out(m.dim());
  for (Index k = 0; k < m.dim(); ++k) {
    out[k] = (zeta.transpose() * m.mixed[k] * eta_bar)(0, 0);
  }
  return out;
}

CVec trace_mixed(const MapJet2& m) {
  require_square_jet(m);
  CVec out(m.dim());
  for (Index k = 0; k < m.dim(); ++k) out[k] = m.mixed[k].trace();
  return out;
}

RMat real_matrix_of(const CMat& c10, const CMat& c01) {
  const Index rows = c10.rows();
  const Index cols = c10.cols();
  if (c01.rows() != rows || c01.cols() != cols) throw DimensionError("real_matrix_of: shape mismatch");
  const CMat sum = c10 + c01;
  const CMat diff = c10 - c01;
  RMat r(2 * rows, 2 * cols);
  r.topLeftCorner(rows, cols) = sum.real();
  r.topRightCorner(rows, cols) = -diff.imag();
  r.bottomLeftCorner(rows, cols) = sum.imag();
  r.bottomRightCorner(rows, cols) = diff.real();
  return r;
}

ComplexParts complex_parts(const RMat& real_matrix) {
  if (real_matrix.rows() % 2 != 0 || real_matrix.cols() % 2 != 0) {
    throw DimensionError("complex_parts: odd real dimension");
  }
  const Index rows = real_matrix.rows() / 2;
  const Index cols = real_matrix.cols() / 2;
  const RMat p = real_matrix.topLeftCorner(rows, cols);
  const RMat q = real_matrix.topRightCorner(rows, cols);
  const RMat s = real_matrix.bottomLeftCorner(rows, cols);
  const RMat t = real_matrix.bottomRightCorner(rows, cols);
  // c10 + c01 = P + iS, c10 - c01 = T - iQ
  CMat sum(rows, cols);
  CMat diff(rows, cols);
  sum.real() = p;
  sum.imag() = s;
  diff.real() = t;
  diff.imag() = -q;
  return ComplexParts{0.5 * (sum + diff), 0.5 * (sum - diff)};
}

RMat real_jacobian(const MapJet2& m) {
  require_square_jet(m);
  return real_matrix_of(m.jhol, m.janti);
}

// ---------------------------------------------------------------------------

double StepPolicy::default_base_step() {
  return std::pow(std::numeric_limits<double>::epsilon(), 0.25);
}

void StepPolicy::validate() const {
  if (!(base_step > 0.0) || !std::isfinite(base_step)) {
    throw ConfigError("StepPolicy: step must be positive and finite");
  }
}

double StepPolicy::step_at(const CVec& z) const {
  validate();
  const double inf_norm = z.size() == 0 ? 0.0 : z.cwiseAbs().maxCoeff();
  return base_step * std::max(1.0, inf_norm);
}

namespace {

CVec real_offset(Index n, Index p, double h) {
  CVec d = CVec::Zero(n);
  if (p < n) {
    d[p] = Complex(h, 0.0);
  } else {
    d[p - n] = Complex(0.0, h);
  }
  return d;
}

std::string describe_offset(Index n, Index p, int sp, Index q, int sq) {
  auto axis = [n](Index r) {
    return std::string(r < n ? "x" : "y") + std::to_string((r < n ? r : r - n) + 1);
  };
  std::ostringstream os;
  os << (sp > 0 ? "+h" : "-h") << "*" << axis(p);
  if (sq != 0) os << " " << (sq > 0 ? "+h" : "-h") << "*" << axis(q);
  return os.str();
}

template <class Sample>
auto checked(const Sample& sample, Index n, Index p, int sp, Index q, int sq) {
  auto v = sample();
  bool finite = true;
  if constexpr (std::is_same_v<decltype(v), double>) {
    finite = std::isfinite(v);
  } else {
    finite = v.allFinite();
  }
  if (!finite) {
    throw EvaluationError("non-finite sample at offset " + describe_offset(n, p, sp, q, sq));
  }
  return v;
}

// Central differences in the 2n real coordinates. Works for scalar (double)
// and vector (CVec) valued samplers.
template <class Value, class Eval>
void central_differences(const Eval& f, const CVec& z, double h, Value& f0,
                         std::vector<Value>& first, std::vector<std::vector<Value>>& second) {
  const Index n = z.size();
  const Index two_n = 2 * n;
  f0 = checked([&] { return f(z); }, n, 0, 0, 0, 0);
  if constexpr (!std::is_same_v<Value, double>) {
    if (f0.size() != n) throw DimensionError("fd jet: map must be C^n -> C^n");
  }
  first.assign(two_n, f0);
  second.assign(two_n, std::vector<Value>(two_n, f0));
  std::vector<Value> plus(two_n, f0), minus(two_n, f0);
  for (Index p = 0; p < two_n; ++p) {
    const CVec d = real_offset(n, p, h);
    plus[p] = checked([&] { return f(CVec(z + d)); }, n, p, 1, 0, 0);
    minus[p] = checked([&] { return f(CVec(z - d)); }, n, p, -1, 0, 0);
    first[p] = (plus[p] - minus[p]) / (2.0 * h);
    second[p][p] = (plus[p] - 2.0 * f0 + minus[p]) / (h * h);
  }
  for (Index p = 0; p < two_n; ++p) {
    const CVec dp = real_offset(n, p, h);
    for (Index q = p + 1; q < two_n; ++q) {
      const CVec dq = real_offset(n, q, h);
      const Value pp = checked([&] { return f(CVec(z + dp + dq)); }, n, p, 1, q, 1);
      const Value pm = checked([&] { return f(CVec(z + dp - dq)); }, n, p, 1, q, -1);
      const Value mp = checked([&] { return f(CVec(z - dp + dq)); }, n, p, -1, q, 1);
      const Value mm = checked([&] { return f(CVec(z - dp - dq)); }, n, p, -1, q, -1);
      second[p][q] = (pp - pm - mp + mm) / (4.0 * h * h);
      second[q][p] = second[p][q];
    }
  }
}

} // namespace

MapJet2 fd_map_jet(const MapEvaluator& f, const CVec& z, const StepPolicy& policy) {
  const double h = policy.step_at(z);
  const Index n = z.size();
  CVec f0;
  std::vector<CVec> d1;
  std::vector<std::vector<CVec>> d2;
  central_differences(f, z, h, f0, d1, d2);

  MapJet2 m;
  m.value = f0;
  m.jhol.resize(n, n);
  m.janti.resize(n, n);
  m.mixed.assign(n, CMat(n, n));
  for (Index a = 0; a < n; ++a) {
    const CVec& dx = d1[a];
    const CVec& dy = d1[n + a];
    m.jhol.col(a) = 0.5 * (dx - kI * dy);
    m.janti.col(a) = 0.5 * (dx + kI * dy);
  }
  for (Index k = 0; k < n; ++k) {
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const Complex xx = d2[a][b][k];
        const Complex yy = d2[n + a][n + b][k];
        const Complex xy = d2[a][n + b][k];
        const Complex yx = d2[n + a][b][k];
        m.mixed[k](a, b) = 0.25 * (xx + yy + kI * (xy - yx));
      }
    }
  }
  return m;
}

RealJet2 fd_real_jet(const ScalarEvaluator& f, const CVec& z, const StepPolicy& policy) {
  const double h = policy.step_at(z);
  const Index two_n = 2 * z.size();
  double f0 = 0.0;
  std::vector<double> d1;
  std::vector<std::vector<double>> d2;
  central_differences(f, z, h, f0, d1, d2);
  RealJet2 out;
  out.value = f0;
  out.gradient.resize(two_n);
  out.hessian.resize(two_n, two_n);
  for (Index p = 0; p < two_n; ++p) {
    out.gradient[p] = d1[p];
    for (Index q = 0; q < two_n; ++q) out.hessian(p, q) = d2[p][q];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

enum class Dir { hol, anti };

struct FirstDeriv {
  CVec of_h;    ///< D h_a
  CVec of_hbar; ///< D conj(h_a)
};

FirstDeriv inner_first(const FullMapJet2& inner, Dir d, Index col) {
  const MapJet2& j = inner.jet;
  if (d == Dir::hol) return {j.jhol.col(col), j.janti.col(col).conjugate()};
  return {j.janti.col(col), j.jhol.col(col).conjugate()};
}

FirstDeriv inner_second(const FullMapJet2& inner, Dir d1, Index a, Dir d2, Index b) {
  const Index m = inner.jet.dim();
  FirstDeriv out{CVec(m), CVec(m)};
  for (Index c = 0; c < m; ++c) {
    if (d1 == Dir::hol && d2 == Dir::hol) {
      out.of_h[c] = inner.holhol[c](a, b);
      out.of_hbar[c] = std::conj(inner.antianti[c](a, b));
    } else if (d1 == Dir::hol && d2 == Dir::anti) {
      out.of_h[c] = inner.jet.mixed[c](a, b);
      out.of_hbar[c] = std::conj(inner.jet.mixed[c](b, a));
    } else {
      out.of_h[c] = inner.antianti[c](a, b);
      out.of_hbar[c] = std::conj(inner.holhol[c](a, b));
    }
  }
  return out;
}

void require_full(const FullMapJet2& j, const char* what) {
  require_square_jet(j.jet);
  const Index n = j.jet.dim();
  if (static_cast<Index>(j.holhol.size()) != n || static_cast<Index>(j.antianti.size()) != n) {
    throw DimensionError(std::string(what) + ": missing pure second-order blocks");
  }
}

} // namespace

FullMapJet2 compose(const FullMapJet2& outer, const FullMapJet2& inner) {
  require_full(outer, "compose(outer)");
  require_full(inner, "compose(inner)");
  const Index n = inner.jet.dim();
  if (outer.jet.dim() != n) throw DimensionError("compose: dimension mismatch");

  const MapJet2& g = outer.jet;
  FullMapJet2 out;
  out.jet.value = g.value;
  out.jet.jhol = g.jhol * inner.jet.jhol + g.janti * inner.jet.janti.conjugate();
  out.jet.janti = g.jhol * inner.jet.janti + g.janti * inner.jet.jhol.conjugate();
  out.jet.mixed.assign(n, CMat(n, n));
  out.holhol.assign(n, CMat(n, n));
  out.antianti.assign(n, CMat(n, n));

  auto second = [&](Index k, Dir d1, Index a, Dir d2, Index b) {
    const FirstDeriv u = inner_first(inner, d1, a);
    const FirstDeriv w = inner_first(inner, d2, b);
    const FirstDeriv uw = inner_second(inner, d1, a, d2, b);
    const CMat& gww = outer.holhol[k];
    const CMat& gwwbar = g.mixed[k];
    const CMat& gbarbar = outer.antianti[k];
    Complex s = (u.of_h.transpose() * gww * w.of_h)(0, 0);
    s += (u.of_h.transpose() * gwwbar * w.of_hbar)(0, 0);
    s += (u.of_hbar.transpose() * gwwbar.transpose() * w.of_h)(0, 0);
    s += (u.of_hbar.transpose() * gbarbar * w.of_hbar)(0, 0);
    s += (g.jhol.row(k) * uw.of_h)(0, 0);
    s += (g.janti.row(k) * uw.of_hbar)(0, 0);
    return s;
  };

  for (Index k = 0; k < n; ++k) {
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        out.holhol[k](a, b) = second(k, Dir::hol, a, Dir::hol, b);
        out.jet.mixed[k](a, b) = second(k, Dir::hol, a, Dir::anti, b);
        out.antianti[k](a, b) = second(k, Dir::anti, a, Dir::anti, b);
      }
    }
  }
  return out;
}

FullMapJet2 rlinear_jet(const RMat& lambda, const CVec& point) {
  const Index n = point.size();
  if (lambda.rows() != 2 * n || lambda.cols() != 2 * n) {
    throw DimensionError("rlinear_jet: matrix must be 2n x 2n");
  }
  const ComplexParts parts = complex_parts(lambda);
  FullMapJet2 out;
  out.jet.value = complexify(lambda * realify(point));
  out.jet.jhol = parts.c10;
  out.jet.janti = parts.c01;
  out.jet.mixed.assign(n, CMat::Zero(n, n));
  out.holhol.assign(n, CMat::Zero(n, n));
  out.antianti.assign(n, CMat::Zero(n, n));
  return out;
}

} // namespace levi
