#include "levi/pdecheck.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace levi {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_compatible(const ScalarJet2& rj, const MapJet2& phi, const CVec& zeta) {
  const Index n = phi.dim();
  if (rj.dim() != n) throw DimensionError("pushforward_levi: rho' and Phi dimensions differ");
  require_dim(zeta, n, "pushforward_levi");
}

void require_invertible(const MapJet2& phi, const char* what) {
  if (differential_conditioning(phi) <= 1e-10) {
    throw DegeneracyError(std::string(what) + ": differential of Phi is singular");
  }
}

double trace_formula_gap(const MapJet2& phi, const CVec& v, const CVec& zeta, const CVec& eta) {
  const CVec lhs = mixed_apply(phi, zeta, eta);
  const Complex v_eta = hermitian_product(v, eta);
  const Complex zeta_v = hermitian_product(zeta, v);
  const CVec rhs = v_eta * (phi.jhol * zeta) + zeta_v * (phi.janti * eta.conjugate());
  return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

template <class Gap>
double max_over_pairs(Index n, std::size_t pair_samples, Rng& rng, Gap&& gap) {
  if (pair_samples == 0) throw PreconditionError("residual needs at least one (zeta, eta) sample");
  double worst = 0.0;
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      worst = std::max(worst, gap(CVec::Unit(n, a), CVec::Unit(n, b)));
    }
  }
  for (std::size_t s = 0; s < pair_samples; ++s) {
    const CVec zeta = random_unit(rng, n);
    const CVec eta = random_unit(rng, n);
    worst = std::max(worst, gap(zeta, eta));
  }
  return worst;
}

} // namespace

LeviDecomposition levi_terms(const ScalarJet2& rho_prime_at_image, const MapJet2& phi,
                             const CVec& zeta) {
  const ScalarJet2& rj = rho_prime_at_image;
  require_compatible(rj, phi, zeta);
  LeviDecomposition d;
  const CVec w = apply_differential(phi, zeta);
  const CVec wi = apply_differential(phi, kI * zeta);
  d.l0 = 0.25 * eval_real_hessian(rj, w) + 0.25 * eval_real_hessian(rj, wi);

  const NuMu nm = nu_mu(phi, zeta);
  const Complex cross = (nm.nu.transpose() * rj.hzz * nm.mu)(0, 0);
  const Complex herm = (nm.nu.transpose() * rj.hzzbar * nm.nu.conjugate())(0, 0) +
                       (nm.mu.transpose() * rj.hzzbar * nm.mu.conjugate())(0, 0);
  d.l0_nu_mu = 2.0 * cross.real() + herm.real();

  const double scale = std::max({1.0, std::abs(d.l0), std::abs(d.l0_nu_mu)});
  if (std::abs(d.l0 - d.l0_nu_mu) > 1e-9 * scale) {
    throw InvariantViolation("levi_terms: the two expressions for l0 disagree (" +
                             std::to_string(d.l0) + " vs " + std::to_string(d.l0_nu_mu) + ")");
  }

  const CVec b = mixed_apply(phi, zeta, zeta);
  d.l1 = 2.0 * (rj.dz.transpose() * b)(0, 0).real();
  d.total = d.l0 + d.l1;
  d.direct = d.total;
  return d;
}

LeviDecomposition pushforward_levi(const ScalarJet2& rho_prime_at_image, const MapJet2& phi,
                                   const CVec& zeta, const ScalarJet2& composite) {
  LeviDecomposition d = levi_terms(rho_prime_at_image, phi, zeta);
  if (composite.dim() != phi.dim()) throw DimensionError("pushforward_levi: composite jet dimension");
  d.direct = levi_eval(levi_form(composite), zeta);
  d.rel_gap = std::abs(d.total - d.direct) / std::max(1.0, std::abs(d.direct));
  return d;
}

ScalarJet2 composite_jet_symbolic(const zexpr::Expr& rho_prime, const zexpr::PolyMapSpec& phi,
                                  const CVec& z) {
  phi.validate();
  require_dim(z, phi.n, "composite_jet_symbolic");
  zexpr::ScalarSpec spec;
  spec.n = phi.n;
  spec.expr = zexpr::substitute(rho_prime, phi.components);
  // rho' is real, hence so is rho' o Phi.
  spec.real_valued = true;
  return zexpr::CompiledScalar(spec).jet(z);
}

ScalarJet2 composite_jet_fd(const ScalarEvaluator& rho_prime, const MapEvaluator& phi,
                            const CVec& z, const StepPolicy& policy) {
  return fd_scalar_jet([&](const CVec& x) { return rho_prime(phi(x)); }, z, policy);
}

CVec pullback_dz(const CVec& dz_prime, const MapJet2& phi) {
  require_dim(dz_prime, phi.dim(), "pullback_dz");
  return phi.jhol.transpose() * dz_prime + phi.janti.adjoint() * dz_prime.conjugate();
}

// ---------------------------------------------------------------------------

double differential_conditioning(const MapJet2& phi) {
  Eigen::JacobiSVD<RMat> svd(real_jacobian(phi));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

double condition_iii_residual(const MapJet2& phi, const CVec& zeta) {
  require_dim(zeta, phi.dim(), "condition_iii_residual");
  if (zeta.norm() == 0.0) throw PreconditionError("condition_iii_residual: zeta must be non-zero");
  require_invertible(phi, "condition_iii_residual");
  return lemma33_span_residual(SesquilinearMapW::from_mixed(phi), RLinearMap::differential(phi),
                               zeta);
}

CVec trace_vector(const MapJet2& phi) {
  require_invertible(phi, "trace_vector");
  return recover_v(SesquilinearMapW::from_mixed(phi), RLinearMap::differential(phi));
}

double condition_ii_residual(const MapJet2& phi, std::size_t pair_samples, Rng& rng, double scale) {
  if (pair_samples == 0) throw PreconditionError("condition_ii_residual: pair_samples must be > 0");
  const CVec v = scale * trace_vector(phi);
  return max_over_pairs(phi.dim(), pair_samples, rng, [&](const CVec& zeta, const CVec& eta) {
    return trace_formula_gap(phi, v, zeta, eta);
  });
}

double syst1_residual(const MapJet2& phi, std::size_t pair_samples, Rng& rng, double kappa) {
  return condition_ii_residual(phi, pair_samples, rng, kappa);
}

double linearized_residual(const MapJet2& phi) {
  const Index n = phi.dim();
  if (static_cast<Index>(phi.mixed.size()) != n) throw DimensionError("linearized_residual: mixed");
  const double scale = std::max(1.0, max_abs(phi.mixed));
  const CVec tr = trace_mixed(phi);
  double worst = 0.0;
  for (Index k = 0; k < n; ++k) {
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const Complex expected = (a == k && b == k) ? tr[k] : Complex(0.0, 0.0);
        worst = std::max(worst, std::abs(phi.mixed[k](a, b) - expected));
      }
    }
  }
  return worst / scale;
}

double linearized_trace_residual(const MapJet2& phi, std::size_t pair_samples, Rng& rng) {
  MapJet2 identity_c = phi;
  const Index n = phi.dim();
  identity_c.jhol = CMat::Identity(n, n);
  identity_c.janti = CMat::Zero(n, n);
  const CVec v = trace_mixed(phi);
  return max_over_pairs(n, pair_samples, rng, [&](const CVec& zeta, const CVec& eta) {
    return trace_formula_gap(identity_c, v, zeta, eta);
  });
}

ConditionResiduals condition_residuals(const MapJet2& phi, const CVec& z, std::size_t zeta_samples,
                                       std::size_t pair_samples, Rng& rng, double tol) {
  const Index n = phi.dim();
  require_dim(z, n, "condition_residuals");
  ConditionResiduals r;
  r.at = z;
  r.holo = max_abs(phi.janti);
  r.antiholo = max_abs(phi.jhol);
  r.plurih = max_abs(phi.mixed);
  r.linearized = linearized_residual(phi);
  r.trace_ii = condition_ii_residual(phi, std::max<std::size_t>(pair_samples, 1), rng);
  r.syst1 = syst1_residual(phi, std::max<std::size_t>(pair_samples, 1), rng);
  r.worst_zeta = CVec::Unit(n, 0);
  for (std::size_t s = 0; s < zeta_samples; ++s) {
    const CVec zeta = random_unit(rng, n);
    const double res = condition_iii_residual(phi, zeta);
    if (res > r.span_iii || s == 0) {
      r.span_iii = std::max(r.span_iii, res);
      r.worst_zeta = zeta;
    }
  }
  r.consistent = r.trace_ii > tol || r.span_iii <= 100.0 * tol;
  return r;
}

// ---------------------------------------------------------------------------

std::string to_string(MapClass c) {
  switch (c) {
  case MapClass::holomorphic:
    return "holomorphic";
  case MapClass::antiholomorphic:
    return "antiholomorphic";
  case MapClass::pluriharmonic:
    return "pluriharmonic";
  case MapClass::weakly_pluriharmonic:
    return "weakly-pluriharmonic";
  case MapClass::generic:
    return "generic";
  }
  return "generic";
}

MapClass map_class_from_string(const std::string& s) {
  for (MapClass c : {MapClass::holomorphic, MapClass::antiholomorphic, MapClass::pluriharmonic,
                     MapClass::weakly_pluriharmonic, MapClass::generic}) {
    if (to_string(c) == s) return c;
  }
  throw PreconditionError("unknown map class '" + s + "'");
}

Classification classify_map(const zexpr::PolyMapSpec& spec, const Region& region,
                            const ClassifyConfig& config) {
  const zexpr::CompiledMap map(spec);
  const Index n = spec.n;
  const CVec center = region.center.size() == 0 ? CVec::Zero(n) : region.center;
  require_dim(center, n, "classify_map");
  if (!(region.radius >= 0.0)) throw ConfigError("classify_map: radius must be non-negative");
  if (config.samples == 0) throw ConfigError("classify_map: samples must be > 0");

  struct Slot {
    bool skipped = false;
    double holo = 0.0, antiholo = 0.0, plurih = 0.0, trace = 0.0;
    CVec z;
  };
  std::vector<Slot> slots(config.samples);
  parallel_for(config.samples, [&](std::size_t i) {
    Rng rng = substream(config.seed, i);
    Slot& s = slots[i];
    s.z = random_in_ball(rng, center, region.radius);
    const MapJet2 jet = map.jet(s.z);
    s.holo = max_abs(jet.janti);
    s.antiholo = max_abs(jet.jhol);
    s.plurih = max_abs(jet.mixed);
    if (differential_conditioning(jet) <= 1e-10) {
      s.skipped = true;
      return;
    }
    s.trace = condition_ii_residual(jet, config.pair_samples, rng);
  });

  Classification c;
  for (const Slot& s : slots) {
    c.max_holo = std::max(c.max_holo, s.holo);
    c.max_antiholo = std::max(c.max_antiholo, s.antiholo);
    c.max_plurih = std::max(c.max_plurih, s.plurih);
    if (s.skipped) {
      ++c.skipped;
      continue;
    }
    ++c.evaluated;
    if (s.trace > c.max_trace_ii || c.worst_point.size() == 0) {
      c.max_trace_ii = std::max(c.max_trace_ii, s.trace);
      c.worst_point = s.z;
    }
  }
  if (c.max_holo <= config.tol) {
    c.label = MapClass::holomorphic;
  } else if (c.max_antiholo <= config.tol) {
    c.label = MapClass::antiholomorphic;
  } else if (c.max_plurih <= config.tol) {
    c.label = MapClass::pluriharmonic;
  } else if (2 * c.skipped > config.samples) {
    // Only the trace residual needs an invertible differential.
    throw DegeneracyError("classify_map: " + std::to_string(c.skipped) + " of " +
                          std::to_string(config.samples) + " points have a singular differential");
  } else if (c.max_trace_ii <= config.tol) {
    c.label = MapClass::weakly_pluriharmonic;
  } else {
    c.label = MapClass::generic;
  }
  return c;
}

} // namespace levi
