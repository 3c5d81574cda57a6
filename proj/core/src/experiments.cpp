#include "levi/experiments.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace levi {

namespace {

constexpr Complex kI{0.0, 1.0};

GalleryEntry make_entry(std::string name, std::vector<std::string> components, MapClass expected,
                        std::string notes, bool degenerate = false) {
  GalleryEntry e;
  e.name = std::move(name);
  e.spec = zexpr::PolyMapSpec::parse(static_cast<int>(components.size()), components);
  e.expected_class = expected;
  e.notes = std::move(notes);
  e.degenerate_somewhere = degenerate;
  return e;
}

CVec random_tangent(Rng& rng, const TangentFrame& frame) {
  const Index k = static_cast<Index>(frame.basis.size());
  const CVec c = random_unit(rng, k);
  CVec zeta = CVec::Zero(frame.gradient_dz.size());
  for (Index j = 0; j < k; ++j) zeta += c[j] * frame.basis[static_cast<std::size_t>(j)];
  return zeta / zeta.norm();
}

double tangency_residual(const CVec& dz, const CVec& zeta) {
  return std::abs((dz.transpose() * zeta)(0, 0)) / std::max(dz.norm() * zeta.norm(), 1e-300);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(random_uniform(rng, std::log(lo), std::log(hi)));
}

} // namespace

std::vector<GalleryEntry> gallery() {
  std::vector<GalleryEntry> g;
  g.push_back(make_entry("identity", {"z1", "z2"}, MapClass::holomorphic, "identity map"));
  g.push_back(make_entry("rlinear_mix", {"z1 + 0.5*conj(z2)", "z2"}, MapClass::pluriharmonic,
                         "real-linear, neither holomorphic nor antiholomorphic"));
  g.push_back(make_entry("holomorphic", {"z1", "z2 + z1^2"}, MapClass::holomorphic,
                         "polynomial biholomorphism"));
  g.push_back(make_entry("antiholomorphic", {"conj(z1)", "conj(z2)"}, MapClass::antiholomorphic,
                         "coordinatewise conjugation"));
  g.push_back(make_entry("pluriharmonic", {"z1 + conj(z1)^2", "z2"}, MapClass::pluriharmonic,
                         "holomorphic plus antiholomorphic"));
  g.push_back(make_entry("linearized_only", {"z1*conj(z1) + z1 + 3", "z2"}, MapClass::generic,
                         "separable; solves the linearized equation only; the differential is "
                         "singular on Re z1 = -1/2",
                         true));
  g.push_back(make_entry("violator", {"z1 + z2*conj(z2)", "z2"}, MapClass::generic,
                         "mixed term couples the coordinates"));
  return g;
}

GalleryEntry gallery_entry(const std::string& name) {
  for (auto& e : gallery()) {
    if (e.name == name) return e;
  }
  throw PreconditionError("unknown gallery entry '" + name + "'");
}

// ---------------------------------------------------------------------------

CounterexampleCertificate find_counterexample(const zexpr::PolyMapSpec& spec, const CVec& z,
                                              const CVec& zeta,
                                              const CounterexampleOptions& options) {
  const zexpr::CompiledMap map(spec);
  require_dim(z, spec.n, "find_counterexample");
  require_dim(zeta, spec.n, "find_counterexample");
  if (zeta.norm() == 0.0) throw PreconditionError("find_counterexample: zeta must be non-zero");
  const MapJet2 jet = map.jet(z);
  const double span = condition_iii_residual(jet, zeta);
  if (span <= options.min_span_residual) {
    throw PreconditionError("find_counterexample: condition (iii) holds at the witness (residual " +
                            std::to_string(span) + "), no counterexample exists there");
  }

  CounterexampleCertificate cert;
  cert.map = spec;
  cert.z = z;
  cert.zeta = zeta / zeta.norm();
  cert.span_residual = span;

  const CVec b = mixed_apply(jet, cert.zeta, cert.zeta);
  const SpanFit fit =
      real_span_fit(b, apply_differential(jet, cert.zeta), apply_differential(jet, kI * cert.zeta));
  if (fit.distance == 0.0) throw DegeneracyError("find_counterexample: empty orthogonal component");
  const CVec gradient = fit.orthogonal / fit.distance;

  const Index n = spec.n;
  const CVec image = jet.value;
  const Quadric base = centered_quadric(image, gradient, CMat::Zero(n, n), CMat::Identity(n, n));
  const LeviDecomposition d0 = levi_terms(base.jet(image), jet, cert.zeta);
  if (!(d0.l1 > 0.0)) throw DegeneracyError("find_counterexample: l1 does not depend on t");

  cert.t0 = -d0.l0 / d0.l1 - 1.0;
  const double delta = std::max(0.5, 0.1 * std::abs(cert.t0));
  cert.t_star = cert.t0 - delta;
  if (cert.t_star == -1.0) cert.t_star -= delta;

  cert.quadric = deform_family(base, image, cert.t_star);
  const ScalarJet2 rj = cert.quadric.jet(image);
  const LeviDecomposition d = levi_terms(rj, jet, cert.zeta);
  cert.levi_value = d.total;
  cert.l0 = d.l0;
  cert.l1 = d.l1;
  cert.scale = std::abs(d.l0) + std::abs(d.l1);
  cert.convexity_min_eig = convexity_verdict(rj).min_eig;
  cert.rho_residual = std::abs(cert.quadric.value(image));
  cert.tangency_residual = tangency_residual(pullback_dz(rj.dz, jet), cert.zeta);
  return cert;
}

CertificateCheck validate_certificate(const CounterexampleCertificate& cert) {
  CertificateCheck check;
  auto fail = [&](std::string what) { check.failures.push_back(std::move(what)); };

  const zexpr::CompiledMap map(cert.map);
  const MapJet2 jet = map.jet(cert.z);
  const CVec image = map.eval(cert.z);
  const ScalarJet2 rj = cert.quadric.jet(image);

  const LeviDecomposition d = levi_terms(rj, jet, cert.zeta);
  const ScalarJet2 composite = composite_jet_symbolic(cert.quadric.to_expr(), cert.map, cert.z);
  check.recomputed_levi = d.total;
  check.direct_levi = levi_eval(levi_form(composite), cert.zeta);
  const double ref = std::max(1.0, std::abs(cert.levi_value));
  check.levi_rel_diff = std::max(std::abs(check.recomputed_levi - cert.levi_value),
                                 std::abs(check.direct_levi - cert.levi_value)) /
                        ref;

  const double scale = std::abs(d.l0) + std::abs(d.l1);
  const ConvexityVerdict convex = convexity_verdict(rj);
  const double rho_scale = std::max(1.0, image.squaredNorm());
  if (!(convex.min_eig > 1e-6)) fail("quadric is not strictly convex");
  if (!(std::abs(cert.quadric.value(image)) <= 1e-10 * rho_scale)) {
    fail("quadric does not vanish at Phi(z)");
  }
  if (!(tangency_residual(composite.dz, cert.zeta) <= 1e-8)) {
    fail("zeta is not complex tangent to the pulled-back hypersurface");
  }
  if (!(check.recomputed_levi <= -1e-6 * scale)) fail("Levi value is not negative");
  if (!(check.direct_levi <= -1e-6 * scale)) fail("direct Levi value is not negative");
  if (cert.t_star == -1.0) fail("t_star = -1");
  if (!(check.levi_rel_diff <= 1e-8)) fail("recomputed Levi value differs from the certificate");
  check.ok = check.failures.empty();
  return check;
}

// ---------------------------------------------------------------------------

VerificationReport verify_theorem_equivalence(const zexpr::PolyMapSpec& spec,
                                              const std::string& map_name,
                                              const VerifyConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const zexpr::CompiledMap map(spec);
  const Index n = spec.n;
  if (!(config.gradient_min > 0.0) || !(config.gradient_max >= config.gradient_min)) {
    throw ConfigError("verify: invalid gradient magnitude range");
  }
  if (!(config.region.radius >= 0.0)) throw ConfigError("verify: radius must be non-negative");

  VerificationReport report;
  report.map_name = map_name;
  report.map = spec;
  report.config = config;
  const CVec center = config.region.center.size() == 0 ? CVec::Zero(n) : config.region.center;
  require_dim(center, n, "verify_theorem_equivalence");
  report.config.region.center = center;

  struct Slot {
    bool skipped = false;
    bool levi_applicable = false;
    double conditioning = 0.0;
    LeviWitness levi;
    double levi_normalized = 0.0;
    double ii = 0.0;
    double iii = 0.0;
    CVec iii_zeta;
  };
  std::vector<Slot> slots(config.budget);

  parallel_for(config.budget, [&](std::size_t i) {
    Rng rng = substream(config.seed, i);
    Slot& s = slots[i];
    s.levi.z = random_in_ball(rng, center, config.region.radius);
    const MapJet2 jet = map.jet(s.levi.z);
    s.conditioning = differential_conditioning(jet);
    if (s.conditioning <= 1e-10) {
      s.skipped = true;
      return;
    }
    const double magnitude = log_uniform(rng, config.gradient_min, config.gradient_max);
    const CVec gradient = magnitude * random_unit(rng, n);
    s.levi.quadric = random_convex_quadric(rng, jet.value, gradient);
    const ScalarJet2 rj = s.levi.quadric.jet(jet.value);
    const CVec dz = pullback_dz(rj.dz, jet);
    const TangentFrame frame = complex_tangent_basis(ScalarJet2{0.0, dz, rj.hzz, rj.hzzbar});
    if (!frame.basis.empty()) {
      s.levi_applicable = true;
      s.levi.zeta = random_tangent(rng, frame);
      const LeviDecomposition d = levi_terms(rj, jet, s.levi.zeta);
      s.levi.l0 = d.l0;
      s.levi.l1 = d.l1;
      s.levi.total = d.total;
      s.levi.scale = std::max(std::abs(d.l0) + std::abs(d.l1), 1e-300);
      s.levi_normalized = d.total / s.levi.scale;
    }
    s.ii = condition_ii_residual(jet, config.pair_samples, rng);
    s.iii_zeta = s.levi_applicable ? s.levi.zeta : CVec::Unit(n, 0);
    s.iii = condition_iii_residual(jet, s.iii_zeta);
    for (std::size_t k = 0; k < config.zeta_samples; ++k) {
      const CVec zeta = random_unit(rng, n);
      const double r = condition_iii_residual(jet, zeta);
      if (r > s.iii) {
        s.iii = r;
        s.iii_zeta = zeta;
      }
    }
  });

  report.min_levi = std::numeric_limits<double>::infinity();
  const Slot* worst_iii = nullptr;
  const Slot* cert_slot = nullptr;
  for (const Slot& s : slots) {
    if (s.skipped) {
      ++report.skipped;
      continue;
    }
    ++report.n_samples;
    if (s.levi_applicable && s.levi_normalized < report.min_levi) {
      report.min_levi = s.levi_normalized;
      report.witness_i = s.levi;
    }
    if (s.ii > report.max_residual_ii || report.at_ii.size() == 0) {
      report.max_residual_ii = std::max(report.max_residual_ii, s.ii);
      report.at_ii = s.levi.z;
    }
    if (worst_iii == nullptr || s.iii > worst_iii->iii) worst_iii = &s;
    if (s.conditioning > 1e-3 && (cert_slot == nullptr || s.iii > cert_slot->iii)) cert_slot = &s;
  }
  if (2 * report.skipped > config.budget) {
    throw DegeneracyError("verify: " + std::to_string(report.skipped) + " of " +
                          std::to_string(config.budget) +
                          " sampled points have a singular differential");
  }
  if (!std::isfinite(report.min_levi)) report.min_levi = 0.0;
  if (worst_iii != nullptr) {
    report.max_residual_iii = worst_iii->iii;
    report.at_iii = worst_iii->levi.z;
    report.zeta_iii = worst_iii->iii_zeta;
  }
  report.inconclusive = report.n_samples == 0;
  report.pass_i = report.min_levi >= -config.levi_tol;
  report.pass_ii = report.max_residual_ii <= config.tol_ii;
  report.pass_iii = report.max_residual_iii <= config.tol_iii;

  if (!report.pass_iii && config.max_certificates > 0 && cert_slot != nullptr) {
    try {
      report.certificates.push_back(
          find_counterexample(spec, cert_slot->levi.z, cert_slot->iii_zeta));
    } catch (const PreconditionError&) {
    } catch (const DegeneracyError&) {
    }
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

// ---------------------------------------------------------------------------

double quadric34_obstruction(const MapJet2& phi, const CVec& zeta, double eps) {
  const NuMu nm = nu_mu(phi, zeta);
  const Complex cross = (nm.nu.transpose() * nm.mu)(0, 0);
  return 4.0 * cross.real() + eps * (nm.nu.squaredNorm() + nm.mu.squaredNorm());
}

namespace {

// Symmetric matrix of the real quadratic form zeta -> quadric34_obstruction.
RMat obstruction_matrix(const MapJet2& phi, double eps) {
  const Index n = phi.dim();
  RMat q(2 * n, 2 * n);
  auto e = [&](const RVec& x) { return quadric34_obstruction(phi, complexify(x), eps); };
  for (Index a = 0; a < 2 * n; ++a) {
    for (Index b = a; b < 2 * n; ++b) {
      const RVec ea = RVec::Unit(2 * n, a);
      const RVec eb = RVec::Unit(2 * n, b);
      q(a, b) = a == b ? e(ea) : 0.5 * (e(ea + eb) - e(ea) - e(eb));
      q(b, a) = q(a, b);
    }
  }
  return q;
}

// A unit l with sum_j l_j nu_j + conj(sum_j l_j mu_j) = 0, so that zeta is
// complex tangent to the pulled-back quadric.
CVec tangent_linear_form(const MapJet2& phi, const CVec& zeta) {
  const Index n = phi.dim();
  const NuMu nm = nu_mu(phi, zeta);
  RMat a(2, 2 * n);
  for (Index c = 0; c < 2 * n; ++c) {
    const CVec l = complexify(RVec::Unit(2 * n, c));
    const Complex v = (l.transpose() * nm.nu)(0, 0) + std::conj((l.transpose() * nm.mu)(0, 0));
    a(0, c) = v.real();
    a(1, c) = v.imag();
  }
  Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullV);
  return complexify(svd.matrixV().col(2 * n - 1));
}

double pulled_back_levi(const MapJet2& phi, double eps, const CVec& l, const CVec& zeta) {
  const Quadric q = translate(quadric_34(phi.dim(), eps, l), phi.value);
  return levi_terms(q.jet(phi.value), phi, zeta).total;
}

} // namespace

Corollary32Report corollary32_check(const zexpr::PolyMapSpec& spec, const CVec& z,
                                    std::size_t search_budget, std::uint64_t seed, double tol) {
  const zexpr::CompiledMap map(spec);
  require_dim(z, spec.n, "corollary32_check");
  const Index n = spec.n;
  const MapJet2 jet = map.jet(z);

  Corollary32Report r;
  r.z = z;
  r.holo_norm = max_abs(jet.janti);
  r.antiholo_norm = max_abs(jet.jhol);
  r.min_by_eps.assign(kEpsSchedule.size(), std::numeric_limits<double>::infinity());

  if (r.holo_norm <= tol || r.antiholo_norm <= tol) {
    r.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < search_budget; ++i) {
      Rng rng = substream(seed, i);
      const std::size_t e = i % kEpsSchedule.size();
      const double eps = kEpsSchedule[e];
      const CVec l = random_gaussian(rng, n);
      const Quadric q = translate(quadric_34(n, eps, l), jet.value);
      const ScalarJet2 rj = q.jet(jet.value);
      const CVec dz = pullback_dz(rj.dz, jet);
      if (dz.norm() <= kGradientFloor) continue;
      const TangentFrame frame = complex_tangent_basis(ScalarJet2{0.0, dz, rj.hzz, rj.hzzbar});
      if (frame.basis.empty()) continue;
      const CVec zeta = random_tangent(rng, frame);
      const LeviDecomposition d = levi_terms(rj, jet, zeta);
      const double scale = std::max(std::abs(d.l0) + std::abs(d.l1), 1e-300);
      const double normalized = d.total / scale;
      ++r.samples;
      if (d.total < -1e-9 * scale) ++r.violations;
      r.min_by_eps[e] = std::min(r.min_by_eps[e], normalized);
      if (normalized < r.min_value) {
        r.min_value = normalized;
        r.witness = Corollary32Witness{zeta, l, eps, quadric34_obstruction(jet, zeta, eps), d.total};
      }
    }
    if (r.samples == 0) r.min_value = 0.0;
    for (double& m : r.min_by_eps) {
      if (!std::isfinite(m)) m = 0.0;
    }
    r.status = r.violations == 0 ? "preserved" : "violated";
    return r;
  }

  auto consider = [&](std::size_t e, const CVec& zeta_in) {
    const CVec zeta = zeta_in / zeta_in.norm();
    const double value = quadric34_obstruction(jet, zeta, kEpsSchedule[e]);
    ++r.samples;
    r.min_by_eps[e] = std::min(r.min_by_eps[e], value);
    if (!r.witness || value < r.witness->value) {
      r.witness = Corollary32Witness{zeta, CVec(), kEpsSchedule[e], value, 0.0};
    }
  };
  for (std::size_t e = 0; e < kEpsSchedule.size(); ++e) {
    Eigen::SelfAdjointEigenSolver<RMat> solver(obstruction_matrix(jet, kEpsSchedule[e]));
    consider(e, complexify(solver.eigenvectors().col(0)));
  }
  for (std::size_t i = 0; i < search_budget; ++i) {
    Rng rng = substream(seed, i);
    consider(i % kEpsSchedule.size(), random_unit(rng, n));
  }
  Corollary32Witness& w = *r.witness;
  w.l = tangent_linear_form(jet, w.zeta);
  w.levi_total = pulled_back_levi(jet, w.eps, w.l, w.zeta);
  r.min_value = w.value;
  r.violations = static_cast<std::size_t>(
      std::count_if(r.min_by_eps.begin(), r.min_by_eps.end(), [](double v) { return v < 0.0; }));
  r.status = w.value < 0.0 ? "violated" : "not-found";
  return r;
}

// ---------------------------------------------------------------------------

StabilityReport stability_check(const zexpr::PolyMapSpec& phi, const zexpr::PolyMapSpec& h,
                                const RMat& lambda, std::size_t samples, std::uint64_t seed,
                                double radius, double tol) {
  if (phi.n != h.n) throw DimensionError("stability_check: Phi and h dimensions differ");
  const Index n = phi.n;
  if (lambda.rows() != 2 * n || lambda.cols() != 2 * n) {
    throw DimensionError("stability_check: Lambda must be 2n x 2n");
  }
  Eigen::JacobiSVD<RMat> svd(lambda);
  if (svd.singularValues()[2 * n - 1] <= 1e-10 * svd.singularValues()[0]) {
    throw DegeneracyError("stability_check: Lambda is singular");
  }
  const zexpr::CompiledMap cphi(phi);
  const zexpr::CompiledMap ch(h);

  struct Slot {
    CVec z;
    double plurih = 0.0, phi_plurih = 0.0, h_anti = 0.0;
  };
  std::vector<Slot> slots(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = substream(seed, i);
    Slot& s = slots[i];
    s.z = random_in_ball(rng, CVec::Zero(n), radius);
    const FullMapJet2 hj = ch.full_jet(s.z);
    const FullMapJet2 pj = cphi.full_jet(hj.jet.value);
    const FullMapJet2 lj = rlinear_jet(lambda, pj.jet.value);
    const FullMapJet2 composite = compose(lj, compose(pj, hj));
    s.plurih = max_abs(composite.jet.mixed);
    s.phi_plurih = max_abs(pj.jet.mixed);
    s.h_anti = max_abs(hj.jet.janti);
  });

  StabilityReport r;
  r.samples = samples;
  for (const Slot& s : slots) {
    if (s.plurih > r.max_plurih || r.worst_point.size() == 0) {
      r.max_plurih = std::max(r.max_plurih, s.plurih);
      r.worst_point = s.z;
    }
    r.phi_plurih = std::max(r.phi_plurih, s.phi_plurih);
    r.h_antiholo_part = std::max(r.h_antiholo_part, s.h_anti);
  }
  r.preconditions_hold = r.phi_plurih <= tol && r.h_antiholo_part <= tol;
  r.pass = r.max_plurih <= tol;
  return r;
}

// ---------------------------------------------------------------------------

RLinearMap random_invertible_rlinear(Rng& rng, Index n) {
  for (;;) {
    RLinearMap c{CMat(n, n), CMat(n, n)};
    for (Index k = 0; k < n; ++k) {
      c.c10.row(k) = random_gaussian(rng, n).transpose();
      c.c01.row(k) = random_gaussian(rng, n).transpose();
    }
    Eigen::JacobiSVD<RMat> svd(c.real_matrix());
    const auto& sv = svd.singularValues();
    if (sv[2 * n - 1] > 1e-3 * sv[0]) return c;
  }
}

Lemma33SuiteReport lemma33_suite(const Lemma33SuiteConfig& config) {
  if (config.n < 1) throw ConfigError("lemma33_suite: n must be at least 1");
  const Index n = config.n;
  struct Slot {
    double forward = 0.0, roundtrip = 0.0, trace = 0.0, converse = 0.0;
    bool reconstructed = false;
  };
  std::vector<Slot> slots(config.trials);
  parallel_for(config.trials, [&](std::size_t i) {
    Rng rng = substream(config.seed, i);
    Slot& s = slots[i];
    const RLinearMap c = random_invertible_rlinear(rng, n);
    const CVec v = random_gaussian(rng, n);
    const SesquilinearMapW b = lemma33_build(v, c);
    for (std::size_t k = 0; k < config.zeta_per_trial; ++k) {
      s.forward = std::max(s.forward, lemma33_span_residual(b, c, random_unit(rng, n)));
    }
    s.roundtrip = (recover_v(b, c) - v).norm() / std::max(1.0, v.norm());
    const CVec cv = c.apply(v);
    s.trace = (trace_sesquilinear(b) - cv).norm() / std::max(1.0, cv.norm());

    SesquilinearMapW generic = SesquilinearMapW::zero(n, n);
    for (auto& slice : generic.tensor) {
      for (Index r = 0; r < n; ++r) slice.row(r) = random_gaussian(rng, n).transpose();
    }
    for (std::size_t k = 0; k < config.converse_zeta; ++k) {
      s.converse = std::max(s.converse, lemma33_span_residual(generic, c, random_unit(rng, n)));
    }
    const SesquilinearMapW rebuilt = lemma33_build(recover_v(generic, c), c);
    double diff = 0.0;
    for (Index k = 0; k < n; ++k) {
      diff = std::max(diff, max_abs(CMat(generic.tensor[static_cast<std::size_t>(k)] -
                                         rebuilt.tensor[static_cast<std::size_t>(k)])));
    }
    s.reconstructed = diff <= 1e-8 * max_abs(generic.tensor);
  });

  Lemma33SuiteReport r;
  r.trials = config.trials;
  r.converse_min_residual = std::numeric_limits<double>::infinity();
  for (const Slot& s : slots) {
    r.forward_max_residual = std::max(r.forward_max_residual, s.forward);
    r.roundtrip_max_error = std::max(r.roundtrip_max_error, s.roundtrip);
    r.trace_max_error = std::max(r.trace_max_error, s.trace);
    r.converse_min_residual = std::min(r.converse_min_residual, s.converse);
    if (s.converse > 1e-3) ++r.converse_separated;
    if (s.reconstructed) ++r.converse_reconstructed;
    if (!(s.converse > 1e-3) && !s.reconstructed) ++r.converse_failures;
  }
  if (!std::isfinite(r.converse_min_residual)) r.converse_min_residual = 0.0;
  r.pass = r.forward_max_residual <= 1e-10 && r.roundtrip_max_error <= 1e-10 &&
           r.trace_max_error <= 1e-12 && r.converse_failures == 0;
  return r;
}

} // namespace levi
