#include "levi/experiments.hpp"
#include "levi/pdecheck.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace levi;

namespace {

zexpr::PolyMapSpec spec(std::vector<std::string> comps) {
  return zexpr::PolyMapSpec::parse(static_cast<int>(comps.size()), comps);
}

MapJet2 jet(std::vector<std::string> comps, const CVec& z) {
  return zexpr::CompiledMap(spec(std::move(comps))).jet(z);
}

const std::vector<std::string> kViolator{"z1 + z2*conj(z2)", "z2"};

} // namespace

TEST(Pdecheck, IdentityPushforward) {
  Rng rng = substream(51, 0);
  const CVec z = oracle::random_point(rng, 2);
  const zexpr::ScalarSpec rho = zexpr::ScalarSpec::parse_real(2, "abs2(z1) + abs2(z2)");
  const zexpr::PolyMapSpec id = spec({"z1", "z2"});
  const CVec zeta = random_gaussian(rng, 2);
  const LeviDecomposition d = pushforward_levi(analytic_scalar_jet(rho, z), jet({"z1", "z2"}, z),
                                               zeta, composite_jet_symbolic(rho.expr, id, z));
  EXPECT_NEAR(d.l0, zeta.squaredNorm(), 1e-13);
  EXPECT_EQ(d.l1, 0.0);
  EXPECT_NEAR(d.direct, zeta.squaredNorm(), 1e-13);
  EXPECT_LE(d.rel_gap, 1e-14);
}

TEST(Pdecheck, HolomorphicMapsHaveNoL1) {
  Rng rng = substream(52, 0);
  const std::vector<std::string> h{"z1 + z2^2", "z2 - 3*z1*z2"};
  const zexpr::ScalarSpec rho = zexpr::ScalarSpec::parse_real(2, "re(z1^2) + 2*abs2(z1) + abs2(z2)");
  for (int i = 0; i < 20; ++i) {
    const CVec z = oracle::random_point(rng, 2);
    const MapJet2 phi = jet(h, z);
    const CVec zeta = random_gaussian(rng, 2);
    const ScalarJet2 rj = analytic_scalar_jet(rho, phi.value);
    const LeviDecomposition d = levi_terms(rj, phi, zeta);
    EXPECT_EQ(d.l1, 0.0);
    EXPECT_NEAR(d.total, levi_eval(levi_form(rj), apply_differential(phi, zeta)),
                1e-12 * (1 + std::abs(d.total)));
  }
}

TEST(Pdecheck, ViolatorL1MatchesFdComposite) {
  const zexpr::ScalarSpec rho = zexpr::ScalarSpec::parse_real(2, "re(z1) + abs2(z1) + abs2(z2)");
  const zexpr::PolyMapSpec m = spec(kViolator);
  const zexpr::CompiledMap map(m);
  const zexpr::CompiledScalar r(rho);
  const CVec z = CVec::Zero(2), zeta = CVec::Unit(2, 1);
  const ScalarJet2 fd = composite_jet_fd([&](const CVec& w) { return r.value(w); },
                                         [&](const CVec& w) { return map.eval(w); }, z);
  const LeviDecomposition d =
      pushforward_levi(analytic_scalar_jet(rho, map.eval(z)), map.jet(z), zeta, fd);
  EXPECT_NEAR(d.l1, 1.0, 1e-14);
  EXPECT_NEAR(d.l0, 1.0, 1e-14);
  EXPECT_LE(d.rel_gap, 1e-6);
}

TEST(Pdecheck, L0FormsAgreeAndSemidefiniteSourceGivesNonNegative) {
  Rng rng = substream(53, 0);
  for (int i = 0; i < 200; ++i) {
    std::vector<oracle::Poly> comps{oracle::plus_variable(oracle::random_poly(rng, 2), 0),
                                    oracle::plus_variable(oracle::random_poly(rng, 2), 1)};
    const CVec z = oracle::random_point(rng, 2);
    const MapJet2 phi = oracle::map_jet(comps, z);
    const Quadric q = random_convex_quadric(rng, phi.value, random_gaussian(rng, 2));
    const CVec zeta = random_gaussian(rng, 2);
    const LeviDecomposition d = levi_terms(q.jet(phi.value), phi, zeta);
    EXPECT_LE(std::abs(d.l0 - d.l0_nu_mu), 1e-9 * std::max(1.0, std::abs(d.l0)));
    EXPECT_GE(d.l0, -1e-10 * (std::abs(d.l0) + std::abs(d.l1)));
  }
}

TEST(Pdecheck, PullbackDzMatchesComposite) {
  const zexpr::PolyMapSpec m = spec({"z1 + conj(z2)*z1", "z2^2 + conj(z1)"});
  const zexpr::ScalarSpec rho = zexpr::ScalarSpec::parse_real(2, "re(z1*z2) + abs2(z1)");
  CVec z(2);
  z << Complex(0.2, 0.3), Complex(-0.5, 0.1);
  const zexpr::CompiledMap map(m);
  const CVec dz = pullback_dz(analytic_scalar_jet(rho, map.eval(z)).dz, map.jet(z));
  EXPECT_LE((dz - composite_jet_symbolic(rho.expr, m, z).dz).norm(), 1e-13);
}

TEST(Pdecheck, ConditionIII) {
  Rng rng = substream(54, 0);
  const MapJet2 p = jet({"z1 + conj(z1)^2", "z2"}, oracle::random_point(rng, 2));
  EXPECT_LE(condition_iii_residual(p, random_unit(rng, 2)), 1e-12);
  const MapJet2 v = jet(kViolator, CVec::Zero(2));
  EXPECT_NEAR(condition_iii_residual(v, CVec::Unit(2, 1)), 1.0, 1e-12);
  EXPECT_EQ(condition_iii_residual(v, CVec::Unit(2, 0)), 0.0);
  EXPECT_THROW(condition_iii_residual(v, CVec::Zero(2)), PreconditionError);
  const MapJet2 flat = jet({"z1*conj(z1)", "z1*conj(z1)"}, CVec::Zero(2));
  EXPECT_THROW(condition_iii_residual(flat, CVec::Unit(2, 0)), DegeneracyError);
}

TEST(Pdecheck, ConditionII) {
  Rng rng = substream(55, 0);
  const CVec z = oracle::random_point(rng, 2);
  EXPECT_LE(condition_ii_residual(jet({"z1 + z2^2", "z2"}, z), 16, rng), 1e-12);
  const MapJet2 v = jet(kViolator, CVec::Zero(2));
  EXPECT_GE(condition_ii_residual(v, 16, rng), 0.1);
  EXPECT_THROW(condition_ii_residual(v, 0, rng), PreconditionError);
  const CVec tr = trace_vector(v);
  EXPECT_LE((tr - CVec::Unit(2, 0)).norm(), 1e-14);
}

TEST(Pdecheck, Syst1DiffersByKappa) {
  Rng rng = substream(57, 0);
  const MapJet2 h = jet({"z1 + conj(z1)^2", "conj(z2)"}, oracle::random_point(rng, 2));
  EXPECT_LE(syst1_residual(h, 16, rng), 1e-12);
  const MapJet2 v = jet(kViolator, CVec::Zero(2));
  Rng a = substream(57, 1), b = substream(57, 1);
  EXPECT_NEAR(syst1_residual(v, 8, a), condition_ii_residual(v, 8, b, kLaplacianKappa), 1e-15);
}

TEST(Pdecheck, LinearizedResidual) {
  Rng rng = substream(58, 0);
  for (int i = 0; i < 20; ++i) {
    const CVec z = oracle::random_point(rng, 2);
    EXPECT_LE(linearized_residual(jet({"z1*conj(z1)", "z2 + conj(z2)^2"}, z)), 1e-10);
    EXPECT_LE(linearized_residual(jet({"z1^2", "z1*z2"}, z)), 1e-15);
  }
  EXPECT_GE(linearized_residual(jet(kViolator, CVec::Zero(2))), 0.1);
  EXPECT_LE(linearized_trace_residual(jet({"z1", "z2"}, CVec::Zero(2)), 8, rng), 1e-15);
}

TEST(Pdecheck, IIImpliesIII) {
  Rng rng = substream(59, 0);
  for (const auto& e : gallery()) {
    const zexpr::CompiledMap map(e.spec);
    for (int i = 0; i < 20; ++i) {
      const CVec z = oracle::random_point(rng, 2);
      const MapJet2 j = map.jet(z);
      if (differential_conditioning(j) < 1e-3) continue;
      if (condition_ii_residual(j, 16, rng) > 1e-9) continue;
      for (int k = 0; k < 10; ++k) EXPECT_LE(condition_iii_residual(j, random_unit(rng, 2)), 1e-7);
    }
  }
}

TEST(Pdecheck, ConditionResidualsBundle) {
  Rng rng = substream(60, 0);
  const ConditionResiduals r = condition_residuals(jet(kViolator, CVec::Zero(2)), CVec::Zero(2), 20, 16, rng);
  EXPECT_GE(r.trace_ii, 0.1);
  EXPECT_GT(r.span_iii, 0.1);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.holo, 0.0);
  EXPECT_NEAR(r.plurih, 1.0, 1e-15);
}

TEST(Pdecheck, Classification) {
  const Region ball{CVec::Zero(2), 1.0};
  ClassifyConfig config;
  config.samples = 100;
  EXPECT_EQ(classify_map(spec({"z1", "z2 + z1^2"}), ball, config).label, MapClass::holomorphic);
  EXPECT_EQ(classify_map(spec({"conj(z1)", "conj(z2)"}), ball, config).label,
            MapClass::antiholomorphic);
  EXPECT_EQ(classify_map(spec({"z1 + conj(z2)", "z2 + conj(z1)"}), ball, config).label,
            MapClass::pluriharmonic);
  EXPECT_EQ(classify_map(spec(kViolator), ball, config).label, MapClass::generic);
  EXPECT_THROW(classify_map(spec({"z1*conj(z1)", "z1*conj(z1)"}), ball, config), DegeneracyError);
}

TEST(Pdecheck, MapClassNames) {
  for (MapClass c : {MapClass::holomorphic, MapClass::antiholomorphic, MapClass::pluriharmonic,
                     MapClass::weakly_pluriharmonic, MapClass::generic}) {
    EXPECT_EQ(map_class_from_string(to_string(c)), c);
  }
  EXPECT_THROW(map_class_from_string("nope"), PreconditionError);
}

TEST(Pdecheck, DifferentialConditioning) {
  EXPECT_NEAR(differential_conditioning(jet({"z1", "z2"}, CVec::Zero(2))), 1.0, 1e-15);
  EXPECT_EQ(differential_conditioning(jet({"z1*conj(z1)", "z2"}, CVec::Zero(2))), 0.0);
}
