#include "levi/zexpr.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace levi;
using namespace levi::zexpr;

namespace {

CVec point(std::initializer_list<Complex> v) {
  CVec z(static_cast<Index>(v.size()));
  Index k = 0;
  for (Complex c : v) z[k++] = c;
  return z;
}

} // namespace

TEST(Zexpr, ParseStructure) {
  const Expr e = parse("z1 + conj(z2)^2", 2);
  EXPECT_EQ(e, Expr::sum({Expr::var(0), Expr::power(Expr::conj_var(1), 2)}));
  EXPECT_EQ(parse("abs2(z1)", 1), Expr::product({Expr::var(0), Expr::conj_var(0)}));
}

TEST(Zexpr, ParseErrors) {
  try {
    parse("z3", 2);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
    ASSERT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse("z1 +", 1), ParseError);
  EXPECT_THROW(parse("z1^17", 1), ParseError);
  EXPECT_THROW(parse("conj(z1", 1), ParseError);
  EXPECT_THROW(parse("z1 z1", 1), ParseError);
  EXPECT_THROW(parse("", 1), ParseError);
  EXPECT_THROW(parse("sin(z1)", 1), ParseError);
  try {
    parse("z1 + * z1", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
}

TEST(Zexpr, EvalExamples) {
  EXPECT_NEAR(std::abs(eval(parse("z1^2 + conj(z1)^2", 1), point({1.0})) - 2.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(eval(parse("abs2(z1)", 1), point({{3, 4}})) - 25.0), 0, 1e-13);
  EXPECT_NEAR(std::abs(eval(parse("re(z1) + im(z1)", 1), point({{3, 4}})) - 7.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(eval(parse("2i*z1 - i", 1), point({1.0})) - Complex(0, 1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(eval(parse("-z1^2", 1), point({2.0})) + 4.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(eval(parse("1.5e1*z1", 1), point({2.0})) - 30.0), 0, 1e-15);
}

TEST(Zexpr, EvalMatchesMonomialExpansion) {
  Rng rng = substream(21, 0);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 3;
    const oracle::Poly p = oracle::random_poly(rng, n, {5, 5, 1.0});
    const Expr e = parse(oracle::to_dsl(p), n);
    const CVec z = oracle::random_point(rng, n, 1.5);
    const Complex want = oracle::eval(p, z);
    EXPECT_LE(std::abs(eval(e, z) - want), 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(Zexpr, ParsePrintParseFixpoint) {
  Rng rng = substream(22, 0);
  std::vector<std::string> texts{"re(z1) + abs2(z1) + abs2(z2)", "-(z1 - conj(z2))^3",
                                 "im(z1*z2) - 2.5", "(1+2i)*conj(z1)^2*z2", "-i*z1", "0.1*(z1^2)^2"};
  for (int i = 0; i < 50; ++i) texts.push_back(oracle::to_dsl(oracle::random_poly(rng, 2)));
  for (const auto& t : texts) {
    const Expr e = parse(t, 2);
    const std::string printed = to_string(e);
    EXPECT_EQ(parse(printed, 2), e) << t << " -> " << printed;
  }
}

TEST(Zexpr, DerivativeRules) {
  const Expr e = parse("z1^2*conj(z1) + z2", 2);
  const CVec z = point({{0.5, -1}, {2, 0}});
  const Complex dz = eval(derivative(e, 0, Wirtinger::hol), z);
  const Complex dzbar = eval(derivative(e, 0, Wirtinger::anti), z);
  EXPECT_NEAR(std::abs(dz - 2.0 * z[0] * std::conj(z[0])), 0, 1e-14);
  EXPECT_NEAR(std::abs(dzbar - z[0] * z[0]), 0, 1e-14);
  EXPECT_TRUE(derivative(e, 1, Wirtinger::anti).is_zero());
  EXPECT_TRUE(derivative(parse("3", 1), 0, Wirtinger::hol).is_zero());
}

TEST(Zexpr, DerivativeMatchesMonomialOracle) {
  Rng rng = substream(23, 0);
  for (int i = 0; i < 100; ++i) {
    const oracle::Poly p = oracle::random_poly(rng, 2);
    const Expr e = parse(oracle::to_dsl(p), 2);
    const CVec z = oracle::random_point(rng, 2);
    for (int j = 0; j < 2; ++j) {
      const Complex a = eval(derivative(e, j, Wirtinger::hol), z);
      const Complex b = eval(derivative(e, j, Wirtinger::anti), z);
      EXPECT_LE(std::abs(a - oracle::eval(oracle::d_z(p, j), z)), 1e-12);
      EXPECT_LE(std::abs(b - oracle::eval(oracle::d_zbar(p, j), z)), 1e-12);
    }
  }
}

TEST(Zexpr, ConjugateEvaluatesToConjugate) {
  Rng rng = substream(24, 0);
  for (int i = 0; i < 50; ++i) {
    const Expr e = parse(oracle::to_dsl(oracle::random_poly(rng, 2)), 2);
    const CVec z = oracle::random_point(rng, 2);
    EXPECT_LE(std::abs(eval(conjugate(e), z) - std::conj(eval(e, z))), 1e-13);
  }
}

TEST(Zexpr, SubstituteComposes) {
  const Expr outer = parse("z1*conj(z2) + z2^2", 2);
  const std::vector<Expr> inner{parse("z1 + conj(z2)", 2), parse("2*z1*z2", 2)};
  const Expr composite = substitute(outer, inner);
  const CVec z = point({{0.1, 0.2}, {-0.3, 0.4}});
  CVec w(2);
  w << eval(inner[0], z), eval(inner[1], z);
  EXPECT_LE(std::abs(eval(composite, z) - eval(outer, w)), 1e-14);
  EXPECT_THROW(substitute(outer, std::vector<Expr>{inner[0]}), DimensionError);
}

TEST(Zexpr, RealnessChecks) {
  EXPECT_TRUE(is_real_valued(parse("re(z1) + abs2(z1) + abs2(z2)", 2), 2));
  EXPECT_TRUE(is_real_valued(parse("z1^2 + conj(z1)^2", 1), 1));
  EXPECT_FALSE(is_real_valued(parse("z1", 1), 1));
  EXPECT_FALSE(is_real_valued(parse("i*abs2(z1)", 1), 1));
  EXPECT_THROW(ScalarSpec::parse_real(1, "z1 + 1"), RealnessError);
  EXPECT_FALSE(ScalarSpec::parse(1, "z1").real_valued);
  EXPECT_TRUE(ScalarSpec::parse(1, "re(z1)").real_valued);
}

TEST(Zexpr, CanonicalizeOrdersChildren) {
  EXPECT_EQ(canonicalize(parse("z2 + z1", 2)), canonicalize(parse("z1 + z2", 2)));
  EXPECT_EQ(canonicalize(parse("conj(z1)*z1", 1)), canonicalize(parse("z1*conj(z1)", 1)));
  EXPECT_EQ(max_variable_index(parse("z1 + conj(z3)", 3)), 2);
  EXPECT_EQ(max_variable_index(parse("2 + i", 3)), -1);
}

TEST(Zexpr, MapSpecs) {
  const PolyMapSpec m = PolyMapSpec::parse(2, {"z1 + conj(z2)^2", "z2"});
  EXPECT_EQ(m.component_strings().size(), 2u);
  EXPECT_EQ(PolyMapSpec::parse(2, m.component_strings()).components, m.components);
  EXPECT_THROW(PolyMapSpec::parse(2, {"z1"}), DimensionError);
  EXPECT_THROW(PolyMapSpec::parse(0, {}), DimensionError);
}

TEST(Zexpr, AnalyticJets) {
  const CVec z = point({{0.3, 0.1}, {-0.2, 0.5}});
  const MapJet2 id = analytic_map_jet(PolyMapSpec::parse(2, {"z1", "z2"}), z);
  EXPECT_EQ(id.jhol, CMat::Identity(2, 2));
  EXPECT_EQ(id.janti, CMat::Zero(2, 2));
  EXPECT_EQ(max_abs(id.mixed), 0.0);

  const MapJet2 v = analytic_map_jet(PolyMapSpec::parse(2, {"z1 + z2*conj(z2)", "z2"}), CVec::Zero(2));
  EXPECT_EQ(v.jhol, CMat::Identity(2, 2));
  EXPECT_EQ(v.janti, CMat::Zero(2, 2));
  EXPECT_EQ(v.mixed[0](1, 1), Complex(1, 0));
  EXPECT_EQ(max_abs(v.mixed[1]), 0.0);
  EXPECT_EQ(std::abs(v.mixed[0](0, 0)) + std::abs(v.mixed[0](0, 1)) + std::abs(v.mixed[0](1, 0)), 0.0);

  const MapJet2 c = analytic_map_jet(PolyMapSpec::parse(2, {"conj(z1)", "conj(z2)"}), z);
  EXPECT_EQ(c.jhol, CMat::Zero(2, 2));
  EXPECT_EQ(c.janti, CMat::Identity(2, 2));

  const ScalarJet2 s = analytic_scalar_jet(ScalarSpec::parse_real(2, "abs2(z1)+abs2(z2)"), z);
  EXPECT_LE((s.dz - z.conjugate()).norm(), 1e-15);
  EXPECT_EQ(s.hzz, CMat::Zero(2, 2));
  EXPECT_EQ(s.hzzbar, CMat::Identity(2, 2));

  const ScalarJet2 r = analytic_scalar_jet(ScalarSpec::parse_real(2, "re(z1)"), z);
  EXPECT_NEAR(std::abs(r.dz[0] - 0.5), 0, 1e-15);
  EXPECT_EQ(r.dz[1], Complex(0, 0));
  EXPECT_EQ(r.hzzbar, CMat::Zero(2, 2));

  const ScalarJet2 q =
      analytic_scalar_jet(ScalarSpec::parse_real(2, "z1^2+conj(z1)^2+z2^2+conj(z2)^2 + 0.5*abs2(z1) + "
                                                   "0.5*abs2(z2)"),
                          z);
  EXPECT_LE(max_abs(CMat(q.hzz - 2.0 * CMat::Identity(2, 2))), 1e-15);
  EXPECT_LE(max_abs(CMat(q.hzzbar - 0.5 * CMat::Identity(2, 2))), 1e-15);
  EXPECT_THROW(analytic_scalar_jet(ScalarSpec::parse(1, "z1"), CVec::Zero(1)), RealnessError);
}
