#include "levi/common.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace levi;

TEST(Common, RealifyRoundTrip) {
  CVec z(2);
  z << Complex(1, 2), Complex(-3, 4);
  const RVec x = realify(z);
  EXPECT_EQ(x.size(), 4);
  EXPECT_DOUBLE_EQ(x[0], 1);
  EXPECT_DOUBLE_EQ(x[1], -3);
  EXPECT_DOUBLE_EQ(x[2], 2);
  EXPECT_DOUBLE_EQ(x[3], 4);
  EXPECT_EQ(complexify(x), z);
}

TEST(Common, HermitianProductConjugatesSecondArgument) {
  CVec a(1), b(1);
  a << Complex(0, 1);
  b << Complex(0, 1);
  EXPECT_EQ(hermitian_product(a, b), Complex(1, 0));
}

TEST(Common, RequireDimThrows) {
  EXPECT_THROW(require_dim(CVec::Zero(3), 2, "test"), DimensionError);
  EXPECT_NO_THROW(require_dim(CVec::Zero(2), 2, "test"));
}

TEST(Common, SubstreamsDependOnlyOnSeedAndIndex) {
  Rng a = substream(7, 3), b = substream(7, 3), c = substream(7, 4);
  const auto va = a(), vb = b(), vc = c();
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}

TEST(Common, RandomSamplersStayInRange) {
  Rng rng = substream(1, 0);
  for (int i = 0; i < 200; ++i) {
    EXPECT_NEAR(random_unit(rng, 3).norm(), 1.0, 1e-14);
    EXPECT_LE(random_in_ball(rng, CVec::Zero(2), 0.5).norm(), 0.5 + 1e-15);
    const double u = random_uniform(rng, -2, 3);
    EXPECT_GE(u, -2);
    EXPECT_LE(u, 3);
  }
}

TEST(Common, ThreadCapFromEnv) {
  ::setenv("LEVI_LAB_THREADS", "3", 1);
  EXPECT_EQ(thread_cap_from_env(), 3u);
  EXPECT_GE(worker_count(), 1u);
  ::setenv("LEVI_LAB_THREADS", "zero", 1);
  EXPECT_THROW(thread_cap_from_env(), ConfigError);
  ::setenv("LEVI_LAB_THREADS", "0", 1);
  EXPECT_THROW(thread_cap_from_env(), ConfigError);
  ::unsetenv("LEVI_LAB_THREADS");
  EXPECT_EQ(thread_cap_from_env(), 0u);
}

TEST(Common, ParallelForVisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Common, ParallelForPropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 5) throw DegeneracyError("boom");
               }),
               DegeneracyError);
}
