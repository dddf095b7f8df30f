#include <gtest/gtest.h>

#include "orthokin/topology.hpp"

using namespace orthokin;

TEST(Topology, FourCuspReport) {
  const auto r = analyze({1, 2, 1.5, 1});
  EXPECT_TRUE(r.generic());
  EXPECT_EQ(r.analytic.domain, DomainId::D2);
  EXPECT_EQ(r.cusps.count(), 4);
  EXPECT_TRUE(r.cuspidal.cuspidal);
  EXPECT_FALSE(r.empirical);
  EXPECT_FALSE(r.agreement);
  EXPECT_EQ(r.nearest.id, SurfaceId::C2);
}

TEST(Topology, EmpiricalAgreement) {
  TopologyOptions opt;
  opt.empirical = true;
  const auto r = analyze({1, 3, 4, 3}, opt);
  ASSERT_TRUE(r.empirical);
  ASSERT_TRUE(r.agreement);
  EXPECT_TRUE(*r.agreement);
  EXPECT_EQ(r.empirical->domain, DomainId::D3);
}

TEST(Topology, ZeroOffsetNonGeneric) {
  const auto r = analyze({1, 2, 1.5, 0});
  EXPECT_FALSE(r.generic());
  EXPECT_TRUE(r.cusps.cusps.empty());
}

TEST(Topology, OnSurfaceNonGeneric) {
  const auto r = analyze({1, 2, 2.1082, 1});
  EXPECT_FALSE(r.generic());
  EXPECT_FALSE(r.analytic.domain);
}

TEST(Topology, ScaledDesignSameLabels) {
  const auto a = analyze({1, 3, 6, 3});
  const auto b = analyze({2, 6, 12, 6});
  EXPECT_EQ(a.analytic.domain, b.analytic.domain);
  EXPECT_EQ(a.cusps.count(), b.cusps.count());
  EXPECT_EQ(a.cuspidal.cuspidal, b.cuspidal.cuspidal);
  ASSERT_EQ(a.cusps.count(), 4);
  EXPECT_EQ(a.cusps.count_on(BoundaryRole::Internal), 2);
}
