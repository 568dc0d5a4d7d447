#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "xfode/it2fls.hpp"

using namespace xfode;

namespace {

It2Fls make_fls(PartitionKind kind, int P, int outputs, double height, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> raw(static_cast<std::size_t>(mf_param_count(kind, P, false)));
  for (double& v : raw) v = n(rng);
  It2Fls fls;
  fls.partition = constrain<double>(kind, P, false, raw);
  for (double& h : fls.partition.height) h = height;
  fls.outputs = outputs;
  fls.consequents.resize(static_cast<std::size_t>(2 * P * outputs));
  for (double& v : fls.consequents) v = n(rng);
  return fls;
}

}  // namespace

TEST(TypeReduction, SymmetricTypeOneCase) {
  const FiringInterval f{{0.5, 0.5}, {0.5, 0.5}};
  const std::vector<double> d{0.0, 1.0};
  const Interval r = km_type_reduce(f, d);
  EXPECT_DOUBLE_EQ(r.lower, 0.5);
  EXPECT_DOUBLE_EQ(r.upper, 0.5);
}

TEST(TypeReduction, TwoRuleWorkedExample) {
  const FiringInterval f{{0.4, 0.3}, {0.8, 0.6}};
  const std::vector<double> d{0.0, 1.0};
  const auto [lo, hi] = oracle::corner_extremes(f.lower, f.upper, d);
  EXPECT_NEAR(lo, 0.3 / 1.1, 1e-15);
  EXPECT_NEAR(hi, 0.6, 1e-15);

  const Interval km = km_type_reduce(f, d);
  EXPECT_NEAR(km.lower, 0.272727272727, 1e-12);
  EXPECT_NEAR(km.upper, 0.6, 1e-15);
  const auto two = two_rule_type_reduce(0.4, 0.8, 0.0, 0.3, 0.6, 1.0);
  EXPECT_NEAR(two.lower, lo, 1e-15);
  EXPECT_NEAR(two.upper, hi, 1e-15);
  const Interval vo = vertex_oracle(f, d);
  EXPECT_NEAR(vo.lower, lo, 1e-15);
  EXPECT_NEAR(vo.upper, hi, 1e-15);
  EXPECT_NEAR(0.5 * (km.lower + km.upper), 0.436364, 1e-6);
}

TEST(TypeReduction, ThreeRuleCornerValue) {
  const FiringInterval f{{0.2, 0.3, 0.1}, {0.5, 0.9, 0.4}};
  const std::vector<double> d{1.0, 2.0, 3.0};
  const Interval km = km_type_reduce(f, d);
  EXPECT_NEAR(km.lower, 14.0 / 9.0, 1e-14);
  EXPECT_NEAR(km.upper, 20.0 / 9.0, 1e-14);
}

TEST(TypeReduction, TwoRuleDegenerateCases) {
  const auto single = two_rule_type_reduce(0.3, 0.6, 2.5, 0.0, 0.0, 4.0);
  EXPECT_DOUBLE_EQ(single.lower, 2.5);
  EXPECT_DOUBLE_EQ(single.upper, 2.5);
  const auto tie = two_rule_type_reduce(0.2, 0.7, 1.25, 0.1, 0.5, 1.25);
  EXPECT_DOUBLE_EQ(tie.lower, 1.25);
  EXPECT_DOUBLE_EQ(tie.upper, 1.25);
  const auto t1 = two_rule_type_reduce(0.3, 0.3, 0.0, 0.6, 0.6, 3.0);
  EXPECT_DOUBLE_EQ(t1.lower, t1.upper);
  EXPECT_NEAR(t1.lower, 2.0, 1e-15);
  EXPECT_THROW(two_rule_type_reduce(0.0, 0.0, 0.0, 0.0, 0.0, 1.0), DegenerateFiring);
}

TEST(TypeReduction, ZeroFiringIsDegenerate) {
  const FiringInterval f{{0.0, 0.0}, {0.0, 1e-13}};
  const std::vector<double> d{0.0, 1.0};
  EXPECT_THROW(km_type_reduce(f, d), DegenerateFiring);
}

TEST(TypeReduction, OracleRejectsLargeRuleBases) {
  const FiringInterval f{std::vector<double>(21, 0.1), std::vector<double>(21, 0.2)};
  const std::vector<double> d(21, 0.0);
  EXPECT_THROW(vertex_oracle(f, d), ConfigError);
}

TEST(TypeReduction, RandomInstancesMatchCornerEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int P = 2 + trial % 7;
    FiringInterval f;
    std::vector<double> d;
    for (int p = 0; p < P; ++p) {
      const double hi = u(rng);
      f.upper.push_back(hi);
      f.lower.push_back(hi * u(rng));
      d.push_back(6.0 * u(rng) - 3.0);
    }
    if (trial % 5 == 0) d[1] = d[0];  // ties
    const auto [lo, hi] = oracle::corner_extremes(f.lower, f.upper, d);
    const Interval km = km_type_reduce(f, d);
    ASSERT_NEAR(km.lower, lo, 1e-9);
    ASSERT_NEAR(km.upper, hi, 1e-9);
    ASSERT_LE(km.lower, km.upper);
  }
}

TEST(Inference, CenterFiringAndConsequents) {
  std::mt19937_64 rng(1);
  It2Fls fls = make_fls(PartitionKind::ps1, 5, 1, 0.7, rng);
  const double c = fls.partition.center[2];
  const FiringInterval f = firing_intervals(fls, c);
  for (int p = 0; p < 5; ++p) {
    EXPECT_DOUBLE_EQ(f.upper[p], p == 2 ? 1.0 : 0.0);
    EXPECT_DOUBLE_EQ(f.lower[p], p == 2 ? 0.7 : 0.0);
  }
  for (int p = 0; p < 5; ++p) {
    fls.consequents[2 * p] = 0.0;
    fls.consequents[2 * p + 1] = 1.75;
  }
  const Trs t = infer(fls, 0.3);
  EXPECT_DOUBLE_EQ(t.lower[0], 1.75);
  EXPECT_DOUBLE_EQ(t.upper[0], 1.75);
  EXPECT_DOUBLE_EQ(t.crisp[0], 1.75);

  fls.consequents[0] = 1.0;
  fls.consequents[1] = 0.0;
  EXPECT_DOUBLE_EQ(fls.consequent(0, 0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(consequent_values(fls, 0.0)[0], 0.0);
}

TEST(Inference, ConsequentsUseUnclampedInput) {
  std::mt19937_64 rng(2);
  It2Fls fls = make_fls(PartitionKind::ps1, 3, 1, 1.0, rng);
  for (int p = 0; p < 3; ++p) {
    fls.consequents[2 * p] = 1.0;
    fls.consequents[2 * p + 1] = 0.0;
  }
  const double far = fls.partition.upper_bound() + 10.0;
  EXPECT_NEAR(infer(fls, far).crisp[0], far, 1e-12);
}

TEST(Inference, TypeOneCollapsesInterval) {
  std::mt19937_64 rng(4);
  for (PartitionKind kind : {PartitionKind::ps1, PartitionKind::ps2, PartitionKind::ps3}) {
    const It2Fls fls = make_fls(kind, 5, 2, 1.0, rng);
    for (double z = -3.0; z <= 3.0; z += 0.25) {
      const FiringInterval f = firing_intervals(fls, z);
      EXPECT_EQ(f.lower, f.upper);
      const Trs t = infer(fls, z);
      EXPECT_NEAR(t.lower[0], t.upper[0], 1e-14);
      EXPECT_NEAR(t.crisp[1], t.lower[1], 1e-14);
    }
  }
}

TEST(Inference, TwoRulePathAgreesWithFullKm) {
  std::mt19937_64 rng(8);
  for (PartitionKind kind : {PartitionKind::ps1, PartitionKind::ps2, PartitionKind::ps3}) {
    const It2Fls fls = make_fls(kind, 5, 2, 0.6, rng);
    for (double z = -4.0; z <= 4.0; z += 0.1) {
      const Trs t = infer(fls, z);
      const FiringInterval f = firing_intervals(fls, z);
      const auto d = consequent_values(fls, z);
      for (int o = 0; o < 2; ++o) {
        std::vector<double> col;
        for (int p = 0; p < 5; ++p) col.push_back(d[p * 2 + o]);
        const Interval km = km_type_reduce(f, col);
        EXPECT_NEAR(t.lower[o], km.lower, 1e-12);
        EXPECT_NEAR(t.upper[o], km.upper, 1e-12);
      }
    }
  }
}

TEST(Inference, GaussFallbackFarFromAllCenters) {
  It2Fls fls;
  const std::vector<double> c{0.0, 1.0}, s{0.1, 0.1}, h{0.9, 0.9};
  fls.partition = build_gauss<double>(c, s, h);
  fls.outputs = 1;
  fls.consequents = {0.0, 5.0, 0.0, 7.0};
  const Trs t = infer(fls, 100.0);
  EXPECT_TRUE(t.degenerate);
  EXPECT_DOUBLE_EQ(t.crisp[0], 7.0);
  EXPECT_DOUBLE_EQ(t.lower[0], 7.0);
  EXPECT_FALSE(infer(fls, 0.4).degenerate);
}
