#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ordtir/metrics.hpp"
#include "support/oracles.hpp"

namespace ordtir {
namespace {

constexpr double kTight = 1e-12;

EmbeddingConfig amp(int m, int tau = 1, EqualRule rule = EqualRule::group_smallest,
                    SortOrder order = SortOrder::ascending) {
  return {m, tau, order, rule, PatternKind::amp};
}

const std::vector<double> kFixture{1, 2, 2, 1, 0};

TEST(YsDivergence, Examples) {
  EXPECT_EQ(ys_divergence(0.5, 0.5), 0.0);
  EXPECT_EQ(ys_divergence(0.0, 0.0), 0.0);
  for (double p : {0.0, 0.1, 0.37, 1.0}) EXPECT_DOUBLE_EQ(ys_divergence(p, 0.0), p);
  EXPECT_NEAR(ys_divergence(0.5, 0.25), 1.0 / 6.0, kTight);
  EXPECT_EQ(ys_divergence(0.25, 0.5), ys_divergence(0.5, 0.25));
  EXPECT_THROW(ys_divergence(-0.1, 0.2), std::invalid_argument);
  EXPECT_THROW(ys_divergence(0.2, 1.5), std::invalid_argument);
}

TEST(TirTas, HandCountedFixture) {
  EXPECT_NEAR(p_tir(kFixture, amp(2)), 1.0 / 6.0, kTight);
  EXPECT_NEAR(p_tas(kFixture, amp(2)), 1.0 / 6.0, kTight);
  const auto occ = amp(2, 1, EqualRule::occurrence);
  EXPECT_NEAR(p_tir(kFixture, occ), 0.5 * (0.15 + 1.0 / 6.0), kTight);
  EXPECT_NEAR(p_tas(kFixture, occ), 0.0, kTight);
}

TEST(TirTas, SymmetricSeriesAreZero) {
  const std::vector<double> constant(50, 3.0);
  std::vector<double> alternating;
  for (int i = 0; i < 51; ++i) alternating.push_back(i % 2 ? 2.0 : 1.0);
  for (int m = 2; m <= 4; ++m) {
    EXPECT_EQ(p_tir(constant, amp(m)), 0.0);
    EXPECT_EQ(p_tas(constant, amp(m)), 0.0);
  }
  EXPECT_EQ(p_tas(alternating, amp(2)), 0.0);
}

TEST(TirTas, RequireAmp) {
  EmbeddingConfig c = amp(3);
  c.kind = PatternKind::orp;
  EXPECT_THROW(p_tir(kFixture, c), std::invalid_argument);
  EXPECT_THROW(p_tas(kFixture, c), std::invalid_argument);
  EXPECT_THROW(p_tir(std::vector<double>{1, 2}, amp(3)), std::invalid_argument);
}

TEST(TirTas, MatchesDefinitionOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    const int m = 2 + trial % 3;
    const int tau = 1 + trial % 2;
    const auto s = oracle::random_integer_series(rng, 60, 4);
    for (auto rule : {EqualRule::occurrence, EqualRule::group_smallest}) {
      const auto orule = rule == EqualRule::occurrence ? oracle::Rule::occurrence : oracle::Rule::smallest;
      ASSERT_NEAR(p_tir(s, amp(m, tau, rule)), oracle::tir(s, m, tau, orule), kTight);
    }
  }
}

TEST(TirTas, IdentityUnderGroupRule) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = oracle::random_integer_series(rng, 200, 2 + trial % 5);
    for (int m = 2; m <= 4; ++m) {
      for (int tau = 1; tau <= 4; ++tau) {
        for (auto order : {SortOrder::ascending, SortOrder::descending}) {
          const auto c = amp(m, tau, EqualRule::group_smallest, order);
          ASSERT_NEAR(p_tir(s, c), p_tas(s, c), kTight);
        }
      }
    }
  }
}

TEST(TirTas, AllFourCoincideWithoutTies) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(300);
    for (auto& v : s) v = normal(rng);
    const auto c = amp(2 + trial % 3, 1 + trial % 4);
    const auto r = compute_metrics(s, c);
    EXPECT_NEAR(r.p_tir, r.p_tas, kTight);
    EXPECT_NEAR(r.p_tir, r.noe_tir, kTight);
    EXPECT_NEAR(r.p_tir, r.noe_tas, kTight);
  }
}

TEST(TirTas, BoundsAndReversalInvariance) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = oracle::random_integer_series(rng, 30 + trial, 3);
    const std::vector<double> back(s.rbegin(), s.rend());
    for (auto rule : {EqualRule::occurrence, EqualRule::group_smallest}) {
      const auto c = amp(2 + trial % 3, 1, rule);
      const double tir = p_tir(s, c);
      const double tas = p_tas(s, c);
      ASSERT_GE(tir, 0.0);
      ASSERT_LE(tir, 1.0);
      ASSERT_GE(tas, 0.0);
      ASSERT_LE(tas, 1.0);
      ASSERT_NEAR(p_tir(back, c), tir, kTight);
      if (rule == EqualRule::group_smallest) ASSERT_NEAR(p_tas(back, c), tas, kTight);
    }
  }
}

TEST(TirTas, OrdinalInvariance) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_integer_series(rng, 120, 5);
    std::vector<double> warped(s);
    for (auto& v : warped) v = std::cbrt(v) * 10.0 + 4.0;
    const auto c = amp(3, 1 + trial % 3);
    const auto a = compute_metrics(s, c);
    const auto b = compute_metrics(warped, c);
    EXPECT_NEAR(a.p_tir, b.p_tir, kTight);
    EXPECT_NEAR(a.p_tas, b.p_tas, kTight);
    EXPECT_NEAR(a.pen, b.pen, kTight);
    EXPECT_NEAR(a.dip, b.dip, kTight);
    EXPECT_NEAR(a.des, b.des, kTight);
  }
}

TEST(M2ClosedForms, Examples) {
  const auto third = m2_closed_forms(1.0 / 3, 1.0 / 3, 1.0 / 3);
  EXPECT_NEAR(third.p_tir, 0.0, kTight);
  EXPECT_NEAR(third.p_tas, 0.0, kTight);
  EXPECT_NEAR(third.noe_tas, 2.0 / 9.0, kTight);

  const auto no_ties = m2_closed_forms(0.7, 0.3, 0.0);
  EXPECT_DOUBLE_EQ(no_ties.p_tir, no_ties.p_tas);
  EXPECT_DOUBLE_EQ(no_ties.p_tir, no_ties.noe_tir);
  EXPECT_DOUBLE_EQ(no_ties.p_tir, no_ties.noe_tas);

  const auto flat = m2_closed_forms(0.0, 0.0, 1.0);
  EXPECT_EQ(flat.p_tas, 0.0);
  EXPECT_EQ(flat.p_tir, 0.0);
  EXPECT_EQ(flat.noe_tas, 1.0);
  EXPECT_EQ(flat.noe_tir, 0.0);

  const auto fixture = m2_closed_forms(0.25, 0.5, 0.25);
  EXPECT_NEAR(fixture.noe_tir, 0.5 * (0.15 + 1.0 / 6.0), kTight);

  EXPECT_THROW(m2_closed_forms(0.5, 0.6, 0.0), std::invalid_argument);
  EXPECT_THROW(m2_closed_forms(-0.1, 0.6, 0.5), std::invalid_argument);
}

TEST(M2ClosedForms, AgreeWithGeneralEstimators) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const int tau = 1 + trial % 4;
    const auto s = oracle::random_integer_series(rng, 80, 2 + trial % 4);
    const auto ude = oracle::up_down_equal(s, tau);
    for (auto order : {SortOrder::ascending, SortOrder::descending}) {
      const auto closed = m2_closed_forms(ude.up, ude.down, ude.equal, order);
      const auto r = compute_metrics(s, amp(2, tau, EqualRule::group_smallest, order));
      ASSERT_NEAR(r.p_tir, closed.p_tir, kTight);
      ASSERT_NEAR(r.p_tas, closed.p_tas, kTight);
      ASSERT_NEAR(r.noe_tir, closed.noe_tir, kTight);
      ASSERT_NEAR(r.noe_tas, closed.noe_tas, kTight);
    }
  }
}

TEST(PermutationEntropy, Examples) {
  PatternDistribution one(EmbeddingConfig{2, 1});
  one.add(Pattern{1, 1}, 9);
  EXPECT_EQ(permutation_entropy(one), 0.0);

  PatternDistribution three(EmbeddingConfig{2, 1});
  three.add(Pattern{1, 2});
  three.add(Pattern{2, 1});
  three.add(Pattern{1, 1});
  EXPECT_NEAR(permutation_entropy(three), std::log(3.0), kTight);

  PatternDistribution uniform(EmbeddingConfig{3, 1});
  const auto all = enumerate_patterns(3, EqualRule::occurrence);
  for (const auto& p : all) uniform.add(p, 5);
  EXPECT_NEAR(permutation_entropy(uniform), std::log(6.0), kTight);

  PatternDistribution skewed(EmbeddingConfig{3, 1});
  for (std::size_t i = 0; i < all.size(); ++i) skewed.add(all[i], 1 + i);
  EXPECT_LT(permutation_entropy(skewed), std::log(6.0));
}

TEST(Des, Examples) {
  EXPECT_EQ(des(std::vector<double>(10, 4.0), 1), 1.0);
  EXPECT_EQ(des(std::vector<double>{1, 2, 3, 4, 5}, 1), 0.0);
  EXPECT_EQ(des(std::vector<double>{1, 1, 2, 2, 3}, 1), 0.5);
  EXPECT_EQ(des(std::vector<double>{1, 5, 1, 5, 1}, 2), 1.0);
  EXPECT_DOUBLE_EQ(des(std::vector<double>{1, 5, 1, 6, 1}, 2), 2.0 / 3.0);
  EXPECT_EQ(des(std::vector<double>{1.0, 1.05, 2.0}, 1, 0.1), 0.5);
  EXPECT_THROW(des(std::vector<double>{1, 2}, 2), std::invalid_argument);
  EXPECT_THROW(des(std::vector<double>{1, 2, 3}, 1, -1.0), std::invalid_argument);
  EXPECT_THROW(des(std::vector<double>{1, 2, 3}, 0), std::invalid_argument);
}

TEST(Dip, Examples) {
  PatternDistribution paired(EmbeddingConfig{2, 1});
  paired.add(Pattern{1, 2}, 5);
  paired.add(Pattern{2, 1}, 5);
  EXPECT_EQ(dip(paired), 0.0);

  PatternDistribution lonely(EmbeddingConfig{3, 1});
  lonely.add(Pattern{1, 2, 3}, 5);
  lonely.add(Pattern{2, 1, 3}, 5);
  EXPECT_EQ(dip(lonely), 1.0);
  EXPECT_EQ(dip(lonely, DipMode::distinct), 1.0);

  PatternDistribution mixed(EmbeddingConfig{3, 1});
  mixed.add(Pattern{1, 2, 3}, 6);
  mixed.add(Pattern{3, 2, 1}, 2);
  mixed.add(Pattern{1, 3, 2}, 1);
  mixed.add(Pattern{1, 3, 1}, 1);  // self-symmetric, never individual
  EXPECT_DOUBLE_EQ(dip(mixed), 0.1);
  EXPECT_DOUBLE_EQ(dip(mixed, DipMode::distinct), 0.25);
}

TEST(ComputeMetrics, ConstantSeries) {
  const std::vector<double> s(100, 7.0);
  const auto r = compute_metrics(s, amp(3), {}, "c");
  EXPECT_EQ(r.epoch_id, "c");
  EXPECT_EQ(r.n_windows, 98u);
  EXPECT_EQ(r.p_tir, 0.0);
  EXPECT_EQ(r.p_tas, 0.0);
  EXPECT_EQ(r.noe_tir, 0.0);
  EXPECT_EQ(r.noe_tas, 1.0);
  EXPECT_EQ(r.pen, 0.0);
  EXPECT_EQ(r.des, 1.0);
  EXPECT_EQ(r.dip, 0.0);
}

TEST(ComputeMetrics, DesThresholdAndDipMode) {
  const std::vector<double> s{0.0, 0.05, 1.0, 1.02, 3.0, 2.0};
  MetricOptions opts;
  opts.des_threshold = 0.1;
  opts.dip_mode = DipMode::distinct;
  const auto r = compute_metrics(s, amp(2), opts);
  EXPECT_DOUBLE_EQ(r.des, 0.4);
  EXPECT_EQ(r.dip, 0.0);
}

}  // namespace
}  // namespace ordtir
