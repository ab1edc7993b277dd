#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "ordtir/patterns.hpp"
#include "support/oracles.hpp"

namespace ordtir {
namespace {

EmbeddingConfig cfg(int m, PatternKind kind, EqualRule rule = EqualRule::group_smallest,
                    SortOrder order = SortOrder::ascending, int tau = 1) {
  return {m, tau, order, rule, kind};
}

std::vector<int> as_ints(const Pattern& p) { return {p.ranks().begin(), p.ranks().end()}; }

TEST(ExtractPattern, TieFreeWindow) {
  const std::vector<double> w{5, 1, 7, 3, 9};
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::orp)), (Pattern{2, 4, 1, 3, 5}));
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::amp)), (Pattern{3, 1, 4, 2, 5}));
}

TEST(ExtractPattern, TiesInOccurrenceOrder) {
  const std::vector<double> w{5, 1, 9, 1, 7};
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::orp, EqualRule::occurrence)),
            (Pattern{2, 4, 1, 5, 3}));
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::amp, EqualRule::occurrence)),
            (Pattern{3, 1, 5, 2, 4}));
}

TEST(ExtractPattern, TiesTakeGroupSmallest) {
  const std::vector<double> w{5, 1, 9, 1, 7};
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::orp)), (Pattern{2, 2, 1, 5, 3}));
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::amp)), (Pattern{3, 1, 5, 1, 4}));
}

TEST(ExtractPattern, TiesTakeGroupLargest) {
  const std::vector<double> w{5, 1, 9, 1, 7};
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::orp, EqualRule::group_largest)),
            (Pattern{4, 4, 1, 5, 3}));
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::amp, EqualRule::group_largest)),
            (Pattern{3, 2, 5, 2, 4}));
}

TEST(ExtractPattern, AllEqualAndPeak) {
  EXPECT_EQ(extract_pattern(std::vector<double>{2.5, 2.5, 2.5}, cfg(3, PatternKind::amp)),
            (Pattern{1, 1, 1}));
  EXPECT_EQ(extract_pattern(std::vector<double>{1, 2, 1}, cfg(3, PatternKind::amp)),
            (Pattern{1, 3, 1}));
}

TEST(ExtractPattern, DescendingOrder) {
  const std::vector<double> w{5, 1, 7, 3, 9};
  EXPECT_EQ(extract_pattern(w, cfg(5, PatternKind::amp, EqualRule::group_smallest,
                                   SortOrder::descending)),
            (Pattern{3, 5, 2, 4, 1}));
  // occurrence ties become a "down" under descending order
  EXPECT_EQ(extract_pattern(std::vector<double>{4, 4}, cfg(2, PatternKind::amp, EqualRule::occurrence,
                                                           SortOrder::descending)),
            (Pattern{1, 2}));
}

TEST(ExtractPattern, Errors) {
  EXPECT_THROW(extract_pattern(std::vector<double>{1, 2}, cfg(3, PatternKind::amp)),
               std::invalid_argument);
  EXPECT_THROW(extract_pattern(std::vector<double>{1, std::nan(""), 2}, cfg(3, PatternKind::amp)),
               std::invalid_argument);
  EXPECT_THROW(extract_pattern(std::vector<double>{1, std::numeric_limits<double>::infinity()},
                               cfg(2, PatternKind::amp)),
               std::invalid_argument);
  EXPECT_THROW(extract_pattern(std::vector<double>{1}, cfg(1, PatternKind::amp)),
               std::invalid_argument);
}

// Every window over a small alphabet, every rule, kind and order, against
// the counting oracle.
TEST(ExtractPattern, MatchesCountingOracleExhaustively) {
  for (int m = 2; m <= 5; ++m) {
    std::vector<double> w(static_cast<std::size_t>(m), 0.0);
    const int alphabet = 4;
    while (true) {
      for (auto rule : {EqualRule::occurrence, EqualRule::group_smallest, EqualRule::group_largest}) {
        const auto orule = rule == EqualRule::occurrence       ? oracle::Rule::occurrence
                           : rule == EqualRule::group_smallest ? oracle::Rule::smallest
                                                               : oracle::Rule::largest;
        for (auto order : {SortOrder::ascending, SortOrder::descending}) {
          const bool desc = order == SortOrder::descending;
          ASSERT_EQ(as_ints(extract_pattern(w, cfg(m, PatternKind::amp, rule, order))),
                    oracle::amp(w, orule, desc));
          ASSERT_EQ(as_ints(extract_pattern(w, cfg(m, PatternKind::orp, rule, order))),
                    oracle::orp(w, orule, desc));
        }
      }
      int pos = m - 1;
      while (pos >= 0 && w[pos] == alphabet - 1) w[pos--] = 0.0;
      if (pos < 0) break;
      w[pos] += 1.0;
    }
  }
}

TEST(PatternProperties, OrpAndAmpAreInversesWithoutTies) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 2 + trial % 6;
    std::vector<double> w(static_cast<std::size_t>(m));
    for (auto& v : w) v = normal(rng);
    const auto o = extract_pattern(w, cfg(m, PatternKind::orp));
    const auto a = extract_pattern(w, cfg(m, PatternKind::amp));
    for (int k = 0; k < m; ++k) ASSERT_EQ(a[static_cast<std::size_t>(o[k] - 1)], k + 1);
  }
}

TEST(PatternProperties, NegationReversesOrpWithoutTies) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 2 + trial % 6;
    std::vector<double> w(static_cast<std::size_t>(m));
    for (auto& v : w) v = normal(rng);
    std::vector<double> neg(w);
    for (auto& v : neg) v = -v;
    ASSERT_EQ(extract_pattern(neg, cfg(m, PatternKind::orp)),
              reverse_pattern(extract_pattern(w, cfg(m, PatternKind::orp))));
  }
}

TEST(PatternProperties, MonotoneTransformInvariance) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 2 + trial % 5;
    std::vector<double> w(static_cast<std::size_t>(m));
    for (auto& v : w) v = static_cast<double>(rng() % 4);
    std::vector<double> shifted(w), warped(w);
    for (auto& v : shifted) v += 17.25;
    for (auto& v : warped) v = std::exp(v) * 3.0 - 1.0;
    for (auto kind : {PatternKind::orp, PatternKind::amp}) {
      for (auto rule : {EqualRule::occurrence, EqualRule::group_smallest}) {
        const auto c = cfg(m, kind, rule);
        ASSERT_EQ(extract_pattern(shifted, c), extract_pattern(w, c));
        ASSERT_EQ(extract_pattern(warped, c), extract_pattern(w, c));
      }
    }
  }
}

TEST(ReversePattern, Examples) {
  EXPECT_EQ(reverse_pattern(Pattern{1, 2, 3}), (Pattern{3, 2, 1}));
  EXPECT_EQ(reverse_pattern(Pattern{1, 3, 1}), (Pattern{1, 3, 1}));
  EXPECT_EQ(reverse_pattern(Pattern{3, 1, 1}), (Pattern{1, 1, 3}));
  const std::vector<double> w{2, 1, 1};
  const std::vector<double> rw{1, 1, 2};
  EXPECT_EQ(extract_pattern(rw, cfg(3, PatternKind::amp)),
            reverse_pattern(extract_pattern(w, cfg(3, PatternKind::amp))));
}

TEST(SelfSymmetry, Examples) {
  EXPECT_TRUE(is_self_symmetric(Pattern{1, 1}));
  EXPECT_FALSE(is_self_symmetric(Pattern{1, 2}));
  EXPECT_TRUE(is_self_symmetric(Pattern{2, 1, 2}));
  EXPECT_TRUE(is_self_symmetric(Pattern{1, 3, 1}));
}

TEST(EnumeratePatterns, Counts) {
  EXPECT_EQ(enumerate_patterns(2, EqualRule::occurrence),
            (std::vector<Pattern>{Pattern{1, 2}, Pattern{2, 1}}));
  EXPECT_EQ(enumerate_patterns(2, EqualRule::group_smallest),
            (std::vector<Pattern>{Pattern{1, 1}, Pattern{1, 2}, Pattern{2, 1}}));
  EXPECT_EQ(enumerate_patterns(3, EqualRule::group_smallest).size(), 13u);
  EXPECT_EQ(enumerate_patterns(4, EqualRule::occurrence).size(), 24u);
  // ordered set partitions (Fubini numbers) once ties are kept
  EXPECT_EQ(enumerate_patterns(4, EqualRule::group_smallest).size(), 75u);
  EXPECT_EQ(enumerate_patterns(5, EqualRule::group_largest).size(), 541u);
  EXPECT_THROW(enumerate_patterns(1, EqualRule::occurrence), std::invalid_argument);
  EXPECT_THROW(enumerate_patterns(8, EqualRule::occurrence), std::invalid_argument);
}

TEST(EnumeratePatterns, ThreeSelfSymmetricAtDimensionThree) {
  std::set<Pattern> symmetric;
  for (const auto& p : enumerate_patterns(3, EqualRule::group_smallest)) {
    if (is_self_symmetric(p)) symmetric.insert(p);
  }
  EXPECT_EQ(symmetric, (std::set<Pattern>{Pattern{1, 1, 1}, Pattern{1, 3, 1}, Pattern{2, 1, 2}}));
}

TEST(PatternCode, InjectiveOverEnumeration) {
  for (int m = 2; m <= 6; ++m) {
    std::set<std::uint64_t> codes;
    const auto all = enumerate_patterns(m, EqualRule::group_smallest);
    for (const auto& p : all) {
      codes.insert(p.code());
      ASSERT_EQ(Pattern::from_code(p.code()), p);
    }
    EXPECT_EQ(codes.size(), all.size());
  }
  EXPECT_EQ((Pattern{1, 3, 1}).to_string(), "(1,3,1)");
}

TEST(ExtractAllPatterns, Examples) {
  const auto c = cfg(2, PatternKind::amp);
  auto d = extract_all_patterns(std::vector<double>{1, 2, 3, 4}, c);
  EXPECT_EQ(d.total(), 3u);
  EXPECT_EQ(d.distinct(), 1u);
  EXPECT_EQ(d.count(Pattern{1, 2}), 3u);

  d = extract_all_patterns(std::vector<double>{1, 1, 2, 1}, c);
  EXPECT_EQ(d.total(), 3u);
  EXPECT_EQ(d.count(Pattern{1, 1}), 1u);
  EXPECT_EQ(d.count(Pattern{1, 2}), 1u);
  EXPECT_EQ(d.count(Pattern{2, 1}), 1u);

  d = extract_all_patterns(std::vector<double>{1, 2, 1, 2, 1}, cfg(2, PatternKind::amp,
                                                                   EqualRule::group_smallest,
                                                                   SortOrder::ascending, 2));
  EXPECT_EQ(d.total(), 3u);
  EXPECT_EQ(d.count(Pattern{1, 1}), 3u);
}

TEST(ExtractAllPatterns, TooShortOrNonFinite) {
  const EmbeddingConfig c{3, 2};
  EXPECT_THROW(extract_all_patterns(std::vector<double>{1, 2, 3, 4}, c), std::invalid_argument);
  EXPECT_NO_THROW(extract_all_patterns(std::vector<double>{1, 2, 3, 4, 5}, c));
  EXPECT_THROW(extract_all_patterns(std::vector<double>{1, 2, std::nan(""), 4, 5}, c),
               std::invalid_argument);
}

TEST(ExtractAllPatterns, MatchesOracleCountsAndTotals) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + trial % 4;
    const int tau = 1 + trial % 3;
    const auto s = oracle::random_integer_series(rng, 40 + trial, 3 + trial % 3);
    const auto d = extract_all_patterns(s, cfg(m, PatternKind::amp, EqualRule::group_smallest,
                                               SortOrder::ascending, tau));
    const auto expected = oracle::count_amps(s, m, tau, oracle::Rule::smallest);
    ASSERT_EQ(d.total(), s.size() - static_cast<std::size_t>((m - 1) * tau));
    ASSERT_EQ(d.distinct(), expected.size());
    for (const auto& [ranks, n] : d.counts()) {
      ASSERT_EQ(static_cast<long>(n), expected.at(as_ints(ranks)));
    }
  }
}

TEST(PatternDistribution, RejectsWrongDimension) {
  PatternDistribution d(EmbeddingConfig{3, 1});
  EXPECT_THROW(d.add(Pattern{1, 2}), std::invalid_argument);
  d.add(Pattern{1, 2, 3}, 4);
  EXPECT_DOUBLE_EQ(d.probability(Pattern{1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(d.probability(Pattern{3, 2, 1}), 0.0);
}

}  // namespace
}  // namespace ordtir
