#pragma once

// Rank-based group comparisons: two-sided Mann-Whitney U and Kruskal-Wallis H,
// both with midranks for ties.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ordtir {

struct GroupSample {
  std::string name;
  std::vector<double> values;
};

enum class RankTest { mann_whitney_u, kruskal_wallis };

const char* to_string(RankTest test) noexcept;

struct GroupComparison {
  RankTest test = RankTest::mann_whitney_u;
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<std::string> group_names;
  std::vector<std::size_t> n_per_group;
  bool exact = false;
};

enum class MannWhitneyMethod { automatic, exact, asymptotic };

/// Below this smaller-group size the automatic method enumerates the exact
/// null distribution.
inline constexpr std::size_t kExactMannWhitneyMaxGroup = 7;

/// Pooled size above which automatic falls back to the normal approximation
/// even for small groups.
inline constexpr std::size_t kExactMannWhitneyMaxPooled = 500;

/// Midranks (average ranks of tied values), 1-based.
std::vector<double> midranks(std::span<const double> values);

/// Two-sided test. statistic is U of the first sample: R_a - n_a (n_a + 1) / 2.
/// The exact null is enumerated over the observed midranks, so it stays a
/// valid permutation test with ties. The approximation uses the tie-corrected
/// variance and a continuity correction of 0.5.
GroupComparison mann_whitney_u(const GroupSample& a, const GroupSample& b,
                               MannWhitneyMethod method = MannWhitneyMethod::automatic);

/// H with the tie correction factor; p from the chi-square tail with k - 1
/// degrees of freedom.
GroupComparison kruskal_wallis(std::span<const GroupSample> groups);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, int dof);

}  // namespace ordtir
