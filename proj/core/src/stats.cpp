#include "ordtir/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace ordtir {

namespace {

void require_group(const GroupSample& g) {
  if (g.values.empty()) throw std::invalid_argument("group '" + g.name + "' is empty");
  for (double v : g.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("group '" + g.name + "' has a non-finite value");
  }
}

// sum over tie groups of t^3 - t
double tie_term(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

double normal_two_sided(double z) { return std::min(1.0, std::erfc(z / std::sqrt(2.0))); }

// Exact two-sided p for the rank sum of a k-subset of the pooled midranks.
// Doubled midranks are integers, so the null distribution is tabulated over
// integer sums and the extremeness comparison is exact.
double exact_rank_sum_p(std::span<const double> pooled_ranks, std::size_t k, long observed2) {
  std::vector<long> r2(pooled_ranks.size());
  std::transform(pooled_ranks.begin(), pooled_ranks.end(), r2.begin(),
                 [](double r) { return std::lround(2.0 * r); });
  std::vector<long> top = r2;
  std::sort(top.begin(), top.end(), std::greater<>());
  const long max_sum = std::accumulate(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), 0L);

  const auto width = static_cast<std::size_t>(max_sum + 1);
  // ways[j * width + s]: number of j-subsets with doubled rank sum s
  std::vector<double> ways((k + 1) * width, 0.0);
  ways[0] = 1.0;
  for (long r : r2) {
    for (std::size_t j = k; j >= 1; --j) {
      double* dst = &ways[j * width];
      const double* src = &ways[(j - 1) * width];
      for (long s = max_sum; s >= r; --s) dst[s] += src[s - r];
    }
  }

  const auto n = static_cast<long>(pooled_ranks.size());
  const long center2 = static_cast<long>(k) * (n + 1);
  const long dev = std::labs(observed2 - center2);
  double extreme = 0.0;
  double all = 0.0;
  const double* row = &ways[k * width];
  for (long s = 0; s <= max_sum; ++s) {
    all += row[s];
    if (std::labs(s - center2) >= dev) extreme += row[s];
  }
  return std::min(1.0, extreme / all);
}

}  // namespace

const char* to_string(RankTest test) noexcept {
  return test == RankTest::mann_whitney_u ? "mann_whitney_u" : "kruskal_wallis";
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t q = i; q < j; ++q) ranks[order[q]] = avg;
    i = j;
  }
  return ranks;
}

GroupComparison mann_whitney_u(const GroupSample& a, const GroupSample& b,
                               MannWhitneyMethod method) {
  require_group(a);
  require_group(b);
  const std::size_t na = a.values.size();
  const std::size_t nb = b.values.size();
  const std::size_t n = na + nb;

  std::vector<double> pooled(a.values);
  pooled.insert(pooled.end(), b.values.begin(), b.values.end());
  const auto ranks = midranks(pooled);
  const double ra = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(na), 0.0);

  GroupComparison out;
  out.test = RankTest::mann_whitney_u;
  out.group_names = {a.name, b.name};
  out.n_per_group = {na, nb};
  out.statistic = ra - 0.5 * static_cast<double>(na * (na + 1));

  const bool exact =
      method == MannWhitneyMethod::exact ||
      (method == MannWhitneyMethod::automatic && std::min(na, nb) <= kExactMannWhitneyMaxGroup &&
       n <= kExactMannWhitneyMaxPooled);
  if (exact) {
    out.exact = true;
    // enumerate subsets of the smaller group; its deviation from the null
    // mean mirrors the other group's exactly
    const bool a_small = na <= nb;
    const std::size_t k = a_small ? na : nb;
    const double rk = a_small ? ra : std::accumulate(ranks.begin() + static_cast<std::ptrdiff_t>(na), ranks.end(), 0.0);
    out.p_value = exact_rank_sum_p(ranks, k, std::lround(2.0 * rk));
    return out;
  }

  const double dna = static_cast<double>(na);
  const double dnb = static_cast<double>(nb);
  const double dn = static_cast<double>(n);
  const double mean = 0.5 * dna * dnb;
  const double var = dna * dnb / 12.0 * ((dn + 1.0) - tie_term(pooled) / (dn * (dn - 1.0)));
  if (var <= 0.0) {
    out.p_value = 1.0;
    return out;
  }
  const double z = std::max(0.0, std::abs(out.statistic - mean) - 0.5) / std::sqrt(var);
  out.p_value = normal_two_sided(z);
  return out;
}

GroupComparison kruskal_wallis(std::span<const GroupSample> groups) {
  if (groups.size() < 2) {
    throw std::invalid_argument("kruskal_wallis needs at least 2 groups, got " +
                                std::to_string(groups.size()));
  }
  std::vector<double> pooled;
  GroupComparison out;
  out.test = RankTest::kruskal_wallis;
  for (const auto& g : groups) {
    require_group(g);
    pooled.insert(pooled.end(), g.values.begin(), g.values.end());
    out.group_names.push_back(g.name);
    out.n_per_group.push_back(g.values.size());
  }
  const auto ranks = midranks(pooled);
  const double n = static_cast<double>(pooled.size());

  double between = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) r += ranks[offset + i];
    between += r * r / static_cast<double>(g.values.size());
    offset += g.values.size();
  }
  const double correction = 1.0 - tie_term(pooled) / (n * n * n - n);
  if (correction <= 0.0) {
    out.statistic = 0.0;
    out.p_value = 1.0;
    return out;
  }
  const double h = (12.0 / (n * (n + 1.0)) * between - 3.0 * (n + 1.0)) / correction;
  out.statistic = std::max(0.0, h);
  out.p_value = chi_square_sf(out.statistic, static_cast<int>(groups.size()) - 1);
  return out;
}

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_sf: dof must be >= 1");
  if (!(x >= 0.0)) throw std::invalid_argument("chi_square_sf: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace ordtir
