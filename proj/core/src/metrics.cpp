#include "ordtir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ordtir/series.hpp"

namespace ordtir {

namespace {

void require_amp(const EmbeddingConfig& config) {
  if (config.kind != PatternKind::amp) {
    throw std::invalid_argument("irreversibility estimators require AmP patterns");
  }
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

}  // namespace

const char* to_string(DipMode mode) noexcept {
  return mode == DipMode::occurrences ? "occurrences" : "distinct";
}

double ys_divergence(double a, double b) {
  require_probability(a, "probability a");
  require_probability(b, "probability b");
  const double sum = a + b;
  if (sum == 0.0) return 0.0;
  return std::max(a, b) * std::abs(a - b) / sum;
}

double p_tir(const PatternDistribution& forward, const PatternDistribution& backward) {
  if (!(forward.config() == backward.config())) {
    throw std::invalid_argument("forward and backward distributions use different configs");
  }
  if (forward.empty() || backward.empty()) {
    throw std::invalid_argument("p_tir needs non-empty distributions");
  }
  double sum = 0.0;
  for (const auto& [p, n] : forward.counts()) {
    sum += ys_divergence(forward.probability(p), backward.probability(p));
  }
  for (const auto& [p, n] : backward.counts()) {
    if (forward.count(p) == 0) sum += ys_divergence(0.0, backward.probability(p));
  }
  return 0.5 * sum;
}

double p_tir(std::span<const double> series, const EmbeddingConfig& config) {
  require_amp(config);
  const auto forward = extract_all_patterns(series, config);
  const auto back = reversed(series);
  return p_tir(forward, extract_all_patterns(back, config));
}

double p_tas(const PatternDistribution& dist) {
  if (dist.empty()) throw std::invalid_argument("p_tas needs a non-empty distribution");
  double sum = 0.0;
  for (const auto& [p, n] : dist.counts()) {
    const Pattern rev = reverse_pattern(p);
    if (rev == p) continue;
    const auto rev_count = dist.count(rev);
    // each unordered pair once: skip the larger member when both are present
    if (rev_count > 0 && rev < p) continue;
    sum += ys_divergence(dist.probability(p), dist.probability(rev));
  }
  return sum;
}

double p_tas(std::span<const double> series, const EmbeddingConfig& config) {
  require_amp(config);
  return p_tas(extract_all_patterns(series, config));
}

M2ClosedForms m2_closed_forms(double up, double down, double equal, SortOrder order) {
  require_probability(up, "up probability");
  require_probability(down, "down probability");
  require_probability(equal, "equal probability");
  if (std::abs(up + down + equal - 1.0) > 1e-9) {
    throw std::invalid_argument("up, down and equal probabilities must sum to 1");
  }
  const auto d = [](double a, double b) { return ys_divergence(std::min(a, 1.0), std::min(b, 1.0)); };

  M2ClosedForms out;
  out.p_tir = 0.5 * (d(up, down) + d(down, up));
  out.p_tas = d(up, down);
  // Ties join the (1,2) AmP: the up pattern when ascending, down when
  // descending. Reversal swaps up and down, so noeTIR is order-independent.
  out.noe_tir = 0.5 * (d(up + equal, down + equal) + d(down, up));
  out.noe_tas = order == SortOrder::ascending ? d(up + equal, down) : d(down + equal, up);
  return out;
}

double permutation_entropy(const PatternDistribution& dist) {
  double h = 0.0;
  for (const auto& [p, n] : dist.counts()) {
    const double prob = dist.probability(p);
    if (prob > 0.0) h -= prob * std::log(prob);
  }
  return h;
}

double des(std::span<const double> series, int tau, double threshold) {
  if (tau < 1) throw std::invalid_argument("des: tau must be >= 1");
  if (!(threshold >= 0.0)) throw std::invalid_argument("des: threshold must be >= 0");
  const auto lag = static_cast<std::size_t>(tau);
  if (series.size() <= lag) {
    throw std::invalid_argument("des: series of length " + std::to_string(series.size()) +
                                " is too short for tau " + std::to_string(tau));
  }
  require_finite(series);
  std::size_t equal = 0;
  const std::size_t pairs = series.size() - lag;
  for (std::size_t t = 0; t < pairs; ++t) {
    if (std::abs(series[t + lag] - series[t]) <= threshold) ++equal;
  }
  return static_cast<double>(equal) / static_cast<double>(pairs);
}

double dip(const PatternDistribution& dist, DipMode mode) {
  if (dist.empty()) return 0.0;
  std::uint64_t individual_count = 0;
  std::size_t individual_distinct = 0;
  for (const auto& [p, n] : dist.counts()) {
    const Pattern rev = reverse_pattern(p);
    if (rev != p && dist.count(rev) == 0) {
      individual_count += n;
      ++individual_distinct;
    }
  }
  if (mode == DipMode::distinct) {
    return static_cast<double>(individual_distinct) / static_cast<double>(dist.distinct());
  }
  return static_cast<double>(individual_count) / static_cast<double>(dist.total());
}

MetricsRecord compute_metrics(std::span<const double> series, const EmbeddingConfig& config,
                              const MetricOptions& options, std::string epoch_id) {
  config.validate();
  require_amp(config);
  const auto back = reversed(series);

  EmbeddingConfig nonequal = config;
  nonequal.equal_rule = EqualRule::occurrence;

  const auto forward = extract_all_patterns(series, config);
  const auto backward = extract_all_patterns(back, config);
  const auto forward_noe = extract_all_patterns(series, nonequal);
  const auto backward_noe = extract_all_patterns(back, nonequal);

  MetricsRecord rec;
  rec.epoch_id = std::move(epoch_id);
  rec.config = config;
  rec.n_windows = forward.total();
  rec.p_tir = p_tir(forward, backward);
  rec.p_tas = p_tas(forward);
  rec.noe_tir = p_tir(forward_noe, backward_noe);
  rec.noe_tas = p_tas(forward_noe);
  rec.pen = permutation_entropy(forward);
  rec.des = des(series, config.tau, options.des_threshold);
  rec.dip = dip(forward, options.dip_mode);
  return rec;
}

}  // namespace ordtir
