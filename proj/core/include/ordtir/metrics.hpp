#pragma once

// Irreversibility and permutation statistics on ordinal pattern
// distributions.
//
// All divergences use the subtraction-based difference
//
//   D(a, b) = max(a, b) * |a - b| / (a + b),   D(0, 0) = 0,
//
// which stays finite when one of the two patterns is never observed.

#include <cstdint>
#include <span>
#include <string>

#include "ordtir/patterns.hpp"

namespace ordtir {

enum class DipMode { occurrences, distinct };

const char* to_string(DipMode mode) noexcept;

/// Throws std::invalid_argument unless both inputs lie in [0, 1].
double ys_divergence(double a, double b);

/// Forward/backward divergence between two distributions over the same
/// configuration: 0.5 * sum over the union of observed patterns.
double p_tir(const PatternDistribution& forward, const PatternDistribution& backward);

/// Forward/backward divergence of a series. The backward distribution comes
/// from physically reversing the samples and re-extracting, so with
/// EqualRule::occurrence this yields noeTIR. Requires PatternKind::amp.
double p_tir(std::span<const double> series, const EmbeddingConfig& config);

/// Divergence between each pattern and its tuple reversal within one
/// distribution, summed over unordered pairs. Self-symmetric patterns do
/// not contribute.
double p_tas(const PatternDistribution& dist);

/// p_tas of the forward distribution; noeTAS under EqualRule::occurrence.
/// Requires PatternKind::amp.
double p_tas(std::span<const double> series, const EmbeddingConfig& config);

struct M2ClosedForms {
  double p_tir = 0.0;
  double noe_tir = 0.0;
  double p_tas = 0.0;
  double noe_tas = 0.0;
};

/// The four m = 2 estimators from the up / down / equal probabilities of a
/// series (up means x(t + tau) > x(t)). Under descending order the occurrence
/// rule folds ties into the down pattern instead of the up pattern.
M2ClosedForms m2_closed_forms(double up, double down, double equal,
                              SortOrder order = SortOrder::ascending);

/// Shannon entropy in nats over observed patterns, not normalised.
double permutation_entropy(const PatternDistribution& dist);

/// Fraction of lag-tau sample pairs whose absolute difference is at most
/// threshold. threshold = 0 counts exactly equal states.
double des(std::span<const double> series, int tau, double threshold = 0.0);

/// Share of individual permutations: observed, not self-symmetric, and
/// whose reversal is never observed. occurrences weighs by counts over the
/// window total; distinct counts distinct patterns over distinct observed.
double dip(const PatternDistribution& dist, DipMode mode = DipMode::occurrences);

struct MetricOptions {
  DipMode dip_mode = DipMode::occurrences;
  double des_threshold = 0.0;
};

struct MetricsRecord {
  std::string epoch_id;
  EmbeddingConfig config;
  std::uint64_t n_windows = 0;
  double p_tir = 0.0;
  double p_tas = 0.0;
  double noe_tir = 0.0;
  double noe_tas = 0.0;
  double pen = 0.0;
  double des = 0.0;
  double dip = 0.0;
};

/// Full battery for one series. pTIR, pTAS, PEn and DIP use config as given;
/// noeTIR and noeTAS use the same m, tau and order with the occurrence rule.
/// DES is evaluated at lag config.tau.
MetricsRecord compute_metrics(std::span<const double> series, const EmbeddingConfig& config,
                              const MetricOptions& options = {}, std::string epoch_id = {});

}  // namespace ordtir
