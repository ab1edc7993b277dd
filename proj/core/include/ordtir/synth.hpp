#pragma once

// Synthetic series with known reversibility properties, and the signal
// degradation steps (uniform quantisation, additive Gaussian noise).
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the standard. Uniform and normal variates are derived from the raw 64-bit
// words here rather than through <random> distributions, which differ
// between standard library implementations.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ordtir/series.hpp"

namespace ordtir {

enum class GeneratorKind { white_gaussian, ar1, logistic_map, constant, alternating };

const char* to_string(GeneratorKind kind) noexcept;
std::optional<GeneratorKind> parse_generator_kind(std::string_view name) noexcept;

struct GeneratorParams {
  double mean = 0.0;     // white_gaussian
  double stddev = 1.0;   // white_gaussian, ar1 innovations
  double phi = 0.5;      // ar1 coefficient, |phi| < 1
  double r = 4.0;        // logistic_map, (0, 4]
  double x0 = 0.4;       // logistic_map start, (0, 1)
  double value = 0.0;    // constant
  double low = 1.0;      // alternating
  double high = 2.0;     // alternating
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::white_gaussian;
  std::size_t length = 0;
  GeneratorParams params;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument if length < 2 or a parameter is out of
  /// its domain.
  void validate() const;
};

/// Iterates discarded before the logistic map output starts.
inline constexpr int kLogisticTransient = 1000;

SampleSeries generate(const GeneratorSpec& spec);

/// Uniform quantiser over [min, max] with `levels` bins, emitting bin
/// midpoints. Order between bins and every existing tie are preserved.
/// Constant input is returned unchanged.
SampleSeries quantize(const SampleSeries& series, int levels);

/// Mean of squared mean-removed samples.
double signal_power(std::span<const double> samples);

/// Adds zero-mean Gaussian noise whose realised power (mean of squared
/// mean-removed noise samples) is exactly P_signal / 10^(snr_db / 10).
/// snr_db = +infinity returns the input unchanged. Throws DataError on a
/// zero-power series.
SampleSeries add_noise_snr(const SampleSeries& series, double snr_db, std::uint64_t seed);

}  // namespace ordtir
