#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ordtir {

/// A finite run of real-valued samples, optionally tagged with its sampling
/// rate and a free-form label (for sleep data, the stage).
struct SampleSeries {
  std::vector<double> samples;
  std::optional<double> sample_rate_hz;
  std::string label;

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
  [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
  [[nodiscard]] std::span<const double> view() const noexcept { return samples; }
};

/// Throws std::invalid_argument unless the samples are non-empty and finite.
void require_finite(std::span<const double> samples);

/// Time-reversed copy of the samples.
std::vector<double> reversed(std::span<const double> samples);

}  // namespace ordtir
