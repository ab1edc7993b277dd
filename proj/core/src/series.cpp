#include "ordtir/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ordtir {

void require_finite(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empty series");
  const auto bad = std::find_if(samples.begin(), samples.end(),
                                [](double x) { return !std::isfinite(x); });
  if (bad != samples.end()) {
    throw std::invalid_argument("non-finite sample at index " +
                                std::to_string(bad - samples.begin()));
  }
}

std::vector<double> reversed(std::span<const double> samples) {
  return {samples.rbegin(), samples.rend()};
}

}  // namespace ordtir
