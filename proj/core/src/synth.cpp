#include "ordtir/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "ordtir/error.hpp"

namespace ordtir {

namespace {

class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits mapped to [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Marsaglia polar method
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

double mean_of(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

}  // namespace

const char* to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::white_gaussian: return "white_gaussian";
    case GeneratorKind::ar1: return "ar1";
    case GeneratorKind::logistic_map: return "logistic_map";
    case GeneratorKind::constant: return "constant";
    case GeneratorKind::alternating: return "alternating";
  }
  return "?";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) noexcept {
  for (auto k : {GeneratorKind::white_gaussian, GeneratorKind::ar1, GeneratorKind::logistic_map,
                 GeneratorKind::constant, GeneratorKind::alternating}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

void GeneratorSpec::validate() const {
  if (length < 2) throw std::invalid_argument("generator length must be >= 2");
  const auto finite = [](double v) { return std::isfinite(v); };
  switch (kind) {
    case GeneratorKind::white_gaussian:
      if (!finite(params.mean) || !(params.stddev > 0.0) || !finite(params.stddev)) {
        throw std::invalid_argument("white_gaussian needs a finite mean and stddev > 0");
      }
      break;
    case GeneratorKind::ar1:
      if (!(std::abs(params.phi) < 1.0)) throw std::invalid_argument("ar1 needs |phi| < 1");
      if (!(params.stddev > 0.0) || !finite(params.stddev)) {
        throw std::invalid_argument("ar1 needs stddev > 0");
      }
      break;
    case GeneratorKind::logistic_map:
      if (!(params.r > 0.0 && params.r <= 4.0)) throw std::invalid_argument("logistic_map needs r in (0, 4]");
      if (!(params.x0 > 0.0 && params.x0 < 1.0)) throw std::invalid_argument("logistic_map needs x0 in (0, 1)");
      break;
    case GeneratorKind::constant:
      if (!finite(params.value)) throw std::invalid_argument("constant needs a finite value");
      break;
    case GeneratorKind::alternating:
      if (!finite(params.low) || !finite(params.high)) {
        throw std::invalid_argument("alternating needs finite low and high");
      }
      break;
  }
}

SampleSeries generate(const GeneratorSpec& spec) {
  spec.validate();
  SampleSeries out;
  out.samples.resize(spec.length);
  auto& x = out.samples;
  const auto& p = spec.params;
  NormalSource rng(spec.seed);

  switch (spec.kind) {
    case GeneratorKind::white_gaussian:
      for (auto& v : x) v = p.mean + p.stddev * rng.standard_normal();
      break;
    case GeneratorKind::ar1: {
      // start from the stationary distribution
      double prev = p.stddev / std::sqrt(1.0 - p.phi * p.phi) * rng.standard_normal();
      for (auto& v : x) {
        prev = p.phi * prev + p.stddev * rng.standard_normal();
        v = prev;
      }
      break;
    }
    case GeneratorKind::logistic_map: {
      double state = p.x0;
      for (int i = 0; i < kLogisticTransient; ++i) state = p.r * state * (1.0 - state);
      for (auto& v : x) {
        state = p.r * state * (1.0 - state);
        v = state;
      }
      break;
    }
    case GeneratorKind::constant:
      std::fill(x.begin(), x.end(), p.value);
      break;
    case GeneratorKind::alternating:
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 == 0 ? p.low : p.high;
      break;
  }
  return out;
}

SampleSeries quantize(const SampleSeries& series, int levels) {
  if (levels < 2) throw std::invalid_argument("quantize: levels must be >= 2");
  SampleSeries out = series;
  if (series.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(series.samples.begin(), series.samples.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0)) return out;
  const double width = range / levels;
  for (auto& v : out.samples) {
    // scale through the unit interval so that power-of-two level counts nest
    const double unit = (v - lo) / range;
    const int bin = std::min(levels - 1, static_cast<int>(std::floor(unit * levels)));
    v = lo + (bin + 0.5) * width;
  }
  return out;
}

double signal_power(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  const double mu = mean_of(samples);
  double sum = 0.0;
  for (double v : samples) sum += (v - mu) * (v - mu);
  return sum / static_cast<double>(samples.size());
}

SampleSeries add_noise_snr(const SampleSeries& series, double snr_db, std::uint64_t seed) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("add_noise_snr: snr_db must be a number or +inf");
  }
  if (snr_db == std::numeric_limits<double>::infinity()) return series;
  const double p_signal = signal_power(series.samples);
  if (!(p_signal > 0.0)) throw DataError("add_noise_snr: series has zero power");

  NormalSource rng(seed);
  std::vector<double> noise(series.size());
  for (auto& v : noise) v = rng.standard_normal();
  const double mu = mean_of(noise);
  for (auto& v : noise) v -= mu;
  const double p_noise_raw = signal_power(noise);
  const double target = p_signal / std::pow(10.0, snr_db / 10.0);
  const double scale = p_noise_raw > 0.0 ? std::sqrt(target / p_noise_raw) : 0.0;

  SampleSeries out = series;
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += scale * noise[i];
  return out;
}

}  // namespace ordtir
