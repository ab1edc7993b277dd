#include "ordtir/patterns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ordtir/series.hpp"

namespace ordtir {

namespace {

using RankBuffer = std::array<std::uint8_t, kMaxDimension>;

// Pattern of the m samples first[0], first[stride], ..., written to out[0..m).
// Stable insertion sort on the window positions, then the equal-value rule is
// applied on runs of exactly equal values in sorted order.
void rank_window(const double* first, std::size_t stride, const EmbeddingConfig& config,
                 std::uint8_t* out) {
  const int m = config.m;
  const bool ascending = config.order == SortOrder::ascending;
  const auto value = [&](int pos) { return first[static_cast<std::size_t>(pos) * stride]; };

  RankBuffer sorted{};
  for (int i = 0; i < m; ++i) {
    const double v = value(i);
    int j = i;
    while (j > 0 && (ascending ? v < value(sorted[j - 1]) : v > value(sorted[j - 1]))) {
      sorted[j] = sorted[j - 1];
      --j;
    }
    sorted[j] = static_cast<std::uint8_t>(i);
  }

  const bool orp = config.kind == PatternKind::orp;
  if (config.equal_rule == EqualRule::occurrence) {
    for (int k = 0; k < m; ++k) {
      if (orp) {
        out[k] = static_cast<std::uint8_t>(sorted[k] + 1);
      } else {
        out[sorted[k]] = static_cast<std::uint8_t>(k + 1);
      }
    }
    return;
  }

  const bool smallest = config.equal_rule == EqualRule::group_smallest;
  int k = 0;
  while (k < m) {
    int last = k;
    while (last + 1 < m && value(sorted[last + 1]) == value(sorted[k])) ++last;
    // Within a group the stable sort keeps original indexes increasing, so
    // the first and last members carry the extreme index and rank.
    const auto rep = static_cast<std::uint8_t>(
        orp ? (smallest ? sorted[k] : sorted[last]) + 1 : (smallest ? k : last) + 1);
    for (int q = k; q <= last; ++q) {
      if (orp) {
        out[q] = rep;
      } else {
        out[sorted[q]] = rep;
      }
    }
    k = last + 1;
  }
}

std::uint64_t pack(const std::uint8_t* ranks, int m) {
  std::uint64_t code = 0;
  for (int i = 0; i < m; ++i) code = (code << 4) | ranks[i];
  return code;
}

}  // namespace

void EmbeddingConfig::validate() const {
  if (m < 2 || m > kMaxDimension) {
    throw std::invalid_argument("dimension m must lie in [2, " + std::to_string(kMaxDimension) +
                                "], got " + std::to_string(m));
  }
  if (tau < 1) throw std::invalid_argument("delay tau must be >= 1, got " + std::to_string(tau));
}

Pattern::Pattern(std::initializer_list<int> ranks) {
  ranks_.reserve(ranks.size());
  for (int r : ranks) {
    if (r < 1 || r > static_cast<int>(ranks.size()) || r > kMaxDimension) {
      throw std::invalid_argument("pattern rank out of range: " + std::to_string(r));
    }
    ranks_.push_back(static_cast<std::uint8_t>(r));
  }
}

Pattern::Pattern(std::span<const std::uint8_t> ranks) : ranks_(ranks.begin(), ranks.end()) {
  for (auto r : ranks_) {
    if (r < 1 || r > ranks_.size() || r > kMaxDimension) {
      throw std::invalid_argument("pattern rank out of range: " + std::to_string(r));
    }
  }
}

std::uint64_t Pattern::code() const noexcept {
  return pack(ranks_.data(), static_cast<int>(ranks_.size()));
}

Pattern Pattern::from_code(std::uint64_t code) {
  std::vector<std::uint8_t> ranks;
  while (code != 0) {
    ranks.push_back(static_cast<std::uint8_t>(code & 0xF));
    code >>= 4;
  }
  std::reverse(ranks.begin(), ranks.end());
  return Pattern(std::span<const std::uint8_t>(ranks));
}

std::string Pattern::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < ranks_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ranks_[i]);
  }
  s += ')';
  return s;
}

Pattern extract_pattern(std::span<const double> window, const EmbeddingConfig& config) {
  config.validate();
  if (window.size() != static_cast<std::size_t>(config.m)) {
    throw std::invalid_argument("window has " + std::to_string(window.size()) +
                                " values, dimension is " + std::to_string(config.m));
  }
  require_finite(window);
  RankBuffer out{};
  rank_window(window.data(), 1, config, out.data());
  return Pattern(std::span<const std::uint8_t>(out.data(), window.size()));
}

Pattern reverse_pattern(const Pattern& p) {
  std::vector<std::uint8_t> r(p.ranks().rbegin(), p.ranks().rend());
  return Pattern(std::span<const std::uint8_t>(r));
}

bool is_self_symmetric(const Pattern& p) {
  const auto r = p.ranks();
  return std::equal(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(r.size() / 2), r.rbegin());
}

std::vector<Pattern> enumerate_patterns(int m, EqualRule rule) {
  if (m < 2 || m > kMaxEnumerationDimension) {
    throw std::invalid_argument("enumerate_patterns supports m in [2, " +
                                std::to_string(kMaxEnumerationDimension) + "], got " +
                                std::to_string(m));
  }
  const EmbeddingConfig config{m, 1, SortOrder::ascending, rule, PatternKind::amp};
  std::set<std::uint64_t> codes;
  std::vector<double> window(static_cast<std::size_t>(m), 1.0);
  RankBuffer out{};
  while (true) {
    rank_window(window.data(), 1, config, out.data());
    codes.insert(pack(out.data(), m));
    // odometer over {1..m}^m
    int pos = m - 1;
    while (pos >= 0 && window[pos] == m) window[pos--] = 1.0;
    if (pos < 0) break;
    window[pos] += 1.0;
  }
  std::vector<Pattern> patterns;
  patterns.reserve(codes.size());
  for (auto c : codes) patterns.push_back(Pattern::from_code(c));
  std::sort(patterns.begin(), patterns.end());
  return patterns;
}

PatternDistribution::PatternDistribution(EmbeddingConfig config) : config_(config) {
  config_.validate();
}

void PatternDistribution::add(const Pattern& p, std::uint64_t n) {
  if (p.size() != static_cast<std::size_t>(config_.m)) {
    throw std::invalid_argument("pattern " + p.to_string() + " does not match dimension " +
                                std::to_string(config_.m));
  }
  if (n == 0) return;
  counts_[p] += n;
  total_ += n;
}

std::uint64_t PatternDistribution::count(const Pattern& p) const {
  const auto it = counts_.find(p);
  return it == counts_.end() ? 0 : it->second;
}

double PatternDistribution::probability(const Pattern& p) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(count(p)) / static_cast<double>(total_);
}

PatternDistribution extract_all_patterns(std::span<const double> series,
                                         const EmbeddingConfig& config) {
  config.validate();
  const std::size_t windows = config.window_count(series.size());
  if (windows == 0) {
    throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                " is shorter than one window (" +
                                std::to_string(config.window_span()) + " samples)");
  }
  require_finite(series);

  std::unordered_map<std::uint64_t, std::uint64_t> tally;
  RankBuffer out{};
  const auto stride = static_cast<std::size_t>(config.tau);
  for (std::size_t t = 0; t < windows; ++t) {
    rank_window(series.data() + t, stride, config, out.data());
    ++tally[pack(out.data(), config.m)];
  }

  PatternDistribution dist(config);
  for (const auto& [code, n] : tally) dist.add(Pattern::from_code(code), n);
  return dist;
}

const char* to_string(SortOrder order) noexcept {
  return order == SortOrder::ascending ? "asc" : "desc";
}

const char* to_string(EqualRule rule) noexcept {
  switch (rule) {
    case EqualRule::occurrence: return "occurrence";
    case EqualRule::group_smallest: return "group-smallest";
    case EqualRule::group_largest: return "group-largest";
  }
  return "?";
}

const char* to_string(PatternKind kind) noexcept {
  return kind == PatternKind::orp ? "OrP" : "AmP";
}

}  // namespace ordtir
