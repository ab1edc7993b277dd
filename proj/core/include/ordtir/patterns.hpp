#pragma once

// Ordinal pattern extraction with explicit equal-value handling.
//
// Two pattern kinds are supported for a window x[0..m):
//
//   OrP  the original indexes of the window values, listed in sorted order
//        (an argsort);
//   AmP  the sorted position of each original value (the inverse of OrP when
//        the window is tie-free).
//
// Ranks are 1-based. Sorting is always stable, so tied values first receive
// consecutive ranks in their order of occurrence. Under the group rules every
// member of a tied group then takes the smallest (or largest) rank of its
// group, which makes patterns such as (1,1) or (1,3,1) possible.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ordtir {

enum class SortOrder { ascending, descending };
enum class EqualRule { occurrence, group_smallest, group_largest };
enum class PatternKind { orp, amp };

/// Largest embedding dimension accepted by the extractors (ranks are packed
/// four bits each into a 64-bit code).
inline constexpr int kMaxDimension = 15;

/// Largest dimension accepted by enumerate_patterns (brute force over m^m).
inline constexpr int kMaxEnumerationDimension = 7;

struct EmbeddingConfig {
  int m = 3;
  int tau = 1;
  SortOrder order = SortOrder::ascending;
  EqualRule equal_rule = EqualRule::group_smallest;
  PatternKind kind = PatternKind::amp;

  /// Throws std::invalid_argument if m or tau is out of range.
  void validate() const;

  /// Number of samples covered by one window: (m - 1) * tau + 1.
  [[nodiscard]] std::size_t window_span() const noexcept {
    return static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(tau) + 1;
  }

  /// Number of windows a series of the given length yields (0 if too short).
  [[nodiscard]] std::size_t window_count(std::size_t length) const noexcept {
    return length < window_span() ? 0 : length - window_span() + 1;
  }

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

/// A tuple of 1-based ranks describing the order structure of one window.
class Pattern {
 public:
  Pattern() = default;
  Pattern(std::initializer_list<int> ranks);
  explicit Pattern(std::span<const std::uint8_t> ranks);

  [[nodiscard]] std::size_t size() const noexcept { return ranks_.size(); }
  [[nodiscard]] int operator[](std::size_t i) const { return ranks_[i]; }
  [[nodiscard]] std::span<const std::uint8_t> ranks() const noexcept { return ranks_; }

  /// Injective packing of the ranks, four bits per rank, first rank in the
  /// most significant used nibble.
  [[nodiscard]] std::uint64_t code() const noexcept;
  static Pattern from_code(std::uint64_t code);

  /// "(1,3,1)"
  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const Pattern&, const Pattern&) = default;
  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::vector<std::uint8_t> ranks_;
};

/// Pattern of a single window of exactly config.m values.
/// Throws std::invalid_argument on a size mismatch or a non-finite value.
Pattern extract_pattern(std::span<const double> window, const EmbeddingConfig& config);

/// The tuple read back to front. On AmPs built with a group rule this is the
/// pattern of the time-reversed window.
Pattern reverse_pattern(const Pattern& p);

bool is_self_symmetric(const Pattern& p);

/// Every pattern the AmP extractor can emit at dimension m under the rule,
/// sorted lexicographically. Computed by brute force over all m^m windows
/// on the alphabet {1..m}; m must lie in [2, kMaxEnumerationDimension].
std::vector<Pattern> enumerate_patterns(int m, EqualRule rule);

/// Occurrence counts of ordinal patterns over all windows of a series.
class PatternDistribution {
 public:
  explicit PatternDistribution(EmbeddingConfig config);

  void add(const Pattern& p, std::uint64_t n = 1);

  [[nodiscard]] std::uint64_t count(const Pattern& p) const;
  [[nodiscard]] double probability(const Pattern& p) const;
  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  [[nodiscard]] std::size_t distinct() const noexcept { return counts_.size(); }
  [[nodiscard]] bool empty() const noexcept { return total_ == 0; }
  [[nodiscard]] const std::map<Pattern, std::uint64_t>& counts() const noexcept { return counts_; }
  [[nodiscard]] const EmbeddingConfig& config() const noexcept { return config_; }

 private:
  EmbeddingConfig config_;
  std::map<Pattern, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Slides a window with stride one; the window at t takes the samples
/// t, t + tau, ..., t + (m - 1) * tau. Throws std::invalid_argument if the
/// series is shorter than one window or holds a non-finite value.
PatternDistribution extract_all_patterns(std::span<const double> series,
                                         const EmbeddingConfig& config);

const char* to_string(SortOrder order) noexcept;
const char* to_string(EqualRule rule) noexcept;
const char* to_string(PatternKind kind) noexcept;

}  // namespace ordtir
