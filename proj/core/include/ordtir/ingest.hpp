#pragma once

// CSV front end: signal columns, stage label intervals, epoch segmentation.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordtir/series.hpp"

namespace ordtir {

/// A column selected by header name or by 0-based index.
using ColumnSelector = std::variant<std::string, std::size_t>;

/// Reads one numeric column from a comma-separated file or a one-number-
/// per-line text file. A first line whose selected field is not a number is
/// taken as a header. Blank lines are skipped; CRLF is accepted.
/// Throws DataError naming the 1-based line of the first bad row.
SampleSeries read_signal_csv(const std::filesystem::path& path,
                             const ColumnSelector& column = std::size_t{0});

struct StageLabel {
  std::size_t start_sample = 0;
  std::string stage;

  friend bool operator==(const StageLabel&, const StageLabel&) = default;
};

std::vector<std::string> default_stage_set();

struct LabelOptions {
  std::vector<std::string> allowed = default_stage_set();
  bool allow_unknown = false;
};

/// Rows of `start_sample,stage`, optional header, strictly increasing
/// start_sample. Each label holds until the next start or the end of the
/// record. An empty file yields no labels.
std::vector<StageLabel> read_stage_labels(const std::filesystem::path& path,
                                          const LabelOptions& options = {});

struct EpochSpec {
  double epoch_seconds = 60.0;
  double sample_rate_hz = 250.0;
  double min_length_seconds = 30.0;
  std::optional<double> amplitude_ceiling;

  /// Throws std::invalid_argument on non-positive values, an epoch shorter
  /// than min_length_seconds, or fewer than two samples per epoch.
  void validate() const;
  [[nodiscard]] std::size_t epoch_samples() const;
};

struct LabeledEpoch {
  SampleSeries series;
  std::string stage;
  std::string source;
  std::size_t start_sample = 0;

  /// "<source>@<start_sample>"
  [[nodiscard]] std::string id() const;
};

/// Cuts consecutive, non-overlapping epochs from sample 0. With labels, an
/// epoch is kept only if it lies entirely inside one label interval; with no
/// labels every epoch is kept unlabeled. Remainders shorter than an epoch are
/// dropped, as are epochs exceeding the optional amplitude ceiling.
/// Throws DataError if the series carries a sample rate different from the
/// spec or a label starts past the end of the series.
std::vector<LabeledEpoch> segment_epochs(const SampleSeries& series,
                                         const std::vector<StageLabel>& labels,
                                         const EpochSpec& spec, const std::string& source = {});

}  // namespace ordtir
