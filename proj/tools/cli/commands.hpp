#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/table.hpp"
#include "ordtir/ingest.hpp"
#include "ordtir/metrics.hpp"
#include "ordtir/patterns.hpp"
#include "ordtir/synth.hpp"

namespace ordtir::cli {

/// Bad flags or an infeasible configuration; the CLI exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<int> m_list{2, 3, 4};
  std::vector<int> tau_list{1, 2, 3, 4};
  SortOrder order = SortOrder::ascending;
  EqualRule equal_rule = EqualRule::group_smallest;
  DipMode dip_mode = DipMode::occurrences;
  double des_threshold = 0.0;
  OutputFormat format = OutputFormat::csv;
  unsigned jobs = 1;

  void validate() const;
};

struct AnalyzeInput {
  std::filesystem::path signal;
  std::optional<std::filesystem::path> labels;
};

struct IngestOptions {
  ColumnSelector column = std::size_t{0};
  EpochSpec epochs;
  LabelOptions labels;
  bool whole_record = false;  // one epoch per input, no segmentation
};

/// Reads and segments every input, checks that each (m, tau) fits the
/// shortest epoch, then evaluates the metric battery epoch-parallel.
/// Rows are sorted by (source, start_sample, m, tau) whatever the job count.
std::vector<MetricsRow> analyze(const std::vector<AnalyzeInput>& inputs, const IngestOptions& ingest,
                                const RunConfig& config);

/// Metric battery over already-segmented epochs.
std::vector<MetricsRow> analyze_epochs(const std::vector<LabeledEpoch>& epochs, const RunConfig& config);

struct CompareOptions {
  std::string metric = "pTIR";
  std::string group_by = "stage";
  std::optional<int> m;
  std::optional<int> tau;
};

/// One block per (m, tau) present in the table: group means and standard
/// errors, every pairwise Mann-Whitney test and the omnibus Kruskal-Wallis.
/// Groups are ordered wake, S1, S2, S3, REM, then any others by name.
std::vector<ComparisonBlock> compare(const std::vector<MetricsRow>& rows, const CompareOptions& options);

struct SynthRequest {
  GeneratorSpec generator;
  std::optional<int> quantize_levels;
  std::optional<double> snr_db;
  std::uint64_t noise_seed = 0;
  std::optional<std::string> stage;  // also write <output>.labels.csv
  std::filesystem::path output;
};

struct SynthResult {
  SampleSeries series;
  double signal_power = 0;
  std::optional<double> realized_noise_power;
  std::filesystem::path manifest;
};

/// generate -> optional noise -> optional quantisation, then writes the
/// signal (one value per line, round-trip precision) and a JSON manifest
/// next to it at <output>.manifest.json.
SynthResult synth(const SynthRequest& request);

/// Rebuilds a request from a manifest written by synth.
SynthRequest read_synth_manifest(const std::filesystem::path& manifest);

std::vector<PatternRow> pattern_table(const PatternDistribution& dist);

}  // namespace ordtir::cli
