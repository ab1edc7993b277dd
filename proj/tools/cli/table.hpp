#pragma once

// Row types and CSV / JSONL emitters shared by the subcommands. Report
// numbers carry 12 significant digits; both formats print the same digits.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ordtir::cli {

enum class OutputFormat { csv, jsonl };

std::string format_number(double x);

struct MetricsRow {
  std::string source;
  std::size_t start_sample = 0;
  std::string epoch_id;
  std::string stage;
  int m = 0;
  int tau = 0;
  std::uint64_t n_windows = 0;
  double p_tir = 0, p_tas = 0, noe_tir = 0, noe_tas = 0, pen = 0, des = 0, dip = 0;
};

/// Column names accepted as metrics by compare.
const std::vector<std::string>& metric_names();
std::optional<double> metric_value(const MetricsRow& row, const std::string& name);

void write_metrics(std::ostream& out, const std::vector<MetricsRow>& rows, OutputFormat format);

/// Reads a table written by write_metrics; the format is sniffed from the
/// first non-blank character. Throws DataError on malformed content.
std::vector<MetricsRow> read_metrics(const std::filesystem::path& path);
std::vector<MetricsRow> read_metrics(std::istream& in, const std::string& name = "<stream>");

struct GroupSummary {
  std::string name;
  std::size_t n = 0;
  double mean = 0;
  double se = 0;
};

struct PairTest {
  std::string a, b;
  std::size_t n_a = 0, n_b = 0;
  double statistic = 0;
  double p_value = 1;
  bool exact = false;
};

struct ComparisonBlock {
  int m = 0;
  int tau = 0;
  std::string metric;
  std::vector<GroupSummary> groups;
  std::vector<PairTest> pairs;
  double kw_statistic = 0;
  double kw_p_value = 1;
};

void write_comparison(std::ostream& out, const std::vector<ComparisonBlock>& blocks,
                      OutputFormat format);

struct PatternRow {
  std::string pattern;
  std::uint64_t count = 0;
  double probability = 0;
  bool self_symmetric = false;
  bool individual = false;
};

void write_patterns(std::ostream& out, const std::vector<PatternRow>& rows, OutputFormat format);

}  // namespace ordtir::cli
