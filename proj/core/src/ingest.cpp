#include "ordtir/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string_view>

#include "ordtir/error.hpp"

namespace ordtir {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : in_(path), path_(path) {
    if (!in_) throw DataError("cannot open " + path.string());
  }

  // next line with content; returns false at end of file
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (number_ == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (!trim(line).empty()) return true;
    }
    return false;
  }

  [[nodiscard]] std::size_t number() const noexcept { return number_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(path_.string() + ":" + std::to_string(number_) + ": " + what);
  }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  std::size_t number_ = 0;
};

}  // namespace

SampleSeries read_signal_csv(const std::filesystem::path& path, const ColumnSelector& column) {
  LineReader reader(path);
  SampleSeries out;
  std::string line;
  std::optional<std::size_t> index;
  if (const auto* i = std::get_if<std::size_t>(&column)) index = *i;

  bool first = true;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      if (const auto* name = std::get_if<std::string>(&column)) {
        const auto it = std::find(fields.begin(), fields.end(), std::string_view(*name));
        if (it == fields.end()) reader.fail("no column named '" + *name + "' in header");
        index = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
      if (*index < fields.size() && !parse_number(fields[*index])) continue;  // header
    }
    if (*index >= fields.size()) {
      reader.fail("row has " + std::to_string(fields.size()) + " fields, column " +
                  std::to_string(*index) + " requested");
    }
    const auto value = parse_number(fields[*index]);
    if (!value) reader.fail("cannot parse '" + std::string(fields[*index]) + "' as a number");
    if (!std::isfinite(*value)) reader.fail("non-finite value '" + std::string(fields[*index]) + "'");
    out.samples.push_back(*value == 0.0 ? 0.0 : *value);  // fold -0 into +0
  }
  if (out.samples.empty()) throw DataError(path.string() + ": no samples");
  return out;
}

std::vector<std::string> default_stage_set() { return {"wake", "S1", "S2", "S3", "REM"}; }

std::vector<StageLabel> read_stage_labels(const std::filesystem::path& path,
                                          const LabelOptions& options) {
  LineReader reader(path);
  std::vector<StageLabel> labels;
  std::string line;
  bool first = true;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) reader.fail("expected 'start_sample,stage'");
    std::size_t start = 0;
    const auto text = fields[0];
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), start);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      if (first) {  // header
        first = false;
        continue;
      }
      reader.fail("cannot parse start sample '" + std::string(text) + "'");
    }
    first = false;
    if (fields[1].empty()) reader.fail("empty stage");
    std::string stage(fields[1]);
    if (!options.allow_unknown &&
        std::find(options.allowed.begin(), options.allowed.end(), stage) == options.allowed.end()) {
      reader.fail("unknown stage '" + stage + "'");
    }
    if (!labels.empty() && start <= labels.back().start_sample) {
      reader.fail("start_sample " + std::to_string(start) + " is not after " +
                  std::to_string(labels.back().start_sample));
    }
    labels.push_back({start, std::move(stage)});
  }
  return labels;
}

void EpochSpec::validate() const {
  if (!(epoch_seconds > 0.0) || !(sample_rate_hz > 0.0) || !(min_length_seconds > 0.0)) {
    throw std::invalid_argument("epoch length, sample rate and minimum length must be positive");
  }
  if (epoch_seconds < min_length_seconds) {
    throw std::invalid_argument("epoch of " + std::to_string(epoch_seconds) +
                                " s is shorter than the minimum length of " +
                                std::to_string(min_length_seconds) + " s");
  }
  if (epoch_seconds * sample_rate_hz < 2.0) {
    throw std::invalid_argument("an epoch must hold at least 2 samples");
  }
  if (amplitude_ceiling && !(*amplitude_ceiling > 0.0)) {
    throw std::invalid_argument("amplitude ceiling must be positive");
  }
}

std::size_t EpochSpec::epoch_samples() const {
  return static_cast<std::size_t>(std::llround(epoch_seconds * sample_rate_hz));
}

std::string LabeledEpoch::id() const { return source + "@" + std::to_string(start_sample); }

std::vector<LabeledEpoch> segment_epochs(const SampleSeries& series,
                                         const std::vector<StageLabel>& labels,
                                         const EpochSpec& spec, const std::string& source) {
  spec.validate();
  if (series.sample_rate_hz && *series.sample_rate_hz != spec.sample_rate_hz) {
    throw DataError("series sampled at " + std::to_string(*series.sample_rate_hz) +
                    " Hz, epochs configured for " + std::to_string(spec.sample_rate_hz) + " Hz");
  }
  const std::size_t length = series.size();
  for (const auto& l : labels) {
    if (l.start_sample >= length) {
      throw DataError("label '" + l.stage + "' starts at sample " + std::to_string(l.start_sample) +
                      " beyond the series length " + std::to_string(length));
    }
  }

  const std::size_t span = spec.epoch_samples();
  std::vector<LabeledEpoch> epochs;
  for (std::size_t start = 0; start + span <= length; start += span) {
    std::string stage;
    if (!labels.empty()) {
      // last label starting at or before the epoch start
      auto it = std::upper_bound(labels.begin(), labels.end(), start,
                                 [](std::size_t s, const StageLabel& l) { return s < l.start_sample; });
      if (it == labels.begin()) continue;
      const auto& label = *std::prev(it);
      const std::size_t label_end = it == labels.end() ? length : it->start_sample;
      if (start + span > label_end) continue;
      stage = label.stage;
    }

    const auto first = series.samples.begin() + static_cast<std::ptrdiff_t>(start);
    const auto last = first + static_cast<std::ptrdiff_t>(span);
    if (spec.amplitude_ceiling &&
        std::any_of(first, last, [&](double v) { return std::abs(v) > *spec.amplitude_ceiling; })) {
      continue;
    }

    LabeledEpoch e;
    e.series.samples.assign(first, last);
    e.series.sample_rate_hz = spec.sample_rate_hz;
    e.series.label = stage;
    e.stage = std::move(stage);
    e.source = source;
    e.start_sample = start;
    epochs.push_back(std::move(e));
  }
  return epochs;
}

}  // namespace ordtir
