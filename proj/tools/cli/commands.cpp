#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <cstdio>
#include <iterator>
#include <limits>
#include <map>
#include <thread>

#include "json.hpp"
#include "ordtir/error.hpp"
#include "ordtir/stats.hpp"

namespace ordtir::cli {

namespace {

using nlohmann::json;

std::size_t stage_rank(const std::string& stage) {
  const auto known = default_stage_set();
  const auto it = std::find(known.begin(), known.end(), stage);
  return static_cast<std::size_t>(it - known.begin());
}

std::vector<MetricsRow> epoch_rows(const LabeledEpoch& epoch, const RunConfig& config) {
  std::vector<MetricsRow> rows;
  const MetricOptions options{config.dip_mode, config.des_threshold};
  for (int m : config.m_list) {
    for (int tau : config.tau_list) {
      const EmbeddingConfig embedding{m, tau, config.order, config.equal_rule, PatternKind::amp};
      const auto rec = compute_metrics(epoch.series.samples, embedding, options, epoch.id());
      MetricsRow r;
      r.source = epoch.source;
      r.start_sample = epoch.start_sample;
      r.epoch_id = rec.epoch_id;
      r.stage = epoch.stage;
      r.m = m;
      r.tau = tau;
      r.n_windows = rec.n_windows;
      r.p_tir = rec.p_tir;
      r.p_tas = rec.p_tas;
      r.noe_tir = rec.noe_tir;
      r.noe_tas = rec.noe_tas;
      r.pen = rec.pen;
      r.des = rec.des;
      r.dip = rec.dip;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

void write_series(const std::filesystem::path& path, const std::vector<double>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  char buf[64];
  for (double v : samples) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  if (!out) throw DataError("error writing " + path.string());
}

}  // namespace

void RunConfig::validate() const {
  if (m_list.empty() || tau_list.empty()) throw UsageError("--m and --tau need at least one value");
  for (int m : m_list) {
    if (m < 2 || m > kMaxDimension) {
      throw UsageError("dimension " + std::to_string(m) + " outside [2, " + std::to_string(kMaxDimension) + "]");
    }
  }
  for (int tau : tau_list) {
    if (tau < 1) throw UsageError("delay " + std::to_string(tau) + " must be >= 1");
  }
  if (!(des_threshold >= 0.0)) throw UsageError("--des-threshold must be >= 0");
  if (jobs < 1) throw UsageError("--jobs must be >= 1");
}

std::vector<MetricsRow> analyze_epochs(const std::vector<LabeledEpoch>& epochs, const RunConfig& config) {
  config.validate();
  std::vector<std::vector<MetricsRow>> slots(epochs.size());
  std::vector<std::exception_ptr> errors(epochs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < epochs.size(); i = next++) {
      try {
        slots[i] = epoch_rows(epochs[i], config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const auto threads = std::min<std::size_t>(config.jobs, epochs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<MetricsRow> rows;
  for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(rows));
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return std::tie(a.source, a.start_sample, a.m, a.tau) < std::tie(b.source, b.start_sample, b.m, b.tau);
  });
  return rows;
}

std::vector<MetricsRow> analyze(const std::vector<AnalyzeInput>& inputs, const IngestOptions& ingest,
                                const RunConfig& config) {
  config.validate();
  if (inputs.empty()) throw UsageError("no input files");
  if (!ingest.whole_record) {
    try {
      ingest.epochs.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<LabeledEpoch> epochs;
  for (const auto& input : inputs) {
    const auto source = input.signal.string();
    auto series = read_signal_csv(input.signal, ingest.column);
    std::vector<StageLabel> labels;
    if (input.labels) labels = read_stage_labels(*input.labels, ingest.labels);

    if (ingest.whole_record) {
      LabeledEpoch e;
      e.source = source;
      if (!labels.empty()) {
        if (labels.size() != 1 || labels.front().start_sample != 0) {
          throw DataError(source + ": whole-record mode needs a single label starting at sample 0");
        }
        e.stage = labels.front().stage;
      }
      e.series = std::move(series);
      e.series.label = e.stage;
      epochs.push_back(std::move(e));
    } else {
      auto cut = segment_epochs(series, labels, ingest.epochs, source);
      std::move(cut.begin(), cut.end(), std::back_inserter(epochs));
    }
  }
  if (epochs.empty()) throw DataError("no epochs could be cut from the inputs");

  const auto shortest = std::min_element(epochs.begin(), epochs.end(), [](const auto& a, const auto& b) {
                          return a.series.size() < b.series.size();
                        })->series.size();
  for (int m : config.m_list) {
    for (int tau : config.tau_list) {
      const EmbeddingConfig c{m, tau};
      if (c.window_count(shortest) == 0) {
        throw UsageError("m=" + std::to_string(m) + " tau=" + std::to_string(tau) +
                         " needs " + std::to_string(c.window_span()) + " samples; shortest epoch has " +
                         std::to_string(shortest));
      }
    }
  }
  return analyze_epochs(epochs, config);
}

std::vector<ComparisonBlock> compare(const std::vector<MetricsRow>& rows, const CompareOptions& options) {
  const auto& names = metric_names();
  if (std::find(names.begin(), names.end(), options.metric) == names.end()) {
    throw UsageError("unknown metric '" + options.metric + "'");
  }
  if (options.group_by != "stage") throw UsageError("unknown group-by column '" + options.group_by + "'");

  // (m, tau) -> stage -> values
  std::map<std::pair<int, int>, std::map<std::string, std::vector<double>>> cells;
  for (const auto& r : rows) {
    if (r.stage.empty()) continue;
    if (options.m && r.m != *options.m) continue;
    if (options.tau && r.tau != *options.tau) continue;
    cells[{r.m, r.tau}][r.stage].push_back(*metric_value(r, options.metric));
  }
  if (cells.empty()) throw DataError("no labeled rows match the selection");

  std::vector<ComparisonBlock> blocks;
  for (const auto& [key, by_stage] : cells) {
    if (by_stage.size() < 2) {
      throw DataError("m=" + std::to_string(key.first) + " tau=" + std::to_string(key.second) +
                      ": need at least two groups, found only '" + by_stage.begin()->first + "'");
    }
    std::vector<GroupSample> groups;
    for (const auto& [stage, values] : by_stage) groups.push_back({stage, values});
    std::stable_sort(groups.begin(), groups.end(), [](const GroupSample& a, const GroupSample& b) {
      return std::make_pair(stage_rank(a.name), a.name) < std::make_pair(stage_rank(b.name), b.name);
    });

    ComparisonBlock block;
    block.m = key.first;
    block.tau = key.second;
    block.metric = options.metric;
    for (const auto& g : groups) {
      GroupSummary s;
      s.name = g.name;
      s.n = g.values.size();
      for (double v : g.values) s.mean += v;
      s.mean /= static_cast<double>(s.n);
      if (s.n > 1) {
        double ss = 0;
        for (double v : g.values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / static_cast<double>(s.n - 1)) / std::sqrt(static_cast<double>(s.n));
      }
      block.groups.push_back(s);
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        const auto mw = mann_whitney_u(groups[i], groups[j]);
        block.pairs.push_back({groups[i].name, groups[j].name, groups[i].values.size(),
                               groups[j].values.size(), mw.statistic, mw.p_value, mw.exact});
      }
    }
    const auto kw = kruskal_wallis(groups);
    block.kw_statistic = kw.statistic;
    block.kw_p_value = kw.p_value;
    blocks.push_back(std::move(block));
  }
  return blocks;
}

SynthResult synth(const SynthRequest& request) {
  request.generator.validate();
  if (request.quantize_levels && *request.quantize_levels < 2) {
    throw UsageError("--quantize needs at least 2 levels");
  }
  if (request.snr_db && std::isnan(*request.snr_db)) throw UsageError("--snr-db must be a number");

  SynthResult result;
  result.series = generate(request.generator);
  result.signal_power = signal_power(result.series.samples);
  if (request.snr_db) {
    const auto clean = result.series.samples;
    result.series = add_noise_snr(result.series, *request.snr_db, request.noise_seed);
    std::vector<double> noise(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) noise[i] = result.series.samples[i] - clean[i];
    result.realized_noise_power = signal_power(noise);
  }
  if (request.quantize_levels) result.series = quantize(result.series, *request.quantize_levels);

  write_series(request.output, result.series.samples);

  json pipeline = json::array({"generate"});
  if (request.snr_db) pipeline.push_back("noise");
  if (request.quantize_levels) pipeline.push_back("quantize");

  const auto& g = request.generator;
  json manifest = {
      {"generator",
       {{"kind", to_string(g.kind)},
        {"length", g.length},
        {"seed", g.seed},
        {"params",
         {{"mean", g.params.mean},
          {"stddev", g.params.stddev},
          {"phi", g.params.phi},
          {"r", g.params.r},
          {"x0", g.params.x0},
          {"value", g.params.value},
          {"low", g.params.low},
          {"high", g.params.high}}}}},
      {"pipeline", pipeline},
      {"quantize_levels", request.quantize_levels ? json(*request.quantize_levels) : json(nullptr)},
      {"snr_db", request.snr_db ? json(*request.snr_db) : json(nullptr)},
      {"noise_seed", request.noise_seed},
      {"stage", request.stage ? json(*request.stage) : json(nullptr)},
      {"output", request.output.string()},
      {"samples", result.series.size()},
      {"signal_power", result.signal_power},
      {"realized_noise_power", result.realized_noise_power ? json(*result.realized_noise_power) : json(nullptr)},
  };
  if (request.snr_db && std::isinf(*request.snr_db)) manifest["snr_db"] = "inf";

  if (request.stage) {
    auto labels_path = request.output;
    labels_path += ".labels.csv";
    std::ofstream labels(labels_path, std::ios::binary);
    if (!labels) throw DataError("cannot write " + labels_path.string());
    labels << "start_sample,stage\n0," << *request.stage << '\n';
    manifest["labels"] = labels_path.string();
  }

  result.manifest = request.output;
  result.manifest += ".manifest.json";
  std::ofstream out(result.manifest, std::ios::binary);
  if (!out) throw DataError("cannot write " + result.manifest.string());
  out << manifest.dump(2) << '\n';
  return result;
}

SynthRequest read_synth_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  SynthRequest r;
  try {
    const json j = json::parse(in);
    const auto& g = j.at("generator");
    const auto kind = parse_generator_kind(g.at("kind").get<std::string>());
    if (!kind) throw DataError(path.string() + ": unknown generator kind");
    r.generator.kind = *kind;
    r.generator.length = g.at("length").get<std::size_t>();
    r.generator.seed = g.at("seed").get<std::uint64_t>();
    const auto& p = g.at("params");
    r.generator.params.mean = p.at("mean").get<double>();
    r.generator.params.stddev = p.at("stddev").get<double>();
    r.generator.params.phi = p.at("phi").get<double>();
    r.generator.params.r = p.at("r").get<double>();
    r.generator.params.x0 = p.at("x0").get<double>();
    r.generator.params.value = p.at("value").get<double>();
    r.generator.params.low = p.at("low").get<double>();
    r.generator.params.high = p.at("high").get<double>();
    if (!j.at("quantize_levels").is_null()) r.quantize_levels = j.at("quantize_levels").get<int>();
    const auto& snr = j.at("snr_db");
    if (snr.is_string()) {
      r.snr_db = std::numeric_limits<double>::infinity();
    } else if (!snr.is_null()) {
      r.snr_db = snr.get<double>();
    }
    r.noise_seed = j.at("noise_seed").get<std::uint64_t>();
    if (!j.at("stage").is_null()) r.stage = j.at("stage").get<std::string>();
    r.output = j.at("output").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return r;
}

std::vector<PatternRow> pattern_table(const PatternDistribution& dist) {
  std::vector<PatternRow> rows;
  for (const auto& [p, n] : dist.counts()) {
    const auto rev = reverse_pattern(p);
    PatternRow r;
    r.pattern = p.to_string();
    r.count = n;
    r.probability = dist.probability(p);
    r.self_symmetric = rev == p;
    r.individual = !r.self_symmetric && dist.count(rev) == 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ordtir::cli
