#include "cli/app.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "ordtir/error.hpp"

namespace ordtir::cli {

namespace {

std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

ColumnSelector parse_column(const std::string& text) {
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    return static_cast<std::size_t>(std::stoull(text));
  }
  return text;
}

unsigned default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

unsigned jobs_from_env(unsigned fallback) {
  const char* env = std::getenv("ORDINAL_TIR_JOBS");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0 || v > 4096) {
    throw UsageError(std::string("ORDINAL_TIR_JOBS must be a positive integer, got '") + env + "'");
  }
  return static_cast<unsigned>(v);
}

double parse_snr(const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--snr-db expects a number or 'inf', got '" + text + "'");
}

// Buffers the report so a failure part-way leaves no partial file behind.
void emit(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  file << body;
  if (!file) throw DataError("error writing " + path);
}

const std::map<std::string, SortOrder> kOrders{{"asc", SortOrder::ascending}, {"desc", SortOrder::descending}};
const std::map<std::string, EqualRule> kRules{{"occurrence", EqualRule::occurrence},
                                              {"group-smallest", EqualRule::group_smallest},
                                              {"group-largest", EqualRule::group_largest}};
const std::map<std::string, DipMode> kDipModes{{"occurrences", DipMode::occurrences},
                                               {"distinct", DipMode::distinct}};
const std::map<std::string, OutputFormat> kFormats{{"csv", OutputFormat::csv}, {"jsonl", OutputFormat::jsonl}};
const std::map<std::string, PatternKind> kKinds{{"amp", PatternKind::amp}, {"orp", PatternKind::orp}};
const std::map<std::string, GeneratorKind> kGenerators{{"white_gaussian", GeneratorKind::white_gaussian},
                                                       {"ar1", GeneratorKind::ar1},
                                                       {"logistic_map", GeneratorKind::logistic_map},
                                                       {"constant", GeneratorKind::constant},
                                                       {"alternating", GeneratorKind::alternating}};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ordinal-pattern time irreversibility and permutation statistics", "ordtir"};
  app.require_subcommand(1);

  // analyze
  RunConfig run_config;
  run_config.jobs = default_jobs();
  IngestOptions ingest;
  std::vector<std::string> inputs, label_files, stages;
  std::string column = "0", output;
  std::optional<double> ceiling;
  auto* analyze_cmd = app.add_subcommand("analyze", "Metric battery over epochs of one or more signals");
  analyze_cmd->add_option("inputs", inputs, "Signal CSV files")->required();
  analyze_cmd->add_option("--labels", label_files, "Stage label CSV per input, in input order");
  analyze_cmd->add_option("--column", column, "Signal column name or 0-based index");
  analyze_cmd->add_option("--m", run_config.m_list, "Embedding dimensions")->delimiter(',');
  analyze_cmd->add_option("--tau", run_config.tau_list, "Delays")->delimiter(',');
  analyze_cmd->add_option("--order", run_config.order)->transform(CLI::CheckedTransformer(kOrders));
  analyze_cmd->add_option("--equal-rule", run_config.equal_rule)->transform(CLI::CheckedTransformer(kRules));
  analyze_cmd->add_option("--dip-mode", run_config.dip_mode)->transform(CLI::CheckedTransformer(kDipModes));
  analyze_cmd->add_option("--des-threshold", run_config.des_threshold);
  analyze_cmd->add_option("--format", run_config.format)->transform(CLI::CheckedTransformer(kFormats));
  analyze_cmd->add_option("--jobs", run_config.jobs, "Worker threads (ORDINAL_TIR_JOBS overrides)");
  analyze_cmd->add_option("--output", output, "Output file, '-' for stdout");
  analyze_cmd->add_option("--epoch-seconds", ingest.epochs.epoch_seconds);
  analyze_cmd->add_option("--sample-rate", ingest.epochs.sample_rate_hz);
  analyze_cmd->add_option("--min-length-seconds", ingest.epochs.min_length_seconds);
  analyze_cmd->add_option("--amplitude-ceiling", ceiling, "Drop epochs with any |sample| above this");
  analyze_cmd->add_flag("--whole-record", ingest.whole_record, "Treat each input as a single epoch");
  analyze_cmd->add_flag("--allow-unknown", ingest.labels.allow_unknown, "Accept stages outside --stages");
  analyze_cmd->add_option("--stages", stages, "Allowed stage names")->delimiter(',');

  // compare
  std::string table;
  CompareOptions compare_options;
  std::optional<int> compare_m, compare_tau;
  OutputFormat compare_format = OutputFormat::csv;
  std::string compare_output;
  auto* compare_cmd = app.add_subcommand("compare", "Rank tests of one metric across stage groups");
  compare_cmd->add_option("table", table, "Metrics table written by analyze")->required();
  compare_cmd->add_option("--metric", compare_options.metric);
  compare_cmd->add_option("--group-by", compare_options.group_by);
  compare_cmd->add_option("--m", compare_m, "Only this dimension");
  compare_cmd->add_option("--tau", compare_tau, "Only this delay");
  compare_cmd->add_option("--format", compare_format)->transform(CLI::CheckedTransformer(kFormats));
  compare_cmd->add_option("--output", compare_output);

  // synth
  SynthRequest synth_request;
  std::string synth_output, snr_text, manifest_in;
  std::optional<std::uint64_t> noise_seed;
  std::optional<int> levels;
  std::optional<std::string> stage;
  auto& gen = synth_request.generator;
  gen.length = 15000;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic signal and its manifest");
  synth_cmd->add_option("--kind", gen.kind)->transform(CLI::CheckedTransformer(kGenerators));
  synth_cmd->add_option("--length", gen.length);
  synth_cmd->add_option("--seed", gen.seed);
  synth_cmd->add_option("--mean", gen.params.mean);
  synth_cmd->add_option("--stddev", gen.params.stddev);
  synth_cmd->add_option("--phi", gen.params.phi);
  synth_cmd->add_option("--r", gen.params.r);
  synth_cmd->add_option("--x0", gen.params.x0);
  synth_cmd->add_option("--value", gen.params.value);
  synth_cmd->add_option("--low", gen.params.low);
  synth_cmd->add_option("--high", gen.params.high);
  synth_cmd->add_option("--quantize", levels, "Uniform quantiser levels");
  synth_cmd->add_option("--snr-db", snr_text, "Add Gaussian noise at this SNR");
  synth_cmd->add_option("--noise-seed", noise_seed, "Noise seed (default: seed + 1)");
  synth_cmd->add_option("--stage", stage, "Also write a labels file with this stage");
  synth_cmd->add_option("--output", synth_output, "Signal file to write");
  synth_cmd->add_option("--from-manifest", manifest_in, "Regenerate from a manifest");

  // patterns
  std::string pattern_input, pattern_column = "0", pattern_output;
  EmbeddingConfig pattern_config;
  pattern_config.tau = 1;
  OutputFormat pattern_format = OutputFormat::csv;
  auto* patterns_cmd = app.add_subcommand("patterns", "Dump the ordinal pattern distribution of a signal");
  patterns_cmd->add_option("input", pattern_input)->required();
  patterns_cmd->add_option("--column", pattern_column);
  patterns_cmd->add_option("--m", pattern_config.m);
  patterns_cmd->add_option("--tau", pattern_config.tau);
  patterns_cmd->add_option("--equal-rule", pattern_config.equal_rule)->transform(CLI::CheckedTransformer(kRules));
  patterns_cmd->add_option("--order", pattern_config.order)->transform(CLI::CheckedTransformer(kOrders));
  patterns_cmd->add_option("--kind", pattern_config.kind)->transform(CLI::CheckedTransformer(kKinds));
  patterns_cmd->add_option("--format", pattern_format)->transform(CLI::CheckedTransformer(kFormats));
  patterns_cmd->add_option("--output", pattern_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ordtir: error[usage]: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) {
      run_config.jobs = jobs_from_env(run_config.jobs);
      if (!label_files.empty() && label_files.size() != inputs.size()) {
        throw UsageError("--labels must be given once per input (" + std::to_string(inputs.size()) + ")");
      }
      std::vector<AnalyzeInput> analyze_inputs;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        AnalyzeInput in{inputs[i], std::nullopt};
        if (!label_files.empty()) in.labels = label_files[i];
        analyze_inputs.push_back(std::move(in));
      }
      ingest.column = parse_column(column);
      ingest.epochs.amplitude_ceiling = ceiling;
      if (!stages.empty()) ingest.labels.allowed = stages;
      const auto rows = analyze(analyze_inputs, ingest, run_config);
      std::ostringstream body;
      write_metrics(body, rows, run_config.format);
      emit(output, body.str(), out);
    } else if (compare_cmd->parsed()) {
      compare_options.m = compare_m;
      compare_options.tau = compare_tau;
      const auto blocks = compare(read_metrics(table), compare_options);
      std::ostringstream body;
      write_comparison(body, blocks, compare_format);
      emit(compare_output, body.str(), out);
    } else if (synth_cmd->parsed()) {
      if (!manifest_in.empty()) {
        synth_request = read_synth_manifest(manifest_in);
        if (!synth_output.empty()) synth_request.output = synth_output;
      } else {
        if (synth_output.empty()) throw UsageError("synth needs --output");
        synth_request.output = synth_output;
        synth_request.quantize_levels = levels;
        if (!snr_text.empty()) synth_request.snr_db = parse_snr(snr_text);
        synth_request.noise_seed = noise_seed.value_or(gen.seed + 1);
        synth_request.stage = stage;
      }
      try {
        synth_request.generator.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto result = synth(synth_request);
      out << "wrote " << result.series.size() << " samples to " << synth_request.output.string()
          << " (manifest " << result.manifest.string() << ")\n";
    } else if (patterns_cmd->parsed()) {
      try {
        pattern_config.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto series = read_signal_csv(pattern_input, parse_column(pattern_column));
      const auto dist = extract_all_patterns(series.samples, pattern_config);
      std::ostringstream body;
      write_patterns(body, pattern_table(dist), pattern_format);
      emit(pattern_output, body.str(), out);
    }
  } catch (const UsageError& e) {
    err << "ordtir: error[usage]: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ordtir: error[data]: " << one_line(e.what()) << '\n';
    return kExitData;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ordtir"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ordtir::cli
