#include "cli/table.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string_view>

#include "json.hpp"
#include "ordtir/error.hpp"

namespace ordtir::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kMetricColumns{"epoch_id", "stage", "m",   "tau", "n_windows", "pTIR",
                                              "pTAS",     "noeTIR", "noeTAS", "PEn", "DES",  "DIP"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

// the number as printed, so JSON and CSV carry the same value
json json_number(double x) { return std::stod(format_number(x)); }

double to_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": cannot parse '" + s + "' as a number");
  }
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"pTIR", "pTAS", "noeTIR", "noeTAS", "PEn", "DES", "DIP"};
  return names;
}

std::optional<double> metric_value(const MetricsRow& row, const std::string& name) {
  if (name == "pTIR") return row.p_tir;
  if (name == "pTAS") return row.p_tas;
  if (name == "noeTIR") return row.noe_tir;
  if (name == "noeTAS") return row.noe_tas;
  if (name == "PEn") return row.pen;
  if (name == "DES") return row.des;
  if (name == "DIP") return row.dip;
  return std::nullopt;
}

void write_metrics(std::ostream& out, const std::vector<MetricsRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    for (std::size_t i = 0; i < kMetricColumns.size(); ++i) out << (i ? "," : "") << kMetricColumns[i];
    out << '\n';
    for (const auto& r : rows) {
      out << csv_field(r.epoch_id) << ',' << csv_field(r.stage) << ',' << r.m << ',' << r.tau << ','
          << r.n_windows;
      for (const auto& name : metric_names()) out << ',' << format_number(*metric_value(r, name));
      out << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    json j = json::object();
    j["epoch_id"] = r.epoch_id;
    j["stage"] = r.stage;
    j["m"] = r.m;
    j["tau"] = r.tau;
    j["n_windows"] = r.n_windows;
    for (const auto& name : metric_names()) j[name] = json_number(*metric_value(r, name));
    out << j.dump() << '\n';
  }
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_metrics(in, path.string());
}

std::vector<MetricsRow> read_metrics(std::istream& in, const std::string& name) {
  std::vector<MetricsRow> rows;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::map<std::string, std::size_t>> header;
  bool jsonl = false;
  bool sniffed = false;

  const auto fill = [&](MetricsRow& r, auto&& get, const std::string& where) {
    r.epoch_id = get("epoch_id");
    r.stage = get("stage");
    r.m = static_cast<int>(to_double(get("m"), where));
    r.tau = static_cast<int>(to_double(get("tau"), where));
    r.n_windows = static_cast<std::uint64_t>(to_double(get("n_windows"), where));
    r.p_tir = to_double(get("pTIR"), where);
    r.p_tas = to_double(get("pTAS"), where);
    r.noe_tir = to_double(get("noeTIR"), where);
    r.noe_tas = to_double(get("noeTAS"), where);
    r.pen = to_double(get("PEn"), where);
    r.des = to_double(get("DES"), where);
    r.dip = to_double(get("DIP"), where);
    if (const auto at = r.epoch_id.rfind('@'); at != std::string::npos) {
      r.source = r.epoch_id.substr(0, at);
      r.start_sample = static_cast<std::size_t>(to_double(r.epoch_id.substr(at + 1), where));
    } else {
      r.source = r.epoch_id;
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::string where = name + ":" + std::to_string(line_no);
    if (!sniffed) {
      sniffed = true;
      jsonl = line[first] == '{';
    }
    MetricsRow r;
    if (jsonl) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw DataError(where + ": " + e.what());
      }
      fill(r, [&](const char* key) -> std::string {
        if (!j.contains(key)) throw DataError(where + ": missing field '" + key + "'");
        const auto& v = j[key];
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return format_number(v.get<double>());
        return v.dump();
      }, where);
    } else {
      const auto fields = split_csv(line);
      if (!header) {
        header.emplace();
        for (std::size_t i = 0; i < fields.size(); ++i) (*header)[fields[i]] = i;
        for (const auto& c : kMetricColumns) {
          if (!header->count(c)) throw DataError(where + ": missing column '" + c + "'");
        }
        continue;
      }
      fill(r, [&](const char* key) -> std::string {
        const auto idx = header->at(key);
        if (idx >= fields.size()) throw DataError(where + ": short row");
        return fields[idx];
      }, where);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_comparison(std::ostream& out, const std::vector<ComparisonBlock>& blocks,
                      OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "m,tau,metric,record,group_a,group_b,n_a,n_b,mean,se,statistic,p_value\n";
    for (const auto& b : blocks) {
      const std::string prefix = std::to_string(b.m) + ',' + std::to_string(b.tau) + ',' + b.metric + ',';
      for (const auto& g : b.groups) {
        out << prefix << "group," << csv_field(g.name) << ",," << g.n << ",," << format_number(g.mean)
            << ',' << format_number(g.se) << ",,\n";
      }
      for (const auto& p : b.pairs) {
        out << prefix << "mann_whitney_u," << csv_field(p.a) << ',' << csv_field(p.b) << ',' << p.n_a
            << ',' << p.n_b << ",,," << format_number(p.statistic) << ',' << format_number(p.p_value)
            << '\n';
      }
      std::string names;
      for (const auto& g : b.groups) names += (names.empty() ? "" : "|") + g.name;
      out << prefix << "kruskal_wallis," << csv_field(names) << ",,,,,," << format_number(b.kw_statistic)
          << ',' << format_number(b.kw_p_value) << '\n';
    }
    return;
  }
  for (const auto& b : blocks) {
    const auto base = [&](const char* record) {
      json j = json::object();
      j["m"] = b.m;
      j["tau"] = b.tau;
      j["metric"] = b.metric;
      j["record"] = record;
      return j;
    };
    for (const auto& g : b.groups) {
      auto j = base("group");
      j["group"] = g.name;
      j["n"] = g.n;
      j["mean"] = json_number(g.mean);
      j["se"] = json_number(g.se);
      out << j.dump() << '\n';
    }
    for (const auto& p : b.pairs) {
      auto j = base("mann_whitney_u");
      j["group_a"] = p.a;
      j["group_b"] = p.b;
      j["n_a"] = p.n_a;
      j["n_b"] = p.n_b;
      j["statistic"] = json_number(p.statistic);
      j["p_value"] = json_number(p.p_value);
      j["exact"] = p.exact;
      out << j.dump() << '\n';
    }
    auto j = base("kruskal_wallis");
    json names = json::array();
    for (const auto& g : b.groups) names.push_back(g.name);
    j["groups"] = names;
    j["statistic"] = json_number(b.kw_statistic);
    j["p_value"] = json_number(b.kw_p_value);
    out << j.dump() << '\n';
  }
}

void write_patterns(std::ostream& out, const std::vector<PatternRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "pattern,count,probability,self_symmetric,individual\n";
    for (const auto& r : rows) {
      out << csv_field(r.pattern) << ',' << r.count << ',' << format_number(r.probability) << ','
          << (r.self_symmetric ? "true" : "false") << ',' << (r.individual ? "true" : "false") << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    json j = json::object();
    j["pattern"] = r.pattern;
    j["count"] = r.count;
    j["probability"] = json_number(r.probability);
    j["self_symmetric"] = r.self_symmetric;
    j["individual"] = r.individual;
    out << j.dump() << '\n';
  }
}

}  // namespace ordtir::cli
