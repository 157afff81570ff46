#include "depthbench/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace depthbench {

namespace {

using Json = nlohmann::ordered_json;

std::string Format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Json MetricsToJson(const MetricSet& metrics) {
  Json out = Json::object();
  for (const auto& [name, value] : metrics) out[name] = RoundSignificant(value);
  return out;
}

MetricSet MetricsFromJson(const Json& json) {
  MetricSet out;
  for (const auto& [name, value] : json.items()) out.emplace_back(name, value.get<double>());
  return out;
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string RankCell(const RankColumn& column, std::size_t method) {
  std::string cell = std::to_string(column.ranks.at(method));
  // Mark methods that share their rank with another method.
  for (std::size_t j = 0; j < column.ranks.size(); ++j) {
    if (j != method && column.ranks[j] == column.ranks[method]) return cell + "=";
  }
  return cell;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  Check(static_cast<bool>(out), "cannot write " + path.string());
  out << text;
  Check(static_cast<bool>(out), "failed writing " + path.string());
}

}  // namespace

std::vector<ReportFormat> ParseReportFormats(const std::string& text) {
  std::vector<ReportFormat> formats;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    ReportFormat f;
    if (item == "json") {
      f = ReportFormat::kJson;
    } else if (item == "csv") {
      f = ReportFormat::kCsv;
    } else if (item == "markdown" || item == "md") {
      f = ReportFormat::kMarkdown;
    } else {
      throw Error("unknown report format '" + item + "'");
    }
    if (std::find(formats.begin(), formats.end(), f) == formats.end()) formats.push_back(f);
  }
  Check(!formats.empty(), "at least one report format is required");
  return formats;
}

std::vector<std::string> KeyRankMetrics(const MetricReport& report) {
  std::vector<std::string> keys;
  for (const char* name : {"AbsRel", "F-Score", "Boundary/F-Score"}) {
    if (std::find(report.metric_names.begin(), report.metric_names.end(), name) !=
        report.metric_names.end()) {
      keys.emplace_back(name);
    }
  }
  return keys;
}

void ValidateReport(const MetricReport& report) {
  Check(!report.methods.empty(), "report has no methods");
  Check(report.ranks.size() == report.metric_names.size(),
        "report needs one rank column per metric");
  for (const MethodReport& method : report.methods) {
    Check(method.aggregate.size() == report.metric_names.size(),
          "method '" + method.method + "' lacks aggregate metrics");
    for (std::size_t k = 0; k < report.metric_names.size(); ++k) {
      Check(method.aggregate[k].first == report.metric_names[k],
            "method '" + method.method + "' has misordered aggregate metrics");
      Check(std::isfinite(method.aggregate[k].second),
            "method '" + method.method + "' has a non-finite " + report.metric_names[k]);
    }
  }
  for (std::size_t k = 0; k < report.metric_names.size(); ++k) {
    const RankColumn& column = report.ranks[k];
    Check(column.metric == report.metric_names[k], "rank columns are misordered");
    Check(column.direction == MetricDirection(column.metric),
          "rank column '" + column.metric + "' has the wrong direction");
    const RankResult expected = RankMethods(report, column.metric, column.direction);
    Check(column.ranks == expected.ranks && column.tie == expected.tie,
          "ranks for '" + column.metric + "' disagree with the aggregates");
  }
}

Json ReportToJson(const MetricReport& report) {
  Json json;
  Json protocol = Json::object();
  for (const auto& [key, value] : report.protocol) protocol[key] = value;
  json["protocol"] = protocol;
  json["metrics"] = report.metric_names;

  Json methods = Json::array();
  for (const MethodReport& method : report.methods) {
    Json m;
    m["method"] = method.method;
    m["aggregate"] = MetricsToJson(method.aggregate);
    Json images = Json::array();
    for (const ImageResult& image : method.images) {
      images.push_back({{"name", image.name},
                        {"scale", RoundSignificant(image.scale)},
                        {"metrics", MetricsToJson(image.metrics)}});
    }
    m["images"] = images;
    methods.push_back(m);
  }
  json["methods"] = methods;

  Json ranks = Json::object();
  for (const RankColumn& column : report.ranks) {
    ranks[column.metric] = {{"direction", ToString(column.direction)},
                            {"ranks", column.ranks},
                            {"tie", column.tie}};
  }
  json["ranks"] = ranks;

  Json failures = Json::array();
  for (const Failure& f : report.failures) {
    failures.push_back({{"record", f.record}, {"method", f.method}, {"message", f.message}});
  }
  json["failures"] = failures;
  return json;
}

MetricReport ReportFromJson(const Json& json) {
  MetricReport report;
  try {
    for (const auto& [key, value] : json.at("protocol").items()) {
      report.protocol.emplace_back(key, value.get<std::string>());
    }
    report.metric_names = json.at("metrics").get<std::vector<std::string>>();
    for (const Json& m : json.at("methods")) {
      MethodReport method;
      method.method = m.at("method").get<std::string>();
      method.aggregate = MetricsFromJson(m.at("aggregate"));
      for (const Json& image : m.at("images")) {
        method.images.push_back({image.at("name").get<std::string>(),
                                 image.at("scale").get<double>(),
                                 MetricsFromJson(image.at("metrics"))});
      }
      report.methods.push_back(std::move(method));
    }
    for (const auto& [metric, column] : json.at("ranks").items()) {
      report.ranks.push_back({metric, ParseDirection(column.at("direction").get<std::string>()),
                              column.at("ranks").get<std::vector<int>>(),
                              column.at("tie").get<bool>()});
    }
    for (const Json& f : json.at("failures")) {
      report.failures.push_back({f.at("record").get<std::string>(),
                                 f.at("method").get<std::string>(),
                                 f.at("message").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  ValidateReport(report);
  return report;
}

std::string FormatCsv(const MetricReport& report) {
  const std::vector<std::string> keys = KeyRankMetrics(report);
  std::ostringstream out;
  out << "method";
  for (const std::string& name : report.metric_names) out << ',' << CsvField(name);
  for (const std::string& key : keys) out << ',' << CsvField("rank:" + key);
  out << '\n';
  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    const MethodReport& method = report.methods[i];
    out << CsvField(method.method);
    for (const auto& [name, value] : method.aggregate) out << ',' << Format(value);
    for (const std::string& key : keys) out << ',' << RankCell(report.RankFor(key), i);
    out << '\n';
  }
  return out.str();
}

std::string FormatMarkdown(const MetricReport& report) {
  const std::vector<std::string> keys = KeyRankMetrics(report);
  std::ostringstream out;
  out << "# Depth evaluation report\n\n## Protocol\n\n";
  for (const auto& [key, value] : report.protocol) out << "- " << key << ": " << value << '\n';

  out << "\n## Results\n\n| Method |";
  for (const std::string& name : report.metric_names) {
    out << ' ' << name << (MetricDirection(name) == Direction::kLowerIsBetter ? " ↓" : " ↑")
        << " |";
  }
  for (const std::string& key : keys) out << " Rank " << key << " |";
  out << "\n|---|";
  for (std::size_t k = 0; k < report.metric_names.size() + keys.size(); ++k) out << "---:|";
  out << '\n';
  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    const MethodReport& method = report.methods[i];
    out << "| " << method.method << " |";
    for (const auto& [name, value] : method.aggregate) out << ' ' << Format(value) << " |";
    for (const std::string& key : keys) out << ' ' << RankCell(report.RankFor(key), i) << " |";
    out << '\n';
  }
  if (!keys.empty()) out << "\nRanks are dense; `=` marks a shared rank.\n";

  if (!report.failures.empty()) {
    out << "\n## Failures\n\n";
    for (const Failure& f : report.failures) {
      out << "- " << f.record << " [" << f.method << "]: " << f.message << '\n';
    }
  }
  return out.str();
}

std::vector<std::filesystem::path> EmitReport(const MetricReport& report,
                                              const std::filesystem::path& directory,
                                              const std::vector<ReportFormat>& formats) {
  ValidateReport(report);
  std::filesystem::create_directories(directory);
  std::vector<std::filesystem::path> written;
  for (ReportFormat format : formats) {
    std::filesystem::path path;
    switch (format) {
      case ReportFormat::kJson:
        path = directory / "report.json";
        WriteText(path, ReportToJson(report).dump(2) + "\n");
        break;
      case ReportFormat::kCsv:
        path = directory / "report.csv";
        WriteText(path, FormatCsv(report));
        break;
      case ReportFormat::kMarkdown:
        path = directory / "report.md";
        WriteText(path, FormatMarkdown(report));
        break;
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace depthbench
