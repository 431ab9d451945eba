#include "fedplus/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fedplus/errors.hpp"

namespace fedplus {

AggregationChangeStats aggregation_change(const std::vector<ParamVector>& before,
                                          const std::vector<ParamVector>& after) {
  if (before.size() != after.size()) {
    throw DimensionError("before/after model counts differ");
  }
  AggregationChangeStats stats;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t total = 0;
  for (std::size_t n = 0; n < before.size(); ++n) {
    require_same_dim(before[n], after[n]);
    for (std::size_t d = 0; d < before[n].size(); ++d) {
      const double delta = std::abs(after[n][d] - before[n][d]);
      sum += delta;
      sum_sq += delta * delta;
      stats.max = std::max(stats.max, delta);
      ++total;
    }
  }
  if (total > 0) {
    stats.mean = sum / static_cast<double>(total);
    const double var = sum_sq / static_cast<double>(total) - stats.mean * stats.mean;
    stats.stddev = std::sqrt(std::max(var, 0.0));
  }
  return stats;
}

namespace {

double party_average(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

}  // namespace

RunSummary summarize(const std::vector<RoundRecord>& records, std::string_view preset,
                     std::string_view config_fingerprint) {
  if (records.empty()) {
    throw DataError("cannot summarize an empty record stream");
  }
  RunSummary summary;
  summary.preset = std::string(preset);
  summary.config_fingerprint = std::string(config_fingerprint);
  for (const RoundRecord& record : records) {
    summary.rounds.push_back(record.round);
    summary.avg_test_accuracy.push_back(party_average(record.test_accuracy));
    summary.avg_train_loss.push_back(party_average(record.train_loss));
    summary.change_mean.push_back(record.change.mean);
    summary.change_std.push_back(record.change.stddev);
  }
  summary.final_avg_test_accuracy = summary.avg_test_accuracy.back();
  return summary;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_round_csv(std::ostream& out, std::string_view preset,
                     const std::vector<RoundRecord>& records) {
  out << "round,preset,party_count,avg_test_acc,avg_train_loss,"
         "agg_change_mean,agg_change_std,agg_change_max\n";
  for (const RoundRecord& record : records) {
    out << record.round << ',' << preset << ',' << record.active.size() << ','
        << format_double(party_average(record.test_accuracy)) << ','
        << format_double(party_average(record.train_loss)) << ','
        << format_double(record.change.mean) << ',' << format_double(record.change.stddev) << ','
        << format_double(record.change.max) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("bad numeric field '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<CsvRound> parse_round_csv(std::istream& in) {
  std::vector<CsvRound> rows;
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty CSV");
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 8) {
      throw DataError("expected 8 CSV fields, got " + std::to_string(fields.size()));
    }
    CsvRound row;
    row.round = static_cast<std::size_t>(parse_double(fields[0]));
    row.preset = fields[1];
    row.party_count = static_cast<std::size_t>(parse_double(fields[2]));
    row.avg_test_acc = parse_double(fields[3]);
    row.avg_train_loss = parse_double(fields[4]);
    row.agg_change_mean = parse_double(fields[5]);
    row.agg_change_std = parse_double(fields[6]);
    row.agg_change_max = parse_double(fields[7]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_json(std::ostream& out, const RunSummary& summary,
                        std::string_view resolved_config) {
  nlohmann::ordered_json doc;
  doc["preset"] = summary.preset;
  doc["final_avg_test_accuracy"] = summary.final_avg_test_accuracy;
  doc["rounds"] = summary.rounds;
  doc["avg_test_accuracy"] = summary.avg_test_accuracy;
  doc["avg_train_loss"] = summary.avg_train_loss;
  doc["agg_change_mean"] = summary.change_mean;
  doc["agg_change_std"] = summary.change_std;
  doc["config_fingerprint"] = summary.config_fingerprint;
  doc["config"] = std::string(resolved_config);
  out << doc.dump(2) << '\n';
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::string fingerprint_hex(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

}  // namespace fedplus
