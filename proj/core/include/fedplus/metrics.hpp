#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fedplus/federation.hpp"

namespace fedplus {

/// Statistics of |after - before| pooled over parties and coordinates.
/// stddev is the population standard deviation.
AggregationChangeStats aggregation_change(const std::vector<ParamVector>& before,
                                          const std::vector<ParamVector>& after);

/// End-of-run digest. Per-round series cover exactly the evaluated rounds.
/// Accuracy is averaged uniformly over parties; records already hold
/// metrics scored per the run's protocol (personal models for persist-mode
/// runs, the central model otherwise).
struct RunSummary {
  std::string preset;
  double final_avg_test_accuracy = 0.0;
  std::vector<std::size_t> rounds;
  std::vector<double> avg_test_accuracy;
  std::vector<double> avg_train_loss;
  std::vector<double> change_mean;
  std::vector<double> change_std;
  double wall_clock_seconds = 0.0;  // reported separately, never serialized
  std::string config_fingerprint;
};

RunSummary summarize(const std::vector<RoundRecord>& records, std::string_view preset,
                     std::string_view config_fingerprint);

/// Doubles rendered with 17 significant digits so text round-trips to the
/// exact bit pattern.
std::string format_double(double v);

/// Round metrics CSV with header
/// round,preset,party_count,avg_test_acc,avg_train_loss,agg_change_mean,agg_change_std,agg_change_max
void write_round_csv(std::ostream& out, std::string_view preset,
                     const std::vector<RoundRecord>& records);

struct CsvRound {
  std::size_t round = 0;
  std::string preset;
  std::size_t party_count = 0;
  double avg_test_acc = 0.0;
  double avg_train_loss = 0.0;
  double agg_change_mean = 0.0;
  double agg_change_std = 0.0;
  double agg_change_max = 0.0;

  friend bool operator==(const CsvRound&, const CsvRound&) = default;
};

std::vector<CsvRound> parse_round_csv(std::istream& in);

/// Summary JSON: the RunSummary series plus the full resolved config text.
/// Contains nothing volatile, so byte-identical reruns produce
/// byte-identical files.
void write_summary_json(std::ostream& out, const RunSummary& summary,
                        std::string_view resolved_config);

std::uint64_t fnv1a64(std::string_view text);
std::string fingerprint_hex(std::string_view text);

}  // namespace fedplus
