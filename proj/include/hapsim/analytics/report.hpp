#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hapsim::analytics {

/// One simulated (scheme, N, M, seed) point. Field order is the CSV column order.
struct ResultRow {
  std::string scheme;
  int n_wifi = 0;
  int m_lte = 0;
  std::uint64_t seed = 0;
  double per_user_wifi_bps = 0;
  double wifi_aggregate_bps = 0;
  double lte_aggregate_bps = 0;
  double total_bps = 0;
  double collision_rate = 0;
  double airtime_idle = 0;
  double airtime_success = 0;
  double airtime_collision = 0;
  double airtime_cfp = 0;
  double airtime_beacon = 0;
};

inline constexpr std::size_t kMetricCount = 10;
extern const std::array<std::string_view, kMetricCount> kMetricNames;

std::array<double, kMetricCount> metric_values(const ResultRow& row);

/// Normal-approximation 95% interval across seeds.
struct Estimate {
  double mean = 0;
  double ci95 = 0;  // half-width
  std::size_t samples = 0;

  double lo() const { return mean - ci95; }
  double hi() const { return mean + ci95; }
};

Estimate estimate(std::span<const double> samples);

/// mean(a) - mean(b) exceeds 1.96 standard errors of the difference.
bool greater_at_95(std::span<const double> a, std::span<const double> b);

/// Matched samples (a[i] and b[i] share a seed): the mean difference exceeds
/// 1.96 standard errors of the per-pair differences.
bool paired_greater_at_95(std::span<const double> a, std::span<const double> b);

struct ReportRow {
  std::string scheme;
  int n_wifi = 0;
  int m_lte = 0;
  std::array<Estimate, kMetricCount> metrics;
};

/// Groups rows by (scheme, N, M), sorted by that key.
std::vector<ReportRow> aggregate(std::span<const ResultRow> rows);

/// Sorts by (scheme, N, M, seed).
void sort_rows(std::vector<ResultRow>& rows);

}  // namespace hapsim::analytics
