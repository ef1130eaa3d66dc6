#include "hapsim/analytics/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "hapsim/error.hpp"

namespace hapsim::analytics {
namespace {

constexpr double kZ95 = 1.959963984540054;

double variance(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

const std::array<std::string_view, kMetricCount> kMetricNames = {
    "per_user_wifi_bps", "wifi_aggregate_bps", "lte_aggregate_bps", "total_bps",
    "collision_rate",    "airtime_idle",       "airtime_success",   "airtime_collision",
    "airtime_cfp",       "airtime_beacon"};

std::array<double, kMetricCount> metric_values(const ResultRow& r) {
  return {r.per_user_wifi_bps, r.wifi_aggregate_bps, r.lte_aggregate_bps, r.total_bps,
          r.collision_rate,    r.airtime_idle,       r.airtime_success,   r.airtime_collision,
          r.airtime_cfp,       r.airtime_beacon};
}

Estimate estimate(std::span<const double> samples) {
  if (samples.empty()) throw Error("estimate: no samples");
  Estimate e;
  e.samples = samples.size();
  double sum = 0.0;
  for (double x : samples) sum += x;
  e.mean = sum / static_cast<double>(samples.size());
  e.ci95 = kZ95 * std::sqrt(variance(samples, e.mean) / static_cast<double>(samples.size()));
  return e;
}

bool greater_at_95(std::span<const double> a, std::span<const double> b) {
  const auto ea = estimate(a);
  const auto eb = estimate(b);
  const double se = std::sqrt(variance(a, ea.mean) / static_cast<double>(a.size()) +
                              variance(b, eb.mean) / static_cast<double>(b.size()));
  return ea.mean - eb.mean > kZ95 * se;
}

bool paired_greater_at_95(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired comparison needs equally many samples");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const auto e = estimate(diff);
  return e.mean > e.ci95;
}

std::vector<ReportRow> aggregate(std::span<const ResultRow> rows) {
  if (rows.empty()) throw Error("aggregate: need at least one run");
  std::map<std::tuple<std::string, int, int>, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) groups[{r.scheme, r.n_wifi, r.m_lte}].push_back(&r);

  std::vector<ReportRow> out;
  for (const auto& [key, members] : groups) {
    ReportRow rep;
    std::tie(rep.scheme, rep.n_wifi, rep.m_lte) = key;
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      std::vector<double> xs;
      xs.reserve(members.size());
      for (const auto* r : members) xs.push_back(metric_values(*r)[k]);
      rep.metrics[k] = estimate(xs);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.scheme, a.n_wifi, a.m_lte, a.seed) < std::tie(b.scheme, b.n_wifi, b.m_lte, b.seed);
  });
}

}  // namespace hapsim::analytics
