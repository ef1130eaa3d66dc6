#include "hapsim/scenario/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "hapsim/error.hpp"

namespace hapsim::scenario {
namespace {

constexpr const char* kResultHeader =
    "scheme,n_wifi,m_lte,seed,per_user_wifi_bps,wifi_aggregate_bps,lte_aggregate_bps,total_bps,"
    "collision_rate,airtime_idle,airtime_success,airtime_collision,airtime_cfp,airtime_beacon";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_field(const std::string& text, std::size_t line_no, const char* column) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError("results line " + std::to_string(line_no) + ": bad " + column + " '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_results_csv(std::ostream& os, const std::vector<analytics::ResultRow>& rows) {
  os << kResultHeader << '\n';
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.n_wifi << ',' << r.m_lte << ',' << r.seed;
    for (double v : analytics::metric_values(r)) os << ',' << format_number(v);
    os << '\n';
  }
}

std::vector<analytics::ResultRow> read_results_csv(std::istream& is) {
  std::vector<analytics::ResultRow> rows;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(is, line) || line != kResultHeader) {
    throw ConfigError("results CSV: missing or unexpected header");
  }
  ++line_no;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4 + analytics::kMetricCount) {
      throw ConfigError("results line " + std::to_string(line_no) + ": expected " +
                        std::to_string(4 + analytics::kMetricCount) + " fields");
    }
    analytics::ResultRow r;
    r.scheme = f[0];
    parse_scheme(r.scheme);
    r.n_wifi = parse_field<int>(f[1], line_no, "n_wifi");
    r.m_lte = parse_field<int>(f[2], line_no, "m_lte");
    r.seed = parse_field<std::uint64_t>(f[3], line_no, "seed");
    double* metrics[] = {&r.per_user_wifi_bps, &r.wifi_aggregate_bps, &r.lte_aggregate_bps, &r.total_bps,
                         &r.collision_rate,    &r.airtime_idle,       &r.airtime_success,   &r.airtime_collision,
                         &r.airtime_cfp,       &r.airtime_beacon};
    for (std::size_t k = 0; k < analytics::kMetricCount; ++k) {
      *metrics[k] = parse_field<double>(f[4 + k], line_no, analytics::kMetricNames[k].data());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_report_csv(std::ostream& os, const std::vector<analytics::ReportRow>& report) {
  os << "scheme,n_wifi,m_lte,runs";
  for (auto name : analytics::kMetricNames) os << ',' << name << "_mean," << name << "_ci95";
  os << '\n';
  for (const auto& r : report) {
    os << r.scheme << ',' << r.n_wifi << ',' << r.m_lte << ',' << r.metrics[0].samples;
    for (const auto& e : r.metrics) os << ',' << format_number(e.mean) << ',' << format_number(e.ci95);
    os << '\n';
  }
}

void write_oracle_csv(std::ostream& os, const std::vector<OracleRow>& rows) {
  os << "n,tau,p,throughput_bps,tau_residual\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_number(r.tau) << ',' << format_number(r.p) << ','
       << format_number(r.throughput_bps) << ',' << format_number(r.tau_residual) << '\n';
  }
}

}  // namespace hapsim::scenario
