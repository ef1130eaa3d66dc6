#include "hapsim/scenario/experiment.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "hapsim/analytics/saturation.hpp"
#include "hapsim/error.hpp"

namespace hapsim::scenario {
namespace {

analytics::ResultRow run_checked(const Job& job) {
  RunOptions opt;
  opt.keep_signalling = false;
  auto result = simulate(job.config, job.seed, opt);
  const auto& ledger = result.metrics.ledger;
  if (ledger.total() != job.config.duration_us()) {
    throw Error("airtime ledger sums to " + std::to_string(ledger.total()) + " us, expected " +
                std::to_string(job.config.duration_us()));
  }
  const auto& row = result.row;
  if (row.total_bps != row.wifi_aggregate_bps + row.lte_aggregate_bps) {
    throw Error("total throughput differs from Wi-Fi + LTE-U aggregate");
  }
  return row;
}

}  // namespace

std::vector<analytics::ResultRow> run_jobs(const std::vector<Job>& jobs, int parallel) {
  std::vector<analytics::ResultRow> rows(jobs.size());
  const auto workers = static_cast<std::size_t>(std::max(1, parallel));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        rows[i] = run_checked(jobs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  if (workers == 1 || jobs.size() <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, jobs.size()); ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  analytics::sort_rows(rows);
  return rows;
}

std::vector<analytics::ResultRow> run(const ScenarioConfig& config, int parallel) {
  config.validate();
  std::vector<Job> jobs;
  for (auto seed : config.seeds) jobs.push_back({config, seed});
  return run_jobs(jobs, parallel);
}

SweepAxis parse_axis(std::string_view text) {
  if (text == "N" || text == "n") return SweepAxis::N;
  if (text == "M" || text == "m") return SweepAxis::M;
  throw ConfigError("sweep axis must be N or M, got '" + std::string(text) + "'");
}

std::vector<analytics::ResultRow> sweep(const ScenarioConfig& config, SweepAxis axis,
                                        const std::vector<int>& values,
                                        const std::vector<Scheme>& schemes, int parallel) {
  if (values.empty()) throw ConfigError("sweep needs at least one axis value");
  std::vector<Job> jobs;
  // wifi-only ignores M, so an M sweep collapses to one point per N.
  std::set<std::tuple<Scheme, int, int>> seen;
  for (auto scheme : schemes) {
    for (int v : values) {
      ScenarioConfig c = config;
      c.scheme = scheme;
      (axis == SweepAxis::N ? c.n_wifi : c.m_lte) = v;
      c.validate();
      if (!seen.insert({scheme, c.n_wifi, c.effective_m()}).second) continue;
      for (auto seed : c.seeds) jobs.push_back({c, seed});
    }
  }
  return run_jobs(jobs, parallel);
}

std::vector<OracleRow> oracle_table(const std::vector<int>& n_values, const wifi::MacTiming& timing,
                                    wifi::AccessMode mode) {
  std::vector<OracleRow> out;
  for (int n : n_values) {
    const auto model = analytics::solve_fixed_point(n, timing.cw_min, timing.max_backoff_stage);
    out.push_back({n, model.tau, model.p, analytics::saturation_throughput(model, timing, mode),
                   model.tau_residual});
  }
  return out;
}

}  // namespace hapsim::scenario
