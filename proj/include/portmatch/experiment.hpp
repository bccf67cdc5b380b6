#pragma once

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "portmatch/simulator.hpp"

namespace portmatch {

/// A load x policy x replicate grid of simulations on an n x n switch.
struct SweepSpec {
  std::size_t n = 8;
  std::string traffic = "bernoulli";  // or "bursty"
  std::vector<double> loads{0.5};
  std::vector<PolicyId> policies{PolicyId{}};
  int seeds = 1;
  std::uint64_t master_seed = 1;
  Slot max_slots = 100000;
  StopRule stop;
  double zipf_exponent = 1.25;
  int support_max = 100;
  BurstSource burst_source = BurstSource::PerInput;
  BurstDestination burst_destination = BurstDestination::PerBurst;
};

struct SweepRow {
  PolicyId policy;
  std::size_t n1 = 0, n2 = 0;
  std::string traffic;
  double load = 0.0;
  int replicate = 0;
  SimReport report;
};

/// Worker count: PORTMATCH_THREADS if set and positive, otherwise the
/// hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("PORTMATCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline TrafficModel make_traffic(const SweepSpec& spec, double load) {
  if (spec.traffic == "bernoulli") return uniform_bernoulli(spec.n, spec.n, load);
  if (spec.traffic == "bursty")
    return uniform_bursty(spec.n, spec.n, load, spec.zipf_exponent, spec.support_max,
                          spec.burst_source, spec.burst_destination);
  throw std::invalid_argument("unknown traffic \"" + spec.traffic + "\"");
}

/// Grid cells in output order: load, then policy, then replicate. The
/// simulation seed depends only on (master seed, replicate), so every policy
/// and load sees the same arrival randomness for a given replicate.
inline std::vector<SweepRow> sweep_cells(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  for (double load : spec.loads)
    for (const PolicyId& p : spec.policies)
      for (int r = 0; r < spec.seeds; ++r) {
        SweepRow row;
        row.policy = p;
        row.n1 = row.n2 = spec.n;
        row.traffic = spec.traffic;
        row.load = load;
        row.replicate = r;
        row.report.seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(r));
        rows.push_back(std::move(row));
      }
  return rows;
}

inline SimConfig cell_config(const SweepSpec& spec, const SweepRow& row) {
  SimConfig cfg;
  cfg.n_inputs = row.n1;
  cfg.n_outputs = row.n2;
  cfg.policy = row.policy;
  cfg.traffic = make_traffic(spec, row.load);
  cfg.seed = row.report.seed;
  cfg.max_slots = spec.max_slots;
  cfg.stop = spec.stop;
  return cfg;
}

/// Runs every cell, `threads` at a time. Results land in grid order
/// regardless of completion order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = thread_budget()) {
  std::vector<SweepRow> rows = sweep_cells(spec);
  std::vector<SimConfig> configs;
  configs.reserve(rows.size());
  for (const SweepRow& r : rows) configs.push_back(cell_config(spec, r));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(rows.size());
  auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      try {
        rows[k].report = simulate(configs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, rows.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

inline constexpr const char kCsvHeader[] =
    "policy,n1,n2,traffic,load,seed,slots,mean_delay,ci99,max_q_final,stop_reason";

namespace detail {
inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}
}  // namespace detail

/// One CSV line (no newline). Absent statistics are empty fields.
inline std::string csv_row(const SweepRow& row) {
  const SimReport& r = row.report;
  std::string s = to_string(row.policy);
  s += "," + std::to_string(row.n1) + "," + std::to_string(row.n2) + "," + row.traffic;
  s += "," + detail::fmt("%.4g", row.load);
  s += "," + std::to_string(r.seed);
  s += "," + std::to_string(r.slots_run);
  s += "," + (r.mean_delay ? detail::fmt("%.6f", *r.mean_delay) : std::string());
  s += "," + (r.ci99_halfwidth ? detail::fmt("%.6f", *r.ci99_halfwidth) : std::string());
  s += "," + std::to_string(r.max_queue_final);
  s += "," + to_string(r.stop_reason);
  return s;
}

}  // namespace portmatch
