// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "portmatch/portmatch.hpp"

namespace {

using namespace portmatch;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Matrix<Weight> random_square_voq(Rng& rng, std::size_t max_n, Weight max_entry) {
  const std::size_t n = 1 + uniform_index(rng, max_n);
  Matrix<Weight> v(n, n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (uniform01(rng) < 0.6) v(i, j) = 1 + static_cast<Weight>(uniform_index(rng, max_entry));
  return v;
}

Weight max_port_weight(const Matrix<Weight>& v) {
  Weight best = 0;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    Weight s = 0;
    for (std::size_t j = 0; j < v.cols(); ++j) s += v(i, j);
    best = std::max(best, s);
  }
  for (std::size_t j = 0; j < v.cols(); ++j) {
    Weight s = 0;
    for (std::size_t i = 0; i < v.rows(); ++i) s += v(i, j);
    best = std::max(best, s);
  }
  return best;
}

// 1. Critical-port policies clear the adversarial loading in exactly n slots.
Outcome clearance_optimality() {
  Outcome out;
  const auto t0 = Clock::now();
  for (std::size_t n : {8, 16})
    for (const char* p : {"critical", "lhpf", "mvm"}) {
      const auto rep = run_clearance(clearance_example(n), parse_policy(p));
      out.detail += std::string(p) + "(" + std::to_string(n) + ")=" +
                    std::to_string(rep.slots_used) + " ";
      if (rep.slots_used != static_cast<std::int64_t>(n)) out.pass = false;
    }
  const double t = seconds_since(t0);
  out.detail += fmt("in %.3fs", t);
  if (t >= 1.0) out.pass = false;
  return out;
}

// 2. Edge-weight policies need at least 2N - 3 slots on the same loading.
Outcome mwm_suboptimality() {
  Outcome out;
  const auto t0 = Clock::now();
  std::int64_t worst_margin = 1 << 30;
  for (std::size_t n : {8, 16, 32})
    for (const char* p : {"mwm", "gmm", "mwm-alpha:0.5", "mwm-0+"}) {
      const auto rep = run_clearance(clearance_example(n), parse_policy(p));
      const auto bound = 2 * static_cast<std::int64_t>(n) - 3;
      worst_margin = std::min(worst_margin, rep.slots_used - bound);
      if (rep.slots_used < bound) {
        out.pass = false;
        out.detail += std::string(p) + "(" + std::to_string(n) + ")=" +
                      std::to_string(rep.slots_used) + " ";
      }
      if (n == 32) out.detail += std::string(p) + "(32)=" + std::to_string(rep.slots_used) + " ";
    }
  const double t = seconds_since(t0);
  out.detail += "bound 61 at N=32; min slack " + std::to_string(worst_margin) + fmt(", %.3fs", t);
  if (t >= 5.0) out.pass = false;
  return out;
}

// 3. Under a critical-port policy the max port weight falls by one per slot.
// The weights are recomputed from the replayed schedule.
Outcome drain_rate() {
  Outcome out;
  Rng rng(303);
  ClearanceOptions opts;
  opts.keep_schedule = true;
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    Matrix<Weight> v = random_square_voq(rng, 6, 5);
    const auto rep = run_clearance(v, {PolicyKind::CriticalPort}, opts);
    Weight prev = max_port_weight(v);
    bool ok = rep.slots_used == prev;
    for (const Matching& m : rep.schedule) {
      for (const Edge& e : m.pairs()) --v(e.input, e.output);
      const Weight now = max_port_weight(v);
      ok = ok && now == prev - 1;
      prev = now;
    }
    ok = ok && prev == 0;
    bad += !ok;
  }
  out.pass = bad == 0;
  out.detail = "100 instances, " + std::to_string(bad) + " deviations";
  return out;
}

// 4. Oracle battery over 500 instances within the 12-port cap.
Outcome oracle_battery() {
  Outcome out;
  const auto t0 = Clock::now();
  VerifyOptions opts;
  opts.instances = 500;
  opts.max_ports = 12;
  opts.seed = 404;
  opts.fail_fast = false;
  const VerifyReport rep = run_battery(opts);
  const double t = seconds_since(t0);
  out.pass = rep.ok() && rep.instances >= 500 && t < 60.0;
  out.detail = std::to_string(rep.instances) + " instances, " + std::to_string(rep.checks) +
               " checks, " + std::to_string(rep.violations.size()) + " violations" +
               fmt(", %.2fs", t);
  if (!rep.ok()) out.detail += "; first: " + rep.violations.front().lemma;
  return out;
}

// 5. Batch decomposition reconstructs the loading within tau* slots.
Outcome bvn() {
  Outcome out;
  const auto t0 = Clock::now();
  Rng rng(505);
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const Matrix<Weight> v = random_square_voq(rng, 8, 9);
    const BvnDecomposition d = bvn_decompose(v);
    Matrix<Weight> sum(v.rows(), v.cols(), 0);
    Weight total = 0;
    for (std::size_t k = 0; k < d.matchings.size(); ++k) {
      total += d.multiplicities[k];
      for (const Edge& e : d.matchings[k].pairs()) sum(e.input, e.output) += d.multiplicities[k];
    }
    bad += !(sum == v && total <= max_port_weight(v));
  }
  const double t = seconds_since(t0);
  out.pass = bad == 0 && t < 10.0;
  out.detail = "100 instances, " + std::to_string(bad) + " failures" + fmt(", %.3fs", t);
  return out;
}

// 6. No growth trend of the max port queue at load 0.9.
Outcome stability() {
  Outcome out;
  const auto t0 = Clock::now();
  for (const char* p : {"mvm", "lhpf"})
    for (std::uint64_t seed : {61u, 62u, 63u}) {
      SimConfig c;
      c.n_inputs = c.n_outputs = 8;
      c.policy = parse_policy(p);
      c.traffic = uniform_bernoulli(8, 8, 0.9);
      c.seed = seed;
      c.max_slots = 500000;
      c.stop.ci_enabled = false;
      c.conservation_every = 10000;
      const SimReport r = simulate(c);
      const double q2 = r.max_queue_quarter_mean[1], q4 = r.max_queue_quarter_mean[3];
      const bool ok = q4 <= 2.0 * q2 && r.conservation_checks == 50;
      out.pass = out.pass && ok;
      out.detail += std::string(p) + "/" + std::to_string(seed) + fmt(" q2=%.2f", q2) +
                    fmt(" q4=%.2f; ", q4);
    }
  out.detail += fmt("%.1fs", seconds_since(t0));
  return out;
}

// 7. MVM delay is no worse than 1.1x MWM delay, averaged over 5 seeds.
Outcome delay_ordering() {
  Outcome out;
  const auto t0 = Clock::now();
  SweepSpec s;
  s.n = 8;
  s.loads = {0.8, 0.9};
  s.policies = {{PolicyKind::Mvm}, {PolicyKind::Mwm}};
  s.seeds = 5;
  s.master_seed = 707;
  s.max_slots = 2000000;
  s.stop.ci_enabled = true;
  const auto rows = run_sweep(s);
  for (double load : s.loads) {
    double mvm = 0.0, mwm = 0.0;
    int ci_stops = 0;
    for (const SweepRow& r : rows) {
      if (r.load != load) continue;
      const double d = r.report.mean_delay.value_or(NAN);
      (r.policy.kind == PolicyKind::Mvm ? mvm : mwm) += d / s.seeds;
      ci_stops += r.report.stop_reason == StopReason::ConfidenceInterval;
    }
    const bool ok = mvm <= 1.1 * mwm;
    out.pass = out.pass && ok;
    out.detail += fmt("load %.1f: ", load) + fmt("mvm %.3f", mvm) + fmt(" mwm %.3f", mwm) +
                  " (" + std::to_string(ci_stops) + "/10 ci stops); ";
  }
  out.detail += fmt("%.1fs", seconds_since(t0));
  return out;
}

// 8. Mean burst length over 10^6 bursts against the truncated Zipf mean.
Outcome burst_calibration() {
  Outcome out;
  long double num = 0.0L, den = 0.0L;
  for (int k = 100; k >= 1; --k) {
    const long double p = std::pow(static_cast<long double>(k), -1.25L);
    num += k * p;
    den += p;
  }
  const double analytic = static_cast<double>(num / den);
  // Same quantity evaluated separately in extended precision offline.
  const bool analytic_ok = std::abs(analytic - 12.458352319851612) < 1e-9;
  TrafficGenerator g(uniform_bursty(8, 8, 0.9), 808);
  std::vector<Edge> buf;
  while (g.burst_stats().bursts < 1000000) {
    buf.clear();
    g.arrivals(buf);
  }
  const double empirical = g.burst_stats().mean();
  const double rel = std::abs(empirical - analytic) / analytic;
  out.pass = rel <= 0.02 && analytic_ok;
  out.detail = fmt("analytic %.6f", analytic) + fmt(" empirical %.6f", empirical) +
               fmt(" over %.0f bursts", static_cast<double>(g.burst_stats().bursts)) +
               fmt(", rel err %.4f", rel);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"clearance optimality", clearance_optimality},
      {"mwm family needs 2N-3 slots", mwm_suboptimality},
      {"max port weight drains by one", drain_rate},
      {"oracle battery", oracle_battery},
      {"batch decomposition", bvn},
      {"stability at load 0.9", stability},
      {"delay ordering mvm vs mwm", delay_ordering},
      {"bursty calibration", burst_calibration},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu (%s): %s  [%s]\n", k + 1, criteria[k].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
