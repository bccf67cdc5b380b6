#include <gtest/gtest.h>

#include "portmatch/config.hpp"
#include "portmatch/experiment.hpp"
#include "portmatch/verify.hpp"

namespace portmatch {
namespace {

TEST(Config, DefaultsRoundTrip) {
  const ExperimentConfig c;
  EXPECT_EQ(parse_config(to_text(c)), c);
}

TEST(Config, RandomRoundTrip) {
  Rng rng(17);
  const std::vector<std::string> words{"mvm", "mwm", "lhpf", "mwm-alpha:0.5", "random", "gmm"};
  for (int t = 0; t < 200; ++t) {
    ExperimentConfig c;
    c.command = words[uniform_index(rng, words.size())];
    c.n = uniform_index(rng, 64);
    c.policy = words[uniform_index(rng, words.size())];
    c.policies.clear();
    for (std::size_t k = uniform_index(rng, 4); k > 0; --k)
      c.policies.push_back(words[uniform_index(rng, words.size())]);
    c.instance = uniform01(rng) < 0.5 ? "" : "dir/file.voq";
    c.traffic = uniform01(rng) < 0.5 ? "bernoulli" : "bursty";
    c.loads.clear();
    for (std::size_t k = uniform_index(rng, 5); k > 0; --k) c.loads.push_back(uniform01(rng));
    c.seeds = static_cast<int>(uniform_index(rng, 100));
    c.master_seed = rng();
    c.max_slots = static_cast<std::int64_t>(uniform_index(rng, 10000000));
    c.ci = uniform01(rng) < 0.5;
    c.zipf = 1.0 + uniform01(rng);
    c.support = static_cast<int>(uniform_index(rng, 200)) + 1;
    c.burst_source = uniform01(rng) < 0.5 ? "input" : "edge";
    c.burst_destination = uniform01(rng) < 0.5 ? "burst" : "packet";
    c.random = uniform_index(rng, 5000);
    c.max_ports = uniform_index(rng, 20);
    c.lemmas.clear();
    if (uniform01(rng) < 0.5) c.lemmas = {"hall", "bvn"};
    c.output = uniform01(rng) < 0.5 ? "" : "out.csv";
    EXPECT_EQ(parse_config(to_text(c)), c) << to_text(c);
  }
}

TEST(Config, CommentsAndOverrides) {
  const ExperimentConfig c = parse_config("# sweep\n\n  n = 16 \nloads=0.5, 0.9\nci=no\n");
  EXPECT_EQ(c.n, 16u);
  EXPECT_EQ(c.loads, (std::vector<double>{0.5, 0.9}));
  EXPECT_FALSE(c.ci);
  ExperimentConfig base;
  base.policy = "msm";
  EXPECT_EQ(parse_config("n=4\n", base).policy, "msm");
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("nonsense\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("colour=red\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("n=abc\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("n=-3\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("master_seed=-1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("ci=maybe\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("loads=0.5,x\n"), std::invalid_argument);
}

SweepSpec small_sweep() {
  SweepSpec s;
  s.n = 4;
  s.loads = {0.5, 0.8};
  s.policies = {{PolicyKind::Mvm}, {PolicyKind::Mwm}, {PolicyKind::RandomMaximal}};
  s.seeds = 2;
  s.master_seed = 7;
  s.max_slots = 3000;
  s.stop.ci_enabled = false;
  return s;
}

TEST(Sweep, GridOrderAndSeeds) {
  const auto cells = sweep_cells(small_sweep());
  ASSERT_EQ(cells.size(), 12u);
  EXPECT_EQ(cells[0].load, 0.5);
  EXPECT_EQ(cells[6].load, 0.8);
  EXPECT_EQ(to_string(cells[2].policy), "mwm");
  EXPECT_EQ(cells[3].replicate, 1);
  // Same replicate, same arrival seed across policies and loads.
  EXPECT_EQ(cells[0].report.seed, cells[2].report.seed);
  EXPECT_EQ(cells[0].report.seed, cells[6].report.seed);
  EXPECT_NE(cells[0].report.seed, cells[1].report.seed);
}

TEST(Sweep, CommonArrivalsAcrossPolicies) {
  const auto rows = run_sweep(small_sweep(), 1);
  for (std::size_t k = 0; k < rows.size(); k += 6)
    for (std::size_t p = 1; p < 3; ++p)
      for (std::size_t r = 0; r < 2; ++r)
        EXPECT_EQ(rows[k + r].report.arrived, rows[k + 2 * p + r].report.arrived);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const SweepSpec s = small_sweep();
  const auto a = run_sweep(s, 1), b = run_sweep(s, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(csv_row(a[k]), csv_row(b[k]));
}

TEST(Csv, RowFormat) {
  SweepRow row;
  row.policy = {PolicyKind::Mvm};
  row.n1 = row.n2 = 8;
  row.traffic = "bernoulli";
  row.load = 0.9;
  row.report.seed = 42;
  row.report.slots_run = 1000;
  row.report.max_queue_final = 3;
  EXPECT_EQ(csv_row(row), "mvm,8,8,bernoulli,0.9,42,1000,,,3,max_slots");
  row.report.mean_delay = 2.5;
  row.report.ci99_halfwidth = 0.01;
  row.report.stop_reason = StopReason::ConfidenceInterval;
  EXPECT_EQ(csv_row(row), "mvm,8,8,bernoulli,0.9,42,1000,2.500000,0.010000,3,ci");
  EXPECT_EQ(std::string(kCsvHeader),
            "policy,n1,n2,traffic,load,seed,slots,mean_delay,ci99,max_q_final,stop_reason");
}

TEST(Sweep, ZeroLoadRowsHaveNoDelay) {
  SweepSpec s = small_sweep();
  s.loads = {0.0};
  for (const SweepRow& r : run_sweep(s, 1)) EXPECT_FALSE(r.report.mean_delay.has_value());
}

TEST(Battery, CleanBuildPasses) {
  VerifyOptions o;
  o.instances = 150;
  const VerifyReport r = run_battery(o);
  EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front().lemma + ": " + r.violations.front().detail);
  EXPECT_EQ(r.instances, 150u);
  EXPECT_GT(r.checks, 150u);
}

TEST(Battery, EveryInjectedFaultIsCaught) {
  for (const char* which : {"mvm", "mvm-transform", "msm", "lhpf", "critical"}) {
    VerifyOptions o;
    o.instances = 200;
    const VerifyReport r = run_battery(o, faulty_suite(which));
    ASSERT_FALSE(r.ok()) << which;
    EXPECT_FALSE(r.violations.front().instance.empty());
    // Fail-fast finishes the offending instance and stops there.
    EXPECT_LT(r.instances, 200u);
    for (const Violation& v : r.violations) EXPECT_EQ(v.instance, r.violations.front().instance);
  }
  EXPECT_THROW(faulty_suite("islip"), std::invalid_argument);
}

TEST(Battery, LemmaFilter) {
  VerifyOptions o;
  o.instances = 50;
  o.lemmas = {"lhpf-is-critical"};
  const VerifyReport r = run_battery(o);
  EXPECT_TRUE(r.ok());
  // A fault in a matcher the filtered lemma never calls goes unnoticed.
  EXPECT_TRUE(run_battery(o, faulty_suite("msm")).ok());
  o.lemmas = {"no-such-check"};
  EXPECT_THROW(run_battery(o), std::invalid_argument);
}

}  // namespace
}  // namespace portmatch
