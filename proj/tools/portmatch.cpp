// portmatch: clearance experiments, delay sweeps, decompositions and the
// oracle battery from the command line.
//
// Exit codes: 0 success, 1 property violation, 2 usage error.

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "portmatch/portmatch.hpp"

namespace {

using namespace portmatch;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Matrix<Weight> load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open instance file \"" + path + "\"");
  try {
    return read_voq(in);
  } catch (const std::runtime_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// Output sink: the --output file when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot write \"" + path + "\"");
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

PolicyId policy_or_usage(const std::string& name) {
  try {
    return parse_policy(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_clear(const ExperimentConfig& cfg, bool show_schedule) {
  const PolicyId policy = policy_or_usage(cfg.policy);
  Matrix<Weight> voq;
  std::string source;
  if (!cfg.instance.empty()) {
    voq = load_instance(cfg.instance);
    source = cfg.instance;
  } else {
    if (cfg.n < 2) throw UsageError("--n must be at least 2");
    voq = clearance_example(cfg.n);
    source = "clearance_example(" + std::to_string(cfg.n) + ")";
  }
  ClearanceOptions opts;
  opts.keep_schedule = show_schedule;
  opts.seed = cfg.master_seed;
  const ClearanceReport rep = run_clearance(voq, policy, opts);

  Sink sink(cfg.output);
  std::ostream& os = sink.out();
  os << "instance: " << source << '\n'
     << "policy: " << to_string(policy) << '\n'
     << "tau_star: " << rep.tau_star << '\n'
     << "slots_used: " << rep.slots_used << '\n';
  if (voq.rows() == voq.cols() && voq.rows() >= 2 && cfg.instance.empty())
    os << "bound_2n_minus_3: " << 2 * static_cast<std::int64_t>(voq.rows()) - 3 << '\n';
  os << "verdict: " << (rep.optimal() ? "OPTIMAL" : "SUBOPTIMAL") << '\n';
  if (show_schedule)
    for (std::size_t s = 0; s < rep.schedule.size(); ++s)
      os << "slot " << s << ": " << to_string(rep.schedule[s]) << '\n';
  return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  SweepSpec spec;
  spec.n = cfg.n;
  spec.traffic = cfg.traffic;
  if (spec.traffic != "bernoulli" && spec.traffic != "bursty")
    throw UsageError("--traffic must be bernoulli or bursty");
  spec.loads = cfg.loads;
  for (double l : spec.loads)
    if (l < 0.0 || l > 1.0) throw UsageError("loads must lie in [0, 1]");
  spec.policies.clear();
  for (const auto& p : cfg.policies) spec.policies.push_back(policy_or_usage(p));
  if (spec.policies.empty()) throw UsageError("--policies is empty");
  if (cfg.seeds < 1) throw UsageError("--seeds must be positive");
  if (cfg.n < 1) throw UsageError("--n must be positive");
  spec.seeds = cfg.seeds;
  spec.master_seed = cfg.master_seed;
  spec.max_slots = cfg.max_slots;
  spec.stop.ci_enabled = cfg.ci;
  spec.zipf_exponent = cfg.zipf;
  spec.support_max = cfg.support;
  if (cfg.burst_source == "input") spec.burst_source = BurstSource::PerInput;
  else if (cfg.burst_source == "edge") spec.burst_source = BurstSource::PerEdge;
  else throw UsageError("--burst-source must be input or edge");
  if (cfg.burst_destination == "burst") spec.burst_destination = BurstDestination::PerBurst;
  else if (cfg.burst_destination == "packet") spec.burst_destination = BurstDestination::PerPacket;
  else throw UsageError("--burst-destination must be burst or packet");

  const std::vector<SweepRow> rows = run_sweep(spec);
  Sink sink(cfg.output);
  sink.out() << kCsvHeader << '\n';
  for (const SweepRow& r : rows) sink.out() << csv_row(r) << '\n';
  return kOk;
}

int cmd_verify(const ExperimentConfig& cfg, const std::string& fault) {
  VerifyOptions opts;
  opts.instances = cfg.random;
  opts.max_ports = cfg.max_ports;
  opts.seed = cfg.master_seed;
  opts.lemmas = cfg.lemmas;
  MatcherSuite suite;
  try {
    if (!fault.empty()) suite = faulty_suite(fault);
    const VerifyReport rep = run_battery(opts, suite);
    std::cout << "instances: " << rep.instances << '\n' << "checks: " << rep.checks << '\n';
    if (rep.ok()) {
      std::cout << "result: PASS\n";
      return kOk;
    }
    const Violation& v = rep.violations.front();
    std::cout << "result: FAIL\n"
              << "lemma: " << v.lemma << '\n'
              << "detail: " << v.detail << '\n'
              << "counterexample:\n"
              << v.instance;
    return kViolation;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_decompose(const ExperimentConfig& cfg) {
  if (cfg.instance.empty()) throw UsageError("decompose needs --instance FILE");
  const Matrix<Weight> voq = load_instance(cfg.instance);
  const BvnDecomposition d = bvn_decompose(voq);
  const bool exact = d.reconstruct(voq.rows(), voq.cols()) == voq;
  const Weight tau = tau_star(voq);

  Sink sink(cfg.output);
  std::ostream& os = sink.out();
  os << "tau_star: " << tau << '\n'
     << "matchings: " << d.matchings.size() << '\n'
     << "total_multiplicity: " << d.total_multiplicity() << '\n';
  for (std::size_t k = 0; k < d.matchings.size(); ++k)
    os << "x" << d.multiplicities[k] << ' ' << to_string(d.matchings[k]) << '\n';
  const bool within = d.total_multiplicity() <= tau;
  os << "reconstruction: " << (exact ? "EXACT" : "MISMATCH") << '\n'
     << "within_tau_star: " << (within ? "yes" : "no") << '\n';
  return exact && within ? kOk : kViolation;
}

/// Finds --config FILE / --config=FILE ahead of the real parse so that file
/// values become defaults and explicit flags override them.
std::string find_config_path(int argc, char** argv) {
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--config") == 0 && k + 1 < argc) return argv[k + 1];
    if (std::strncmp(argv[k], "--config=", 9) == 0) return argv[k] + 9;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig cfg;
  try {
    if (const std::string path = find_config_path(argc, argv); !path.empty()) {
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open config \"" + path + "\"");
      cfg = parse_config(in);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"Node-weighted crossbar scheduling: clearance, simulation, verification"};
  app.require_subcommand(1);
  // Subcommands inherit this, so --config is accepted after the subcommand too.
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file; flags override it");

  auto* clear = app.add_subcommand("clear", "Clear a loading with no arrivals");
  clear->add_option("--n", cfg.n, "size of the adversarial example");
  clear->add_option("--policy", cfg.policy,
                    "critical|lhpf|mvm|mvm-transform|mwm|mwm-alpha:A|mwm-0+|msm|gmm|random");
  clear->add_option("--instance", cfg.instance, "VOQ file instead of the example");
  clear->add_option("--seed", cfg.master_seed, "seed for randomised policies");
  clear->add_option("--output", cfg.output, "write the report here");
  bool show_schedule = false;
  clear->add_flag("--schedule", show_schedule, "print the per-slot matchings");

  auto* sim = app.add_subcommand("simulate", "Delay sweep, CSV output");
  sim->add_option("--n", cfg.n, "switch size");
  sim->add_option("--traffic", cfg.traffic, "bernoulli|bursty");
  sim->add_option("--loads", cfg.loads, "port loads")->delimiter(',');
  sim->add_option("--policies", cfg.policies, "policy names")->delimiter(',');
  sim->add_option("--seeds", cfg.seeds, "replicates per cell");
  sim->add_option("--seed", cfg.master_seed, "master seed");
  sim->add_option("--max-slots", cfg.max_slots, "slot cap per cell");
  bool no_ci = false;
  sim->add_flag("--no-ci", no_ci, "run every cell to --max-slots");
  sim->add_option("--zipf", cfg.zipf, "burst-length Zipf exponent");
  sim->add_option("--support", cfg.support, "largest burst length");
  sim->add_option("--burst-source", cfg.burst_source, "input|edge");
  sim->add_option("--burst-destination", cfg.burst_destination, "burst|packet");
  sim->add_option("--output", cfg.output, "CSV file (default stdout)");

  auto* ver = app.add_subcommand("verify", "Randomised oracle battery");
  ver->add_option("--random", cfg.random, "number of random instances");
  ver->add_option("--max-ports", cfg.max_ports, "port cap per instance");
  ver->add_option("--seed", cfg.master_seed, "seed");
  ver->add_option("--lemma", cfg.lemmas, "restrict to these checks")->delimiter(',');
  std::string fault;
  ver->add_option("--inject-fault", fault, "replace a matcher with a broken one (testing)");
  bool list_lemmas = false;
  ver->add_flag("--list", list_lemmas, "list check names");

  auto* dec = app.add_subcommand("decompose", "Batch decomposition of a VOQ file");
  dec->add_option("--instance", cfg.instance, "VOQ file");
  dec->add_option("--output", cfg.output, "write the listing here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*clear) return cmd_clear(cfg, show_schedule);
    if (*sim) {
      if (no_ci) cfg.ci = false;
      return cmd_simulate(cfg);
    }
    if (*ver) {
      if (list_lemmas) {
        for (const auto& n : lemma_names()) std::cout << n << '\n';
        return kOk;
      }
      return cmd_verify(cfg, fault);
    }
    if (*dec) return cmd_decompose(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  }
  return kUsage;
}
