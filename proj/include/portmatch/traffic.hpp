#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "portmatch/graph.hpp"
#include "portmatch/rng.hpp"

namespace portmatch {

/// Independent Bernoulli arrivals: VOQ (i, j) receives a packet each slot with
/// probability rate(i, j).
struct BernoulliTraffic {
  Matrix<double> rate;
};

/// Which entity runs the on/off process.
enum class BurstSource { PerInput, PerEdge };
/// When the destination of a PerInput source is drawn.
enum class BurstDestination { PerBurst, PerPacket };

/// On/off sources. Active periods last a Zipf(exponent) number of slots on
/// {1..support_max} and inject one packet per slot; idle periods are geometric
/// on {0, 1, ...} with mean `mean_idle` (infinite: the source stays silent).
struct BurstyTraffic {
  std::size_t n_inputs = 0;
  std::size_t n_outputs = 0;
  double zipf_exponent = 1.25;
  int support_max = 100;
  double mean_idle = 0.0;
  BurstSource source = BurstSource::PerInput;
  BurstDestination destination = BurstDestination::PerBurst;
  /// PerInput only: row i is input i's destination distribution.
  Matrix<double> dest_distribution;
};

using TrafficModel = std::variant<BernoulliTraffic, BurstyTraffic>;

/// Truncated Zipf law on {1..support}: P(k) proportional to k^-exponent.
class ZipfSampler {
 public:
  ZipfSampler(double exponent, int support) {
    if (support < 1) throw std::invalid_argument("ZipfSampler: support must be >= 1");
    cdf_.reserve(static_cast<std::size_t>(support));
    double acc = 0.0, first = 0.0;
    for (int k = 1; k <= support; ++k) {
      const double p = std::pow(static_cast<double>(k), -exponent);
      acc += p;
      first += k * p;
      cdf_.push_back(acc);
    }
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
    mean_ = first / acc;
  }

  std::int64_t operator()(Rng& rng) const {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::int64_t>(it - cdf_.begin()) + 1;
  }

  double mean() const { return mean_; }
  std::size_t support() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
  double mean_ = 0.0;
};

inline std::size_t traffic_inputs(const TrafficModel& m) {
  return std::visit(
      [](const auto& t) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, BernoulliTraffic>)
          return t.rate.rows();
        else
          return t.n_inputs;
      },
      m);
}

inline std::size_t traffic_outputs(const TrafficModel& m) {
  return std::visit(
      [](const auto& t) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, BernoulliTraffic>)
          return t.rate.cols();
        else
          return t.n_outputs;
      },
      m);
}

/// Fraction of slots a bursty source is active.
inline double bursty_source_load(const BurstyTraffic& t) {
  if (std::isinf(t.mean_idle)) return 0.0;
  const double a = ZipfSampler(t.zipf_exponent, t.support_max).mean();
  return a / (a + t.mean_idle);
}

/// Analytic per-port arrival rates: first the inputs, then the outputs.
struct PortLoads {
  std::vector<double> input;
  std::vector<double> output;

  double max() const {
    double m = 0.0;
    for (double x : input) m = std::max(m, x);
    for (double x : output) m = std::max(m, x);
    return m;
  }
  /// min over ports of 1 - lambda.
  double epsilon_star() const { return 1.0 - max(); }
  bool admissible() const { return max() < 1.0; }
};

inline PortLoads port_loads(const TrafficModel& model) {
  PortLoads out;
  out.input.assign(traffic_inputs(model), 0.0);
  out.output.assign(traffic_outputs(model), 0.0);
  if (const auto* b = std::get_if<BernoulliTraffic>(&model)) {
    for (std::size_t i = 0; i < b->rate.rows(); ++i)
      for (std::size_t j = 0; j < b->rate.cols(); ++j) {
        out.input[i] += b->rate(i, j);
        out.output[j] += b->rate(i, j);
      }
    return out;
  }
  const auto& t = std::get<BurstyTraffic>(model);
  const double rho = bursty_source_load(t);
  for (std::size_t i = 0; i < t.n_inputs; ++i)
    for (std::size_t j = 0; j < t.n_outputs; ++j) {
      const double r = t.source == BurstSource::PerEdge ? rho : rho * t.dest_distribution(i, j);
      out.input[i] += r;
      out.output[j] += r;
    }
  return out;
}

/// Uniform Bernoulli traffic with every port loaded at `load`.
inline BernoulliTraffic uniform_bernoulli(std::size_t n1, std::size_t n2, double load) {
  if (load < 0.0) throw std::invalid_argument("uniform_bernoulli: negative load");
  const double per = load / static_cast<double>(n2);
  if (per > 1.0) throw std::invalid_argument("uniform_bernoulli: per-VOQ rate exceeds 1");
  return {Matrix<double>(n1, n2, per)};
}

/// Bursty traffic with uniform destinations; the idle mean is solved so each
/// input carries `load` packets per slot.
inline BurstyTraffic uniform_bursty(std::size_t n1, std::size_t n2, double load,
                                    double zipf_exponent = 1.25, int support_max = 100,
                                    BurstSource source = BurstSource::PerInput,
                                    BurstDestination destination = BurstDestination::PerBurst) {
  BurstyTraffic t;
  t.n_inputs = n1;
  t.n_outputs = n2;
  t.zipf_exponent = zipf_exponent;
  t.support_max = support_max;
  t.source = source;
  t.destination = destination;
  t.dest_distribution = Matrix<double>(n1, n2, 1.0 / static_cast<double>(n2));
  const double rho = source == BurstSource::PerEdge ? load / static_cast<double>(n2) : load;
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("uniform_bursty: load out of range");
  const double a = ZipfSampler(zipf_exponent, support_max).mean();
  t.mean_idle = rho == 0.0 ? std::numeric_limits<double>::infinity() : a * (1.0 - rho) / rho;
  return t;
}

/// Completed-burst bookkeeping for calibration checks.
struct BurstStats {
  std::int64_t bursts = 0;
  std::int64_t burst_slots = 0;
  double mean() const { return bursts == 0 ? 0.0 : static_cast<double>(burst_slots) / bursts; }
};

/// Stateful arrival process. Every source (an input for Bernoulli and
/// PerInput bursty traffic, a VOQ for PerEdge) owns its own RNG substream.
class TrafficGenerator {
 public:
  TrafficGenerator(TrafficModel model, std::uint64_t seed)
      : model_(std::move(model)),
        n1_(traffic_inputs(model_)),
        n2_(traffic_outputs(model_)) {
    if (const auto* b = std::get_if<BernoulliTraffic>(&model_)) {
      for (double r : b->rate.data())
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("Bernoulli rate outside [0,1]");
      for (std::size_t i = 0; i < n1_; ++i) streams_.push_back(make_stream(seed, i + 1));
      return;
    }
    const auto& t = std::get<BurstyTraffic>(model_);
    if (t.mean_idle < 0.0) throw std::invalid_argument("bursty: negative mean idle");
    if (t.source == BurstSource::PerInput &&
        (t.dest_distribution.rows() != n1_ || t.dest_distribution.cols() != n2_))
      throw std::invalid_argument("bursty: destination distribution shape mismatch");
    zipf_.emplace_back(t.zipf_exponent, t.support_max);
    const std::size_t n_sources = t.source == BurstSource::PerEdge ? n1_ * n2_ : n1_;
    sources_.resize(n_sources);
    for (std::size_t s = 0; s < n_sources; ++s) {
      streams_.push_back(make_stream(seed, s + 1));
      sources_[s].idle = draw_idle(t, streams_[s]);
    }
  }

  std::size_t n_inputs() const { return n1_; }
  std::size_t n_outputs() const { return n2_; }
  const TrafficModel& model() const { return model_; }
  const BurstStats& burst_stats() const { return bursts_; }

  /// Appends this slot's arrivals to `out` (input-major order).
  void arrivals(std::vector<Edge>& out) {
    if (const auto* b = std::get_if<BernoulliTraffic>(&model_)) {
      for (std::size_t i = 0; i < n1_; ++i)
        for (std::size_t j = 0; j < n2_; ++j)
          if (bernoulli(streams_[i], b->rate(i, j))) out.push_back({i, j});
      return;
    }
    const auto& t = std::get<BurstyTraffic>(model_);
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      Source& src = sources_[s];
      Rng& rng = streams_[s];
      if (src.active == 0) {
        if (src.idle > 0) {
          --src.idle;
          continue;
        }
        src.active = zipf_.front()(rng);
        bursts_.bursts += 1;
        bursts_.burst_slots += src.active;
        if (t.source == BurstSource::PerInput && t.destination == BurstDestination::PerBurst)
          src.dest = draw_destination(t, s, rng);
      }
      std::size_t i = s, j = src.dest;
      if (t.source == BurstSource::PerEdge) {
        i = s / n2_;
        j = s % n2_;
      } else if (t.destination == BurstDestination::PerPacket) {
        j = draw_destination(t, s, rng);
      }
      out.push_back({i, j});
      if (--src.active == 0) src.idle = draw_idle(t, rng);
    }
  }

  std::vector<Edge> arrivals() {
    std::vector<Edge> out;
    arrivals(out);
    return out;
  }

 private:
  struct Source {
    std::int64_t active = 0;
    std::int64_t idle = 0;
    std::size_t dest = 0;
  };

  static std::int64_t draw_idle(const BurstyTraffic& t, Rng& rng) {
    if (std::isinf(t.mean_idle)) return std::numeric_limits<std::int64_t>::max();
    return geometric_failures(rng, t.mean_idle);
  }

  std::size_t draw_destination(const BurstyTraffic& t, std::size_t input, Rng& rng) const {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t j = 0; j < n2_; ++j) {
      acc += t.dest_distribution(input, j);
      if (u < acc) return j;
    }
    return n2_ - 1;
  }

  TrafficModel model_;
  std::size_t n1_ = 0, n2_ = 0;
  std::vector<Rng> streams_;
  std::vector<Source> sources_;
  std::vector<ZipfSampler> zipf_;
  BurstStats bursts_;
};

inline std::string traffic_name(const TrafficModel& m) {
  return std::holds_alternative<BernoulliTraffic>(m) ? "bernoulli" : "bursty";
}

}  // namespace portmatch
