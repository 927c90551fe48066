#include "vmi/boundary_process.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace vmi {

BoundaryTrajectory simulate_boundary(const BoundarySimulationConfig& config) {
  if (!(config.t_max >= 0.0)) throw std::invalid_argument("simulate_boundary: t_max must be >= 0");
  if (config.truncation.range < 1) throw std::invalid_argument("simulate_boundary: K must be >= 1");
  CounterStream rng(config.seed, config.trajectory, clock_id::kBoundary);
  const bool grid = config.schedule.mode == RecordMode::grid;

  BoundaryTrajectory out;
  BoundaryConfig y = config.initial;
  const std::size_t parity = y.size() % 2;
  double t = 0.0;
  std::uint64_t events = 0;
  std::uint64_t grid_index = 1;
  out.samples.push_back({0.0, 0, y});

  for (;;) {
    const auto moves = boundary_generator_rates(y, config.q, config.p, config.truncation);
    double total = 0.0;
    for (const auto& m : moves) total += m.rate;
    const double dt = total > 0.0 ? rng.exponential(total) : std::numeric_limits<double>::infinity();
    const double t_next = t + dt;
    if (grid) {
      for (;;) {
        const double tg = static_cast<double>(grid_index) * config.schedule.interval;
        if (tg > config.t_max || tg > t_next) break;
        out.samples.push_back({tg, events, y});
        ++grid_index;
      }
    }
    if (t_next > config.t_max) {
      t = config.t_max;
      break;
    }
    if (events >= config.event_budget) {
      out.status = RunStatus::budget_exceeded;
      break;
    }
    t = t_next;
    const double u = rng.uniform() * total;
    double acc = 0.0;
    const BoundaryTransition<double>* chosen = &moves.back();
    for (const auto& m : moves) {
      acc += m.rate;
      if (u < acc) {
        chosen = &m;
        break;
      }
    }
    y = y.flipped(chosen->flips.view());
    ++events;
    if (y.size() % 2 != parity) out.parity_preserved = false;
    if (!grid) out.samples.push_back({t, events, y});
  }
  if (grid && out.status == RunStatus::completed && out.samples.back().t < config.t_max) {
    out.samples.push_back({config.t_max, events, y});
  }
  out.final_state = y;
  out.t_end = t;
  out.events = events;
  return out;
}

ProportionEstimate annihilation_probability(const KernelSetup& kernels, const BoundaryConfig& y,
                                            std::int64_t max_gap, std::uint64_t n, double t,
                                            std::uint64_t trials, std::uint64_t seed) {
  if (y.size() != n + 2) {
    throw PreconditionViolated("annihilation_probability: need |y| = n + 2, got |y| = " +
                               std::to_string(y.size()) + ", n = " + std::to_string(n));
  }
  bool close_pair = false;
  const auto& ps = y.particles();
  for (std::size_t k = 1; k < ps.size(); ++k) close_pair = close_pair || ps[k] - ps[k - 1] <= max_gap;
  if (!close_pair) {
    throw PreconditionViolated("annihilation_probability: no two particles within distance " +
                               std::to_string(max_gap));
  }
  if (!(t >= 0.0)) throw PreconditionViolated("annihilation_probability: t must be >= 0");

  BoundarySimulationConfig config;
  config.q = kernels.q;
  config.p = kernels.p;
  config.truncation = kernels.truncation;
  config.t_max = t;
  config.initial = y;
  config.seed = seed;
  config.schedule = RecordSchedule::grid(std::max(t, 1.0));
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    config.trajectory = static_cast<std::uint32_t>(k);
    if (simulate_boundary(config).final_state.size() == n) ++hits;
  }
  return wilson(hits, trials);
}

ProportionEstimate boost_check(const KernelSetup& kernels, const InterfaceConfig& x, std::int64_t n,
                               std::uint64_t threshold, double t, std::uint64_t trials, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("boost_check: n must be >= 1");
  SimulationConfig config;
  config.q = kernels.q;
  config.p = kernels.p;
  config.truncation = kernels.truncation;
  config.t_max = t;
  config.initial = x;
  config.seed = seed;
  config.schedule = RecordSchedule::grid(std::max(t, 1.0));
  config.nmax = n;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    config.trajectory = static_cast<std::uint32_t>(k);
    const TrajectoryRecord rec = run(config);
    if (interface_counts(rec.final_state, n).total < threshold) ++hits;
  }
  return wilson(hits, trials);
}

InterfaceConfig alternating_blocks(std::uint64_t blocks, std::uint64_t block_length) {
  if (blocks == 0 || block_length == 0) throw std::invalid_argument("alternating_blocks: need blocks, L >= 1");
  std::string bits;
  for (std::uint64_t k = 0; k < blocks; ++k) {
    bits.append(block_length, '1');
    bits.append(block_length, '0');
  }
  return InterfaceConfig::from_bits(0, bits);
}

}  // namespace vmi
