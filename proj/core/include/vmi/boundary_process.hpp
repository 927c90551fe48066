#pragma once

// Direct simulation of the boundary particle system Y with the generator of
// boundary_generator_rates(), and Monte Carlo probes of its annihilation
// behaviour and of the growth of I_n from states with many boundaries.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vmi/boundary_config.hpp"
#include "vmi/generator.hpp"
#include "vmi/simulator.hpp"
#include "vmi/stats.hpp"

namespace vmi {

class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BoundarySimulationConfig {
  RateKernel q;
  RateKernel p;
  TruncationSpec truncation;
  double t_max = 1.0;
  BoundaryConfig initial;
  std::uint64_t seed = 0;
  std::uint32_t trajectory = 0;
  RecordSchedule schedule;
  std::uint64_t event_budget = 10'000'000;
};

struct BoundarySample {
  double t = 0.0;
  std::uint64_t event_index = 0;
  BoundaryConfig state;
};

struct BoundaryTrajectory {
  std::vector<BoundarySample> samples;
  BoundaryConfig final_state;
  double t_end = 0.0;
  std::uint64_t events = 0;
  RunStatus status = RunStatus::completed;
  bool parity_preserved = true;
};

BoundaryTrajectory simulate_boundary(const BoundarySimulationConfig& config);

struct KernelSetup {
  RateKernel q;
  RateKernel p;
  TruncationSpec truncation;
};

// P[|Y_t| = n] for a start y with |y| = n + 2 and two particles within
// distance L.  Throws PreconditionViolated otherwise.
ProportionEstimate annihilation_probability(const KernelSetup& kernels, const BoundaryConfig& y,
                                            std::int64_t max_gap, std::uint64_t n, double t,
                                            std::uint64_t trials, std::uint64_t seed);

// P[I_n(X_t) < M] for X started in x.
ProportionEstimate boost_check(const KernelSetup& kernels, const InterfaceConfig& x, std::int64_t n,
                               std::uint64_t threshold, double t, std::uint64_t trials, std::uint64_t seed);

// Window (1^L 0^L)^blocks at offset 0, so I_1 = 2 * blocks + 1.
InterfaceConfig alternating_blocks(std::uint64_t blocks, std::uint64_t block_length);

}  // namespace vmi
