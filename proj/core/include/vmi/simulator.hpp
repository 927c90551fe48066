#pragma once

// Exact event-driven simulation (Gillespie direct method) of the truncated
// swapping voter model X^K.
//
// The total jump rate of a state is
//
//   Lambda(x) = sum_{n=1}^{K} (q(n) + q(-n) + p(n)) I_n(x),
//
// so InterfaceProcess keeps the counts I_n up to date under single-site flips
// (O(K) per flip) and never enumerates the full transition list.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vmi/generator.hpp"
#include "vmi/interface_config.hpp"
#include "vmi/kernels.hpp"
#include "vmi/rng.hpp"

namespace vmi {

class InterfaceProcess {
 public:
  // Tracks I_n for n = 1..max(K, tracked).
  InterfaceProcess(InterfaceConfig initial, const RateKernel& q, const RateKernel& p,
                   TruncationSpec trunc, std::int64_t tracked = 0);

  const InterfaceConfig& state() const noexcept { return x_; }
  Displacement range() const noexcept { return range_; }
  std::int64_t tracked() const noexcept { return static_cast<std::int64_t>(counts_.size()) - 1; }

  // I_n(x) for 1 <= n <= tracked().
  std::uint64_t count(std::int64_t n) const { return counts_.at(static_cast<std::size_t>(n)); }

  double total_rate() const noexcept;

  // G^K f_CD(x), evaluated from the tracked counts.
  double gfcd() const noexcept;

  // Draws a jump with probability rate / total_rate().  Requires
  // total_rate() > 0.
  TransitionEvent sample(CounterStream& rng) const;

  void apply(const TransitionEvent& ev);
  void flip_site(Site s);

 private:
  Site uniform_disagreeing_pair(Displacement n, CounterStream& rng) const;

  InterfaceConfig x_;
  Displacement range_;
  std::vector<double> infect_right_;  // q(n): a + n adopts from a
  std::vector<double> infect_left_;   // q(-n): a adopts from a + n
  std::vector<double> swap_;          // p(n)
  std::vector<double> half_sym_;      // q_s(n)
  double gfcd_constant_ = 0.0;        // sum_{n<=K} (q_s(n) + p(n)) n^2
  std::vector<std::uint64_t> counts_;  // counts_[n] = I_n, index 0 unused
};

enum class RecordMode { every_event, grid };

struct RecordSchedule {
  RecordMode mode = RecordMode::every_event;
  double interval = 1.0;  // grid spacing

  static RecordSchedule every_event() { return {}; }
  static RecordSchedule grid(double dt) { return {RecordMode::grid, dt}; }
};

class InvalidSimulationConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimulationConfig {
  RateKernel q;
  RateKernel p;
  TruncationSpec truncation;
  double t_max = 1.0;
  InterfaceConfig initial;
  std::uint64_t seed = 0;
  std::uint32_t trajectory = 0;
  RecordSchedule schedule;
  std::int64_t nmax = 1;                     // record I_1..I_nmax
  std::optional<std::uint64_t> stop_width;   // stop at the first time width > N
  std::vector<std::uint64_t> width_levels;   // record first times width > N
  std::uint64_t event_budget = 10'000'000;

  // Throws InvalidSimulationConfig.
  void validate() const;
};

struct Sample {
  double t = 0.0;
  std::uint64_t event_index = 0;
  std::uint64_t f_cd = 0;
  std::uint64_t width = 0;
  std::uint64_t class_hash = 0;
  double integral_gfcd = 0.0;  // int_0^t G f_CD(X_s) ds
};

enum class RunStatus { completed, stopped, budget_exceeded };

struct TrajectoryRecord {
  RecordMode mode = RecordMode::every_event;
  std::int64_t nmax = 1;
  std::vector<Sample> samples;
  std::vector<std::uint64_t> counts;  // row-major, nmax per sample

  InterfaceConfig final_state;
  double t_end = 0.0;  // path known on [0, t_end]
  double integral_gfcd_end = 0.0;
  std::uint64_t events = 0;
  RunStatus status = RunStatus::completed;
  std::vector<std::optional<double>> level_hits;  // parallel to width_levels

  // I_n at sample k, 1 <= n <= nmax.
  std::uint64_t count(std::size_t k, std::int64_t n) const {
    return counts[k * static_cast<std::size_t>(nmax) + static_cast<std::size_t>(n - 1)];
  }
};

// One step of the direct method.
struct StepResult {
  double holding_time = 0.0;
  TransitionEvent event;
};

StepResult step(InterfaceProcess& process, CounterStream& rng);

TrajectoryRecord run(const SimulationConfig& config);

// tau_N = inf{t : width(X_t) > N} for each level, nullopt when censored at
// t_max.  Levels share one path, so the result is nondecreasing in N.
std::vector<std::optional<double>> stopping_times(SimulationConfig config,
                                                  std::span<const std::uint64_t> levels);

}  // namespace vmi
