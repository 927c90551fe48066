#pragma once

// Recording loop shared by the plain and the coupled simulators.

#include <cmath>
#include <limits>

#include "vmi/simulator.hpp"

namespace vmi::detail {

// `total_rate()` returns the rate of the next event (0 means none);
// `fire(t)` applies one event at time t.
template <class TotalRate, class Fire>
TrajectoryRecord drive(const SimulationConfig& config, InterfaceProcess& proc, CounterStream& clock,
                       TotalRate&& total_rate, Fire&& fire) {
  TrajectoryRecord rec;
  rec.mode = config.schedule.mode;
  rec.nmax = config.nmax;
  rec.level_hits.assign(config.width_levels.size(), std::nullopt);

  auto record = [&](double t, std::uint64_t events, double integral) {
    const InterfaceConfig& x = proc.state();
    rec.samples.push_back({t, events, f_cd(x), width(x), canonical_hash(x), integral});
    for (std::int64_t n = 1; n <= rec.nmax; ++n) rec.counts.push_back(proc.count(n));
  };
  auto check_levels = [&](double now) {
    const std::uint64_t w = width(proc.state());
    for (std::size_t k = 0; k < config.width_levels.size(); ++k) {
      if (!rec.level_hits[k] && w > config.width_levels[k]) rec.level_hits[k] = now;
    }
    return config.stop_width && w > *config.stop_width;
  };

  const bool grid = config.schedule.mode == RecordMode::grid;
  double t = 0.0;
  double integral = 0.0;
  std::uint64_t events = 0;
  std::uint64_t grid_index = 1;
  rec.status = RunStatus::completed;

  record(0.0, 0, 0.0);
  bool stop = check_levels(0.0);
  if (stop) rec.status = RunStatus::stopped;

  while (!stop) {
    const double rate = total_rate();
    const double dt = rate > 0.0 ? clock.exponential(rate) : std::numeric_limits<double>::infinity();
    const double t_next = t + dt;
    const double g = proc.gfcd();

    if (grid) {
      // Left-continuous: grid points up to and including t_next see the old state.
      for (;;) {
        const double tg = static_cast<double>(grid_index) * config.schedule.interval;
        if (tg > config.t_max || tg > t_next) break;
        record(tg, events, integral + g * (tg - t));
        ++grid_index;
      }
    }
    if (t_next > config.t_max) {
      integral += g * (config.t_max - t);
      t = config.t_max;
      break;
    }
    if (events >= config.event_budget) {
      rec.status = RunStatus::budget_exceeded;
      break;
    }
    integral += g * dt;
    t = t_next;
    fire(t);
    ++events;
    if (!grid) record(t, events, integral);
    if (check_levels(t)) {
      rec.status = RunStatus::stopped;
      stop = true;
    }
  }

  if (grid && rec.status == RunStatus::completed && rec.samples.back().t < config.t_max) {
    record(config.t_max, events, integral);
  }
  rec.final_state = proc.state();
  rec.t_end = t;
  rec.integral_gfcd_end = integral;
  rec.events = events;
  return rec;
}

}  // namespace vmi::detail
