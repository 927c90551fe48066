#include "vmi/simulator.hpp"

#include "driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vmi {

InterfaceProcess::InterfaceProcess(InterfaceConfig initial, const RateKernel& q, const RateKernel& p,
                                   TruncationSpec trunc, std::int64_t tracked)
    : x_(std::move(initial)), range_(trunc.range) {
  if (range_ < 1) throw std::invalid_argument("InterfaceProcess: truncation range must be >= 1");
  const auto k = static_cast<std::size_t>(range_);
  infect_right_.assign(k + 1, 0.0);
  infect_left_.assign(k + 1, 0.0);
  swap_.assign(k + 1, 0.0);
  half_sym_.assign(k + 1, 0.0);
  for (Displacement n = 1; n <= range_; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    infect_right_[idx] = q(n);
    infect_left_[idx] = q(-n);
    swap_[idx] = p(n);
    half_sym_[idx] = 0.5 * (q(n) + q(-n));
    gfcd_constant_ += (half_sym_[idx] + swap_[idx]) * static_cast<double>(n) * static_cast<double>(n);
  }
  const std::int64_t top = std::max<std::int64_t>(range_, tracked);
  counts_.assign(static_cast<std::size_t>(top) + 1, 0);
  for (std::int64_t n = 1; n <= top; ++n) {
    counts_[static_cast<std::size_t>(n)] = interface_counts(x_, n).total;
  }
}

double InterfaceProcess::total_rate() const noexcept {
  double total = 0.0;
  for (std::size_t n = 1; n < infect_right_.size(); ++n) {
    total += (infect_right_[n] + infect_left_[n] + swap_[n]) * static_cast<double>(counts_[n]);
  }
  return total;
}

double InterfaceProcess::gfcd() const noexcept {
  double total = gfcd_constant_;
  for (std::size_t n = 1; n < half_sym_.size(); ++n) {
    total -= half_sym_[n] * static_cast<double>(counts_[n]);
  }
  return total;
}

Site InterfaceProcess::uniform_disagreeing_pair(Displacement n, CounterStream& rng) const {
  const Site lo = x_.first_one() - n;
  const auto candidates = static_cast<std::uint64_t>(x_.last_zero() - lo + 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Site a = lo + static_cast<Site>(rng.below(candidates));
    if (x_.at(a) != x_.at(a + n)) return a;
  }
  // Sparse disagreement: pick the k-th pair directly.
  std::uint64_t k = rng.below(counts_[static_cast<std::size_t>(n)]);
  for (Site a = lo;; ++a) {
    if (x_.at(a) != x_.at(a + n)) {
      if (k == 0) return a;
      --k;
    }
  }
}

TransitionEvent InterfaceProcess::sample(CounterStream& rng) const {
  const double total = total_rate();
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t chosen = 0;
  for (std::size_t n = 1; n < infect_right_.size(); ++n) {
    const double weight = (infect_right_[n] + infect_left_[n] + swap_[n]) * static_cast<double>(counts_[n]);
    if (weight <= 0.0) continue;
    chosen = n;
    acc += weight;
    if (u < acc) break;
  }
  if (chosen == 0) throw std::logic_error("InterfaceProcess::sample: no transition has positive rate");

  const auto n = static_cast<Displacement>(chosen);
  const double per_pair = infect_right_[chosen] + infect_left_[chosen] + swap_[chosen];
  const double v = rng.uniform() * per_pair;
  const Site a = uniform_disagreeing_pair(n, rng);
  if (v < infect_right_[chosen]) return {EventKind::infection, a + n, a, infect_right_[chosen]};
  if (v < infect_right_[chosen] + infect_left_[chosen] || swap_[chosen] <= 0.0) {
    if (infect_left_[chosen] > 0.0) return {EventKind::infection, a, a + n, infect_left_[chosen]};
    return {EventKind::infection, a + n, a, infect_right_[chosen]};
  }
  return {EventKind::swap, a, a + n, swap_[chosen]};
}

void InterfaceProcess::flip_site(Site s) {
  const int here = x_.at(s);
  for (std::size_t n = 1; n < counts_.size(); ++n) {
    const auto d = static_cast<Site>(n);
    std::int64_t change = 0;
    change += x_.at(s - d) != here ? -1 : 1;
    change += x_.at(s + d) != here ? -1 : 1;
    counts_[n] = static_cast<std::uint64_t>(static_cast<std::int64_t>(counts_[n]) + change);
  }
  x_.flip_site(s);
}

void InterfaceProcess::apply(const TransitionEvent& ev) {
  flip_site(ev.i);
  if (ev.kind == EventKind::swap) flip_site(ev.j);
}

void SimulationConfig::validate() const {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InvalidSimulationConfig("t_max must be finite and >= 0");
  if (truncation.range < 1) throw InvalidSimulationConfig("truncation range K must be >= 1");
  if (!p.symmetric()) throw InvalidSimulationConfig("swapping kernel p must be symmetric");
  if (schedule.mode == RecordMode::grid && !(schedule.interval > 0.0)) {
    throw InvalidSimulationConfig("grid interval must be > 0");
  }
  if (nmax < 1) throw InvalidSimulationConfig("nmax must be >= 1");
  if (event_budget == 0) throw InvalidSimulationConfig("event budget must be >= 1");
  if (stop_width && *stop_width < width(initial)) {
    throw InvalidSimulationConfig("stop width N must be >= width of the initial state");
  }
}

StepResult step(InterfaceProcess& process, CounterStream& rng) {
  const double rate = process.total_rate();
  StepResult out;
  out.holding_time = rng.exponential(rate);
  out.event = process.sample(rng);
  process.apply(out.event);
  return out;
}

TrajectoryRecord run(const SimulationConfig& config) {
  config.validate();
  InterfaceProcess proc(config.initial, config.q, config.p, config.truncation, config.nmax);
  CounterStream rng(config.seed, config.trajectory, clock_id::kInterface);
  return detail::drive(
      config, proc, rng, [&] { return proc.total_rate(); },
      [&](double) { proc.apply(proc.sample(rng)); });
}

std::vector<std::optional<double>> stopping_times(SimulationConfig config,
                                                  std::span<const std::uint64_t> levels) {
  config.width_levels.assign(levels.begin(), levels.end());
  if (!levels.empty()) config.stop_width = *std::max_element(levels.begin(), levels.end());
  if (config.stop_width && *config.stop_width < width(config.initial)) config.stop_width.reset();
  config.schedule = RecordSchedule::grid(std::max(config.t_max, 1.0));
  return run(config).level_hits;
}

}  // namespace vmi
