#pragma once

// Coupling of the interface width w(X_t) with the pure-jump walk R_t that
// jumps r -> r + n at rate a(n) = sum_{k >= n} 2 (q_s(k) + p(k)).
//
// R is driven by master clocks, one per jump size n with rate a(n).  Jumps
// of X that widen the interface are attached to those clocks by thinning:
// with slack s = R - w, extension sizes m and walk sizes n are paired
// comonotonically (largest with largest) so that m <= n + s whenever the rate
// tails allow it.  Extension mass that no clock can absorb runs on its own
// clock, smallest sizes first.  Non-extending jumps of X run independently.
// Both marginals are exact; R_t >= w(X_t) is checked after every event and
// failures are counted, not hidden.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vmi/generator.hpp"
#include "vmi/simulator.hpp"

namespace vmi {

// Width after applying `flips` to x, computed locally (no copy of x).
std::uint64_t width_after(const InterfaceConfig& x, std::span<const Site> flips);

struct ExtensionEvent {
  TransitionEvent event;
  std::uint64_t growth = 0;  // width(after) - width(before) > 0
};

// All jumps of X^K from x that increase the width.
std::vector<ExtensionEvent> extension_events(const InterfaceConfig& x, const RateKernel& q,
                                             const RateKernel& p, TruncationSpec trunc);

// Total rate of width increase by exactly m, keyed by m.
std::map<std::uint64_t, double> extension_rates(const InterfaceConfig& x, const RateKernel& q,
                                                const RateKernel& p, TruncationSpec trunc);

// One channel of the coupled generator.  walk_jump == 0 means X moves alone,
// growth == 0 means R moves alone.
struct CouplingChannel {
  std::uint64_t growth = 0;
  std::uint64_t walk_jump = 0;
  double rate = 0.0;
};

// Comonotone pairing of extension rates with walk rates a(n).
std::vector<CouplingChannel> couple_channels(const std::map<std::uint64_t, double>& extension,
                                             const RateKernel& walk_rates);

struct WalkSample {
  double t = 0.0;
  std::int64_t walk = 0;    // R_t
  std::uint64_t width = 0;  // w(X_t)
};

struct CoupledRunResult {
  TrajectoryRecord record;          // X path (per the config's schedule)
  std::vector<WalkSample> walk_path;  // one entry per event
  std::map<std::uint64_t, std::uint64_t> walk_jumps;  // size -> count
  std::uint64_t x_events = 0;       // record.events also counts walk-only jumps
  std::uint64_t violations = 0;     // events after which R < w(X)
  std::optional<double> first_violation;
};

// Requires p symmetric.  R_0 = w(X_0).
CoupledRunResult run_coupled(const SimulationConfig& config);

}  // namespace vmi
