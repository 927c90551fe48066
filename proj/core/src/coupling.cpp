#include "vmi/coupling.hpp"

#include <algorithm>
#include <stdexcept>

#include "driver.hpp"

namespace vmi {

std::uint64_t width_after(const InterfaceConfig& x, std::span<const Site> flips) {
  auto value = [&](Site s) {
    int v = x.at(s);
    for (Site f : flips) {
      if (f == s) v ^= 1;
    }
    return v;
  };

  // Left of b only flipped sites can be ones; right of e only flipped sites
  // can be zeros.
  Site first_one = x.first_one();
  while (value(first_one) == 0) ++first_one;
  Site last_zero = x.last_zero();
  while (value(last_zero) == 1) --last_zero;
  for (Site f : flips) {
    const int v = value(f);
    if (v == 1 && f < first_one) first_one = f;
    if (v == 0 && f > last_zero) last_zero = f;
  }
  return last_zero < first_one ? 0 : static_cast<std::uint64_t>(last_zero - first_one + 1);
}

std::vector<ExtensionEvent> extension_events(const InterfaceConfig& x, const RateKernel& q,
                                             const RateKernel& p, TruncationSpec trunc) {
  const Site b = x.first_one();
  const Site e = x.last_zero();
  const Displacement k = trunc.range;
  const std::uint64_t w = width(x);
  std::vector<ExtensionEvent> out;

  auto consider = [&](const TransitionEvent& ev) {
    const FlipSet d = ev.delta();
    const std::uint64_t after = width_after(x, d.view());
    if (after > w) out.push_back({ev, after - w});
  };

  // Infections whose target lies outside [b, e].
  auto infect_target = [&](Site t) {
    for (Site j = t - k; j <= t + k; ++j) {
      if (j == t || x.at(j) == x.at(t)) continue;
      const double rate = q(t - j);
      if (rate > 0.0) consider({EventKind::infection, t, j, rate});
    }
  };
  for (Site t = b - k; t < b; ++t) infect_target(t);
  for (Site t = std::max(e + 1, b); t <= e + k; ++t) infect_target(t);

  // Swaps with at least one site outside [b, e].
  for (Site i = b - k; i <= e + k; ++i) {
    for (Displacement n = 1; n <= k; ++n) {
      const Site j = i + n;
      if (!(i < b || j > e)) continue;
      if (x.at(i) == x.at(j)) continue;
      const double rate = p(n);
      if (rate > 0.0) consider({EventKind::swap, i, j, rate});
    }
  }
  return out;
}

std::map<std::uint64_t, double> extension_rates(const InterfaceConfig& x, const RateKernel& q,
                                                const RateKernel& p, TruncationSpec trunc) {
  std::map<std::uint64_t, double> out;
  for (const auto& ext : extension_events(x, q, p, trunc)) out[ext.growth] += ext.event.rate;
  return out;
}

std::vector<CouplingChannel> couple_channels(const std::map<std::uint64_t, double>& extension,
                                             const RateKernel& walk_rates) {
  struct Mass {
    std::uint64_t size;
    double rate;
  };
  std::vector<Mass> xs;
  for (auto it = extension.rbegin(); it != extension.rend(); ++it) {
    if (it->second > 0.0) xs.push_back({it->first, it->second});
  }
  std::vector<Mass> rs;
  const auto& entries = walk_rates.entries();
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->first > 0 && it->second > 0.0) rs.push_back({static_cast<std::uint64_t>(it->first), it->second});
  }

  std::vector<CouplingChannel> out;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < xs.size() && b < rs.size()) {
    const double mass = std::min(xs[a].rate, rs[b].rate);
    if (mass > 0.0) out.push_back({xs[a].size, rs[b].size, mass});
    xs[a].rate -= mass;
    rs[b].rate -= mass;
    if (xs[a].rate <= 0.0) ++a;
    if (rs[b].rate <= 0.0) ++b;
  }
  for (; a < xs.size(); ++a) {
    if (xs[a].rate > 0.0) out.push_back({xs[a].size, 0, xs[a].rate});
  }
  for (; b < rs.size(); ++b) {
    if (rs[b].rate > 0.0) out.push_back({0, rs[b].size, rs[b].rate});
  }
  return out;
}

CoupledRunResult run_coupled(const SimulationConfig& config) {
  config.validate();
  InterfaceProcess proc(config.initial, config.q, config.p, config.truncation, config.nmax);
  CounterStream clock(config.seed, config.trajectory, clock_id::kDominatingWalk);
  CounterStream detail_rng(config.seed, config.trajectory, clock_id::kInterface);
  const RateKernel walk_rates = tail_rates(config.q, config.p);

  CoupledRunResult result;
  auto walk = static_cast<std::int64_t>(width(config.initial));
  result.walk_path.push_back({0.0, walk, width(config.initial)});

  // State of the coupled generator at the current configuration; rebuilt
  // after every event.
  std::vector<ExtensionEvent> extensions;
  std::vector<CouplingChannel> channels;
  double interior_rate = 0.0;
  double channel_rate = 0.0;

  auto rebuild = [&] {
    extensions = extension_events(proc.state(), config.q, config.p, config.truncation);
    std::map<std::uint64_t, double> by_growth;
    double extension_total = 0.0;
    for (const auto& ext : extensions) {
      by_growth[ext.growth] += ext.event.rate;
      extension_total += ext.event.rate;
    }
    channels = couple_channels(by_growth, walk_rates);
    channel_rate = 0.0;
    for (const auto& c : channels) channel_rate += c.rate;
    interior_rate = proc.total_rate() - extension_total;
    if (interior_rate < 1e-12 * proc.total_rate()) interior_rate = 0.0;
  };

  auto fire_extension = [&](std::uint64_t growth) {
    double total = 0.0;
    for (const auto& ext : extensions) {
      if (ext.growth == growth) total += ext.event.rate;
    }
    const double u = detail_rng.uniform() * total;
    double acc = 0.0;
    const ExtensionEvent* chosen = nullptr;
    for (const auto& ext : extensions) {
      if (ext.growth != growth) continue;
      chosen = &ext;
      acc += ext.event.rate;
      if (u < acc) break;
    }
    proc.apply(chosen->event);
  };

  auto fire_interior = [&] {
    const std::uint64_t w = width(proc.state());
    for (;;) {
      const TransitionEvent ev = proc.sample(detail_rng);
      if (width_after(proc.state(), ev.delta().view()) <= w) {
        proc.apply(ev);
        return;
      }
    }
  };

  auto fire = [&](double t) {
    const double u = clock.uniform() * (interior_rate + channel_rate);
    if (u < interior_rate) {
      fire_interior();
      ++result.x_events;
    } else {
      double acc = interior_rate;
      const CouplingChannel* chosen = &channels.back();
      for (const auto& c : channels) {
        acc += c.rate;
        if (u < acc) {
          chosen = &c;
          break;
        }
      }
      if (chosen->growth > 0) {
        fire_extension(chosen->growth);
        ++result.x_events;
      }
      if (chosen->walk_jump > 0) {
        walk += static_cast<std::int64_t>(chosen->walk_jump);
        ++result.walk_jumps[chosen->walk_jump];
      }
    }
    const std::uint64_t w = width(proc.state());
    if (walk < static_cast<std::int64_t>(w)) {
      ++result.violations;
      if (!result.first_violation) result.first_violation = t;
    }
    result.walk_path.push_back({t, walk, w});
    rebuild();
  };

  rebuild();
  result.record = detail::drive(
      config, proc, clock, [&] { return interior_rate + channel_rate; }, fire);
  return result;
}

}  // namespace vmi
