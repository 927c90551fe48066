#pragma once

// Generator of the swapping voter model restricted to |i - j| <= K:
//
//   G f(x) = sum_{i,j} q(i-j) 1{x(i) != x(j)} (f(x^{i}) - f(x))
//          + 1/2 sum_{i,j} p(i-j) 1{x(i) != x(j)} (f(x^{i,j}) - f(x)).
//
// enumerate_transitions/apply_generator evaluate G by brute-force summation
// over jumps.  gfcd_closed_form evaluates G f_CD through interface counts
// only; the two code paths share nothing but the state type.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vmi/boundary_config.hpp"
#include "vmi/interface_config.hpp"
#include "vmi/kernels.hpp"

namespace vmi {

enum class EventKind : std::uint8_t { infection = 0, swap = 1 };

// Up to four sites flipped by one jump of X or Y.
struct FlipSet {
  std::array<Site, 4> sites{};
  std::uint8_t size = 0;

  std::span<const Site> view() const noexcept { return {sites.data(), size}; }
  friend bool operator==(const FlipSet& a, const FlipSet& b) {
    return std::equal(a.view().begin(), a.view().end(), b.view().begin(), b.view().end());
  }
};

// infection: site i adopts the type of site j.  swap: i < j exchange types.
template <class Real>
struct BasicTransition {
  EventKind kind = EventKind::infection;
  Site i = 0;
  Site j = 0;
  Real rate{};

  FlipSet delta() const noexcept {
    FlipSet d;
    d.sites[0] = i;
    d.size = 1;
    if (kind == EventKind::swap) {
      d.sites[1] = j;
      d.size = 2;
    }
    return d;
  }
};

using TransitionEvent = BasicTransition<double>;

struct TruncationSpec {
  Displacement range = 1;
};

// Range covering both kernels (at least 1).
template <class Real>
TruncationSpec full_range(const BasicRateKernel<Real>& q, const BasicRateKernel<Real>& p) {
  return TruncationSpec{std::max<Displacement>({1, q.range(), p.range()})};
}

// All jumps with positive rate and |i - j| <= K, sorted by (kind, i, j).
template <class Real>
std::vector<BasicTransition<Real>> enumerate_transitions(const InterfaceConfig& x,
                                                         const BasicRateKernel<Real>& q,
                                                         const BasicRateKernel<Real>& p,
                                                         TruncationSpec trunc) {
  const Displacement range = trunc.range;
  if (range < 1) throw std::invalid_argument("truncation range must be >= 1");
  std::vector<BasicTransition<Real>> out;
  // Outside [b - K, e + K] every pair within range agrees.
  const Site lo = x.first_one() - range;
  const Site hi = x.last_zero() + range;
  for (Site i = lo; i <= hi; ++i) {
    for (Site j = i - range; j <= i + range; ++j) {
      if (j == i || x.at(i) == x.at(j)) continue;
      Real rate = q(i - j);
      if (rate > Real(0)) out.push_back({EventKind::infection, i, j, std::move(rate)});
    }
  }
  for (Site i = lo; i <= hi; ++i) {
    for (Site j = i + 1; j <= i + range; ++j) {
      if (x.at(i) == x.at(j)) continue;
      Real rate = p(j - i);
      if (rate > Real(0)) out.push_back({EventKind::swap, i, j, std::move(rate)});
    }
  }
  return out;
}

// sum over jumps of rate * (f(x after jump) - f(x)).
template <class Real, class Observable>
Real apply_generator(const InterfaceConfig& x, Observable&& f, const BasicRateKernel<Real>& q,
                     const BasicRateKernel<Real>& p, TruncationSpec trunc) {
  const Real here = static_cast<Real>(f(x));
  Real total(0);
  for (const auto& ev : enumerate_transitions(x, q, p, trunc)) {
    const FlipSet d = ev.delta();
    const Real there = static_cast<Real>(f(flip(x, d.view())));
    total += ev.rate * (there - here);
  }
  return total;
}

// G^s f_CD = sum_{n <= K} p(n) n^2 (independent of x).
template <class Real>
Real gs_fcd(const BasicRateKernel<Real>& p, TruncationSpec trunc) {
  Real total(0);
  for (Displacement n = 1; n <= trunc.range; ++n) total += p(n) * Real(n) * Real(n);
  return total;
}

// G^v f_CD = sum_{n <= K} q_s(n) (n^2 - I_n(x)).
template <class Real>
Real gv_fcd(const InterfaceConfig& x, const BasicRateKernel<Real>& q, TruncationSpec trunc) {
  Real total(0);
  for (Displacement n = 1; n <= trunc.range; ++n) {
    const Real qs = (q(n) + q(-n)) / 2;
    if (!(qs > Real(0))) continue;
    const auto in = static_cast<std::int64_t>(interface_counts(x, n).total);
    total += qs * (Real(n) * Real(n) - Real(in));
  }
  return total;
}

template <class Real>
Real gfcd_closed_form(const InterfaceConfig& x, const BasicRateKernel<Real>& q,
                      const BasicRateKernel<Real>& p, TruncationSpec trunc) {
  return gs_fcd(p, trunc) + gv_fcd(x, q, trunc);
}

// ---------------------------------------------------------------------------
// Boundary process generator.
//
// With y(i) = 1{x(i) != x(i+1)}, flipping x(t) toggles y(t-1) and y(t), and
// x(u) != x(v) (u < v) iff y has an odd number of particles in [u, v-1].

enum class BoundaryTerm : std::uint8_t {
  infection_from_right = 0,  // target t, source t + d
  infection_from_left = 1,   // target t, source t - d
  long_swap = 2,             // sites i < j - 1
  adjacent_swap = 3,         // sites i, i + 1
};

template <class Real>
struct BoundaryTransition {
  BoundaryTerm term = BoundaryTerm::infection_from_right;
  Site i = 0;
  Site j = 0;
  FlipSet flips;
  Real rate{};
};

template <class Real>
std::vector<BoundaryTransition<Real>> boundary_generator_rates(const BoundaryConfig& y,
                                                               const BasicRateKernel<Real>& q,
                                                               const BasicRateKernel<Real>& p,
                                                               TruncationSpec trunc) {
  const Displacement range = trunc.range;
  const Site lo = y.leftmost();
  const Site hi = y.rightmost();
  auto odd_between = [&y](Site u, Site v) { return y.count_in(u, v) % 2 == 1; };
  std::vector<BoundaryTransition<Real>> out;

  auto infection_flips = [](Site t) {
    FlipSet f;
    f.sites[0] = t - 1;
    f.sites[1] = t;
    f.size = 2;
    return f;
  };

  for (Site t = lo - range + 1; t <= hi + range; ++t) {
    for (Displacement d = 1; d <= range; ++d) {
      Real rate = q(-d);
      if (rate > Real(0) && odd_between(t, t + d - 1)) {
        out.push_back({BoundaryTerm::infection_from_right, t, t + d, infection_flips(t), std::move(rate)});
      }
    }
  }
  for (Site t = lo - range + 1; t <= hi + range; ++t) {
    for (Displacement d = 1; d <= range; ++d) {
      Real rate = q(d);
      if (rate > Real(0) && odd_between(t - d, t - 1)) {
        out.push_back({BoundaryTerm::infection_from_left, t, t - d, infection_flips(t), std::move(rate)});
      }
    }
  }
  for (Site i = lo - range + 1; i <= hi; ++i) {
    for (Displacement d = 2; d <= range; ++d) {
      Real rate = p(d);
      const Site j = i + d;
      if (rate > Real(0) && odd_between(i, j - 1)) {
        FlipSet f;
        f.sites = {i - 1, i, j - 1, j};
        f.size = 4;
        out.push_back({BoundaryTerm::long_swap, i, j, f, std::move(rate)});
      }
    }
  }
  {
    Real rate = p(1);
    if (rate > Real(0)) {
      for (Site i : y.particles()) {
        FlipSet f;
        f.sites[0] = i - 1;
        f.sites[1] = i + 1;
        f.size = 2;
        out.push_back({BoundaryTerm::adjacent_swap, i, i + 1, f, rate});
      }
    }
  }
  return out;
}

// Total rate into each target state.
template <class Real>
std::map<BoundaryConfig, Real> aggregate_by_target(const BoundaryConfig& y,
                                                   const std::vector<BoundaryTransition<Real>>& moves) {
  std::map<BoundaryConfig, Real> out;
  for (const auto& m : moves) out[y.flipped(m.flips.view())] += m.rate;
  return out;
}

// Rates of X mapped through the boundary map and aggregated by image state.
template <class Real>
std::map<BoundaryConfig, Real> induced_boundary_rates(const InterfaceConfig& x,
                                                      const BasicRateKernel<Real>& q,
                                                      const BasicRateKernel<Real>& p,
                                                      TruncationSpec trunc) {
  std::map<BoundaryConfig, Real> out;
  for (const auto& ev : enumerate_transitions(x, q, p, trunc)) {
    out[boundary(flip(x, ev.delta().view()))] += ev.rate;
  }
  return out;
}

}  // namespace vmi
