#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "vmi/boundary_process.hpp"

using namespace vmi;
using vmi::testing::Rng;

namespace {

const RateKernel kNearest({{1, 0.5}, {-1, 0.5}}, true);
const RateKernel kNone({}, true);
const RateKernel kMixedQ({{1, 0.5}, {-1, 0.25}, {2, 0.125}, {-3, 0.125}});
const RateKernel kMixedP({{1, 0.25}, {-1, 0.25}, {2, 0.125}, {-2, 0.125}}, true);

BoundarySimulationConfig boundary_config(const RateKernel& q, const RateKernel& p, Displacement k,
                                         BoundaryConfig y, double t_max) {
  BoundarySimulationConfig c;
  c.q = q;
  c.p = p;
  c.truncation = {k};
  c.initial = std::move(y);
  c.t_max = t_max;
  return c;
}

}  // namespace

TEST(SimulateBoundaryTest, ParityConservedOnEveryPath) {
  for (std::uint32_t traj = 0; traj < 50; ++traj) {
    auto c = boundary_config(kMixedQ, kMixedP, 3, BoundaryConfig({-4, 0, 2}), 10.0);
    c.trajectory = traj;
    const auto path = simulate_boundary(c);
    ASSERT_TRUE(path.parity_preserved);
    for (const auto& s : path.samples) ASSERT_EQ(s.state.size() % 2, 1u);
    ASSERT_EQ(path.t_end, 10.0);
  }
}

TEST(SimulateBoundaryTest, NearestNeighbourKeepsASingleParticle) {
  auto c = boundary_config(kNearest, kNone, 1, BoundaryConfig(), 50.0);
  const auto path = simulate_boundary(c);
  EXPECT_GT(path.events, 10u);
  for (const auto& s : path.samples) ASSERT_EQ(s.state.size(), 1u);
}

TEST(SimulateBoundaryTest, FirstJumpFrequenciesMatchListedRates) {
  const BoundaryConfig y({-2, 0, 3});
  const auto moves = boundary_generator_rates(y, kMixedQ, kMixedP, {3});
  const auto targets = aggregate_by_target(y, moves);
  double total = 0.0;
  for (const auto& [_, r] : targets) total += r;

  std::map<BoundaryConfig, int> seen;
  constexpr int kRuns = 20000;
  auto c = boundary_config(kMixedQ, kMixedP, 3, y, 1e9);
  c.event_budget = 1;
  for (int k = 0; k < kRuns; ++k) {
    c.trajectory = static_cast<std::uint32_t>(k);
    const auto path = simulate_boundary(c);
    ASSERT_EQ(path.samples.size(), 2u);
    ++seen[path.samples[1].state];
  }
  for (const auto& [target, rate] : targets) {
    const double prob = rate / total;
    EXPECT_NEAR(seen[target], kRuns * prob, 3 * std::sqrt(kRuns * prob * (1 - prob)) + 1)
        << target.to_string();
  }
}

TEST(SimulateBoundaryTest, JointDriverKeepsBoundaryOfX) {
  // X is simulated; Y is updated from the same events by toggling {s - 1, s}
  // for every flipped site s.
  Rng gen(51);
  for (int trial = 0; trial < 40; ++trial) {
    const bool nearest = trial % 2 == 0;
    const RateKernel& q = nearest ? kNearest : kMixedQ;
    const RateKernel& p = nearest ? kNone : kMixedP;
    InterfaceProcess proc(vmi::testing::random_config(gen, 15), q, p, full_range(q, p));
    BoundaryConfig y = boundary(proc.state());
    CounterStream rng(static_cast<std::uint64_t>(trial), 0, 0);
    for (int s = 0; s < 400; ++s) {
      const StepResult r = step(proc, rng);
      std::vector<Site> toggles;
      const FlipSet delta = r.event.delta();
      for (Site site : delta.view()) {
        for (Site t : {site - 1, site}) {
          auto it = std::find(toggles.begin(), toggles.end(), t);
          if (it == toggles.end()) {
            toggles.push_back(t);
          } else {
            toggles.erase(it);
          }
        }
      }
      y = y.flipped(toggles);
      ASSERT_EQ(y, boundary(proc.state())) << y.to_string();
    }
  }
}

TEST(AnnihilationTest, ThreeParticlesCanReduceToOne) {
  const KernelSetup nn{kNearest, kNone, {1}};
  const auto est = annihilation_probability(nn, BoundaryConfig({0, 1, 10}), 1, 1, 1.0, 10000, 3);
  EXPECT_GT(est.value, 0.0);
  EXPECT_GT(est.lower, 0.0);
  EXPECT_LE(est.upper, 1.0);
  EXPECT_EQ(est.trials, 10000u);
}

TEST(AnnihilationTest, ZeroHorizonAndPreconditions) {
  const KernelSetup nn{kNearest, kNone, {1}};
  EXPECT_EQ(annihilation_probability(nn, BoundaryConfig({0, 1, 10}), 1, 1, 0.0, 100, 3).value, 0.0);
  EXPECT_THROW(annihilation_probability(nn, BoundaryConfig({0, 1, 10}), 1, 3, 1.0, 10, 3), PreconditionViolated);
  EXPECT_THROW(annihilation_probability(nn, BoundaryConfig({0, 5, 10}), 2, 1, 1.0, 10, 3), PreconditionViolated);
}

TEST(AnnihilationTest, EstimateIsAProbability) {
  const KernelSetup mixed{kMixedQ, kMixedP, {3}};
  const auto est = annihilation_probability(mixed, BoundaryConfig({-3, 0, 4}), 4, 1, 2.0, 2000, 5);
  EXPECT_GE(est.value, 0.0);
  EXPECT_LE(est.value, 1.0);
  EXPECT_LE(est.lower, est.value);
  EXPECT_GE(est.upper, est.value);
}

TEST(BoostCheckTest, TrivialCases) {
  const KernelSetup nn{kNearest, kNone, {1}};
  EXPECT_EQ(boost_check(nn, InterfaceConfig::heaviside(), 1, 1, 3.0, 500, 1).value, 0.0);
  const auto x = alternating_blocks(3, 2);
  EXPECT_EQ(interface_counts(x, 1).total, 7u);
  EXPECT_EQ(boost_check(nn, x, 1, 8, 0.0, 50, 1).value, 1.0);
  EXPECT_EQ(boost_check(nn, x, 1, 7, 0.0, 50, 1).value, 0.0);
}

TEST(BoostCheckTest, MoreBoundariesMakeThinInterfacesRarer) {
  const KernelSetup nn{kNearest, kNone, {1}};
  double previous = 1.0;
  for (std::uint64_t blocks : {2u, 7u, 22u}) {
    const auto x = alternating_blocks(blocks, 1);
    ASSERT_EQ(interface_counts(x, 1).total, 2 * blocks + 1);
    const auto est = boost_check(nn, x, 1, 4, 4.0, 2000, 17);
    EXPECT_LE(est.value, previous + 1e-12) << "blocks " << blocks;
    previous = est.value;
  }
}
