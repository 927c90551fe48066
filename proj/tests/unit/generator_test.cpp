#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "vmi/generator.hpp"
#include "vmi/transport.hpp"

using namespace vmi;
using vmi::testing::Rng;
using vmi::testing::to_double;

namespace {

const RateKernel kNearest({{1, 0.5}, {-1, 0.5}}, true);
const RateKernel kNone({}, true);

double relative_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

}  // namespace

TEST(EnumerateTransitionsTest, NearestNeighbourFromHeaviside) {
  const auto events = enumerate_transitions(InterfaceConfig::heaviside(), kNearest, kNone, {1});
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].kind, EventKind::infection);
  EXPECT_EQ(events[0].i, -1);
  EXPECT_EQ(events[0].j, 0);
  EXPECT_EQ(events[1].i, 0);
  EXPECT_EQ(events[1].j, -1);
  double total = 0.0;
  for (const auto& e : events) total += e.rate;
  EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(EnumerateTransitionsTest, SingleSwapFromHeaviside) {
  const RateKernel p({{1, 0.5}, {-1, 0.5}}, true);
  const auto events = enumerate_transitions(InterfaceConfig::heaviside(), RateKernel(), p, {1});
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, EventKind::swap);
  EXPECT_EQ(events[0].i, -1);
  EXPECT_EQ(events[0].j, 0);
  EXPECT_DOUBLE_EQ(events[0].rate, 0.5);
}

TEST(EnumerateTransitionsTest, TotalRateMatchesPairScan) {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = vmi::testing::random_config(rng, 30);
    const RateKernel q = to_double(vmi::testing::random_exact_kernel(rng, 8, false));
    const RateKernel p = to_double(vmi::testing::random_exact_kernel(rng, 8, true));
    std::uniform_int_distribution<Displacement> kdist(1, 8);
    const TruncationSpec trunc{kdist(rng)};

    const auto events = enumerate_transitions(x, q, p, trunc);
    double total = 0.0;
    for (const auto& e : events) {
      ASSERT_GT(e.rate, 0.0);
      ASSERT_LE(std::abs(e.i - e.j), trunc.range);
      ASSERT_NE(x.at(e.i), x.at(e.j));
      total += e.rate;
    }
    ASSERT_TRUE(std::is_sorted(events.begin(), events.end(), [](const auto& a, const auto& b) {
      return std::tie(a.kind, a.i, a.j) < std::tie(b.kind, b.i, b.j);
    }));

    // Independent scan over all ordered pairs near the window.
    double oracle = 0.0;
    double wide_bound = 0.0;
    const auto w = static_cast<double>(width(x));
    for (Displacement n = 1; n <= trunc.range; ++n) {
      std::uint64_t disagree = 0;
      for (Site i = x.first_one() - n - 1; i <= x.last_zero() + 1; ++i) {
        if (x.at(i) != x.at(i + n)) ++disagree;
      }
      oracle += (q(n) + q(-n) + p(n)) * static_cast<double>(disagree);
      wide_bound += (q(n) + q(-n) + 2 * p(n)) * (static_cast<double>(n) + w);
    }
    ASSERT_NEAR(total, oracle, 1e-12 * (1.0 + oracle));
    ASSERT_LE(total, wide_bound + 1e-12);
  }
}

TEST(ApplyGeneratorTest, ConstantObservableGivesZero) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = vmi::testing::random_config(rng, 20);
    const RateKernel q = to_double(vmi::testing::random_exact_kernel(rng, 5, false));
    const RateKernel p = to_double(vmi::testing::random_exact_kernel(rng, 5, true));
    EXPECT_EQ(apply_generator(x, [](const InterfaceConfig&) { return 3.0; }, q, p, {5}), 0.0);
  }
}

TEST(ApplyGeneratorTest, NearestNeighbourHeavisideExample) {
  const auto h = InterfaceConfig::heaviside();
  EXPECT_EQ(apply_generator(h, [](const InterfaceConfig& x) { return f_cd(x); }, kNearest, kNone, {1}), 0.0);
  EXPECT_EQ(gfcd_closed_form(h, kNearest, kNone, {1}), 0.0);
}

TEST(ApplyGeneratorTest, WidthByHandEnumeration) {
  // Window "10" at 0 (width 2) with q = {+1: 1}: site i adopts from i - 1.
  // Disagreeing adjacent pairs: (-1, 0), (0, 1), (1, 2).
  //   target 0: x(0) -> 0 gives a translate of x_H, width change -2
  //   target 1: x(1) -> 1 gives a translate of x_H, width change -2
  //   target 2: x(2) -> 0 gives window "100", width change +1
  const auto x = InterfaceConfig::from_bits(0, "10");
  const RateKernel q({{1, 1.0}});
  const double gw = apply_generator(x, [](const InterfaceConfig& s) { return width(s); }, q, RateKernel(), {1});
  EXPECT_DOUBLE_EQ(gw, -2.0 - 2.0 + 1.0);
}

TEST(ApplyGeneratorTest, LinearInObservableAndKernels) {
  Rng rng(23);
  auto fw = [](const InterfaceConfig& s) { return static_cast<double>(width(s)); };
  auto ff = [](const InterfaceConfig& s) { return static_cast<double>(f_cd(s)); };
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = vmi::testing::random_config(rng, 20);
    const RateKernel q1 = to_double(vmi::testing::random_exact_kernel(rng, 5, false));
    const RateKernel q2 = to_double(vmi::testing::random_exact_kernel(rng, 5, false));
    const RateKernel p = to_double(vmi::testing::random_exact_kernel(rng, 5, true));
    const TruncationSpec k{5};
    const double combo = apply_generator(x, [&](const InterfaceConfig& s) { return 2.0 * fw(s) - ff(s); }, q1, p, k);
    const double split = 2.0 * apply_generator(x, fw, q1, p, k) - apply_generator(x, ff, q1, p, k);
    EXPECT_NEAR(combo, split, 1e-9 * (1 + std::abs(split)));
    const double sum = apply_generator(x, ff, q1 + q2, p, k);
    const double parts = apply_generator(x, ff, q1, p, k) + apply_generator(x, ff, q2, RateKernel({}, true), k);
    EXPECT_NEAR(sum, parts, 1e-9 * (1 + std::abs(parts)));
  }
}

TEST(ClosedFormTest, Examples) {
  const RateKernel p({{1, 0.5}, {-1, 0.5}}, true);
  EXPECT_DOUBLE_EQ(gs_fcd(p, {3}), 0.5);
  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = vmi::testing::random_config(rng, 30);
    const double i1 = static_cast<double>(interface_counts(x, 1).total);
    EXPECT_DOUBLE_EQ(gfcd_closed_form(x, kNearest, kNone, {1}), 0.5 * (1.0 - i1));
  }
}

TEST(ClosedFormTest, AgreesWithEnumerationInDoubleAndExactArithmetic) {
  Rng rng(25);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = vmi::testing::random_config(rng, 30);
    const ExactKernel q = vmi::testing::random_exact_kernel(rng, 8, false);
    const ExactKernel p = vmi::testing::random_exact_kernel(rng, 8, true);
    const TruncationSpec trunc = full_range(q, p);
    auto observable = [](const InterfaceConfig& s) { return f_cd(s); };

    const double brute = apply_generator(x, observable, to_double(q), to_double(p), trunc);
    const double closed = gfcd_closed_form(x, to_double(q), to_double(p), trunc);
    worst = std::max(worst, relative_gap(brute, closed));
    EXPECT_DOUBLE_EQ(gfcd_closed_form(x, to_double(q), to_double(p), trunc),
                     gs_fcd(to_double(p), trunc) + gv_fcd(x, to_double(q), trunc));

    if (trial % 10 == 0) {
      const Rational exact_brute = apply_generator(
          x, [](const InterfaceConfig& s) { return Rational(f_cd(s)); }, q, p, trunc);
      ASSERT_EQ(exact_brute, gfcd_closed_form(x, q, p, trunc));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(ClosedFormTest, TruncatedGeneratorMatchesTruncatedClosedForm) {
  Rng rng(26);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = vmi::testing::random_config(rng, 25);
    const ExactKernel q = vmi::testing::random_exact_kernel(rng, 8, false);
    const ExactKernel p = vmi::testing::random_exact_kernel(rng, 8, true);
    std::uniform_int_distribution<Displacement> kdist(1, 8);
    const TruncationSpec trunc{kdist(rng)};
    const Rational brute = apply_generator(
        x, [](const InterfaceConfig& s) { return Rational(f_cd(s)); }, q, p, trunc);
    ASSERT_EQ(brute, gfcd_closed_form(x, q, p, trunc));
  }
}

TEST(BoundaryGeneratorTest, NearestNeighbourParticleMoves) {
  const auto moves = boundary_generator_rates(BoundaryConfig(), kNearest, kNone, {1});
  const auto targets = aggregate_by_target(BoundaryConfig(), moves);
  ASSERT_EQ(targets.size(), 2u);
  EXPECT_DOUBLE_EQ(targets.at(BoundaryConfig({-2})), 0.5);
  EXPECT_DOUBLE_EQ(targets.at(BoundaryConfig({0})), 0.5);
  EXPECT_EQ(targets, induced_boundary_rates(InterfaceConfig::heaviside(), kNearest, kNone, {1}));
}

TEST(BoundaryGeneratorTest, EveryMoveFlipsAnEvenSet) {
  Rng rng(27);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = vmi::testing::random_config(rng, 20);
    const RateKernel q = to_double(vmi::testing::random_exact_kernel(rng, 6, false));
    const RateKernel p = to_double(vmi::testing::random_exact_kernel(rng, 6, true));
    const auto y = boundary(x);
    for (const auto& m : boundary_generator_rates(y, q, p, full_range(q, p))) {
      ASSERT_EQ(m.flips.size % 2, 0);
      ASSERT_EQ(y.flipped(m.flips.view()).size() % 2, 1u);
    }
  }
}

TEST(BoundaryGeneratorTest, InducedRatesAgreeExactly) {
  Rng rng(28);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = vmi::testing::random_config(rng, 20);
    const ExactKernel q = vmi::testing::random_exact_kernel(rng, 6, false);
    const ExactKernel p = vmi::testing::random_exact_kernel(rng, 6, true);
    const TruncationSpec trunc = full_range(q, p);
    const auto y = boundary(x);
    ASSERT_EQ(aggregate_by_target(y, boundary_generator_rates(y, q, p, trunc)),
              induced_boundary_rates(x, q, p, trunc))
        << x.window();
  }
}

TEST(TransportTest, Examples) {
  const Displacement nn[] = {1, -1};
  EXPECT_EQ(plan_transport(4, nn), (std::vector<std::int64_t>{1, 2, 3, 4}));
  EXPECT_EQ(plan_transport(1, nn), (std::vector<std::int64_t>{1}));
  const Displacement two_three[] = {2, -2, 3, -3};
  EXPECT_EQ(plan_transport(2, two_three), (std::vector<std::int64_t>{1, 4, 2}));
}

TEST(TransportTest, Errors) {
  const Displacement even[] = {2, -2};
  EXPECT_THROW(plan_transport(3, even), Unreachable);
  const Displacement one_sided[] = {1};
  EXPECT_THROW(plan_transport(3, one_sided), NonSymmetricKernel);
  const Displacement nn[] = {1, -1};
  EXPECT_THROW(plan_transport(0, nn), std::invalid_argument);
}

TEST(TransportTest, PathsArePositiveAndUseSupportSteps) {
  Rng rng(29);
  std::uniform_int_distribution<std::int64_t> target(1, 40);
  for (unsigned mask = 1; mask < (1u << 6); ++mask) {
    std::vector<Displacement> support;
    RateKernel::Entries e;
    for (Displacement d = 1; d <= 6; ++d) {
      if (!(mask & (1u << (d - 1)))) continue;
      support.push_back(d);
      support.push_back(-d);
      e[d] = e[-d] = 1.0;
    }
    if (!is_irreducible(RateKernel(e, true))) {
      EXPECT_THROW(plan_transport(5, support), Unreachable);
      continue;
    }
    for (int trial = 0; trial < 10; ++trial) {
      const std::int64_t n = target(rng);
      const auto path = plan_transport(n, support);
      ASSERT_EQ(path.front(), 1);
      ASSERT_EQ(path.back(), n);
      for (std::size_t k = 0; k < path.size(); ++k) {
        ASSERT_GE(path[k], 1);
        if (k == 0) continue;
        const auto step = path[k] - path[k - 1];
        ASSERT_NE(std::find(support.begin(), support.end(), step), support.end());
      }
    }
  }
}
