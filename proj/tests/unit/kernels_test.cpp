#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "vmi/kernels.hpp"

using namespace vmi;
using vmi::testing::Rng;
using vmi::testing::to_double;

namespace {

RateKernel kernel(std::initializer_list<std::pair<const Displacement, double>> e, bool symmetric = false) {
  return RateKernel(RateKernel::Entries(e), symmetric);
}

// Closure of the support under addition, explored on a bounded window.
bool bfs_generates_one(const std::vector<Displacement>& support) {
  constexpr Displacement kBound = 64;
  std::set<Displacement> seen{0};
  std::vector<Displacement> frontier{0};
  while (!frontier.empty()) {
    const Displacement v = frontier.back();
    frontier.pop_back();
    for (Displacement s : support) {
      const Displacement w = v + s;
      if (std::abs(w) > kBound || seen.contains(w)) continue;
      seen.insert(w);
      frontier.push_back(w);
    }
  }
  return seen.contains(1);
}

}  // namespace

TEST(RateKernelTest, RejectsInvalidEntries) {
  EXPECT_THROW(kernel({{0, 1.0}}), InvalidKernel);
  EXPECT_THROW(kernel({{1, -0.5}}), InvalidKernel);
  EXPECT_THROW(kernel({{1, std::nan("")}}), InvalidKernel);
  EXPECT_THROW(kernel({{1, INFINITY}}), InvalidKernel);
  EXPECT_THROW(kernel({{1, 0.5}, {-1, 0.25}}, true), InvalidKernel);
}

TEST(RateKernelTest, DropsZeroRatesAndReportsRange) {
  const auto k = kernel({{1, 0.0}, {-3, 0.5}, {2, 1.0}});
  EXPECT_EQ(k.entries().size(), 2u);
  EXPECT_EQ(k.range(), 3);
  EXPECT_EQ(k(1), 0.0);
  EXPECT_EQ(k(-3), 0.5);
  EXPECT_EQ(RateKernel().range(), 0);
}

TEST(SymmetrizeTest, Examples) {
  const auto qs = symmetrize(kernel({{1, 1.0}}));
  EXPECT_TRUE(qs.symmetric());
  EXPECT_EQ(qs, kernel({{1, 0.5}, {-1, 0.5}}));

  const auto sym = kernel({{1, 0.5}, {-1, 0.5}, {3, 0.2}, {-3, 0.2}}, true);
  EXPECT_EQ(symmetrize(sym), sym);

  EXPECT_EQ(symmetrize(kernel({{2, 0.4}, {-3, 0.6}})),
            kernel({{2, 0.2}, {-2, 0.2}, {3, 0.3}, {-3, 0.3}}));
}

TEST(SymmetrizeTest, IdempotentAndMassPreserving) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ExactKernel q = vmi::testing::random_exact_kernel(rng, 8, false);
    const ExactKernel qs = symmetrize(q);
    EXPECT_EQ(symmetrize(qs), qs);
    EXPECT_EQ(moment(qs, 0), moment(q, 0));
  }
}

TEST(MomentTest, Examples) {
  EXPECT_DOUBLE_EQ(moment(kernel({{1, 0.5}, {-1, 0.5}}), 2), 1.0);
  const auto k = kernel({{1, 0.5}, {-2, 0.25}, {4, 1.0}});
  EXPECT_DOUBLE_EQ(moment(k, 0), 1.75);

  const RateKernel power = materialize(PowerLaw{1.0, 2.0, 3});
  double oracle = 0.0;
  for (int n = 1; n <= 3; ++n) oracle += 2.0 * n * std::pow(n, -2.0);
  EXPECT_NEAR(moment(power, 1), oracle, 1e-15);
  EXPECT_NEAR(oracle, 2.0 * (1.0 + 0.5 + 1.0 / 3.0), 1e-15);
}

TEST(PowerLawTest, MaterializesSymmetricTable) {
  const RateKernel k = materialize(PowerLaw{2.0, 3.0, 4});
  EXPECT_TRUE(k.symmetric());
  EXPECT_EQ(k.range(), 4);
  for (Displacement n = 1; n <= 4; ++n) {
    EXPECT_DOUBLE_EQ(k(n), 2.0 * std::pow(static_cast<double>(n), -3.0));
    EXPECT_DOUBLE_EQ(k(-n), k(n));
  }
  EXPECT_EQ(k(5), 0.0);
  EXPECT_THROW(materialize(PowerLaw{0.0, 2.0, 3}), InvalidKernel);
  EXPECT_THROW(materialize(PowerLaw{1.0, 0.0, 3}), InvalidKernel);
  EXPECT_THROW(materialize(PowerLaw{1.0, 2.0, 0}), InvalidKernel);
}

TEST(ParseExactRateTest, AcceptsDecimalsAndFractions) {
  EXPECT_EQ(parse_exact_rate("3/10"), Rational(3, 10));
  EXPECT_EQ(parse_exact_rate("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_exact_rate("7"), Rational(7));
  EXPECT_EQ(parse_exact_rate("1.5e-2"), Rational(3, 200));
  EXPECT_EQ(parse_exact_rate("-1e-3"), Rational(-1, 1000));
  EXPECT_THROW(parse_exact_rate("abc"), std::invalid_argument);
  EXPECT_THROW(parse_exact_rate("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_exact_rate(""), std::invalid_argument);
}

TEST(TailRatesTest, Examples) {
  EXPECT_EQ(tail_rates(kernel({{1, 0.5}, {-1, 0.5}}), RateKernel({}, true)), kernel({{1, 1.0}}));

  const auto p = kernel({{1, 0.25}, {-1, 0.25}, {2, 0.25}, {-2, 0.25}}, true);
  const auto a = tail_rates(RateKernel(), p);
  // a(n) = sum_{k >= n} 2 p(k), computed term by term.
  EXPECT_DOUBLE_EQ(a(1), 2 * 0.25 + 2 * 0.25);
  EXPECT_DOUBLE_EQ(a(2), 2 * 0.25);
  EXPECT_EQ(a(-1), 0.0);

  EXPECT_THROW(tail_rates(RateKernel(), kernel({{1, 0.25}})), NonSymmetricKernel);
}

TEST(TailRatesTest, NonincreasingAndMomentIdentityExact) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const ExactKernel q = vmi::testing::random_exact_kernel(rng, 10, false);
    const ExactKernel p = vmi::testing::random_exact_kernel(rng, 10, true);
    const ExactKernel a = tail_rates(q, p);
    const Displacement top = std::max(q.range(), p.range());
    for (Displacement n = 1; n < top; ++n) EXPECT_LE(a(n + 1), a(n));

    Rational lhs = 0;
    for (Displacement n = 1; n <= top; ++n) lhs += a(n) * n;
    Rational rhs = 0;
    for (Displacement k = 1; k <= top; ++k) {
      const Rational qs = (q(k) + q(-k)) / 2;
      rhs += 2 * (qs + p(k)) * Rational(k * (k + 1), 2);
    }
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(IrreducibleTest, Examples) {
  EXPECT_FALSE(is_irreducible(kernel({{2, 1.0}, {-2, 1.0}}, true)));
  EXPECT_TRUE(is_irreducible(kernel({{2, 1.0}, {-2, 1.0}, {3, 1.0}, {-3, 1.0}}, true)));
  EXPECT_TRUE(is_irreducible(kernel({{1, 1.0}, {-1, 1.0}}, true)));
  EXPECT_FALSE(is_irreducible(RateKernel({}, true)));
  EXPECT_THROW(is_irreducible(kernel({{1, 1.0}})), NonSymmetricKernel);
}

TEST(IrreducibleTest, AgreesWithBfsOnAllSymmetricSupportsUpToSix) {
  for (unsigned mask = 1; mask < (1u << 6); ++mask) {
    RateKernel::Entries e;
    std::vector<Displacement> support;
    for (Displacement d = 1; d <= 6; ++d) {
      if (!(mask & (1u << (d - 1)))) continue;
      e[d] = 1.0;
      e[-d] = 1.0;
      support.push_back(d);
      support.push_back(-d);
    }
    EXPECT_EQ(is_irreducible(RateKernel(e, true)), bfs_generates_one(support)) << "mask " << mask;
  }
}

TEST(TightnessConstantTest, Examples) {
  const auto nn = tightness_constant(kernel({{1, 0.5}, {-1, 0.5}}), RateKernel({}, true));
  ASSERT_TRUE(nn.has_value());
  // sum_{n >= 1} (q_s(n) + p(n)) n^2 = q_s(1) = 0.5, and 0.5 * 2 > 0.5.
  EXPECT_EQ(*nn, (TightnessConstant{1, 2}));

  EXPECT_FALSE(tightness_constant(RateKernel(), kernel({{1, 0.5}, {-1, 0.5}}, true)).has_value());
}

TEST(TightnessConstantTest, MatchesExhaustiveScanAndScaleInvariance) {
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const ExactKernel q = vmi::testing::random_exact_kernel(rng, 8, false);
    const ExactKernel p = vmi::testing::random_exact_kernel(rng, 8, true);
    const auto got = tightness_constant(q, p);

    Rational total = 0;
    for (Displacement n = 1; n <= 8; ++n) total += ((q(n) + q(-n)) / 2 + p(n)) * n * n;
    std::optional<TightnessConstant> want;
    for (Displacement i = 1; i <= 8 && !want; ++i) {
      const Rational qs = (q(i) + q(-i)) / 2;
      if (qs == 0) continue;
      for (std::int64_t n = 1;; ++n) {
        if (qs * n > total) {
          want = TightnessConstant{i, n};
          break;
        }
      }
    }
    EXPECT_EQ(got, want);

    const auto scaled_result = tightness_constant(scaled(q, Rational(7, 3)), scaled(p, Rational(7, 3)));
    EXPECT_EQ(scaled_result, got);
    const auto as_double = tightness_constant(to_double(q), to_double(p));
    EXPECT_EQ(as_double, got);
  }
}
