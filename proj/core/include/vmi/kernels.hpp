#pragma once

// Finitely supported rate functions on the nonzero integers.
//
// A kernel r maps a displacement d != 0 to a nonnegative rate r(d).  The
// infection kernel q, the swapping kernel p (symmetric), their
// symmetrization q_s and the tail rates a(n) of the dominating walk are all
// represented by BasicRateKernel.  The scalar type is a template parameter so
// that the exact identities can be checked with rational arithmetic.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace vmi {

using Rational = boost::multiprecision::cpp_rational;
using Displacement = std::int64_t;

class InvalidKernel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonSymmetricKernel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class Real>
class BasicRateKernel {
 public:
  using value_type = Real;
  using Entries = std::map<Displacement, Real>;

  BasicRateKernel() = default;

  // Zero-rate entries are dropped, so entries() is exactly the support.
  // Throws InvalidKernel on displacement 0 or a negative rate, and on an
  // asymmetric table when `symmetric` is requested.
  explicit BasicRateKernel(Entries entries, bool symmetric = false)
      : symmetric_(symmetric) {
    for (auto& [d, r] : entries) {
      if (d == 0) throw InvalidKernel("rate kernel: displacement 0 is not allowed");
      bool finite = true;
      if constexpr (std::is_floating_point_v<Real>) finite = std::isfinite(r);
      if (!finite || !(r >= Real(0))) {
        throw InvalidKernel("rate kernel: invalid rate at displacement " + std::to_string(d));
      }
      if (r > Real(0)) entries_.emplace(d, std::move(r));
    }
    if (symmetric_) {
      for (const auto& [d, r] : entries_) {
        if ((*this)(-d) != r) {
          throw InvalidKernel("rate kernel: declared symmetric but r(" + std::to_string(d) +
                              ") != r(" + std::to_string(-d) + ")");
        }
      }
    }
  }

  Real operator()(Displacement d) const {
    auto it = entries_.find(d);
    return it == entries_.end() ? Real(0) : it->second;
  }

  const Entries& entries() const noexcept { return entries_; }
  bool symmetric() const noexcept { return symmetric_; }
  bool empty() const noexcept { return entries_.empty(); }

  // Largest |d| in the support, 0 for the empty kernel.
  Displacement range() const noexcept {
    if (entries_.empty()) return 0;
    return std::max(-entries_.begin()->first, entries_.rbegin()->first);
  }

  template <class To>
  BasicRateKernel<To> cast() const {
    typename BasicRateKernel<To>::Entries out;
    for (const auto& [d, r] : entries_) out.emplace(d, static_cast<To>(r));
    return BasicRateKernel<To>(std::move(out), symmetric_);
  }

  friend bool operator==(const BasicRateKernel& a, const BasicRateKernel& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Entries entries_;
  bool symmetric_ = false;
};

using RateKernel = BasicRateKernel<double>;
using ExactKernel = BasicRateKernel<Rational>;

// Power-law family c*|n|^(-beta) on 1 <= |n| <= range.
struct PowerLaw {
  double amplitude = 1.0;
  double exponent = 2.0;
  Displacement range = 1;
};

RateKernel materialize(const PowerLaw& family);

// Parses "3/10", "0.25", "-1e-3", "7" exactly.  Throws std::invalid_argument.
Rational parse_exact_rate(std::string_view text);

// q_s(i) = (q(i) + q(-i)) / 2.
template <class Real>
BasicRateKernel<Real> symmetrize(const BasicRateKernel<Real>& q) {
  typename BasicRateKernel<Real>::Entries out;
  for (const auto& [d, r] : q.entries()) {
    out[d] += r / 2;
    out[-d] += r / 2;
  }
  return BasicRateKernel<Real>(std::move(out), true);
}

template <class Real>
BasicRateKernel<Real> operator+(const BasicRateKernel<Real>& a, const BasicRateKernel<Real>& b) {
  auto out = a.entries();
  for (const auto& [d, r] : b.entries()) out[d] += r;
  return BasicRateKernel<Real>(std::move(out), a.symmetric() && b.symmetric());
}

template <class Real>
BasicRateKernel<Real> scaled(const BasicRateKernel<Real>& r, const Real& factor) {
  typename BasicRateKernel<Real>::Entries out;
  for (const auto& [d, v] : r.entries()) out.emplace(d, v * factor);
  return BasicRateKernel<Real>(std::move(out), r.symmetric());
}

// sum_i |i|^m r(i)
template <class Real>
Real moment(const BasicRateKernel<Real>& r, unsigned m) {
  Real total(0);
  for (const auto& [d, v] : r.entries()) {
    Real power(1);
    const Real magnitude(d < 0 ? -d : d);
    for (unsigned k = 0; k < m; ++k) power *= magnitude;
    total += power * v;
  }
  return total;
}

// a(n) = sum_{k >= n} 2 (q_s(k) + p(k)), n >= 1.  Only positive
// displacements are present in the result.
template <class Real>
BasicRateKernel<Real> tail_rates(const BasicRateKernel<Real>& q, const BasicRateKernel<Real>& p) {
  if (!p.symmetric()) throw NonSymmetricKernel("tail_rates: swapping kernel must be symmetric");
  const Displacement top = std::max(q.range(), p.range());
  typename BasicRateKernel<Real>::Entries out;
  Real running(0);
  for (Displacement k = top; k >= 1; --k) {
    running += q(k) + q(-k) + 2 * p(k);  // 2 q_s(k) = q(k) + q(-k)
    if (running > Real(0)) out.emplace(k, running);
  }
  return BasicRateKernel<Real>(std::move(out), false);
}

// gcd test on a symmetric kernel: the additive group generated by a symmetric
// support S is gcd(S) * Z.
template <class Real>
bool is_irreducible(const BasicRateKernel<Real>& r) {
  if (!r.symmetric()) {
    throw NonSymmetricKernel("is_irreducible: only symmetric kernels are supported");
  }
  Displacement g = 0;
  for (const auto& [d, v] : r.entries()) g = std::gcd(g, d < 0 ? -d : d);
  return g == 1;
}

struct TightnessConstant {
  Displacement i = 0;
  std::int64_t n = 0;
  friend bool operator==(const TightnessConstant&, const TightnessConstant&) = default;
};

namespace detail {
inline std::int64_t floor_quotient(double num, double den) {
  return static_cast<std::int64_t>(std::floor(num / den));
}
inline std::int64_t floor_quotient(const Rational& num, const Rational& den) {
  const Rational ratio = num / den;
  boost::multiprecision::cpp_int quotient = numerator(ratio) / denominator(ratio);
  return quotient.convert_to<std::int64_t>();
}
}  // namespace detail

// sum_n (q_s(n) + p(n)) n^2 over n >= 1.
template <class Real>
Real second_moment_constant(const BasicRateKernel<Real>& q, const BasicRateKernel<Real>& p) {
  const Displacement top = std::max(q.range(), p.range());
  Real total(0);
  for (Displacement n = 1; n <= top; ++n) {
    const Real qs = (q(n) + q(-n)) / 2;
    total += (qs + p(n)) * Real(n) * Real(n);
  }
  return total;
}

// Smallest i with q_s(i) > 0, then smallest N with
//   sum_n (q_s(n) + p(n)) n^2 < q_s(i) N.
// nullopt when q_s vanishes.
template <class Real>
std::optional<TightnessConstant> tightness_constant(const BasicRateKernel<Real>& q,
                                                    const BasicRateKernel<Real>& p) {
  const Real total = second_moment_constant(q, p);
  for (Displacement i = 1; i <= q.range(); ++i) {
    const Real qs = (q(i) + q(-i)) / 2;
    if (!(qs > Real(0))) continue;
    std::int64_t n = std::max<std::int64_t>(1, detail::floor_quotient(total, qs) + 1);
    // floating floor may be off by one in either direction
    while (!(qs * Real(n) > total)) ++n;
    while (n > 1 && qs * Real(n - 1) > total) --n;
    return TightnessConstant{i, n};
  }
  return std::nullopt;
}

}  // namespace vmi
