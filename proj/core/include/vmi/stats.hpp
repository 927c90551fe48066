#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace vmi {

struct ProportionEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double value = 0.0;
  double lower = 0.0;  // Wilson score interval
  double upper = 0.0;
};

inline ProportionEstimate wilson(std::uint64_t successes, std::uint64_t trials, double z = 1.96) {
  ProportionEstimate out{successes, trials, 0.0, 0.0, 1.0};
  if (trials == 0) return out;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  out.value = phat;
  out.lower = std::max(0.0, centre - half);
  out.upper = std::min(1.0, centre + half);
  return out;
}

struct MeanEstimate {
  std::uint64_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;   // sample standard deviation
  double std_error = 0.0;
};

// Welford accumulator; merge() is associative, so partial results from
// parallel workers can be combined in any grouping.
class RunningStats {
 public:
  void add(double v) noexcept {
    ++n_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (v - mean_);
  }

  void merge(const RunningStats& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(n_ + other.n_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.n_) / total;
    m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / total;
    n_ += other.n_;
  }

  MeanEstimate estimate() const noexcept {
    MeanEstimate out;
    out.count = n_;
    out.mean = mean_;
    if (n_ > 1) {
      out.stddev = std::sqrt(m2_ / static_cast<double>(n_ - 1));
      out.std_error = out.stddev / std::sqrt(static_cast<double>(n_));
    }
    return out;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline MeanEstimate summarize(std::span<const double> values) {
  RunningStats s;
  for (double v : values) s.add(v);
  return s.estimate();
}

}  // namespace vmi
