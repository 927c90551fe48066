#pragma once

// Ensemble statistics over simulated interface trajectories.
//
// Paths are piecewise constant between events, so every time integral here is
// an exact sum over constant segments.  Functions that integrate over time
// require every-event records; checkpoint statistics accept grid records.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "vmi/generator.hpp"
#include "vmi/kernels.hpp"
#include "vmi/simulator.hpp"
#include "vmi/stats.hpp"

namespace vmi {

class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ClassOccupation {
  std::uint64_t visits = 0;
  double time = 0.0;
  std::uint64_t width = 0;
};

struct RecurrenceStats {
  std::uint64_t trajectories = 0;
  double total_time = 0.0;

  // Keyed by canonical-class hash.  Once `class_cap` distinct classes are
  // seen, further new classes are pooled into the overflow counters.
  std::map<std::uint64_t, ClassOccupation> classes;
  std::uint64_t class_cap = 0;
  std::uint64_t overflow_visits = 0;
  double overflow_time = 0.0;

  double heaviside_fraction = 0.0;

  // Times between consecutive jumps of X that land in the Heaviside class
  // (a translation of x_H counts as landing there).
  std::vector<double> return_times;
  MeanEstimate return_time;
  double median_return_time = 0.0;

  // Return times of the translation quotient: from entering the Heaviside
  // class until re-entering it after leaving.
  std::vector<double> excursion_return_times;
  MeanEstimate excursion_return_time;
  double median_excursion_return_time = 0.0;

  // Occupation time by width over the whole horizon and each half of it.
  std::map<std::uint64_t, double> width_occupation;
  std::map<std::uint64_t, double> width_first_half;
  std::map<std::uint64_t, double> width_second_half;
  double stationarity_distance = 0.0;  // total variation, first vs second half
};

RecurrenceStats recurrence_report(std::span<const TrajectoryRecord> records,
                                  std::size_t class_cap = 1'000'000);

// Total-variation distance between two occupation histograms after
// normalizing each to mass one.
double total_variation(const std::map<std::uint64_t, double>& a, const std::map<std::uint64_t, double>& b);

struct CesaroEstimate {
  std::int64_t n = 1;
  std::uint64_t threshold = 1;  // N
  double horizon = 0.0;         // mean path horizon
  double value = 0.0;           // ensemble mean of (1/T) int 1{I_n < N} dt
  double lower = 0.0;
  double upper = 0.0;
  MeanEstimate across;
};

CesaroEstimate cesaro_fraction(std::span<const TrajectoryRecord> records, std::int64_t n,
                               std::uint64_t threshold);

struct MartingaleCheckpoint {
  double t = 0.0;
  std::uint64_t paths = 0;
  // mean[f_CD(X_t) - int_0^t G f_CD ds] - f_CD(x_0)
  double residual = 0.0;
  double residual_se = 0.0;
  // mean[f_CD(x_0) + int_0^t G f_CD ds]
  double nonnegative_value = 0.0;
  double nonnegative_se = 0.0;

  bool residual_within(double sigmas) const noexcept { return std::abs(residual) <= sigmas * residual_se; }
  bool nonnegative_within(double sigmas) const noexcept {
    return nonnegative_value >= -sigmas * nonnegative_se;
  }
};

// Records must contain a sample at each checkpoint (grid records with the
// checkpoints on the grid, or any record with t == 0).
std::vector<MartingaleCheckpoint> martingale_residual(std::span<const TrajectoryRecord> records,
                                                      std::span<const double> checkpoints);

struct LedgerEntry {
  double horizon = 0.0;
  double integral_gfcd = 0.0;       // accumulated along the path
  double weighted_interfaces = 0.0; // sum_n q_s(n) int I_n dt
  double identity_rhs = 0.0;        // T S - sum_n q_s(n) int I_n dt
  double identity_residual = 0.0;   // |integral_gfcd - identity_rhs|
  double threshold_term = 0.0;      // q_s(i) N int 1{I_i >= N} dt
  double bound = 0.0;               // T S - threshold_term
  bool termwise_ok = false;         // weighted_interfaces >= threshold_term
  bool chain_ok = false;            // identity_rhs <= bound
};

struct LedgerReport {
  TightnessConstant constant;
  double second_moment = 0.0;  // S = sum_n (q_s(n) + p(n)) n^2
  std::vector<LedgerEntry> paths;
  double max_relative_identity_residual = 0.0;
  bool all_ok = false;
};

// Requires every-event records with nmax >= max(K, i).
LedgerReport contradiction_ledger(std::span<const TrajectoryRecord> records, const RateKernel& q,
                                  const RateKernel& p, TruncationSpec trunc, TightnessConstant constant,
                                  double tolerance = 1e-9);

// The part of an every-event record on [0, horizon].  final_state is kept
// only when no event was cut off; otherwise it is left at x_H.
TrajectoryRecord truncate(const TrajectoryRecord& record, double horizon);

}  // namespace vmi
