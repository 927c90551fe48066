#include "vmi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace vmi {

namespace {

void require_every_event(std::span<const TrajectoryRecord> records, const char* who) {
  if (records.empty()) throw AnalysisError(std::string(who) + ": no records");
  for (const auto& rec : records) {
    if (rec.mode != RecordMode::every_event) {
      throw AnalysisError(std::string(who) + ": every-event records are required");
    }
    if (rec.samples.empty()) throw AnalysisError(std::string(who) + ": empty record");
  }
}

// Calls visit(k, start, end) for every constant segment of the path.
template <class Visit>
void for_each_segment(const TrajectoryRecord& rec, Visit&& visit) {
  const auto& s = rec.samples;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double end = k + 1 < s.size() ? s[k + 1].t : rec.t_end;
    if (end > s[k].t) visit(k, s[k].t, end);
  }
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

double total_variation(const std::map<std::uint64_t, double>& a, const std::map<std::uint64_t, double>& b) {
  double ma = 0.0;
  double mb = 0.0;
  for (const auto& [_, v] : a) ma += v;
  for (const auto& [_, v] : b) mb += v;
  if (ma <= 0.0 || mb <= 0.0) return ma <= 0.0 && mb <= 0.0 ? 0.0 : 1.0;
  std::map<std::uint64_t, double> diff;
  for (const auto& [k, v] : a) diff[k] += v / ma;
  for (const auto& [k, v] : b) diff[k] -= v / mb;
  double sum = 0.0;
  for (const auto& [_, v] : diff) sum += std::abs(v);
  return 0.5 * sum;
}

RecurrenceStats recurrence_report(std::span<const TrajectoryRecord> records, std::size_t class_cap) {
  require_every_event(records, "recurrence_report");
  RecurrenceStats out;
  out.trajectories = records.size();
  out.class_cap = class_cap;
  double heaviside_time = 0.0;

  for (const auto& rec : records) {
    const auto& s = rec.samples;
    const double t0 = s.front().t;
    const double mid = 0.5 * (t0 + rec.t_end);
    out.total_time += rec.t_end - t0;

    // Visit counts include the initial state and every state entered by a jump.
    for (const auto& sample : s) {
      auto it = out.classes.find(sample.class_hash);
      if (it == out.classes.end()) {
        if (out.classes.size() >= class_cap) {
          ++out.overflow_visits;
          continue;
        }
        it = out.classes.emplace(sample.class_hash, ClassOccupation{0, 0.0, sample.width}).first;
      }
      ++it->second.visits;
    }

    for_each_segment(rec, [&](std::size_t k, double start, double end) {
      const Sample& sample = s[k];
      const double dt = end - start;
      if (auto it = out.classes.find(sample.class_hash); it != out.classes.end()) {
        it->second.time += dt;
      } else {
        out.overflow_time += dt;
      }
      if (sample.width == 0) heaviside_time += dt;
      out.width_occupation[sample.width] += dt;
      if (start < mid) out.width_first_half[sample.width] += std::min(end, mid) - start;
      if (end > mid) out.width_second_half[sample.width] += end - std::max(start, mid);
    });

    // X-level returns: consecutive samples that sit in the Heaviside class.
    std::optional<double> last_visit;
    // Quotient returns: entries into the class from outside.
    std::optional<double> last_entry;
    bool inside_prev = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const bool inside = s[k].width == 0;
      if (inside) {
        if (last_visit) out.return_times.push_back(s[k].t - *last_visit);
        last_visit = s[k].t;
        if (k == 0 || !inside_prev) {
          if (last_entry) out.excursion_return_times.push_back(s[k].t - *last_entry);
          last_entry = s[k].t;
        }
      }
      inside_prev = inside;
    }
  }

  if (out.total_time > 0.0) out.heaviside_fraction = std::min(1.0, heaviside_time / out.total_time);
  out.return_time = summarize(out.return_times);
  out.median_return_time = median(out.return_times);
  out.excursion_return_time = summarize(out.excursion_return_times);
  out.median_excursion_return_time = median(out.excursion_return_times);
  out.stationarity_distance = total_variation(out.width_first_half, out.width_second_half);
  return out;
}

CesaroEstimate cesaro_fraction(std::span<const TrajectoryRecord> records, std::int64_t n,
                               std::uint64_t threshold) {
  require_every_event(records, "cesaro_fraction");
  CesaroEstimate out;
  out.n = n;
  out.threshold = threshold;
  RunningStats per_path;
  double horizons = 0.0;
  for (const auto& rec : records) {
    if (n < 1 || n > rec.nmax) throw AnalysisError("cesaro_fraction: n outside the recorded counts");
    const double horizon = rec.t_end - rec.samples.front().t;
    if (!(horizon > 0.0)) throw AnalysisError("cesaro_fraction: record has zero horizon");
    double below = 0.0;
    for_each_segment(rec, [&](std::size_t k, double start, double end) {
      if (rec.count(k, n) < threshold) below += end - start;
    });
    per_path.add(below / horizon);
    horizons += horizon;
  }
  out.across = per_path.estimate();
  out.value = out.across.mean;
  out.horizon = horizons / static_cast<double>(records.size());
  out.lower = std::max(0.0, out.value - 1.96 * out.across.std_error);
  out.upper = std::min(1.0, out.value + 1.96 * out.across.std_error);
  return out;
}

std::vector<MartingaleCheckpoint> martingale_residual(std::span<const TrajectoryRecord> records,
                                                      std::span<const double> checkpoints) {
  if (records.empty()) throw AnalysisError("martingale_residual: no records");
  std::vector<MartingaleCheckpoint> out;
  for (double t : checkpoints) {
    RunningStats residual;
    RunningStats nonnegative;
    for (const auto& rec : records) {
      if (rec.samples.empty()) throw AnalysisError("martingale_residual: empty record");
      const auto start = static_cast<double>(rec.samples.front().f_cd);
      const double tol = 1e-9 * std::max(1.0, std::abs(t));
      auto it = std::find_if(rec.samples.begin(), rec.samples.end(),
                             [&](const Sample& s) { return std::abs(s.t - t) <= tol; });
      if (it == rec.samples.end()) {
        if (rec.status != RunStatus::completed && t > rec.t_end) continue;  // path ended early
        throw AnalysisError("martingale_residual: no sample at checkpoint t=" + std::to_string(t));
      }
      residual.add(static_cast<double>(it->f_cd) - it->integral_gfcd - start);
      nonnegative.add(start + it->integral_gfcd);
    }
    const MeanEstimate r = residual.estimate();
    const MeanEstimate nn = nonnegative.estimate();
    out.push_back({t, r.count, r.mean, r.std_error, nn.mean, nn.std_error});
  }
  return out;
}

LedgerReport contradiction_ledger(std::span<const TrajectoryRecord> records, const RateKernel& q,
                                  const RateKernel& p, TruncationSpec trunc, TightnessConstant constant,
                                  double tolerance) {
  require_every_event(records, "contradiction_ledger");
  const Displacement k = trunc.range;
  if (constant.i < 1 || constant.i > k) throw AnalysisError("contradiction_ledger: index i outside 1..K");
  std::vector<double> qs(static_cast<std::size_t>(k) + 1, 0.0);
  LedgerReport out;
  out.constant = constant;
  for (Displacement n = 1; n <= k; ++n) {
    qs[static_cast<std::size_t>(n)] = 0.5 * (q(n) + q(-n));
    const auto nn = static_cast<double>(n);
    out.second_moment += (qs[static_cast<std::size_t>(n)] + p(n)) * nn * nn;
  }
  const double qi = qs[static_cast<std::size_t>(constant.i)];
  const auto threshold = static_cast<std::uint64_t>(constant.n);

  out.all_ok = true;
  for (const auto& rec : records) {
    if (rec.nmax < k) throw AnalysisError("contradiction_ledger: records must track I_n up to K");
    LedgerEntry e;
    e.horizon = rec.t_end - rec.samples.front().t;
    e.integral_gfcd = rec.integral_gfcd_end - rec.samples.front().integral_gfcd;
    double above = 0.0;
    for_each_segment(rec, [&](std::size_t idx, double start, double end) {
      const double dt = end - start;
      for (Displacement n = 1; n <= k; ++n) {
        e.weighted_interfaces += qs[static_cast<std::size_t>(n)] * static_cast<double>(rec.count(idx, n)) * dt;
      }
      if (rec.count(idx, constant.i) >= threshold) above += dt;
    });
    e.identity_rhs = e.horizon * out.second_moment - e.weighted_interfaces;
    e.identity_residual = std::abs(e.integral_gfcd - e.identity_rhs);
    e.threshold_term = qi * static_cast<double>(constant.n) * above;
    e.bound = e.horizon * out.second_moment - e.threshold_term;

    const double scale = std::max({1.0, std::abs(e.horizon * out.second_moment), e.weighted_interfaces});
    const double slack = tolerance * scale;
    e.termwise_ok = e.weighted_interfaces + slack >= e.threshold_term;
    e.chain_ok = e.identity_rhs <= e.bound + slack;
    out.max_relative_identity_residual = std::max(out.max_relative_identity_residual, e.identity_residual / scale);
    out.all_ok = out.all_ok && e.termwise_ok && e.chain_ok && e.identity_residual <= slack;
    out.paths.push_back(e);
  }
  return out;
}

TrajectoryRecord truncate(const TrajectoryRecord& record, double horizon) {
  if (record.mode != RecordMode::every_event) throw AnalysisError("truncate: every-event record required");
  if (record.samples.empty()) throw AnalysisError("truncate: empty record");
  if (horizon > record.t_end) throw AnalysisError("truncate: horizon beyond the recorded path");
  TrajectoryRecord out;
  out.mode = record.mode;
  out.nmax = record.nmax;
  out.status = RunStatus::completed;
  const auto stride = static_cast<std::size_t>(record.nmax);
  std::size_t kept = 0;
  while (kept < record.samples.size() && record.samples[kept].t <= horizon) ++kept;
  if (kept == 0) throw AnalysisError("truncate: horizon precedes the first sample");
  out.samples.assign(record.samples.begin(), record.samples.begin() + static_cast<std::ptrdiff_t>(kept));
  out.counts.assign(record.counts.begin(), record.counts.begin() + static_cast<std::ptrdiff_t>(kept * stride));
  const Sample& last = out.samples.back();
  // The integral is extended linearly over the final segment: G f_CD is
  // constant there, with slope taken from the next recorded increment.
  double slope = 0.0;
  if (kept < record.samples.size()) {
    const Sample& next = record.samples[kept];
    if (next.t > last.t) slope = (next.integral_gfcd - last.integral_gfcd) / (next.t - last.t);
  } else if (record.t_end > last.t) {
    slope = (record.integral_gfcd_end - last.integral_gfcd) / (record.t_end - last.t);
  }
  out.t_end = horizon;
  out.integral_gfcd_end = last.integral_gfcd + slope * (horizon - last.t);
  out.events = last.event_index;
  if (kept == record.samples.size()) out.final_state = record.final_state;
  return out;
}

}  // namespace vmi
