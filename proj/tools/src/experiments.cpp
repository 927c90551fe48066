#include "vmi/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "vmi/analysis.hpp"
#include "vmi/coupling.hpp"
#include "vmi/generator.hpp"
#include "vmi/harness/farm.hpp"

namespace vmi::harness {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::stopped: return "stopped";
    case RunStatus::budget_exceeded: return "budget_exceeded";
  }
  return "unknown";
}

json estimate_json(const MeanEstimate& m) {
  return {{"count", m.count}, {"mean", m.mean}, {"stddev", m.stddev}, {"std_error", m.std_error}};
}

json proportion_json(const ProportionEstimate& p) {
  return {{"successes", p.successes}, {"trials", p.trials}, {"value", p.value}, {"lower", p.lower}, {"upper", p.upper}};
}

json histogram_json(const std::map<std::uint64_t, double>& h) {
  double total = 0.0;
  for (const auto& [_, v] : h) total += v;
  json out = json::array();
  for (const auto& [w, v] : h) out.push_back({{"width", w}, {"fraction", total > 0 ? v / total : 0.0}});
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

SimulationConfig task_config(const ExperimentSpec& spec, std::uint64_t index) {
  SimulationConfig c = spec.simulation;
  c.seed = spec.seed;
  c.trajectory = static_cast<std::uint32_t>(index);
  return c;
}

class Progress {
 public:
  Progress(std::ostream& log, std::string label) : log_(log), label_(std::move(label)), start_(clock::now()) {
    log_ << "[vmi] " << label_ << " ...\n";
  }
  void done(const std::string& detail = "") {
    const double secs = std::chrono::duration<double>(clock::now() - start_).count();
    log_ << "[vmi] " << label_ << " done in " << format_double(std::round(secs * 100) / 100) << " s";
    if (!detail.empty()) log_ << " (" << detail << ")";
    log_ << "\n";
  }

 private:
  using clock = std::chrono::steady_clock;
  std::ostream& log_;
  std::string label_;
  clock::time_point start_;
};

std::vector<TrajectoryRecord> simulate_ensemble(const ExperimentSpec& spec, std::ostream& log) {
  Progress progress(log, "simulating " + std::to_string(spec.ensemble) + " trajectories");
  auto records = farm(spec.ensemble, spec.parallel, [&](std::uint64_t k) { return run(task_config(spec, k)); });
  std::uint64_t events = 0;
  for (const auto& r : records) events += r.events;
  progress.done(std::to_string(events) + " events");
  return records;
}

void write_records(const ExperimentSpec& spec, const std::vector<TrajectoryRecord>& records) {
  const std::uint64_t limit = std::min<std::uint64_t>(spec.output.csv_trajectories, records.size());
  if (limit == 0) return;
  const fs::path dir = spec.out_dir / "trajectories";
  fs::create_directories(dir);
  for (std::uint64_t k = 0; k < limit; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "traj_%06llu.csv", static_cast<unsigned long long>(k));
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + (dir / name).string());
    write_trajectory_csv(out, records[k]);
    if (!out) throw std::ios_base::failure("write failed for " + (dir / name).string());
  }
}

json trajectories_json(const std::vector<TrajectoryRecord>& records) {
  json list = json::array();
  std::uint64_t over_budget = 0;
  std::vector<double> widths;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    over_budget += r.status == RunStatus::budget_exceeded;
    widths.push_back(static_cast<double>(width(r.final_state)));
    list.push_back({{"index", k},
                    {"events", r.events},
                    {"status", status_name(r.status)},
                    {"t_end", r.t_end},
                    {"final_width", width(r.final_state)},
                    {"final_f_cd", f_cd(r.final_state)},
                    {"integral_gfcd", r.integral_gfcd_end}});
  }
  return {{"budget_exceeded", over_budget},
          {"final_width", {{"mean", summarize(widths).mean}, {"median", median_of(widths)}}},
          {"paths", list}};
}

json recurrence_json(const RecurrenceStats& s) {
  std::vector<std::pair<std::uint64_t, ClassOccupation>> top(s.classes.begin(), s.classes.end());
  std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) {
    return a.second.time != b.second.time ? a.second.time > b.second.time : a.first < b.first;
  });
  if (top.size() > 20) top.resize(20);
  json classes = json::array();
  for (const auto& [hash, occ] : top) {
    classes.push_back({{"class_key_hash", hash},
                       {"width", occ.width},
                       {"visits", occ.visits},
                       {"fraction", s.total_time > 0 ? occ.time / s.total_time : 0.0}});
  }
  return {{"trajectories", s.trajectories},
          {"total_time", s.total_time},
          {"distinct_classes", s.classes.size()},
          {"class_cap", s.class_cap},
          {"overflow_visits", s.overflow_visits},
          {"overflow_time", s.overflow_time},
          {"heaviside_fraction", s.heaviside_fraction},
          {"return_time", estimate_json(s.return_time)},
          {"median_return_time", s.median_return_time},
          {"excursion_return_time", estimate_json(s.excursion_return_time)},
          {"median_excursion_return_time", s.median_excursion_return_time},
          {"stationarity_distance", s.stationarity_distance},
          {"width_occupation", histogram_json(s.width_occupation)},
          {"top_classes", classes}};
}

json cesaro_json(const std::vector<TrajectoryRecord>& records, const std::vector<CesaroSpec>& specs) {
  json out = json::array();
  for (const auto& c : specs) {
    const auto e = cesaro_fraction(records, c.n, c.threshold);
    out.push_back({{"n", e.n},
                   {"N", e.threshold},
                   {"horizon", e.horizon},
                   {"value", e.value},
                   {"lower", e.lower},
                   {"upper", e.upper},
                   {"std_error", e.across.std_error}});
  }
  return out;
}

void require_every_event(const ExperimentSpec& spec) {
  if (spec.simulation.schedule.mode != RecordMode::every_event) {
    throw ValidationError(std::string(to_string(spec.experiment)) + " needs simulation.record = \"every_event\"");
  }
}

int run_simulate(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  const auto records = simulate_ensemble(spec, log);
  write_records(spec, records);
  summary["trajectories"] = trajectories_json(records);
  return exit_code::kOk;
}

int run_recurrence(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  require_every_event(spec);
  const auto records = simulate_ensemble(spec, log);
  write_records(spec, records);
  summary["recurrence"] = recurrence_json(recurrence_report(records, spec.analysis.class_cap));
  summary["cesaro"] = cesaro_json(records, spec.analysis.cesaro);
  summary["trajectories"] = trajectories_json(records)["final_width"];
  return exit_code::kOk;
}

int run_martingale(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  const auto records = simulate_ensemble(spec, log);
  write_records(spec, records);
  std::vector<MartingaleCheckpoint> checkpoints;
  try {
    checkpoints = martingale_residual(records, spec.analysis.checkpoints);
  } catch (const AnalysisError& e) {
    throw ValidationError(std::string(e.what()) + " (put the checkpoints on the recording grid)");
  }
  json out = json::array();
  for (const auto& c : checkpoints) {
    out.push_back({{"t", c.t},
                   {"paths", c.paths},
                   {"residual", c.residual},
                   {"residual_std_error", c.residual_se},
                   {"residual_within_3se", c.residual_within(3.0)},
                   {"nonnegative_value", c.nonnegative_value},
                   {"nonnegative_std_error", c.nonnegative_se},
                   {"nonnegative_within_3se", c.nonnegative_within(3.0)}});
  }
  summary["martingale"] = out;
  return exit_code::kOk;
}

int run_ledger(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  require_every_event(spec);
  const auto constant = tightness_constant(spec.q.rates, spec.p.rates);
  if (!constant) throw ValidationError("ledger: q_s vanishes, no (i, N) satisfies the constant condition");
  if (spec.simulation.nmax < spec.simulation.truncation.range || spec.simulation.nmax < constant->i) {
    throw ValidationError("ledger: simulation.nmax must be at least K and i");
  }
  const auto records = simulate_ensemble(spec, log);
  write_records(spec, records);
  std::vector<double> horizons = spec.analysis.ledger_horizons;
  if (horizons.empty()) horizons.push_back(spec.simulation.t_max);
  json out = json::array();
  bool ok = true;
  for (double h : horizons) {
    std::vector<TrajectoryRecord> cut;
    for (const auto& r : records) {
      if (r.t_end >= h) cut.push_back(truncate(r, h));
    }
    if (cut.empty()) continue;
    const auto rep = contradiction_ledger(cut, spec.q.rates, spec.p.rates, spec.simulation.truncation, *constant);
    RunningStats per_time;
    double lowest = INFINITY;
    for (const auto& e : rep.paths) {
      if (e.horizon > 0) per_time.add(e.identity_rhs / e.horizon);
      lowest = std::min(lowest, e.identity_rhs);
    }
    ok = ok && rep.all_ok;
    out.push_back({{"horizon", h},
                   {"paths", rep.paths.size()},
                   {"mean_integral_per_time", per_time.estimate().mean},
                   {"min_integral", lowest},
                   {"max_relative_identity_residual", rep.max_relative_identity_residual},
                   {"all_ok", rep.all_ok}});
  }
  summary["ledger"] = {{"i", constant->i},
                       {"N", constant->n},
                       {"second_moment", second_moment_constant(spec.q.rates, spec.p.rates)},
                       {"horizons", out}};
  return ok ? exit_code::kOk : exit_code::kAssertion;
}

int run_tau(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  if (spec.simulation.width_levels.empty()) throw ValidationError("tau: simulation.levels is empty");
  Progress progress(log, "stopping times for " + std::to_string(spec.ensemble) + " trajectories");
  const auto taus = farm(spec.ensemble, spec.parallel, [&](std::uint64_t k) {
    return stopping_times(task_config(spec, k), spec.simulation.width_levels);
  });
  progress.done();
  json out = json::array();
  bool monotone = true;
  for (std::size_t lvl = 0; lvl < spec.simulation.width_levels.size(); ++lvl) {
    RunningStats hits;
    std::uint64_t censored = 0;
    for (const auto& path : taus) {
      if (path[lvl]) {
        hits.add(*path[lvl]);
      } else {
        ++censored;
      }
    }
    out.push_back({{"N", spec.simulation.width_levels[lvl]}, {"hit_time", estimate_json(hits.estimate())}, {"censored", censored}});
  }
  std::vector<std::size_t> order(spec.simulation.width_levels.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return spec.simulation.width_levels[a] < spec.simulation.width_levels[b]; });
  for (const auto& path : taus) {
    for (std::size_t k = 1; k < order.size(); ++k) {
      const auto& lo = path[order[k - 1]];
      const auto& hi = path[order[k]];
      if ((!lo && hi) || (lo && hi && *hi < *lo)) monotone = false;
    }
  }
  summary["tau"] = {{"levels", out}, {"monotone_in_level", monotone}};
  return monotone ? exit_code::kOk : exit_code::kAssertion;
}

int run_coupled_experiment(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  Progress progress(log, "coupled runs for " + std::to_string(spec.ensemble) + " trajectories");
  const auto results = farm(spec.ensemble, spec.parallel, [&](std::uint64_t k) { return run_coupled(task_config(spec, k)); });
  progress.done();
  std::vector<TrajectoryRecord> records;
  std::uint64_t violations = 0;
  std::uint64_t runs_with_violation = 0;
  std::optional<double> first;
  std::map<std::uint64_t, std::uint64_t> jumps;
  std::uint64_t total_jumps = 0;
  for (const auto& r : results) {
    violations += r.violations;
    runs_with_violation += r.violations > 0;
    if (r.first_violation && (!first || *r.first_violation < *first)) first = r.first_violation;
    for (const auto& [n, c] : r.walk_jumps) {
      jumps[n] += c;
      total_jumps += c;
    }
    records.push_back(r.record);
  }
  write_records(spec, records);
  const RateKernel a = tail_rates(spec.q.rates, spec.p.rates);
  const double a_total = moment(a, 0);
  json freq = json::array();
  bool frequencies_ok = true;
  for (const auto& [n, rate] : a.entries()) {
    const double prob = rate / a_total;
    const auto count = jumps[static_cast<std::uint64_t>(n)];
    const double expected = prob * static_cast<double>(total_jumps);
    const double sd = std::sqrt(static_cast<double>(total_jumps) * prob * (1 - prob));
    const double z = sd > 0 ? (static_cast<double>(count) - expected) / sd : 0.0;
    frequencies_ok = frequencies_ok && std::abs(z) <= 3.0;
    freq.push_back({{"n", n}, {"count", count}, {"expected_fraction", prob},
                    {"observed_fraction", total_jumps ? static_cast<double>(count) / static_cast<double>(total_jumps) : 0.0},
                    {"z", z}});
  }
  summary["coupling"] = {{"violations", violations},
                         {"runs_with_violation", runs_with_violation},
                         {"first_violation_time", first ? json(*first) : json(nullptr)},
                         {"walk_jumps", total_jumps},
                         {"jump_frequencies", freq},
                         {"frequencies_within_3sigma", frequencies_ok}};
  if (violations > 0) {
    log << "[vmi] CouplingViolation: R_t < w(X_t) after " << violations << " events in " << runs_with_violation
        << " runs\n";
    return exit_code::kAssertion;
  }
  return exit_code::kOk;
}

int run_boundary(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  const KernelSetup kernels{spec.q.rates, spec.p.rates, spec.simulation.truncation};
  Progress progress(log, "boundary paths: " + std::to_string(spec.boundary.paths));
  const auto paths = farm(spec.boundary.paths, spec.parallel, [&](std::uint64_t k) {
    BoundarySimulationConfig c;
    c.q = spec.q.rates;
    c.p = spec.p.rates;
    c.truncation = spec.simulation.truncation;
    c.t_max = spec.boundary.t_max;
    c.initial = spec.boundary.initial;
    c.seed = spec.seed;
    c.trajectory = static_cast<std::uint32_t>(k);
    c.schedule = spec.simulation.schedule;
    c.event_budget = spec.simulation.event_budget;
    return simulate_boundary(c);
  });
  progress.done();
  std::uint64_t parity_failures = 0;
  std::uint64_t events = 0;
  RunningStats final_count;
  for (const auto& p : paths) {
    parity_failures += !p.parity_preserved;
    events += p.events;
    final_count.add(static_cast<double>(p.final_state.size()));
  }
  const std::uint64_t limit = std::min<std::uint64_t>(spec.output.csv_trajectories, paths.size());
  if (limit > 0) fs::create_directories(spec.out_dir / "boundary");
  for (std::uint64_t k = 0; k < limit; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "path_%06llu.csv", static_cast<unsigned long long>(k));
    std::ofstream out(spec.out_dir / "boundary" / name, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write boundary CSV");
    write_boundary_csv(out, paths[k]);
  }
  json ann = json::array();
  if (spec.boundary.annihilation) {
    const auto& a = *spec.boundary.annihilation;
    for (const auto& y : a.starts) {
      try {
        const auto est = annihilation_probability(kernels, y, a.max_gap, a.n, a.t, a.trials, spec.seed);
        ann.push_back({{"start", y.particles()}, {"estimate", proportion_json(est)}});
      } catch (const PreconditionViolated& e) {
        throw ValidationError(e.what());
      }
    }
  }
  summary["boundary"] = {{"paths", paths.size()},
                         {"events", events},
                         {"parity_failures", parity_failures},
                         {"final_particle_count", estimate_json(final_count.estimate())},
                         {"annihilation", ann}};
  return parity_failures ? exit_code::kAssertion : exit_code::kOk;
}

int run_boost(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  const KernelSetup kernels{spec.q.rates, spec.p.rates, spec.simulation.truncation};
  json out = json::array();
  double previous = INFINITY;
  bool nonincreasing = true;
  for (std::uint64_t blocks : spec.boost.blocks) {
    Progress progress(log, "boost check, blocks = " + std::to_string(blocks));
    const auto x = alternating_blocks(blocks, spec.boost.block_length);
    const auto est = boost_check(kernels, x, spec.boost.n, spec.boost.threshold, spec.boost.t, spec.boost.trials, spec.seed);
    progress.done();
    nonincreasing = nonincreasing && est.value <= previous;
    previous = est.value;
    out.push_back({{"blocks", blocks}, {"i1", interface_counts(x, 1).total}, {"estimate", proportion_json(est)}});
  }
  summary["boost"] = {{"sweep", out}, {"nonincreasing", nonincreasing}};
  return exit_code::kOk;
}

int run_verify(const ExperimentSpec& spec, json& summary, std::ostream& log) {
  Progress progress(log, "generator identity sweep");
  const auto report = verify_generator_sweep(spec.verify, spec.seed);
  progress.done("worst residual " + format_double(report.worst_residual));
  summary["verify"] = report.to_json();
  return report.passed() ? exit_code::kOk : exit_code::kAssertion;
}

}  // namespace

KernelPair random_kernel_pair(std::mt19937_64& rng, Displacement max_range) {
  std::uniform_int_distribution<Displacement> range_dist(1, max_range);
  std::uniform_int_distribution<int> num(1, 60);
  std::bernoulli_distribution keep(0.6);
  for (;;) {
    const Displacement range = range_dist(rng);
    ExactKernel::Entries q;
    ExactKernel::Entries p;
    for (Displacement d = 1; d <= range; ++d) {
      if (keep(rng)) q[d] = Rational(num(rng), 60);
      if (keep(rng)) q[-d] = Rational(num(rng), 60);
      if (keep(rng)) p[d] = p[-d] = Rational(num(rng), 60);
    }
    if (q.empty()) continue;
    return {ExactKernel(std::move(q)), ExactKernel(std::move(p), true)};
  }
}

json GeneratorSweepReport::to_json() const {
  return {{"evaluations", evaluations},
          {"worst_residual", worst_residual},
          {"exact_cases", exact_cases},
          {"exact_mismatches", exact_mismatches},
          {"boundary_cases", boundary_cases},
          {"boundary_mismatches", boundary_mismatches},
          {"passed", passed()}};
}

GeneratorSweepReport verify_generator_sweep(const VerifySpec& verify, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<KernelPair> kernels;
  for (std::uint64_t k = 0; k < verify.kernels; ++k) kernels.push_back(random_kernel_pair(rng, verify.max_range));
  std::uniform_int_distribution<std::uint64_t> len(0, verify.max_width);
  std::uniform_int_distribution<Site> offset(-20, 20);
  std::bernoulli_distribution bit(0.5);
  std::vector<InterfaceConfig> configs;
  for (std::uint64_t c = 0; c < verify.cases; ++c) {
    std::string bits(len(rng), '0');
    for (auto& ch : bits) ch = bit(rng) ? '1' : '0';
    configs.push_back(InterfaceConfig::from_bits(offset(rng), bits));
  }

  GeneratorSweepReport report;
  auto observable = [](const InterfaceConfig& s) { return f_cd(s); };
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const RateKernel q = kernels[k].q.cast<double>();
    const RateKernel p = kernels[k].p.cast<double>();
    const TruncationSpec trunc = full_range(q, p);
    for (const auto& x : configs) {
      const double brute = apply_generator(x, observable, q, p, trunc);
      const double closed = gfcd_closed_form(x, q, p, trunc);
      report.worst_residual = std::max(report.worst_residual, std::abs(brute - closed) / (1.0 + std::abs(brute)));
      ++report.evaluations;
    }
  }
  for (std::uint64_t c = 0; c < verify.exact_cases && !configs.empty(); ++c) {
    const auto& kp = kernels[c % kernels.size()];
    const auto& x = configs[c % configs.size()];
    const TruncationSpec trunc = full_range(kp.q, kp.p);
    const Rational brute = apply_generator(x, [](const InterfaceConfig& s) { return Rational(f_cd(s)); }, kp.q, kp.p, trunc);
    report.exact_mismatches += brute != gfcd_closed_form(x, kp.q, kp.p, trunc);
    ++report.exact_cases;
  }
  for (std::uint64_t c = 0; c < verify.boundary_cases && !configs.empty(); ++c) {
    const auto& kp = kernels[(c * 7 + 3) % kernels.size()];
    const auto& x = configs[(c * 13 + 5) % configs.size()];
    const TruncationSpec trunc = full_range(kp.q, kp.p);
    const auto y = boundary(x);
    report.boundary_mismatches +=
        aggregate_by_target(y, boundary_generator_rates(y, kp.q, kp.p, trunc)) != induced_boundary_rates(x, kp.q, kp.p, trunc);
    ++report.boundary_cases;
  }
  return report;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  out << "t,event_index,f_cd,width";
  for (std::int64_t n = 1; n <= record.nmax; ++n) out << ",i" << n;
  out << ",class_key_hash,integral_gfcd\n";
  for (std::size_t k = 0; k < record.samples.size(); ++k) {
    const Sample& s = record.samples[k];
    out << format_double(s.t) << ',' << s.event_index << ',' << s.f_cd << ',' << s.width;
    for (std::int64_t n = 1; n <= record.nmax; ++n) out << ',' << record.count(k, n);
    out << ',' << s.class_hash << ',' << format_double(s.integral_gfcd) << '\n';
  }
}

void write_boundary_csv(std::ostream& out, const BoundaryTrajectory& path) {
  out << "t,event_index,particle_count,particles\n";
  for (const auto& s : path.samples) {
    out << format_double(s.t) << ',' << s.event_index << ',' << s.state.size() << ',';
    const auto& ps = s.state.particles();
    for (std::size_t k = 0; k < ps.size(); ++k) out << (k ? " " : "") << ps[k];
    out << '\n';
  }
}

fs::path default_output_dir(Experiment experiment) {
  const char* root = std::getenv("VMI_OUT_ROOT");
  const fs::path base = root && *root ? fs::path(root) : fs::path("vmi-out");
  return base / std::string(to_string(experiment));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  ExperimentResult result;
  json& summary = result.summary;
  summary["experiment"] = to_string(spec.experiment);
  summary["config_digest"] = spec.digest();
  summary["seed"] = spec.seed;
  summary["ensemble"] = spec.ensemble;
  summary["config"] = spec.canonical();
  summary["hypotheses"] = spec.hypotheses.to_json();

  fs::create_directories(spec.out_dir);
  switch (spec.experiment) {
    case Experiment::verify_generator: result.exit_code = run_verify(spec, summary, log); break;
    case Experiment::simulate: result.exit_code = run_simulate(spec, summary, log); break;
    case Experiment::recurrence: result.exit_code = run_recurrence(spec, summary, log); break;
    case Experiment::martingale: result.exit_code = run_martingale(spec, summary, log); break;
    case Experiment::boundary: result.exit_code = run_boundary(spec, summary, log); break;
    case Experiment::boost_sweep: result.exit_code = run_boost(spec, summary, log); break;
    case Experiment::ledger: result.exit_code = run_ledger(spec, summary, log); break;
    case Experiment::coupled: result.exit_code = run_coupled_experiment(spec, summary, log); break;
    case Experiment::tau: result.exit_code = run_tau(spec, summary, log); break;
  }
  summary["exit_code"] = result.exit_code;

  std::ofstream out(spec.out_dir / "summary.json", std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + (spec.out_dir / "summary.json").string());
  out << summary.dump(2) << '\n';
  if (!out) throw std::ios_base::failure("write failed for summary.json");
  return result;
}

}  // namespace vmi::harness
