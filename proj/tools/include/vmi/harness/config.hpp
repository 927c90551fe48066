#pragma once

// Experiment specifications: parsing, validation and the kernel hypothesis
// report printed before every run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vmi/boundary_config.hpp"
#include "vmi/harness/toml.hpp"
#include "vmi/kernels.hpp"
#include "vmi/simulator.hpp"

namespace vmi::harness {

enum class Experiment {
  verify_generator,
  simulate,
  recurrence,
  martingale,
  boundary,
  boost_sweep,
  ledger,
  coupled,
  tau,
};

std::string_view to_string(Experiment e) noexcept;
std::optional<Experiment> experiment_from_string(std::string_view name) noexcept;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KernelSpec {
  RateKernel rates;
  std::optional<ExactKernel> exact;  // present when every rate was given as a string
  nlohmann::json source;             // normalized description for the digest
};

// Checks of the tightness hypotheses (a nonzero infection rate, q_s + p
// irreducible, finite second moment).  Failures are warnings: configs
// outside the hypotheses are legitimate experiments.
struct HypothesisReport {
  double second_moment = 0.0;  // sum_i |i|^2 (q(i) + p(i))
  bool q_has_atom = false;
  bool irreducible = false;    // q_s + p
  bool heavy_tail_family = false;  // a power-law family whose untruncated second moment diverges
  std::vector<std::string> warnings;

  bool satisfied() const noexcept { return q_has_atom && irreducible && !heavy_tail_family; }
  nlohmann::json to_json() const;
};

HypothesisReport check_hypotheses(const KernelSpec& q, const KernelSpec& p);

struct VerifySpec {
  std::uint64_t cases = 500;
  std::uint64_t kernels = 20;
  std::uint64_t max_width = 30;
  Displacement max_range = 8;
  std::uint64_t exact_cases = 50;
  std::uint64_t boundary_cases = 200;
};

struct AnnihilationSpec {
  std::vector<BoundaryConfig> starts;
  std::int64_t max_gap = 1;
  std::uint64_t n = 1;
  double t = 1.0;
  std::uint64_t trials = 10'000;
};

struct BoundarySpec {
  BoundaryConfig initial;
  double t_max = 10.0;
  std::uint64_t paths = 1000;
  std::optional<AnnihilationSpec> annihilation;
};

struct BoostSpec {
  std::int64_t n = 1;
  std::uint64_t threshold = 4;  // M
  double t = 4.0;
  std::uint64_t trials = 2000;
  std::vector<std::uint64_t> blocks{2, 7, 22};
  std::uint64_t block_length = 1;
};

struct CesaroSpec {
  std::int64_t n = 1;
  std::uint64_t threshold = 1;
};

struct AnalysisSpec {
  std::vector<CesaroSpec> cesaro;
  std::size_t class_cap = 1'000'000;
  std::vector<double> checkpoints{1.0, 2.0, 4.0};
  std::vector<double> ledger_horizons;
};

struct OutputSpec {
  std::uint64_t csv_trajectories = 64;  // per-trajectory CSV files written
};

struct ExperimentSpec {
  Experiment experiment = Experiment::simulate;
  KernelSpec q;
  KernelSpec p;
  SimulationConfig simulation;  // seed and trajectory are set per task
  std::uint64_t seed = 0;
  std::uint64_t ensemble = 1;
  unsigned parallel = 1;
  std::filesystem::path out_dir;
  VerifySpec verify;
  BoundarySpec boundary;
  BoostSpec boost;
  AnalysisSpec analysis;
  OutputSpec output;
  HypothesisReport hypotheses;

  // Everything that influences results; parallelism and paths are excluded.
  nlohmann::json canonical() const;
  // FNV-1a of canonical().dump(), as 16 hex digits.
  std::string digest() const;
};

// Throws ParseError (syntax, unknown keys, malformed values; with line and
// field) or ValidationError (values outside their domain).
ExperimentSpec parse_config_text(std::string_view text);
ExperimentSpec parse_config(const std::filesystem::path& path);

// Built-in kernels for runs without a config file: "nn" (q = {±1: 1/2}),
// "nn-swap" (nn plus p = {±1: 1/4}), "mixed" (q = |n|^-4 on |n| <= 6,
// p = {±1: 1/4}).  Horizon 10; martingale runs record on a unit grid and
// tau runs track the width levels 2, 4, 8, 16.
ExperimentSpec preset_spec(Experiment experiment, std::string_view kernel);

// Re-runs validation and the hypothesis report after fields were changed.
void finalize(ExperimentSpec& spec);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace vmi::harness
