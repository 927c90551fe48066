#pragma once

// Experiment drivers behind the CLI subcommands.  Each driver fans the
// ensemble out over a trajectory farm, folds the records in trajectory order
// and writes summary.json plus per-trajectory CSV files to spec.out_dir.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>

#include <json.hpp>

#include "vmi/boundary_process.hpp"
#include "vmi/harness/config.hpp"
#include "vmi/simulator.hpp"

namespace vmi::harness {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kAssertion = 2;
inline constexpr int kIo = 3;
}  // namespace exit_code

// Random kernels with rates k/60 (not exact in binary, so the double sweep
// exercises rounding), q arbitrary, p symmetric,
// support within [-max_range, max_range].  The pair is never identically zero.
struct KernelPair {
  ExactKernel q;
  ExactKernel p;
};
KernelPair random_kernel_pair(std::mt19937_64& rng, Displacement max_range);

struct GeneratorSweepReport {
  std::uint64_t evaluations = 0;
  double worst_residual = 0.0;  // |brute - closed| / (1 + |brute|)
  std::uint64_t exact_cases = 0;
  std::uint64_t exact_mismatches = 0;
  std::uint64_t boundary_cases = 0;
  std::uint64_t boundary_mismatches = 0;

  bool passed(double tolerance = 1e-10) const noexcept {
    return worst_residual <= tolerance && exact_mismatches == 0 && boundary_mismatches == 0;
  }
  nlohmann::json to_json() const;
};

// Generator identity over verify.cases configs x verify.kernels kernels; the
// first exact_cases evaluations are repeated in rational arithmetic, and
// boundary_cases states get the induced boundary-rate comparison.
GeneratorSweepReport verify_generator_sweep(const VerifySpec& verify, std::uint64_t seed);

// Columns: t,event_index,f_cd,width,i1..i{nmax},class_key_hash,integral_gfcd
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);
void write_boundary_csv(std::ostream& out, const BoundaryTrajectory& path);

// $VMI_OUT_ROOT/<experiment>, or ./vmi-out/<experiment> when unset.
std::filesystem::path default_output_dir(Experiment experiment);

struct ExperimentResult {
  int exit_code = exit_code::kOk;
  nlohmann::json summary;
};

// Throws ValidationError for specs the experiment cannot run and
// std::ios_base::failure / std::filesystem::filesystem_error on I/O errors.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& log);

}  // namespace vmi::harness
