#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "vmi/harness/config.hpp"
#include "vmi/harness/experiments.hpp"

namespace {

using namespace vmi::harness;

struct CommonOptions {
  std::string config;
  std::string kernel = "nn";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> ensemble;
  std::optional<unsigned> parallel;
  std::string out;
  std::optional<std::uint64_t> event_budget;
  std::optional<double> t_max;
  std::optional<std::string> record;
  std::optional<double> grid;
};

struct VerifyOptions {
  std::optional<std::uint64_t> cases;
  std::optional<std::uint64_t> max_width;
  std::optional<std::int64_t> max_range;
  std::optional<std::uint64_t> kernels;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--config", o.config, "TOML experiment config")->check(CLI::ExistingFile);
  cmd.add_option("--kernel", o.kernel, "kernel preset when no config is given: nn, nn-swap, mixed");
  cmd.add_option("--seed", o.seed, "master seed");
  cmd.add_option("--ensemble", o.ensemble, "number of trajectories");
  cmd.add_option("--parallel", o.parallel, "worker threads (results do not depend on it)");
  cmd.add_option("--out", o.out, "output directory (default $VMI_OUT_ROOT/<experiment>)");
  cmd.add_option("--event-budget", o.event_budget, "maximum events per trajectory");
  cmd.add_option("--T", o.t_max, "time horizon");
  cmd.add_option("--record", o.record, "every_event or grid")->check(CLI::IsMember({"every_event", "grid"}));
  cmd.add_option("--grid", o.grid, "grid spacing for --record grid");
}

ExperimentSpec build_spec(Experiment experiment, const CommonOptions& o, const VerifyOptions& v) {
  ExperimentSpec spec = o.config.empty() ? preset_spec(experiment, o.kernel) : parse_config(o.config);
  spec.experiment = experiment;
  if (o.seed) spec.seed = *o.seed;
  if (o.ensemble) spec.ensemble = *o.ensemble;
  if (o.parallel) spec.parallel = *o.parallel;
  if (o.event_budget) spec.simulation.event_budget = *o.event_budget;
  if (o.t_max) spec.simulation.t_max = *o.t_max;
  if (o.record) {
    spec.simulation.schedule = *o.record == "grid" ? vmi::RecordSchedule::grid(o.grid.value_or(1.0))
                                                   : vmi::RecordSchedule::every_event();
  } else if (o.grid) {
    spec.simulation.schedule = vmi::RecordSchedule::grid(*o.grid);
  }
  if (v.cases) spec.verify.cases = *v.cases;
  if (v.max_width) spec.verify.max_width = *v.max_width;
  if (v.max_range) spec.verify.max_range = *v.max_range;
  if (v.kernels) spec.verify.kernels = *v.kernels;
  spec.out_dir = o.out.empty() ? default_output_dir(experiment) : std::filesystem::path(o.out);
  finalize(spec);
  return spec;
}

void print_hypotheses(const HypothesisReport& h) {
  std::cerr << "[vmi] hypotheses: second moment " << format_double(h.second_moment)
            << (std::isfinite(h.second_moment) ? " (finite)" : "") << ", q has a nonzero atom: "
            << (h.q_has_atom ? "yes" : "no") << ", q_s + p irreducible: " << (h.irreducible ? "yes" : "no")
            << (h.satisfied() ? " -> all satisfied" : " -> NOT all satisfied") << "\n";
  for (const auto& w : h.warnings) std::cerr << "[vmi] warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo harness for the swapping voter model interface"};
  app.require_subcommand(1);

  CommonOptions common;
  VerifyOptions verify;
  std::optional<Experiment> chosen;
  for (Experiment e : {Experiment::verify_generator, Experiment::simulate, Experiment::recurrence,
                       Experiment::martingale, Experiment::boundary, Experiment::boost_sweep, Experiment::ledger,
                       Experiment::coupled, Experiment::tau}) {
    CLI::App* cmd = app.add_subcommand(std::string(to_string(e)));
    add_common(*cmd, common);
    if (e == Experiment::verify_generator) {
      cmd->add_option("--cases", verify.cases, "random configurations");
      cmd->add_option("--max-width", verify.max_width, "largest configuration width");
      cmd->add_option("--max-range", verify.max_range, "largest kernel range");
      cmd->add_option("--kernels", verify.kernels, "random kernels");
    }
    cmd->callback([&chosen, e] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kOk : exit_code::kValidation;
  }

  try {
    const ExperimentSpec spec = build_spec(*chosen, common, verify);
    std::cerr << "[vmi] " << to_string(spec.experiment) << ", config digest " << spec.digest() << "\n";
    print_hypotheses(spec.hypotheses);
    const ExperimentResult result = run_experiment(spec, std::cerr);
    std::cout << result.summary.dump(2) << std::endl;
    std::cerr << "[vmi] wrote " << (spec.out_dir / "summary.json").string() << "\n";
    return result.exit_code;
  } catch (const ParseError& e) {
    std::cerr << "vmi: parse error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "vmi: invalid experiment: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "vmi: I/O error: " << e.what() << "\n";
    return exit_code::kIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "vmi: I/O error: " << e.what() << "\n";
    return exit_code::kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "vmi: invalid experiment: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const std::exception& e) {
    std::cerr << "vmi: error: " << e.what() << "\n";
    return exit_code::kAssertion;
  }
}
