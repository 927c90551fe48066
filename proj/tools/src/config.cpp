#include "vmi/harness/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "vmi/hash.hpp"

namespace vmi::harness {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Experiment, std::string_view>, 9> kExperimentNames{{
    {Experiment::verify_generator, "verify-generator"},
    {Experiment::simulate, "simulate"},
    {Experiment::recurrence, "recurrence"},
    {Experiment::martingale, "martingale"},
    {Experiment::boundary, "boundary"},
    {Experiment::boost_sweep, "boost-sweep"},
    {Experiment::ledger, "ledger"},
    {Experiment::coupled, "coupled"},
    {Experiment::tau, "tau"},
}};

// Typed, line-aware access to one table of the document.  Every key read is
// recorded; finish() rejects the rest.
class Table {
 public:
  Table(const TomlDocument& doc, const json& node, std::string path)
      : doc_(doc), node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected a table");
  }

  bool has(const std::string& key) const { return node_.contains(key); }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ParseError(doc_.line_of(field), field, message);
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  Table table(const std::string& key) {
    used_.insert(key);
    return Table(doc_, node_.at(key), field(key));
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t min_value) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(field(key), "expected an integer");
    const auto out = v.get<std::int64_t>();
    if (out < min_value) fail(field(key), "must be >= " + std::to_string(min_value));
    return out;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback, std::uint64_t min_value = 1) {
    return static_cast<std::uint64_t>(integer(key, static_cast<std::int64_t>(fallback),
                                              static_cast<std::int64_t>(min_value)));
  }

  double real(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return as_real(raw(key), field(key));
  }

  double as_real(const json& v, const std::string& where) const {
    if (!v.is_number()) fail(where, "expected a number");
    const double out = v.get<double>();
    if (!std::isfinite(out)) fail(where, "must be finite");
    return out;
  }

  std::string string(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> reals(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_array()) fail(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_real(v[k], field(key) + "[" + std::to_string(k) + "]"));
    return out;
  }

  std::vector<std::int64_t> integers(const std::string& key, std::vector<std::int64_t> fallback) {
    if (!has(key)) return fallback;
    return integer_list(raw(key), field(key));
  }

  std::vector<std::int64_t> integer_list(const json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array of integers");
    std::vector<std::int64_t> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number_integer()) fail(where + "[" + std::to_string(k) + "]", "expected an integer");
      out.push_back(v[k].get<std::int64_t>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, _] : node_.items()) {
      if (!used_.contains(key)) fail(field(key), "unknown key");
    }
  }

  const TomlDocument& doc() const { return doc_; }
  const std::string& path() const { return path_; }

 private:
  const TomlDocument& doc_;
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

// Exact parse of a rate given as a string, plain double otherwise.
struct ParsedRate {
  double value;
  std::optional<Rational> exact;
};

ParsedRate parse_rate(const json& v, const Table& where, const std::string& field) {
  if (v.is_string()) {
    try {
      const Rational r = parse_exact_rate(v.get<std::string>());
      if (r < 0) where.fail(field, "rate must be >= 0");
      return {static_cast<double>(r), r};
    } catch (const std::invalid_argument&) {
      where.fail(field, "malformed rate \"" + v.get<std::string>() + "\"");
    }
  }
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d) || d < 0) where.fail(field, "rate must be a finite number >= 0");
    return {d, std::nullopt};
  }
  where.fail(field, "expected a rate (number, or decimal/fraction string)");
}

KernelSpec parse_kernel(const TomlDocument& doc, const json& node, const std::string& path, bool symmetric) {
  KernelSpec out;
  if (node.is_array()) {
    RateKernel::Entries entries;
    ExactKernel::Entries exact_entries;
    bool exact = true;
    json source = json::array();
    for (std::size_t k = 0; k < node.size(); ++k) {
      Table entry(doc, node[k], path + "[" + std::to_string(k) + "]");
      if (!entry.has("displacement")) entry.fail(entry.field("displacement"), "missing key");
      if (!entry.has("rate")) entry.fail(entry.field("rate"), "missing key");
      const std::int64_t d = entry.integer("displacement", 0, std::numeric_limits<std::int64_t>::min());
      if (d == 0) entry.fail(entry.field("displacement"), "displacement 0 is not allowed");
      const ParsedRate rate = parse_rate(entry.raw("rate"), entry, entry.field("rate"));
      const bool both = entry.boolean("symmetric", false);
      entry.finish();
      for (const std::int64_t s : both ? std::vector<std::int64_t>{d, -d} : std::vector<std::int64_t>{d}) {
        if (entries.contains(s)) entry.fail(entry.field("displacement"), "displacement " + std::to_string(s) + " given twice");
        entries[s] = rate.value;
        if (rate.exact) exact_entries[s] = *rate.exact;
      }
      exact = exact && rate.exact.has_value();
    }
    for (const auto& [d, r] : entries) source.push_back({d, format_double(r)});
    try {
      out.rates = RateKernel(entries, symmetric);
      if (exact) out.exact = ExactKernel(exact_entries, symmetric);
    } catch (const InvalidKernel& e) {
      throw ParseError(doc.line_of(path), path, e.what());
    }
    out.source = {{"table", source}};
    return out;
  }
  Table table(doc, node, path);
  if (!table.has("power_law")) table.fail(path, "expected [[" + path + "]] entries or a power_law table");
  Table law = table.table("power_law");
  PowerLaw family;
  family.amplitude = law.real("c", 1.0);
  family.exponent = law.real("beta", 2.0);
  family.range = law.integer("K", 1, 1);
  law.finish();
  table.finish();
  if (!(family.amplitude > 0)) law.fail(law.field("c"), "must be > 0");
  if (!(family.exponent > 0)) law.fail(law.field("beta"), "must be > 0");
  out.rates = materialize(family);
  out.source = {{"power_law", {{"c", format_double(family.amplitude)},
                               {"beta", format_double(family.exponent)},
                               {"K", family.range}}}};
  return out;
}

InterfaceConfig parse_initial(Table& sim) {
  if (!sim.has("initial")) return InterfaceConfig::heaviside();
  const json& v = sim.raw("initial");
  const std::string field = sim.field("initial");
  if (v.is_string()) {
    if (v.get<std::string>() != "heaviside") sim.fail(field, "expected \"heaviside\" or { offset, window }");
    return InterfaceConfig::heaviside();
  }
  Table t(sim.doc(), v, field);
  const std::int64_t offset = t.integer("offset", 0, std::numeric_limits<std::int64_t>::min());
  const std::string window = t.string("window", "");
  t.finish();
  try {
    return InterfaceConfig::from_bits(offset, window);
  } catch (const NotAnInterface& e) {
    t.fail(t.field("window"), e.what());
  }
}

BoundaryConfig parse_particles(const Table& t, const json& v, const std::string& field) {
  try {
    return BoundaryConfig(t.integer_list(v, field));
  } catch (const std::invalid_argument& e) {
    t.fail(field, e.what());
  }
}

void parse_document(const TomlDocument& doc, ExperimentSpec& spec) {
  Table top(doc, doc.root, "");
  if (top.has("experiment")) {
    const std::string name = top.string("experiment", "");
    const auto e = experiment_from_string(name);
    if (!e) top.fail("experiment", "unknown experiment \"" + name + "\"");
    spec.experiment = *e;
  }
  spec.seed = static_cast<std::uint64_t>(top.integer("seed", 0, 0));
  spec.ensemble = top.count("ensemble", 1);
  spec.parallel = static_cast<unsigned>(top.count("parallel", 1));
  spec.simulation.event_budget = top.count("event_budget", spec.simulation.event_budget);

  std::optional<Displacement> range;
  if (top.has("kernel")) {
    Table kernel = top.table("kernel");
    if (kernel.has("range")) range = kernel.integer("range", 1, 1);
    if (kernel.has("q")) spec.q = parse_kernel(doc, kernel.raw("q"), "kernel.q", false);
    if (kernel.has("p")) spec.p = parse_kernel(doc, kernel.raw("p"), "kernel.p", true);
    kernel.finish();
  }
  spec.simulation.truncation = range ? TruncationSpec{*range} : full_range(spec.q.rates, spec.p.rates);

  if (top.has("simulation")) {
    Table sim = top.table("simulation");
    spec.simulation.t_max = sim.real("t_max", spec.simulation.t_max);
    spec.simulation.initial = parse_initial(sim);
    const std::string record = sim.string("record", "every_event");
    const double grid = sim.real("grid", 1.0);
    if (record == "grid") {
      spec.simulation.schedule = RecordSchedule::grid(grid);
    } else if (record == "every_event") {
      spec.simulation.schedule = RecordSchedule::every_event();
    } else {
      sim.fail(sim.field("record"), "expected \"every_event\" or \"grid\"");
    }
    spec.simulation.nmax = sim.integer("nmax", spec.simulation.truncation.range, 1);
    if (sim.has("stop_width")) spec.simulation.stop_width = static_cast<std::uint64_t>(sim.integer("stop_width", 0, 0));
    for (auto v : sim.integers("levels", {})) {
      if (v < 0) sim.fail(sim.field("levels"), "levels must be >= 0");
      spec.simulation.width_levels.push_back(static_cast<std::uint64_t>(v));
    }
    sim.finish();
  } else {
    spec.simulation.nmax = spec.simulation.truncation.range;
  }

  if (top.has("analysis")) {
    Table an = top.table("analysis");
    if (an.has("cesaro")) {
      const json& list = an.raw("cesaro");
      if (!list.is_array()) an.fail(an.field("cesaro"), "expected an array of { n, N } tables");
      for (std::size_t k = 0; k < list.size(); ++k) {
        Table c(doc, list[k], an.field("cesaro") + "[" + std::to_string(k) + "]");
        spec.analysis.cesaro.push_back({c.integer("n", 1, 1), c.count("N", 1)});
        c.finish();
      }
    }
    spec.analysis.class_cap = an.count("class_cap", spec.analysis.class_cap);
    spec.analysis.checkpoints = an.reals("checkpoints", spec.analysis.checkpoints);
    spec.analysis.ledger_horizons = an.reals("ledger_horizons", {});
    an.finish();
  }

  if (top.has("verify")) {
    Table v = top.table("verify");
    spec.verify.cases = v.count("cases", spec.verify.cases);
    spec.verify.kernels = v.count("kernels", spec.verify.kernels);
    spec.verify.max_width = v.count("max_width", spec.verify.max_width, 0);
    spec.verify.max_range = v.integer("max_range", spec.verify.max_range, 1);
    spec.verify.exact_cases = v.count("exact_cases", spec.verify.exact_cases, 0);
    spec.verify.boundary_cases = v.count("boundary_cases", spec.verify.boundary_cases, 0);
    v.finish();
  }

  if (top.has("boundary")) {
    Table b = top.table("boundary");
    if (b.has("initial")) spec.boundary.initial = parse_particles(b, b.raw("initial"), b.field("initial"));
    spec.boundary.t_max = b.real("t_max", spec.boundary.t_max);
    spec.boundary.paths = b.count("paths", spec.boundary.paths);
    if (b.has("annihilation")) {
      Table a = b.table("annihilation");
      AnnihilationSpec ann;
      if (a.has("starts")) {
        const json& starts = a.raw("starts");
        if (!starts.is_array()) a.fail(a.field("starts"), "expected an array of particle lists");
        for (std::size_t k = 0; k < starts.size(); ++k) {
          ann.starts.push_back(parse_particles(a, starts[k], a.field("starts") + "[" + std::to_string(k) + "]"));
        }
      }
      ann.max_gap = a.integer("L", ann.max_gap, 1);
      ann.n = a.count("n", ann.n);
      ann.t = a.real("t", ann.t);
      ann.trials = a.count("trials", ann.trials);
      a.finish();
      if (ann.starts.empty()) a.fail(a.field("starts"), "at least one start is required");
      spec.boundary.annihilation = std::move(ann);
    }
    b.finish();
  }

  if (top.has("boost")) {
    Table b = top.table("boost");
    spec.boost.n = b.integer("n", spec.boost.n, 1);
    spec.boost.threshold = b.count("M", spec.boost.threshold);
    spec.boost.t = b.real("t", spec.boost.t);
    spec.boost.trials = b.count("trials", spec.boost.trials);
    if (b.has("blocks")) {
      spec.boost.blocks.clear();
      for (auto v : b.integers("blocks", {})) {
        if (v < 1) b.fail(b.field("blocks"), "block counts must be >= 1");
        spec.boost.blocks.push_back(static_cast<std::uint64_t>(v));
      }
    }
    spec.boost.block_length = b.count("block_length", spec.boost.block_length);
    b.finish();
  }

  if (top.has("output")) {
    Table o = top.table("output");
    spec.output.csv_trajectories = o.count("csv_trajectories", spec.output.csv_trajectories, 0);
    o.finish();
  }
  top.finish();
}

KernelSpec table_kernel(ExactKernel::Entries entries, bool symmetric) {
  KernelSpec k;
  k.exact = ExactKernel(std::move(entries), symmetric);
  k.rates = k.exact->cast<double>();
  json source = json::array();
  for (const auto& [d, r] : k.rates.entries()) source.push_back({d, format_double(r)});
  k.source = {{"table", source}};
  return k;
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  for (const auto& [value, name] : kExperimentNames) {
    if (value == e) return name;
  }
  return "unknown";
}

std::optional<Experiment> experiment_from_string(std::string_view name) noexcept {
  for (const auto& [value, n] : kExperimentNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

nlohmann::json HypothesisReport::to_json() const {
  return {{"second_moment", second_moment},
          {"q_has_atom", q_has_atom},
          {"irreducible", irreducible},
          {"heavy_tail_family", heavy_tail_family},
          {"satisfied", satisfied()},
          {"warnings", warnings}};
}

HypothesisReport check_hypotheses(const KernelSpec& q, const KernelSpec& p) {
  HypothesisReport r;
  r.second_moment = moment(q.rates, 2) + moment(p.rates, 2);
  r.q_has_atom = !q.rates.empty();
  if (!r.q_has_atom) r.warnings.push_back("q has no atom: the infection kernel is identically zero");
  r.irreducible = is_irreducible(symmetrize(q.rates) + p.rates);
  if (!r.irreducible) r.warnings.push_back("q_s + p is not irreducible: its support does not generate Z");
  for (const KernelSpec* k : {&q, &p}) {
    if (k->source.contains("power_law")) {
      const double beta = std::stod(k->source["power_law"]["beta"].get<std::string>());
      if (beta <= 3.0) {
        r.heavy_tail_family = true;
        r.warnings.push_back("power law with beta = " + format_double(beta) +
                             " <= 3: the untruncated family has an infinite second moment");
      }
    }
  }
  return r;
}

void finalize(ExperimentSpec& spec) {
  spec.simulation.q = spec.q.rates;
  spec.simulation.p = spec.p.rates;
  spec.simulation.seed = spec.seed;
  if (!spec.p.rates.symmetric()) throw ValidationError("swapping kernel p must be symmetric");
  try {
    spec.simulation.validate();
  } catch (const InvalidSimulationConfig& e) {
    throw ValidationError(e.what());
  }
  if (spec.ensemble < 1) throw ValidationError("ensemble must be >= 1");
  if (spec.parallel < 1) throw ValidationError("parallel must be >= 1");
  if (spec.verify.max_range < 1) throw ValidationError("verify.max_range must be >= 1");
  if (!(spec.boundary.t_max >= 0)) throw ValidationError("boundary.t_max must be >= 0");
  for (double t : spec.analysis.checkpoints) {
    if (spec.experiment != Experiment::martingale) break;
    if (t < 0 || t > spec.simulation.t_max) {
      throw ValidationError("analysis checkpoint " + format_double(t) + " outside [0, t_max]");
    }
  }
  for (double t : spec.analysis.ledger_horizons) {
    if (spec.experiment != Experiment::ledger) break;
    if (t < 0 || t > spec.simulation.t_max) {
      throw ValidationError("ledger horizon " + format_double(t) + " outside [0, t_max]");
    }
  }
  for (const auto& c : spec.analysis.cesaro) {
    if (c.n > spec.simulation.nmax) {
      throw ValidationError("cesaro n = " + std::to_string(c.n) + " exceeds simulation.nmax");
    }
  }
  if (spec.boost.n < 1) throw ValidationError("boost.n must be >= 1");
  spec.hypotheses = check_hypotheses(spec.q, spec.p);
}

ExperimentSpec parse_config_text(std::string_view text) {
  const TomlDocument doc = parse_toml(text);
  ExperimentSpec spec;
  spec.p.rates = RateKernel({}, true);
  spec.p.exact = ExactKernel({}, true);
  spec.p.source = {{"table", json::array()}};
  spec.q.source = {{"table", json::array()}};
  spec.q.exact = ExactKernel();
  parse_document(doc, spec);
  finalize(spec);
  return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

ExperimentSpec preset_spec(Experiment experiment, std::string_view kernel) {
  ExperimentSpec spec;
  spec.experiment = experiment;
  const Rational half(1, 2);
  const Rational quarter(1, 4);
  if (kernel == "nn" || kernel == "nn-swap") {
    spec.q = table_kernel({{1, half}, {-1, half}}, false);
    spec.p = kernel == "nn" ? table_kernel({}, true) : table_kernel({{1, quarter}, {-1, quarter}}, true);
  } else if (kernel == "mixed") {
    spec.q.rates = materialize(PowerLaw{1.0, 4.0, 6});
    spec.q.source = {{"power_law", {{"c", "1"}, {"beta", "4"}, {"K", 6}}}};
    spec.p = table_kernel({{1, quarter}, {-1, quarter}}, true);
  } else {
    throw ValidationError("unknown kernel preset \"" + std::string(kernel) + "\" (expected nn, nn-swap or mixed)");
  }
  spec.simulation.truncation = full_range(spec.q.rates, spec.p.rates);
  spec.simulation.nmax = spec.simulation.truncation.range;
  spec.simulation.t_max = 10.0;
  if (experiment == Experiment::martingale) spec.simulation.schedule = RecordSchedule::grid(1.0);
  if (experiment == Experiment::tau) spec.simulation.width_levels = {2, 4, 8, 16};
  finalize(spec);
  return spec;
}

nlohmann::json ExperimentSpec::canonical() const {
  const SimulationConfig& s = simulation;
  json initial = {{"offset", s.initial.first_one()}, {"window", s.initial.window()}};
  json sim = {{"t_max", format_double(s.t_max)},
              {"initial", initial},
              {"record", s.schedule.mode == RecordMode::grid ? "grid" : "every_event"},
              {"grid", format_double(s.schedule.interval)},
              {"nmax", s.nmax},
              {"stop_width", s.stop_width ? json(*s.stop_width) : json(nullptr)},
              {"levels", s.width_levels},
              {"event_budget", s.event_budget}};
  json cesaro = json::array();
  for (const auto& c : analysis.cesaro) cesaro.push_back({{"n", c.n}, {"N", c.threshold}});
  std::vector<std::string> checkpoints;
  for (double t : analysis.checkpoints) checkpoints.push_back(format_double(t));
  std::vector<std::string> horizons;
  for (double t : analysis.ledger_horizons) horizons.push_back(format_double(t));
  json ann = nullptr;
  if (boundary.annihilation) {
    json starts = json::array();
    for (const auto& y : boundary.annihilation->starts) starts.push_back(y.particles());
    ann = {{"starts", starts},
           {"L", boundary.annihilation->max_gap},
           {"n", boundary.annihilation->n},
           {"t", format_double(boundary.annihilation->t)},
           {"trials", boundary.annihilation->trials}};
  }
  return {
      {"experiment", to_string(experiment)},
      {"seed", seed},
      {"ensemble", ensemble},
      {"kernel", {{"range", s.truncation.range}, {"q", q.source}, {"p", p.source}}},
      {"simulation", sim},
      {"analysis",
       {{"cesaro", cesaro}, {"class_cap", analysis.class_cap}, {"checkpoints", checkpoints}, {"ledger_horizons", horizons}}},
      {"verify",
       {{"cases", verify.cases},
        {"kernels", verify.kernels},
        {"max_width", verify.max_width},
        {"max_range", verify.max_range},
        {"exact_cases", verify.exact_cases},
        {"boundary_cases", verify.boundary_cases}}},
      {"boundary",
       {{"initial", boundary.initial.particles()},
        {"t_max", format_double(boundary.t_max)},
        {"paths", boundary.paths},
        {"annihilation", ann}}},
      {"boost",
       {{"n", boost.n},
        {"M", boost.threshold},
        {"t", format_double(boost.t)},
        {"trials", boost.trials},
        {"blocks", boost.blocks},
        {"block_length", boost.block_length}}},
      {"output", {{"csv_trajectories", output.csv_trajectories}}},
  };
}

std::string ExperimentSpec::digest() const {
  const std::uint64_t h = fnv1a64(canonical().dump());
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf.data(), 16);
}

}  // namespace vmi::harness
