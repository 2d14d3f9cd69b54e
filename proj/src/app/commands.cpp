#include "disperse/app/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <tuple>

#include "disperse/conserved.hpp"
#include "disperse/diagnostics.hpp"
#include "disperse/kernels.hpp"
#include "disperse/propagators.hpp"
#include "disperse/spectral_theory.hpp"
#include "disperse/virial.hpp"

#ifndef DISPERSE_VERSION
#define DISPERSE_VERSION "0.0.0"
#endif

namespace disperse::app {

namespace {

Grid make_grid(const ExperimentConfig& c) { return Grid(c.grid.num_points, c.grid.half_width); }

PotentialSpec make_spec(const ExperimentConfig& c) {
  if (!c.potential) return PotentialSpec(PotentialKind::zero, 0.0, 1.0);
  return PotentialSpec(c.potential->kind, c.potential->v0, c.potential->a);
}

std::optional<PotentialSample> make_sample(const ExperimentConfig& c, const Grid& g) {
  if (!c.potential) return std::nullopt;
  return sample_potential(make_spec(c), g);
}

PotentialSample sample_or_zero(const ExperimentConfig& c, const Grid& g) {
  return sample_potential(make_spec(c), g);
}

void guard_horizon(const Context& ctx, const WaveField& u0, double t) {
  const double horizon = wraparound_horizon(u0);
  if (t > horizon && !ctx.allow_untrusted) {
    std::ostringstream msg;
    msg << "T = " << t << " exceeds the wraparound horizon T_wrap = " << horizon
        << "; enlarge half_width or pass --allow-untrusted";
    throw Error(ErrorKind::untrusted_window, msg.str());
  }
}

// Linear flow when alpha == 0, the nonlinear flow otherwise.
EvolutionTrace evolve(const ExperimentConfig& c, const WaveField& u0,
                      const std::optional<PotentialSample>& sample, double t_final) {
  StepperConfig sc;
  sc.dt = c.stepper.dt;
  sc.alpha = c.alpha;
  sc.record_every = c.stepper.record_every;
  if (c.alpha > 4.0) {
    sc.potential = sample;
    return nls_flow(u0, t_final, sc);
  }
  sc.potential = sample ? *sample : sample_potential(PotentialSpec(), u0.grid());
  return linear_flow_v(u0, t_final, sc);
}

std::string path_string(const std::filesystem::path& p) { return p.generic_string(); }

Json hypothesis_json(const HypothesisReport& h) {
  Json j;
  j["l11_v"] = h.l11_v;
  j["l11_vprime"] = h.l11_vprime;
  j["min_v"] = h.min_v;
  j["max_xvprime"] = h.max_xvprime;
  j["nonneg"] = h.nonneg;
  j["repulsive"] = h.repulsive;
  j["admissible"] = h.admissible;
  return j;
}

Json numbers_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

bool non_increasing(const std::vector<OffsetValue>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].value > rows[i - 1].value) return false;
  return true;
}

void write_trace_csv(const std::filesystem::path& path, const EvolutionTrace& trace,
                     const PotentialSample* sample, double alpha) {
  CsvWriter csv(path, {"t", "mass", "energy", "sup_norm", "h1"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const WaveField& u = trace.snapshots()[i];
    csv.row({trace.times()[i], mass(u), energy(u, sample, alpha), kernels::max_abs(u.samples()),
             sobolev_h1_norm(u)});
  }
}

}  // namespace

std::string version_string() { return DISPERSE_VERSION; }

// ------------------------------------------------------------ potentials

CommandResult cmd_check_potential(const Context& ctx) {
  const Grid g = make_grid(ctx.config);
  const PotentialSample s = sample_or_zero(ctx.config, g);
  const HypothesisReport h = hypothesis_report(s);
  CommandResult r;
  r.summary["potential"] = std::string(to_string(s.spec.kind()));
  r.summary.update(hypothesis_json(h));
  r.exit_code = h.admissible ? kExitOk : kExitHypothesis;
  return r;
}

CommandResult cmd_resonance(const Context& ctx) {
  const Grid g = make_grid(ctx.config);
  const PotentialSample s = sample_or_zero(ctx.config, g);
  const JostResult j = jost_wronskian(s);
  CommandResult r;
  r.summary["potential"] = std::string(to_string(s.spec.kind()));
  r.summary["wronskian"] = j.wronskian;
  r.summary["coarse_wronskian"] = j.coarse_wronskian;
  r.summary["resolution_pair"] = {j.resolution_pair[0], j.resolution_pair[1]};
  r.summary["relative_drift"] = j.relative_drift;
  r.summary["constancy_deviation"] = j.constancy_deviation;
  r.summary["threshold"] = kResonanceThreshold;
  r.summary["resonant"] = j.resonant;

  const auto path = ctx.output_dir / "jost.csv";
  CsvWriter csv(path, {"x", "u_minus", "u_plus"});
  for (std::size_t i = 0; i < g.size(); ++i) csv.row({g.x(i), j.u_minus[i], j.u_plus[i]});
  r.csv_paths.push_back(path_string(path));
  r.exit_code = j.resonant ? kExitResonant : kExitOk;
  return r;
}

CommandResult cmd_spectrum(const Context& ctx) {
  const Grid g = make_grid(ctx.config);
  const PotentialSample s = sample_or_zero(ctx.config, g);
  const BoundStates b = bound_state_count(s);
  CommandResult r;
  r.summary["potential"] = std::string(to_string(s.spec.kind()));
  r.summary["count"] = b.count;
  r.summary["lowest"] = b.lowest ? Json(*b.lowest) : Json(nullptr);
  return r;
}

// -------------------------------------------------------------- evolution

CommandResult cmd_evolve(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Grid g = make_grid(c);
  const auto sample = make_sample(c, g);
  const WaveField u0 = make_profile(c.initial_data, g);
  guard_horizon(ctx, u0, c.stepper.t_final);
  const EvolutionTrace trace = evolve(c, u0, sample, c.stepper.t_final);
  const PotentialSample* sp = sample ? &*sample : nullptr;

  CommandResult r;
  const auto trace_path = ctx.output_dir / "trace.csv";
  write_trace_csv(trace_path, trace, sp, c.alpha);
  r.csv_paths.push_back(path_string(trace_path));

  const auto dump_path = ctx.output_dir / "final_state.csv";
  CsvWriter dump(dump_path, {"x", "re", "im"});
  const WaveField& last = trace.snapshots().back();
  for (std::size_t j = 0; j < g.size(); ++j) dump.row({g.x(j), last[j].real(), last[j].imag()});
  r.csv_paths.push_back(path_string(dump_path));

  const double m0 = mass(u0);
  double drift = 0.0;
  for (const auto& u : trace.snapshots()) drift = std::max(drift, std::abs(mass(u) - m0));
  r.summary["equation"] = std::string(FlowConvention::equation);
  r.summary["snapshots"] = trace.size();
  r.summary["step"] = trace.step();
  r.summary["t_wrap"] = json_number(trace.trusted_until());
  r.summary["trusted"] = !trace.untrusted();
  r.summary["mass_initial"] = m0;
  r.summary["max_relative_mass_drift"] = m0 > 0.0 ? drift / m0 : 0.0;
  r.summary["energy_initial"] = energy(u0, sp, c.alpha);
  r.summary["energy_final"] = energy(last, sp, c.alpha);
  return r;
}

CommandResult cmd_decay(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Grid g = make_grid(c);
  const auto sample = make_sample(c, g);
  const WaveField u0 = make_profile(c.initial_data, g);
  const double t1 = c.decay.t1;
  guard_horizon(ctx, u0, t1);

  EvolutionTrace trace;
  if (sample) {
    StepperConfig sc;
    sc.dt = c.stepper.dt;
    sc.record_every = c.stepper.record_every;
    sc.potential = sample;
    trace = linear_flow_v(u0, t1, sc);
  } else {
    // Free flow is exact in Fourier space; sample it at the same cadence.
    const double h = c.stepper.dt * static_cast<double>(c.stepper.record_every);
    const auto n = static_cast<std::size_t>(std::ceil(t1 / h - 1e-9));
    for (std::size_t s = 0; s <= n; ++s) {
      const double t = std::min(t1, static_cast<double>(s) * h);
      trace.append(t, free_flow(u0, t, HorizonPolicy::ignore));
    }
    trace.set_trusted_until(wraparound_horizon(u0));
  }
  if (ctx.allow_untrusted) trace.set_trusted_until(std::numeric_limits<double>::infinity());

  CommandResult r;
  std::vector<std::string> header{"t"};
  for (double a : c.decay.norms) header.push_back("norm_L" + format_number(a));
  const auto path = ctx.output_dir / "decay.csv";
  CsvWriter csv(path, header);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::vector<double> row{trace.times()[i]};
    for (double a : c.decay.norms) row.push_back(lebesgue_norm(trace.snapshots()[i], a));
    csv.row(row);
  }
  r.csv_paths.push_back(path_string(path));

  Json fits = Json::array();
  for (double a : c.decay.norms) {
    const DecayFit f = decay_fit(trace, a, c.decay.t0, c.decay.t1);
    Json j;
    j["norm"] = json_number(a);
    j["slope"] = f.slope;
    j["expected_slope"] = expected_decay_slope(a);
    j["intercept"] = f.intercept;
    j["residual"] = f.residual;
    j["samples"] = f.samples;
    fits.push_back(j);
  }
  if (!fits.empty()) {
    r.summary["norm"] = fits[0]["norm"];
    r.summary["slope"] = fits[0]["slope"];
    r.summary["expected_slope"] = fits[0]["expected_slope"];
  }
  r.summary["window"] = {c.decay.t0, c.decay.t1};
  r.summary["with_potential"] = sample.has_value();
  r.summary["fits"] = fits;
  return r;
}

CommandResult cmd_scatter(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const ExponentSet ex = strichartz_exponents(c.alpha);
  const Grid g = make_grid(c);
  const auto sample = make_sample(c, g);
  const WaveField u0 = make_profile(c.initial_data, g);
  guard_horizon(ctx, u0, c.stepper.t_final);
  const EvolutionTrace trace = evolve(c, u0, sample, c.stepper.t_final);

  ScatterOptions opt;
  opt.max_pullbacks = c.scatter.pullbacks;
  opt.windows = c.scatter.windows;
  opt.threshold = c.scatter.threshold;
  const ScatterReport rep = scattering_detector(trace, sample ? &*sample : nullptr, ex, opt);

  CommandResult r;
  const auto res_path = ctx.output_dir / "scatter.csv";
  CsvWriter res(res_path, {"t", "cauchy_residual", "free_cauchy_residual"});
  for (std::size_t i = 0; i < rep.cauchy_residuals.size(); ++i)
    res.row({rep.pullback_times[i + 1], rep.cauchy_residuals[i], rep.free_cauchy_residuals[i]});
  const auto win_path = ctx.output_dir / "windows.csv";
  CsvWriter win(win_path, {"t_begin", "t_end", "strichartz_tail"});
  for (std::size_t w = 0; w < rep.strichartz_tail.size(); ++w)
    win.row({rep.window_edges[w], rep.window_edges[w + 1], rep.strichartz_tail[w]});
  r.csv_paths = {path_string(res_path), path_string(win_path)};

  r.summary["exponents"] = {{"alpha", ex.alpha}, {"r", ex.r}, {"q", ex.q}, {"p", ex.p}, {"gamma", ex.gamma}};
  r.summary["verdict"] = std::string(to_string(rep.verdict));
  r.summary["reason"] = rep.reason;
  r.summary["h1_initial"] = sobolev_h1_norm(u0);
  r.summary["final_residual"] = rep.cauchy_residuals.empty() ? Json(nullptr) : Json(rep.cauchy_residuals.back());
  r.summary["threshold"] = opt.threshold;
  r.summary["tail_decreasing"] = rep.tail_decreasing;
  r.summary["with_potential"] = rep.with_potential;
  r.summary["t_wrap"] = json_number(trace.trusted_until());
  return r;
}

CommandResult cmd_virial(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Grid g = make_grid(c);
  const auto sample = make_sample(c, g);
  const PotentialSample full = sample ? *sample : sample_or_zero(c, g);
  const WaveField u0 = make_profile(c.initial_data, g);
  guard_horizon(ctx, u0, c.stepper.t_final);
  const CutoffFamily cutoff = build_cutoff(c.virial.radius, g);
  const EvolutionTrace trace = evolve(c, u0, sample, c.stepper.t_final);
  const PotentialSample* sp = sample ? &*sample : nullptr;

  CommandResult r;
  const auto path = ctx.output_dir / "virial.csv";
  CsvWriter csv(path, {"t", "z", "z_prime", "kinetic", "nonlinear", "potential", "fourth", "z_doubleprime"});
  const std::vector<double> z = z_series(trace, cutoff);
  std::vector<double> zp, zpp;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const WaveField& u = trace.snapshots()[i];
    const ZDoublePrime d = z_doubleprime(u, cutoff, sp, c.alpha);
    zp.push_back(z_prime(u, cutoff));
    zpp.push_back(d.total);
    csv.row({trace.times()[i], z[i], zp.back(), d.kinetic, d.nonlinear, d.potential, d.fourth, d.total});
  }
  r.csv_paths.push_back(path_string(path));

  // Centered differences of z against the identities at interior records.
  double res1 = 0.0, res2 = 0.0;
  if (trace.size() >= 3) {
    const double h = trace.times()[1] - trace.times()[0];
    for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
      res1 = std::max(res1, std::abs((z[i + 1] - z[i - 1]) / (2.0 * h) - zp[i]));
      res2 = std::max(res2, std::abs((z[i + 1] - 2.0 * z[i] + z[i - 1]) / (h * h) - zpp[i]));
    }
  }
  r.summary["R"] = c.virial.radius;
  r.summary["construction"] = cutoff.construction;
  r.summary["vir1_max_residual"] = res1;
  r.summary["vir2_max_residual"] = res2;

  const auto tails_path = ctx.output_dir / "tails.csv";
  CsvWriter tails(tails_path, {"radius", "tail"});
  for (const auto& row : tail_compactness(trace.snapshots().back(), c.alpha, c.tails.radii))
    tails.row({row.radius, row.value});
  r.csv_paths.push_back(path_string(tails_path));

  if (hypothesis_report(full).repulsive) {
    const RigidityReport rr = rigidity_report(u0, cutoff, full, c.alpha);
    Json j;
    j["delta"] = rr.delta;
    j["tail"] = rr.tail;
    j["mass_term"] = rr.mass_term;
    j["xvprime_tail"] = rr.xvprime_tail;
    j["combination"] = rr.combination;
    j["z_prime"] = rr.z_prime;
    j["nominal_ceiling"] = rr.nominal_ceiling;
    j["cauchy_schwarz_bound"] = rr.cauchy_schwarz_bound;
    j["cauchy_schwarz_slack"] = rr.cauchy_schwarz_slack;
    j["rigorous_ceiling"] = rr.rigorous_ceiling;
    j["z_doubleprime"] = rr.z_doubleprime.total;
    r.summary["rigidity"] = j;

    std::mt19937_64 rng(c.seed);
    double worst = 0.0;
    bool within = true;
    for (std::size_t i = 0; i < c.virial.random_fields; ++i) {
      const WaveField f = random_bandlimited(g, 4.0, c.virial.radius, rng);
      const RigidityReport fr = rigidity_report(f, cutoff, full, c.alpha);
      const double ratio = fr.nominal_ceiling > 0.0 ? std::abs(fr.z_prime) / fr.nominal_ceiling : 0.0;
      worst = std::max(worst, ratio);
      if (std::abs(fr.z_prime) > fr.nominal_ceiling) within = false;
    }
    r.summary["random_fields"] = c.virial.random_fields;
    r.summary["max_zprime_over_ceiling"] = worst;
    r.summary["ceiling_holds"] = within;
  } else {
    r.summary["rigidity"] = nullptr;
    r.summary["rigidity_skipped"] = "potential is not repulsive";
  }
  return r;
}

CommandResult cmd_profiles(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Grid g = make_grid(c);
  const auto sample = make_sample(c, g);
  if (!sample) throw Error(ErrorKind::invalid_input, "profiles needs a potential");
  const WaveField psi = make_profile(c.initial_data, g);
  const auto& pr = c.profiles;
  const auto diff = flow_difference_decay(psi, *sample, pr.offsets, pr.t_final, pr.p, pr.r);
  const auto overlap = potential_overlap_decay(psi, *sample, pr.offsets, pr.t_final);

  CommandResult r;
  const auto path = ctx.output_dir / "profiles.csv";
  CsvWriter csv(path, {"offset", "flow_difference", "flow_difference_trusted", "overlap", "overlap_trusted"});
  for (std::size_t i = 0; i < diff.size(); ++i)
    csv.row({diff[i].offset, diff[i].value, diff[i].trusted ? 1.0 : 0.0, overlap[i].value,
             overlap[i].trusted ? 1.0 : 0.0});
  r.csv_paths.push_back(path_string(path));

  auto last_over_first = [](const std::vector<OffsetValue>& v) -> Json {
    if (v.size() < 2 || v.front().value == 0.0) return nullptr;
    return v.back().value / v.front().value;
  };
  bool trusted = true;
  for (std::size_t i = 0; i < diff.size(); ++i) trusted = trusted && diff[i].trusted && overlap[i].trusted;
  r.summary["offsets"] = numbers_json(pr.offsets);
  r.summary["T"] = pr.t_final;
  r.summary["norm"] = {json_number(pr.p), json_number(pr.r)};
  r.summary["flow_difference_non_increasing"] = non_increasing(diff);
  r.summary["flow_difference_last_over_first"] = last_over_first(diff);
  r.summary["overlap_non_increasing"] = non_increasing(overlap);
  r.summary["overlap_last_over_first"] = last_over_first(overlap);
  r.summary["trusted"] = trusted;
  return r;
}

// ----------------------------------------------------------------- sweep

namespace {

struct SweepPoint {
  double alpha;
  PotentialKind kind;
  double v0;
  double amplitude;
  auto key() const { return std::make_tuple(alpha, std::string(to_string(kind)), v0, amplitude); }
};

struct SweepRow {
  std::string status = "ok";
  std::string verdict;
  double final_residual = std::nan("");
  std::string detail;
};

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

SweepRow run_point(const Context& base, const SweepPoint& p, const std::filesystem::path& dir) {
  SweepRow row;
  RunRecord record;
  record.command = "sweep-point";
  record.version = version_string();
  record.started = utc_timestamp();
  try {
    ExperimentConfig c = base.config;
    c.alpha = p.alpha;
    c.initial_data.amplitude = p.amplitude;
    if (p.kind == PotentialKind::zero) {
      c.potential.reset();
    } else {
      c.potential = PotentialBlock{p.kind, p.v0, c.potential ? c.potential->a : 1.0};
    }
    c.sweep.reset();
    record.config_hash = config_hash(c);

    const Grid g = make_grid(c);
    const auto sample = make_sample(c, g);
    const HypothesisReport h = hypothesis_report(sample_or_zero(c, g));
    record.summary["hypotheses"] = hypothesis_json(h);
    if (!h.admissible) {
      row.status = "failed";
      row.detail = "hypothesis-violation: potential is not non-negative and repulsive";
    } else {
      Context ctx = base;
      ctx.config = c;
      const WaveField u0 = make_profile(c.initial_data, g);
      guard_horizon(ctx, u0, c.stepper.t_final);
      const EvolutionTrace trace = evolve(c, u0, sample, c.stepper.t_final);
      ScatterOptions opt;
      opt.max_pullbacks = c.scatter.pullbacks;
      opt.windows = c.scatter.windows;
      opt.threshold = c.scatter.threshold;
      const ScatterReport rep =
          scattering_detector(trace, sample ? &*sample : nullptr, strichartz_exponents(c.alpha), opt);
      row.verdict = std::string(to_string(rep.verdict));
      row.final_residual = rep.cauchy_residuals.empty() ? std::nan("") : rep.cauchy_residuals.back();
      row.detail = rep.reason;
      write_trace_csv(dir / "trace.csv", trace, sample ? &*sample : nullptr, c.alpha);
      record.csv_paths.push_back(path_string(dir / "trace.csv"));
      record.summary["verdict"] = row.verdict;
      record.summary["final_residual"] = json_number(row.final_residual);
      record.summary["tail"] = numbers_json(rep.strichartz_tail);
    }
  } catch (const std::exception& e) {
    row.status = "failed";
    row.detail = e.what();
  }
  record.summary["status"] = row.status;
  record.summary["detail"] = row.detail;
  record.exit_code = row.status == "ok" ? kExitOk : kExitError;
  record.finished = utc_timestamp();
  write_json(dir / "run.json", record.to_json());
  return row;
}

}  // namespace

int sweep_threads() {
  if (const char* env = std::getenv("DISPERSE_LAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

CommandResult cmd_sweep(const Context& ctx) {
  if (!ctx.config.sweep) throw Error(ErrorKind::invalid_input, "configuration has no 'sweep' block");
  const SweepBlock& s = *ctx.config.sweep;
  std::vector<SweepPoint> points;
  for (double a : s.alpha)
    for (PotentialKind k : s.kind)
      for (double v : s.v0)
        for (double amp : s.amplitude) points.push_back({a, k, v, amp});
  std::sort(points.begin(), points.end(), [](const SweepPoint& x, const SweepPoint& y) { return x.key() < y.key(); });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const SweepPoint& x, const SweepPoint& y) { return x.key() == y.key(); }),
               points.end());

  std::vector<SweepRow> rows(points.size());
  const int threads = sweep_threads();
  const int saved_levels = omp_get_max_active_levels();
  omp_set_max_active_levels(1);
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "point_%03td", i);
    rows[i] = run_point(ctx, points[i], ctx.output_dir / name);
  }
  omp_set_max_active_levels(saved_levels);

  CommandResult r;
  const auto path = ctx.output_dir / "sweep.csv";
  CsvWriter csv(path, {"alpha", "kind", "V0", "amplitude", "status", "verdict", "final_residual", "detail"});
  std::size_t failures = 0;
  Json verdicts = Json::object();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto& row = rows[i];
    if (row.status != "ok") ++failures;
    if (!row.verdict.empty()) verdicts[row.verdict] = verdicts.value(row.verdict, 0) + 1;
    csv.cells({format_number(p.alpha), std::string(to_string(p.kind)), format_number(p.v0),
               format_number(p.amplitude), row.status, row.verdict, format_number(row.final_residual),
               csv_safe(row.detail)});
  }
  r.csv_paths.push_back(path_string(path));
  r.summary["points"] = points.size();
  r.summary["failures"] = failures;
  r.summary["verdicts"] = verdicts;
  r.summary["threads"] = threads;
  return r;
}

// ---------------------------------------------------------------- driver

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check-potential", "resonance", "spectrum", "evolve", "decay",
                                              "scatter",         "virial",    "profiles", "sweep"};
  return names;
}

int run_command(const std::string& name, const Context& ctx) {
  using Fn = CommandResult (*)(const Context&);
  static const std::vector<std::pair<std::string, Fn>> table{
      {"check-potential", cmd_check_potential}, {"resonance", cmd_resonance}, {"spectrum", cmd_spectrum},
      {"evolve", cmd_evolve},                   {"decay", cmd_decay},         {"scatter", cmd_scatter},
      {"virial", cmd_virial},                   {"profiles", cmd_profiles},   {"sweep", cmd_sweep}};
  const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == name; });

  RunRecord record;
  record.command = name;
  record.version = version_string();
  record.started = utc_timestamp();
  try {
    if (it == table.end()) throw Error(ErrorKind::invalid_input, "unknown command '" + name + "'");
    record.config_hash = config_hash(ctx.config);
    std::filesystem::create_directories(ctx.output_dir);
    CommandResult result = it->second(ctx);

    Json summary;
    summary["command"] = name;
    summary["config_hash"] = record.config_hash;
    summary["version"] = record.version;
    summary.update(result.summary);
    write_json(ctx.output_dir / (name + ".json"), summary);

    record.exit_code = result.exit_code;
    record.summary = summary;
    record.csv_paths = result.csv_paths;
    record.finished = utc_timestamp();
    write_json(ctx.output_dir / "run.json", record.to_json());
    std::cout << summary.dump(2) << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "disperse-lab " << name << ": " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace disperse::app
