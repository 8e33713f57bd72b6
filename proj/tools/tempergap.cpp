// Command-line driver: every subcommand reads an experiment config, writes
// its tables plus manifest.json into the output directory, and exits with
// 0 (success), 1 (check failed) or 2 (configuration error).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tempergap/assumptions.hpp"
#include "tempergap/autocorrelation.hpp"
#include "tempergap/chain.hpp"
#include "tempergap/comparison.hpp"
#include "tempergap/config.hpp"
#include "tempergap/errors.hpp"
#include "tempergap/lyapunov.hpp"
#include "tempergap/output.hpp"
#include "tempergap/overlap.hpp"
#include "tempergap/parallel.hpp"
#include "tempergap/spectral.hpp"
#include "tempergap/studies.hpp"
#include "tempergap/svg_plot.hpp"

#ifndef TEMPERGAP_VERSION
#define TEMPERGAP_VERSION "0.1.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tempergap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct Context {
  std::string command;
  ExperimentConfig cfg;
  fs::path out;
  OutputFormat format = OutputFormat::Csv;
  json manifest;
  std::chrono::steady_clock::time_point start;

  std::uint64_t seed() const { return static_cast<std::uint64_t>(cfg.integer("experiment.seed")); }

  void emit(const std::string& stem, const Table& t) {
    const std::string name = stem + extension(format);
    write_file(out / name, render(t, format));
    manifest["outputs"].push_back(name);
  }

  void emit_text(const std::string& name, const std::string& text) {
    write_file(out / name, text);
    manifest["outputs"].push_back(name);
  }

  void write_manifest() { write_file(out / "manifest.json", manifest.dump(2) + "\n"); }
};

json config_echo(const ExperimentConfig& cfg) {
  json doc = json::object();
  for (const auto& [key, value] : cfg.values()) {
    const auto dot = key.find('.');
    doc[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  return doc;
}

json counters_json(const StepCounters& c) {
  return {{"steps", c.steps},
          {"mrw_proposals", c.mrw_proposals},
          {"mrw_accepts", c.mrw_accepts},
          {"restriction_rejects", c.restriction_rejects},
          {"swap_proposals", c.swap_proposals},
          {"swap_accepts", c.swap_accepts},
          {"level_proposals", c.level_proposals},
          {"level_changes", c.level_changes}};
}

json ladder_json(const TemperatureLadder& l) {
  return {{"N", l.N}, {"eps", l.eps}, {"h", l.h}, {"nu_bar", l.nu_bar}, {"eta", l.eta}};
}

double num_or_null(double v) { return std::isfinite(v) ? v : -1.0; }

PotentialSpec make_potential(const ExperimentConfig& cfg) {
  const std::string name = cfg.str("potential.name");
  ParamMap params;
  if (name == "DW1") {
    params = {{"delta", cfg.real("potential.delta")}, {"mu", cfg.real("potential.mu")}};
  } else if (name == "DW2") {
    params = {{"c_y", cfg.real("potential.c_y")}, {"mu", cfg.real("potential.mu")}};
  } else {
    throw ConfigError("potential.name must be DW1 or DW2, got '" + name + "'");
  }
  try {
    return builtin_potential(name, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

TemperatureLadder make_ladder(const ExperimentConfig& cfg) {
  try {
    return build_ladder(cfg.real("ladder.eps_high"), cfg.real("ladder.eps_low"), cfg.real("ladder.nu_bar"),
                        cfg.real("ladder.eta"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::shared_ptr<const BasinGeometry> make_geometry(const BasinClassifier& cls, const ExperimentConfig& cfg) {
  return std::make_shared<const BasinGeometry>(extract_boundary(
      cls, cfg.real("grid.boundary_resolution"), static_cast<int>(cfg.integer("grid.cache_resolution"))));
}

const CriticalPoint& lowest_boundary_saddle(const BasinClassifier& cls) {
  const auto& s = cls.boundary_saddles();
  if (s.empty()) throw AssumptionViolation("no saddle separates the two basins");
  return *std::min_element(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
}

int require_1d(const PotentialSpec& pot, const std::string& what) {
  if (pot.dim() != 1) throw ConfigError(what + " needs a one-dimensional potential (DW1)");
  return 1;
}

EigenMethod eigen_method(const ExperimentConfig& cfg) {
  const auto m = cfg.str("spectral.method");
  if (m == "auto") return EigenMethod::Auto;
  if (m == "dense") return EigenMethod::Dense;
  if (m == "iterative") return EigenMethod::Iterative;
  throw ConfigError("spectral.method must be auto, dense or iterative");
}

// ---------------------------------------------------------------- ladder

int cmd_ladder(Context& ctx) {
  const auto ladder = make_ladder(ctx.cfg);
  Table t{{"k", "eps", "beta", "h"}, {}};
  for (int k = 0; k < ladder.levels(); ++k) t.add({static_cast<long>(k), ladder.eps[k], ladder.beta(k), ladder.h[k]});
  ctx.emit("ladder", t);
  ctx.manifest["derived"]["ladder"] = ladder_json(ladder);
  return kExitOk;
}

// ---------------------------------------------------------------- sampling

struct SamplerSetup {
  KernelDescriptor kernel;
  ChainState initial;
  std::vector<Observable> observables;
};

SamplerSetup make_sampler(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const PotentialSpec pot = make_potential(cfg);
  KernelKind kind;
  try {
    kind = kernel_kind_from_string(cfg.str("chain.kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const BasinClassifier cls(pot);
  const auto geom = make_geometry(cls, cfg);
  SamplerSetup s;
  const double eps = cfg.real("chain.eps");
  const double h = cfg.real("chain.h");
  try {
    switch (kind) {
      case KernelKind::MRW: s.kernel = mrw_kernel(pot, eps, h, false); break;
      case KernelKind::LazyMRW: s.kernel = mrw_kernel(pot, eps, h, true); break;
      case KernelKind::RestrictedMRW:
        s.kernel = restricted_kernel(pot, geom, static_cast<int>(cfg.integer("chain.basin")), eps, h);
        break;
      case KernelKind::PT: s.kernel = pt_kernel(pot, make_ladder(cfg)); break;
      case KernelKind::ST: s.kernel = st_kernel(pot, make_ladder(cfg)); break;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  TorusPoint x0;
  const auto start = cfg.reals("chain.start");
  if (start.empty()) {
    x0 = kind == KernelKind::RestrictedMRW ? cls.minimum(static_cast<int>(cfg.integer("chain.basin"))) : cls.minimum(1);
  } else {
    if (static_cast<int>(start.size()) != pot.dim()) throw ConfigError("chain.start has the wrong dimension");
    x0 = wrap(Vec(Eigen::Map<const Eigen::VectorXd>(start.data(), static_cast<Eigen::Index>(start.size()))));
  }
  s.initial = initial_state(s.kernel, x0);
  s.observables = {energy_observable(pot), basin_observable(geom)};
  for (int i = 0; i < pot.dim(); ++i) s.observables.push_back(coordinate_observable(i));
  if (kind == KernelKind::ST) s.observables.push_back(level_observable());
  ctx.manifest["derived"]["kernel"] = to_string(kind);
  ctx.manifest["derived"]["ladder"] = ladder_json(s.kernel.ladder);
  ctx.manifest["derived"]["start"] = std::vector<double>(x0.coords().begin(), x0.coords().end());
  return s;
}

RunOptions run_options(const ExperimentConfig& cfg) {
  RunOptions o;
  o.steps = cfg.integer("chain.steps");
  o.thin = cfg.integer("chain.thin");
  o.burn_in = cfg.integer("chain.burn_in");
  if (o.steps < 1) throw ConfigError("chain.steps must be >= 1");
  if (o.thin < 1) throw ConfigError("chain.thin must be >= 1");
  if (o.burn_in < 0) throw ConfigError("chain.burn_in must be >= 0");
  return o;
}

Table trace_table(const Trace& tr) {
  Table t;
  t.columns.push_back("step");
  for (const auto& n : tr.names) t.columns.push_back(n);
  for (std::size_t i = 0; i < tr.length(); ++i) {
    std::vector<Cell> row{tr.step_index[i]};
    for (const auto& c : tr.columns) row.emplace_back(c[i]);
    t.add(std::move(row));
  }
  return t;
}

Trace run_sampler(Context& ctx) {
  const RunOptions opts = run_options(ctx.cfg);
  SamplerSetup s = make_sampler(ctx);
  RngStream rng(ctx.seed(), 0);
  Trace tr = run_chain(s.kernel, s.initial, s.observables, opts, rng);
  ctx.manifest["counters"] = counters_json(tr.counters);
  ctx.manifest["derived"]["basin_crossings"] = count_crossings(tr.column("basin"));
  ctx.manifest["chain_wall_seconds"] = tr.wall_seconds;
  return tr;
}

int cmd_sample(Context& ctx) {
  const Trace tr = run_sampler(ctx);
  ctx.emit("trace", trace_table(tr));
  return kExitOk;
}

int cmd_gap_empirical(Context& ctx) {
  const Trace tr = run_sampler(ctx);
  const std::string obs = ctx.cfg.str("chain.observable") == "x0" ? "x0" : ctx.cfg.str("chain.observable");
  if (std::find(tr.names.begin(), tr.names.end(), obs) == tr.names.end()) {
    throw ConfigError("chain.observable '" + obs + "' is not recorded for this chain");
  }
  EmpiricalGapOptions eo;
  eo.rho_high = ctx.cfg.real("spectral.rho_high");
  eo.rho_low = ctx.cfg.real("spectral.rho_low");
  eo.blocks = static_cast<int>(ctx.cfg.integer("spectral.blocks"));
  eo.seed = ctx.seed();
  EmpiricalGap g;
  try {
    g = empirical_gap(tr, obs, eo);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Table t{{"observable", "gap", "ci_low", "ci_high", "white_noise", "gap_lower_bound", "tau_int", "window_first",
           "window_last", "block_length"},
          {}};
  t.add({obs, g.gap, g.ci_low, g.ci_high, static_cast<long>(g.white_noise), g.gap_lower_bound, g.tau_int,
         static_cast<long>(g.window_first), static_cast<long>(g.window_last), g.block_length});
  ctx.emit("gap_empirical", t);
  ctx.emit("trace", trace_table(tr));
  ctx.manifest["result"] = {{"gap", num_or_null(g.gap)}, {"white_noise", g.white_noise},
                            {"block_length_ok", g.block_length_ok}};
  return kExitOk;
}

// ---------------------------------------------------------------- exact gaps

int cmd_gap_exact(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const PotentialSpec pot = make_potential(cfg);
  require_1d(pot, "gap-exact");
  const int M = static_cast<int>(cfg.integer("grid.M"));
  const auto method = eigen_method(cfg);
  const std::string kind = cfg.str("chain.kind");
  Table t{{"eps", "h", "states", "gap", "lambda2", "method", "residual"}, {}};
  try {
    if (kind == "ST") {
      const auto ladder = make_ladder(cfg);
      const auto k = discretize_st(pot, ladder, M, cfg.boolean("grid.allow_large"));
      validate_kernel(k);
      const auto r = spectral_gap(k, method);
      t.add({ladder.eps.back(), ladder.h.back(), static_cast<long>(k.size()), r.gap, r.lambda2, r.method, r.residual});
      ctx.manifest["derived"]["ladder"] = ladder_json(ladder);
    } else if (kind == "MRW" || kind == "LazyMRW" || kind == "RestrictedMRW") {
      auto eps_list = cfg.reals("study.eps");
      if (eps_list.empty()) eps_list = {cfg.real("chain.eps")};
      const double h = cfg.real("chain.h");
      std::optional<BasinClassifier> cls;
      std::vector<std::int8_t> labels;
      MrwGridOptions opts;
      opts.lazy = kind == "LazyMRW";
      if (kind == "RestrictedMRW") {
        cls.emplace(pot);
        labels = grid_node_labels(*cls, M);
        opts.restriction = static_cast<int>(cfg.integer("chain.basin"));
        opts.node_labels = &labels;
      }
      for (double eps : eps_list) {
        const auto k = discretize_mrw_1d(pot, eps, h, M, opts);
        validate_kernel(k);
        const auto r = spectral_gap(k, method);
        t.add({eps, h, static_cast<long>(k.size()), r.gap, r.lambda2, r.method, r.residual});
      }
    } else {
      throw ConfigError("gap-exact supports chain.kind MRW, LazyMRW, RestrictedMRW or ST");
    }
  } catch (const ResolutionError& e) {
    throw ConfigError(e.what());
  } catch (const SizeError& e) {
    throw ConfigError(e.what());
  }
  ctx.emit("gap_exact", t);
  return kExitOk;
}

// ---------------------------------------------------------------- studies

std::vector<double> study_grid(const ExperimentConfig& cfg, std::vector<double> fallback) {
  auto g = cfg.reals("study.eps");
  return g.empty() ? fallback : g;
}

int cmd_scaling_study(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const PotentialSpec pot = make_potential(cfg);
  require_1d(pot, "scaling-study");
  const std::string kind = cfg.str("study.kind");
  const int M = static_cast<int>(cfg.integer("study.M"));
  const double eta = cfg.real("study.eta");
  bool ok = true;
  json res;
  try {
    if (kind == "mrw-arrhenius") {
      const auto s = mrw_arrhenius(pot, M, cfg.real("study.h"), study_grid(cfg, {0.5, 0.4, 0.3, 0.25, 0.2, 0.15}));
      ctx.emit("study", to_table(s));
      PlotSeries ser{"MRW", {}, {}};
      for (const auto& r : s.rows) ser.x.push_back(1.0 / r.eps), ser.y.push_back(r.gap.gap);
      ctx.emit_text("study.svg", svg_plot({ser}, {"MRW gap", "1/eps", "gap", false, true}));
      ok = s.fit.slope >= -1.5 && s.fit.slope <= -0.6;
      res = {{"slope_log_gap_vs_inverse_eps", s.fit.slope}, {"r2", s.fit.r2}};
    } else if (kind == "st-polynomial" || kind == "st-gap") {
      const auto s = st_polynomial(pot, M, cfg.real("ladder.eps_high"), cfg.real("ladder.nu_bar"), eta,
                                   study_grid(cfg, {0.30, 0.25, 0.20, 0.15, 0.12, 0.10}), cfg.boolean("grid.allow_large"));
      ctx.emit("study", to_table(s));
      PlotSeries st{"ST", {}, {}}, mrw{"MRW", {}, {}};
      for (const auto& r : s.rows) {
        st.x.push_back(1.0 / r.eps_low), st.y.push_back(r.st.gap);
        mrw.x.push_back(1.0 / r.eps_low), mrw.y.push_back(r.mrw.gap);
      }
      ctx.emit_text("study.svg", svg_plot({st, mrw}, {"Exact gaps", "1/eps_low", "gap", true, true}));
      ok = std::abs(s.fit.slope) <= 12.0 && s.ratio_increasing;
      res = {{"slope_log_gap_st_vs_log_inverse_eps", s.fit.slope}, {"r2", s.fit.r2}, {"ratio_increasing", s.ratio_increasing}};
    } else if (kind == "restricted-gap") {
      const BasinClassifier cls(pot);
      const auto s = restricted_gap_study(cls, static_cast<int>(cfg.integer("study.basin")), M, eta,
                                          study_grid(cfg, {0.3, 0.25, 0.2, 0.15, 0.1}));
      ctx.emit("study", to_table(s));
      PlotSeries ser{"gap eps / h^4", {}, {}};
      for (const auto& r : s.rows) ser.x.push_back(r.eps), ser.y.push_back(r.normalized);
      ctx.emit_text("study.svg", svg_plot({ser}, {"Restricted gap", "eps", "gap eps / h^4", true, true}));
      ok = s.min_normalized > 0.0;
      res = {{"min_normalized", s.min_normalized}, {"spread", s.spread}};
    } else if (kind == "first-level") {
      const auto r = first_level_gap_check(pot, M, eta, study_grid(cfg, {0.5, 0.75, 1.0, 1.5, 2.0}),
                                           cfg.real("overlap.factor"));
      Table t{{"eps", "h", "w", "gap", "normalized"}, {}};
      PlotSeries ser{"normalized gap", {}, {}};
      for (const auto& p : r.points) {
        t.add({p.eps, p.h, static_cast<long>(p.w), p.gap, p.normalized});
        ser.x.push_back(p.eps), ser.y.push_back(p.normalized);
      }
      ctx.emit("study", t);
      ctx.emit_text("study.svg", svg_plot({ser}, {"First-level gap", "eps", "gap exp(2|U|/eps) / h^2", true, true}));
      ok = r.stable;
      res = {{"min_normalized", r.min_normalized}, {"spread", r.spread}, {"stable", r.stable}};
    } else {
      throw ConfigError("study.kind must be mrw-arrhenius, st-polynomial, restricted-gap or first-level");
    }
  } catch (const ResolutionError& e) {
    throw ConfigError(e.what());
  } catch (const SizeError& e) {
    throw ConfigError(e.what());
  }
  res["passed"] = ok;
  ctx.manifest["result"] = res;
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- perturbation

struct PerturbationSetup {
  std::shared_ptr<const BasinGeometry> geom;
  SaddleFrameData frame;
};

PerturbationSetup make_perturbation_setup(Context& ctx) {
  const PotentialSpec pot = make_potential(ctx.cfg);
  const BasinClassifier cls(pot);
  PerturbationSetup s;
  s.geom = make_geometry(cls, ctx.cfg);
  const double kappa = ctx.cfg.real("perturbation.kappa");
  s.frame = build_saddle_frame(*s.geom, lowest_boundary_saddle(cls), kappa > 0.0 ? std::optional<double>(kappa) : std::nullopt);
  ctx.manifest["derived"]["saddle"] = std::vector<double>(s.frame.saddle.location.coords().begin(),
                                                           s.frame.saddle.location.coords().end());
  ctx.manifest["derived"]["kappa"] = s.frame.kappa;
  ctx.manifest["derived"]["lambda_u"] = s.frame.lambda_u;
  return s;
}

int cmd_perturb_check(Context& ctx) {
  const auto s = make_perturbation_setup(ctx);
  const double a = ctx.cfg.real("perturbation.a");
  Table t{{"eps", "check", "passed", "measured", "tolerance", "detail"}, {}};
  Table summary{{"eps", "support_radius", "sup_perturbation", "sup_over_eps", "c0", "C1", "C2"}, {}};
  bool ok = true;
  std::vector<double> ratios;
  for (double eps : ctx.cfg.reals("perturbation.eps")) {
    PerturbedPotential pp = [&] {
      try {
        return build_perturbation(s.geom, s.frame, a, eps);
      } catch (const WellDefinednessError& e) {
        throw ConfigError(e.what());
      }
    }();
    const auto rep = verify_perturbation(pp);
    for (const auto& c : rep.checks) {
      t.add({eps, c.name, static_cast<long>(c.passed), c.measured, c.tolerance, c.detail});
    }
    ok = ok && rep.all_passed();
    ratios.push_back(rep.sup_perturbation / eps);
    summary.add({eps, rep.support_radius, rep.sup_perturbation, rep.sup_perturbation / eps, rep.c0, rep.C1, rep.C2});
  }
  double spread = 1.0;
  if (!ratios.empty()) {
    spread = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  }
  ok = ok && spread <= 3.0;
  ctx.emit("perturb_checks", t);
  ctx.emit("perturb_summary", summary);
  ctx.manifest["result"] = {{"passed", ok}, {"sup_over_eps_spread", spread}};
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_lyapunov_check(Context& ctx) {
  const auto s = make_perturbation_setup(ctx);
  const auto& cfg = ctx.cfg;
  DriftParams p;
  p.gamma = cfg.real("perturbation.gamma");
  p.a = cfg.real("perturbation.a");
  p.eta = cfg.real("perturbation.eta");
  p.scheme = quadrature_scheme_from_string(cfg.str("perturbation.quadrature"));
  p.samples = cfg.integer("perturbation.samples");
  p.radial = static_cast<int>(cfg.integer("perturbation.radial"));
  p.angular = static_cast<int>(cfg.integer("perturbation.angular"));
  p.tolerance = cfg.real("perturbation.tolerance");
  p.seed = ctx.seed();
  const int budget = static_cast<int>(cfg.integer("perturbation.budget"));
  Table summary{{"eps", "h", "target", "passed", "lambda_emp", "b_emp", "nonnegative_near_saddle"}, {}};
  bool all_pass = true;
  double largest_pass = -1.0;
  for (double eps : cfg.reals("perturbation.eps")) {
    p.eps = eps;
    p.h = std::min(p.eta * eps * eps, 1.0);
    PerturbedPotential pp = [&] {
      try {
        return build_perturbation(s.geom, s.frame, p.a, eps);
      } catch (const WellDefinednessError& e) {
        throw ConfigError(e.what());
      }
    }();
    std::vector<DriftTarget> targets{drift_target(pp)};
    if (cfg.boolean("perturbation.unperturbed")) targets.push_back(unperturbed_target(pp));
    for (const auto& target : targets) {
      const auto rep = drift_scan(target, p, budget);
      summary.add({eps, p.h, target.name, static_cast<long>(rep.passed), rep.lambda_emp, rep.b_emp,
                   static_cast<long>(rep.nonnegative_near_saddle)});
      Table pts{{"x", "y", "region", "drift", "error", "W"}, {}};
      for (const auto& q : rep.points) {
        pts.add({q.location[0], q.location.dim() > 1 ? q.location[1] : 0.0, to_string(q.region), q.drift, q.error, q.w});
      }
      char stem[64];
      std::snprintf(stem, sizeof stem, "drift_%s_eps%g", target.name.c_str(), eps);
      ctx.emit(stem, pts);
      if (target.name == "perturbed") {
        all_pass = all_pass && rep.passed;
        if (rep.passed) largest_pass = std::max(largest_pass, eps);
      }
    }
  }
  ctx.emit("drift_summary", summary);
  ctx.manifest["result"] = {{"passed", all_pass}, {"largest_passing_eps", largest_pass}};
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- geometry

int cmd_basin(Context& ctx) {
  const PotentialSpec pot = make_potential(ctx.cfg);
  const auto search = find_critical_points(pot, 64);
  const BasinClassifier cls(pot, search);
  const auto ladder = make_ladder(ctx.cfg);
  const auto rep = validate_assumptions(cls, ladder.eps_low, ladder.eps_high, search.warnings);
  Table crit{{"index", "morse_index", "value", "x", "y", "boundary_saddle"}, {}};
  for (std::size_t i = 0; i < cls.critical_points().size(); ++i) {
    const auto& c = cls.critical_points()[i];
    bool boundary = false;
    for (const auto& b : cls.boundary_saddles()) boundary = boundary || torus_distance(b.location, c.location) == 0.0;
    crit.add({static_cast<long>(i), static_cast<long>(c.morse_index), c.value, c.location[0],
              c.location.dim() > 1 ? c.location[1] : 0.0, static_cast<long>(boundary)});
  }
  ctx.emit("critical_points", crit);
  const auto geom = make_geometry(cls, ctx.cfg);
  if (pot.dim() == 2) {
    std::ostringstream os;
    geom->write_csv(os);
    ctx.emit_text("boundary.csv", os.str());
  }
  const int q = static_cast<int>(ctx.cfg.integer("grid.quadrature"));
  Table masses{{"eps", "mass_basin1", "mass_basin2"}, {}};
  for (double eps : ladder.eps) {
    const auto m = basin_masses(cls, eps, q);
    masses.add({eps, m[0], m[1]});
  }
  ctx.emit("basin_masses", masses);
  ctx.manifest["result"] = {{"two_minima", rep.two_minima},
                            {"all_nondegenerate", rep.all_nondegenerate},
                            {"saddle_height", rep.saddle_height},
                            {"lowest_saddle_unique", rep.lowest_saddle_unique},
                            {"mass_ratio_constant", rep.mass_ratio_constant},
                            {"tube_radius", geom->tube_radius()},
                            {"warnings", rep.warnings}};
  return kExitOk;
}

int cmd_overlap(Context& ctx) {
  const PotentialSpec pot = make_potential(ctx.cfg);
  const BasinClassifier cls(pot);
  const auto ladder = make_ladder(ctx.cfg);
  const auto r = overlap_quantities(cls, ladder, static_cast<int>(ctx.cfg.integer("grid.quadrature")));
  Table t{{"gamma_pt", "bound_gamma", "delta_pt", "bound_delta", "c_bv", "c_m", "sup_norm"}, {}};
  t.add({r.gamma_pt, r.bound_gamma, r.delta_pt, r.bound_delta, r.c_bv, r.c_m, r.sup_norm});
  ctx.emit("overlap", t);
  Table lm{{"k", "eps", "mass_basin1", "mass_basin2"}, {}};
  for (int k = 0; k < ladder.levels(); ++k) {
    lm.add({static_cast<long>(k), ladder.eps[k], r.level_masses[k][0], r.level_masses[k][1]});
  }
  ctx.emit("level_masses", lm);
  bool ok = r.gamma_ok(1e-3) && r.delta_ok(1e-3);
  json res = {{"gamma_ok", r.gamma_ok(1e-3)}, {"delta_ok", r.delta_ok(1e-3)}, {"warnings", r.warnings}};
  if (pot.dim() == 1) {
    const auto fl = first_level_gap_check(pot, static_cast<int>(ctx.cfg.integer("grid.M")), ladder.eta,
                                          ctx.cfg.reals("overlap.first_level_eps"), ctx.cfg.real("overlap.factor"));
    Table ft{{"eps", "h", "w", "gap", "normalized"}, {}};
    for (const auto& p : fl.points) ft.add({p.eps, p.h, static_cast<long>(p.w), p.gap, p.normalized});
    ctx.emit("first_level", ft);
    res["first_level_positive"] = fl.positive;
    res["first_level_spread"] = fl.spread;
    res["first_level_stable"] = fl.stable;
    ok = ok && fl.stable;
  }
  res["passed"] = ok;
  ctx.manifest["result"] = res;
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_tv_check(Context& ctx) {
  const PotentialSpec pot = make_potential(ctx.cfg);
  require_1d(pot, "tv-check");
  const int M = static_cast<int>(ctx.cfg.integer("grid.M"));
  const BasinClassifier cls(pot);
  const int node = static_cast<int>(std::lround(cls.minimum(1)[0] * M)) % M;
  GridKernel k;
  const std::string kind = ctx.cfg.str("tv.kernel");
  try {
    if (kind == "st") {
      k = discretize_st(pot, make_ladder(ctx.cfg), M, ctx.cfg.boolean("grid.allow_large"));
    } else if (kind == "lazy-mrw") {
      MrwGridOptions o;
      o.lazy = true;
      k = discretize_mrw_1d(pot, ctx.cfg.real("chain.eps"), ctx.cfg.real("chain.h"), M, o);
    } else {
      throw ConfigError("tv.kernel must be st or lazy-mrw");
    }
  } catch (const ResolutionError& e) {
    throw ConfigError(e.what());
  } catch (const SizeError& e) {
    throw ConfigError(e.what());
  }
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(k.size());
  // ST states are level * M + position; start at the coldest level.
  nu[(k.levels - 1) * M + node] = 1.0;
  const auto r = tv_bound_check(k, nu, static_cast<int>(ctx.cfg.integer("tv.m_max")));
  Table t{{"m", "tv_distance", "bound"}, {}};
  for (std::size_t m = 0; m < r.lhs.size(); ++m) t.add({static_cast<long>(m + 1), r.lhs[m], r.rhs[m]});
  ctx.emit("tv_check", t);
  ctx.manifest["result"] = {{"applicable", r.applicable}, {"holds", r.holds}, {"gap", r.gap}, {"chi2", r.chi2}};
  return r.applicable && r.holds ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tempergap: tempering chains, spectral gaps and drift checks on the torus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(TEMPERGAP_VERSION));

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string format = "csv";
  std::vector<std::string> overrides;

  using Handler = int (*)(Context&);
  const std::vector<std::pair<std::string, std::pair<std::string, Handler>>> commands = {
      {"sample", {"run a chain and record observables", cmd_sample}},
      {"ladder", {"print the temperature ladder", cmd_ladder}},
      {"gap-exact", {"exact spectral gaps of grid kernels (d = 1)", cmd_gap_exact}},
      {"gap-empirical", {"gap estimate from autocorrelation decay", cmd_gap_empirical}},
      {"scaling-study", {"gap scaling sweeps with fitted slopes", cmd_scaling_study}},
      {"lyapunov-check", {"drift scan of the perturbed potential", cmd_lyapunov_check}},
      {"perturb-check", {"verify the perturbed potential's properties", cmd_perturb_check}},
      {"basin", {"critical points, boundary and basin masses", cmd_basin}},
      {"overlap", {"overlap quantities of the ladder", cmd_overlap}},
      {"tv-check", {"total-variation bound on a lazy grid kernel", cmd_tv_check}},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, info] : commands) {
    CLI::App* sub = app.add_subcommand(name, info.first);
    sub->add_option("--config", config_path, "experiment config (INI or JSON; a manifest.json also works)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (default: TEMPERGAP_THREADS or all cores)");
    sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--set", overrides, "override a config value, section.key=value");
    subs.emplace_back(sub, info.second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  Context ctx;
  Handler handler = nullptr;
  for (const auto& [sub, h] : subs) {
    if (sub->parsed()) {
      ctx.command = sub->get_name();
      handler = h;
    }
  }
  try {
    if (threads) {
      if (*threads < 1) throw ConfigError("--threads must be >= 1");
      set_default_thread_count(*threads);
    }
    ctx.cfg = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + o + "'");
      ctx.cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (seed) ctx.cfg.set("experiment.seed", std::to_string(*seed));
    ctx.cfg.validate();
    ctx.format = output_format_from_string(format);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  ctx.out = out_dir;
  ctx.start = std::chrono::steady_clock::now();
  ctx.manifest = {{"version", TEMPERGAP_VERSION},
                  {"command", ctx.command},
                  {"status", "running"},
                  {"config", config_echo(ctx.cfg)},
                  {"threads", default_thread_count()},
                  {"outputs", json::array()},
                  {"derived", json::object()}};
  int rc = kExitOk;
  try {
    ctx.write_manifest();
    rc = handler(ctx);
    ctx.manifest["status"] = rc == kExitOk ? "complete" : "check-failed";
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    ctx.manifest["status"] = "config-error";
    ctx.manifest["error"] = e.what();
    rc = kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    ctx.manifest["status"] = "failed";
    ctx.manifest["error"] = e.what();
    rc = kExitCheckFailed;
  }
  ctx.manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  try {
    ctx.write_manifest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rc == kExitOk ? kExitCheckFailed : rc;
  }
  if (rc == kExitOk) std::cout << ctx.command << ": ok (" << (ctx.out / "manifest.json").string() << ")\n";
  if (rc == kExitCheckFailed) std::cout << ctx.command << ": check failed (see " << (ctx.out / "manifest.json").string() << ")\n";
  return rc;
}
