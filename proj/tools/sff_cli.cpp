// Command line front end: run Monte Carlo ensembles, emit theory curves,
// reproduce the standard figures, and post-process persisted results.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sff/experiments.hpp"
#include "sff/theory.hpp"

namespace fs = std::filesystem;

namespace {

struct SpecFlags {
  std::string config;
  std::string model;
  int N = -1;
  int L = -1;
  double eps = std::nan("");
  double gamma = std::nan("");
  double kA = std::nan("");
  double kB = std::nan("");
  std::string dist;
  int realizations = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t t_max = -1;
  int moments = -1;
  double alpha = std::nan("");
  int workers = -1;
  std::string solver;
};

void add_spec_flags(CLI::App* cmd, SpecFlags* f) {
  cmd->add_option("--config", f->config, "JSON experiment config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--model", f->model,
                  "rmte-bipartite | rmte-extended | kicked-rotor-pair | "
                  "single-cue | single-kicked-rotor");
  cmd->add_option("--N", f->N, "subsystem dimension");
  cmd->add_option("--L", f->L, "number of subsystems");
  cmd->add_option("--eps", f->eps, "RMTE coupling strength");
  cmd->add_option("--gamma", f->gamma, "rotor coupling strength");
  cmd->add_option("--kA", f->kA, "kick strength of rotor A");
  cmd->add_option("--kB", f->kB, "kick strength of rotor B");
  cmd->add_option("--dist", f->dist, "uniform | arcsine-cos | point-mass");
  cmd->add_option("--realizations", f->realizations, "ensemble size");
  cmd->add_option("--seed", f->seed, "master seed")
      ->each([f](const std::string&) { f->seed_set = true; });
  cmd->add_option("--t-max", f->t_max, "largest time (default 4 N^L)");
  cmd->add_option("--moments", f->moments, "highest moment order (1..3)");
  cmd->add_option("--alpha", f->alpha, "smoothing window half-width");
  cmd->add_option("--workers", f->workers, "parallel workers");
  cmd->add_option("--solver", f->solver, "cayley | qr");
}

sff::EnsembleSpec build_spec(const SpecFlags& f) {
  sff::EnsembleSpec spec;
  spec.realizations = 100;
  spec.N = 16;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    std::ostringstream ss;
    ss << in.rdbuf();
    sff::apply_spec_json_text(ss.str(), &spec);
  }
  // Flags override config fields.
  std::ostringstream overrides;
  overrides << '{';
  bool first = true;
  auto field = [&](const std::string& key, const std::string& value) {
    if (!first) overrides << ',';
    first = false;
    overrides << '"' << key << "\":" << value;
  };
  auto quoted = [](const std::string& s) { return '"' + s + '"'; };
  if (!f.model.empty()) field("model", quoted(f.model));
  if (f.N >= 0) field("N", std::to_string(f.N));
  if (f.L >= 0) field("L", std::to_string(f.L));
  if (!std::isnan(f.eps)) field("eps", sff::format_double(f.eps));
  if (!std::isnan(f.gamma)) field("gamma", sff::format_double(f.gamma));
  if (!std::isnan(f.kA)) field("kA", sff::format_double(f.kA));
  if (!std::isnan(f.kB)) field("kB", sff::format_double(f.kB));
  if (!f.dist.empty()) field("dist", quoted(f.dist));
  if (f.realizations >= 0) {
    field("realizations", std::to_string(f.realizations));
  }
  if (f.seed_set) field("seed", std::to_string(f.seed));
  if (f.t_max >= 0) field("t_max", std::to_string(f.t_max));
  if (f.moments >= 0) field("moments", std::to_string(f.moments));
  if (!std::isnan(f.alpha)) field("alpha", sff::format_double(f.alpha));
  if (f.workers >= 0) field("workers", std::to_string(f.workers));
  if (!f.solver.empty()) field("solver", quoted(f.solver));
  overrides << '}';
  sff::apply_spec_json_text(overrides.str(), &spec);
  return spec;
}

sff::PlotSeries estimate_series(const sff::SffEstimate& est, int m,
                                const std::string& label, bool smooth) {
  sff::PlotSeries s;
  s.label = label;
  s.x = est.tau;
  std::vector<double> v(est.grid.size());
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    v[i] = est.kappa(static_cast<Eigen::Index>(i), m - 1);
  }
  s.y = smooth ? sff::smooth_moving_average(est.grid.times, v, est.alpha) : v;
  return s;
}

int cmd_run(const SpecFlags& flags, const std::string& out_dir) {
  const sff::EnsembleSpec spec = build_spec(flags);
  spec.validate();
  sff::run_experiment(spec, out_dir);
  std::cout << "wrote " << out_dir << "/estimate.csv\n";
  return 0;
}

int cmd_theory(const std::string& formula, const SpecFlags& flags,
               double gamma_scaled, double lambda, int m,
               const std::string& out_path) {
  const sff::EnsembleSpec s = build_spec(flags);
  sff::TransitionParams p;
  p.N = s.N;
  p.L = s.L;
  p.eps = s.eps;
  p.dist = s.dist;
  const std::int64_t t_max = s.t_max > 0 ? s.t_max : 4 * p.total_dim();
  std::ostringstream out;
  out << "x,value,tag\n";
  if (formula == "cue") {
    for (std::int64_t t = 1; t <= t_max; ++t) {
      out << t << ',' << sff::format_double(sff::sff_cue(t, p.total_dim()))
          << ",cue\n";
    }
  } else if (formula == "short-time" || formula == "extrapolated") {
    const auto mode = formula == "short-time"
                          ? sff::PredictionMode::ShortTime
                          : sff::PredictionMode::Extrapolated;
    for (std::int64_t t = 1; t <= t_max; ++t) {
      const double v = m > 1 ? sff::moment_prediction(m, t, p, mode)
                             : sff::sff_prediction(t, p, mode);
      out << t << ',' << sff::format_double(v) << ',' << formula << "\n";
    }
  } else if (formula == "scaled") {
    for (int i = 0; i <= 400; ++i) {
      const double tau = 2.0 * i / 400.0;
      out << sff::format_double(tau) << ','
          << sff::format_double(sff::sff_prediction_scaled(tau, gamma_scaled))
          << ",scaled\n";
    }
  } else if (formula == "perturbative") {
    for (int i = 0; i <= 300; ++i) {
      const double tp = 3.0 * i / 300.0;
      const double v = 1.0 - 2.0 * std::numbers::pi * std::sqrt(lambda) * tp *
                                 std::exp(-tp * tp);
      out << sff::format_double(tp) << ',' << sff::format_double(v)
          << ",perturbative\n";
    }
  } else {
    std::cerr << "unknown formula: " << formula << "\n";
    return 1;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  f << out.str();
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_collapse(const std::vector<std::string>& dirs, double tau_min,
                 int moment) {
  std::vector<sff::SffEstimate> ests;
  for (const auto& d : dirs) {
    sff::SffEstimate est = sff::read_estimate_csv(fs::path(d) / "estimate.csv");
    const sff::EnsembleSpec spec =
        sff::read_spec_json(fs::path(d) / "meta.json");
    est.N = spec.N;
    est.L = spec.L;
    est.alpha = spec.alpha;
    est.realizations = spec.realizations;
    ests.push_back(std::move(est));
  }
  const sff::CollapseReport rep = sff::collapse_check(ests, tau_min, moment);
  std::cout << "compared=" << rep.compared << " exceeding=" << rep.exceeding
            << " max_standardized=" << sff::format_double(rep.max_standardized)
            << " result=" << (rep.pass ? "pass" : "fail") << "\n";
  return rep.pass ? 0 : 2;
}

int cmd_thouless(const std::string& dir, double delta, const std::string& mode,
                 int run_length) {
  sff::SffEstimate est = sff::read_estimate_csv(fs::path(dir) / "estimate.csv");
  const sff::EnsembleSpec spec = sff::read_spec_json(fs::path(dir) / "meta.json");
  est.N = spec.N;
  est.L = (spec.model == sff::Model::SingleCue ||
           spec.model == sff::Model::SingleKickedRotor)
              ? 1
              : spec.L;
  est.alpha = spec.alpha;
  const auto m = mode == "absolute" ? sff::ThoulessMode::Absolute
                                    : sff::ThoulessMode::RelativeToHeisenberg;
  const sff::ThoulessResult res =
      sff::extract_thouless(est, delta, m, run_length);
  if (!res.found) {
    std::cout << "not found; min deviation "
              << sff::format_double(res.min_deviation) << "\n";
    return 2;
  }
  std::cout << "t_th=" << sff::format_double(res.t_th)
            << " tau_th=" << sff::format_double(res.tau_th) << "\n";
  sff::TransitionParams p;
  p.N = spec.N;
  p.L = spec.L;
  p.eps = spec.eps;
  p.dist = spec.dist;
  if (spec.model == sff::Model::RmteBipartite ||
      spec.model == sff::Model::RmteExtended) {
    std::cout << "lambert prediction tau_th="
              << sff::format_double(
                     sff::thouless_time_lambert(p.gamma_scaled(), delta))
              << "\n";
  }
  return 0;
}

// Named figure presets at desk scale; --paper-scale restores the parameters
// used for the original plots (long runs).
int cmd_figure(const std::string& name, const std::string& out_dirstr,
               bool paper_scale, int realizations, int workers,
               std::uint64_t seed) {
  const fs::path out_dir(out_dirstr);
  fs::create_directories(out_dir);
  auto base_spec = [&](int n) {
    sff::EnsembleSpec s;
    s.model = sff::Model::RmteBipartite;
    s.N = n;
    s.realizations = realizations;
    s.master_seed = seed;
    s.workers = workers;
    return s;
  };

  if (name == "fig1" || name == "fig4" || name == "fig5") {
    // kappa_m(tau) across the transition, with extrapolated theory overlays.
    const int n = paper_scale ? 50 : 24;
    const int m = name == "fig1" ? 1 : (name == "fig4" ? 2 : 3);
    std::vector<sff::PlotSeries> series;
    for (const double eps : {0.01, 0.04, 0.1, 0.3, 1.0}) {
      sff::EnsembleSpec s = base_spec(n);
      s.eps = eps;
      s.m_max = m;
      const fs::path dir = out_dir / ("eps" + sff::format_double(eps));
      const sff::SffEstimate est = sff::run_experiment(s, dir);
      series.push_back(estimate_series(est, m, "eps=" + sff::format_double(eps),
                                       true));
      sff::TransitionParams p;
      p.N = n;
      p.eps = eps;
      sff::PlotSeries overlay;
      overlay.label = "theory eps=" + sff::format_double(eps);
      overlay.is_overlay = true;
      const double dim = static_cast<double>(p.total_dim());
      for (const std::int64_t t : est.grid.times) {
        overlay.x.push_back(static_cast<double>(t) / dim);
        const double km = sff::moment_prediction(
            m, t, p, sff::PredictionMode::Extrapolated);
        double fact = 1;
        for (int i = 2; i <= m; ++i) fact *= i;
        overlay.y.push_back(std::pow(km / fact, 1.0 / m) / dim);
      }
      series.push_back(std::move(overlay));
    }
    sff::emit_plot(out_dir / (name + ".svg"), series, sff::PlotStyle::LogLog,
                   "tau", "kappa_" + std::to_string(m),
                   {1.0 / n, 1.0});
    return 0;
  }

  if (name == "fig3") {
    // Gamma collapse: same Gamma at two different N.
    const double gamma_scaled = 4.0;
    std::vector<sff::PlotSeries> series;
    for (const int n : {paper_scale ? 50 : 16, paper_scale ? 80 : 32}) {
      sff::EnsembleSpec s = base_spec(n);
      const double sigma = sff::PhaseDistribution::uniform().sigma();
      s.eps = gamma_scaled / (sigma * n);
      const sff::SffEstimate est = sff::run_experiment(
          s, out_dir / ("N" + std::to_string(n)));
      series.push_back(
          estimate_series(est, 1, "N=" + std::to_string(n), true));
    }
    sff::PlotSeries overlay;
    overlay.label = "scaling limit";
    overlay.is_overlay = true;
    for (int i = 1; i <= 400; ++i) {
      const double tau = 2.0 * i / 400.0;
      overlay.x.push_back(tau);
      overlay.y.push_back(sff::sff_prediction_scaled(tau, gamma_scaled));
    }
    series.push_back(std::move(overlay));
    sff::emit_plot(out_dir / "fig3.svg", series, sff::PlotStyle::LogLog, "tau",
                   "kappa", {1.0});
    return 0;
  }

  if (name == "fig7a") {
    // Single kicked rotor versus the CUE ramp, linear axes.
    const int n = paper_scale ? 50 : 20;
    sff::EnsembleSpec s = base_spec(n);
    s.model = sff::Model::SingleKickedRotor;
    s.kA = 9.7;
    s.t_max = 4 * n;
    const sff::SffEstimate est =
        sff::run_experiment(s, out_dir / "single-rotor");
    sff::PlotSeries data;
    data.label = "kicked rotor N=" + std::to_string(n);
    sff::PlotSeries ramp;
    ramp.label = "min(t, N)";
    ramp.is_overlay = true;
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
      const auto t = static_cast<double>(est.grid.times[i]);
      data.x.push_back(t);
      data.y.push_back(est.k_mean(static_cast<Eigen::Index>(i), 0));
      ramp.x.push_back(t);
      ramp.y.push_back(std::min(t, static_cast<double>(n)));
    }
    sff::emit_plot(out_dir / "fig7a.svg", {data, ramp},
                   sff::PlotStyle::Linear, "t", "K", {});
    return 0;
  }

  if (name == "fig8") {
    // Coupled kicked rotors across the transition.
    const int n = paper_scale ? 50 : 20;
    std::vector<sff::PlotSeries> series;
    const double sigma2 = 0.5;  // cos-distributed coupling phases
    for (const double gs : {1.0, 4.0, 12.0}) {
      sff::EnsembleSpec s = base_spec(n);
      s.model = sff::Model::KickedRotorPair;
      const double eps_eff = gs / (std::sqrt(sigma2) * n);
      s.gamma = eps_eff * 2.0 * std::numbers::pi / n;
      const sff::SffEstimate est = sff::run_experiment(
          s, out_dir / ("Gamma" + sff::format_double(gs)));
      series.push_back(
          estimate_series(est, 1, "Gamma=" + sff::format_double(gs), true));
      sff::PlotSeries overlay;
      overlay.label = "scaling Gamma=" + sff::format_double(gs);
      overlay.is_overlay = true;
      for (const double tau : est.tau) {
        overlay.x.push_back(tau);
        overlay.y.push_back(sff::sff_prediction_scaled(tau, gs));
      }
      series.push_back(std::move(overlay));
    }
    sff::emit_plot(out_dir / "fig8.svg", series, sff::PlotStyle::LogLog, "tau",
                   "kappa", {1.0 / n, 1.0});
    return 0;
  }

  std::cerr << "unknown figure preset: " << name
            << " (known: fig1 fig3 fig4 fig5 fig7a fig8)\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral form factor transition ensemble toolkit"};
  app.require_subcommand(1);

  SpecFlags run_flags;
  std::string run_out;
  auto* run = app.add_subcommand("run", "run one Monte Carlo experiment");
  add_spec_flags(run, &run_flags);
  run->add_option("--out", run_out, "output directory")->required();

  SpecFlags th_flags;
  std::string th_formula = "extrapolated";
  std::string th_out = "theory.csv";
  double th_gamma = 4.0;
  double th_lambda = 0.01;
  int th_m = 1;
  auto* theory = app.add_subcommand("theory", "emit a theory curve CSV");
  add_spec_flags(theory, &th_flags);
  theory->add_option("--formula", th_formula,
                     "cue | short-time | extrapolated | scaled | perturbative");
  theory->add_option("--gamma-scaled", th_gamma, "Gamma for scaled curves");
  theory->add_option("--lambda", th_lambda, "Lambda for perturbative curves");
  theory->add_option("--m", th_m, "moment order");
  theory->add_option("--out", th_out, "output CSV path");

  std::string fig_name;
  std::string fig_out = "figures";
  bool paper_scale = false;
  int fig_realizations = 200;
  int fig_workers = 1;
  std::uint64_t fig_seed = 1;
  auto* figure = app.add_subcommand("figure", "run a named figure preset");
  figure->add_option("name", fig_name, "preset name")->required();
  figure->add_option("--out", fig_out, "output directory");
  figure->add_flag("--paper-scale", paper_scale,
                   "full-size parameters (long runs)");
  figure->add_option("--realizations", fig_realizations, "ensemble size");
  figure->add_option("--workers", fig_workers, "parallel workers");
  figure->add_option("--seed", fig_seed, "master seed");

  std::vector<std::string> col_dirs;
  double col_tau_min = 0.0;
  int col_moment = 1;
  auto* collapse =
      app.add_subcommand("collapse", "collapse check over result directories");
  collapse->add_option("dirs", col_dirs, "result directories")
      ->required()
      ->expected(2, -1);
  collapse->add_option("--tau-min", col_tau_min, "smallest tau compared");
  collapse->add_option("--m", col_moment, "moment order");

  std::string tho_dir;
  double tho_delta = 0.005;
  std::string tho_mode = "relative";
  int tho_run_length = 5;
  auto* thouless =
      app.add_subcommand("thouless", "extract the Thouless time from a result");
  thouless->add_option("dir", tho_dir, "result directory")->required();
  thouless->add_option("--delta", tho_delta, "threshold");
  thouless->add_option("--mode", tho_mode, "relative | absolute");
  thouless->add_option("--run-length", tho_run_length,
                       "consecutive sub-threshold points required");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags, run_out);
    if (theory->parsed()) {
      return cmd_theory(th_formula, th_flags, th_gamma, th_lambda, th_m,
                        th_out);
    }
    if (figure->parsed()) {
      return cmd_figure(fig_name, fig_out, paper_scale, fig_realizations,
                        fig_workers, fig_seed);
    }
    if (collapse->parsed()) {
      return cmd_collapse(col_dirs, col_tau_min, col_moment);
    }
    if (thouless->parsed()) {
      return cmd_thouless(tho_dir, tho_delta, tho_mode, tho_run_length);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
