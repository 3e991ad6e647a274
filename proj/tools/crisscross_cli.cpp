// Command-line front end: simulate, bcp, converge, thresholds, ld-check, diagnostics.

#include "crisscross/bcp.hpp"
#include "crisscross/config.hpp"
#include "crisscross/experiments.hpp"
#include "crisscross/parallel.hpp"
#include "crisscross/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace {

using namespace crisscross;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

void add_common(CLI::App* sub, CommonOptions& opts, bool config_required) {
  auto* opt = sub->add_option("--config", opts.config_path, "JSON configuration file");
  if (config_required) opt->required();
  sub->add_option("--seed", opts.seed, "master seed (overrides the config)");
  sub->add_option("--out", opts.out_path, "output file (default: stdout)");
}

Config load(const CommonOptions& opts) {
  Config cfg = load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

// Writes to --out or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void warn_if_below_ell_bar(const Config& cfg) {
  try {
    const ThresholdConstants k = compute_threshold_constants(cfg.limits);
    if (cfg.ell0 < k.ell_bar) {
      std::cerr << "warning: ell0=" << cfg.ell0 << " is below the sufficient level ell_bar=" << k.ell_bar
                << "; thresholds are practical, not covered by the optimality guarantee\n";
    }
  } catch (const std::domain_error&) {
    // Constants are undefined for these limits (for example mu2 <= mu3).
  }
}

int emit_error(const char* kind, const std::string& message, const std::vector<std::string>& details = {}) {
  nlohmann::json err{{"error", kind}, {"message", message}};
  if (!details.empty()) err["violations"] = details;
  std::cerr << err.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crisscross network heavy-traffic control harness"};
  app.require_subcommand(1);

  CommonOptions sim_opts, bcp_opts, conv_opts, thr_opts, ld_opts, diag_opts;

  auto* sim = app.add_subcommand("simulate", "simulate one trajectory and write it as CSV");
  add_common(sim, sim_opts, true);
  std::optional<double> sim_r;
  std::string sim_policy;
  std::optional<double> sim_horizon;
  sim->add_option("--r", sim_r, "heavy-traffic index (default: first of r_list)");
  sim->add_option("--policy", sim_policy, "threshold, priority1 or priority2 (default: first configured)");
  sim->add_option("--horizon", sim_horizon, "horizon in scaled time (default: config horizon)");

  auto* bcp = app.add_subcommand("bcp", "estimate J* from the pathwise BCP solution");
  add_common(bcp, bcp_opts, true);
  BcpOptions bcp_cfg;
  std::string scheme = "bridge";
  std::optional<double> bcp_horizon;
  bcp->add_option("--dt", bcp_cfg.dt, "Euler step");
  bcp->add_option("--n-paths", bcp_cfg.n_paths, "Monte Carlo paths");
  bcp->add_option("--horizon", bcp_horizon, "truncation horizon (default: config horizon)");
  bcp->add_option("--scheme", scheme, "reflection scheme: bridge or grid")->check(CLI::IsMember({"bridge", "grid"}));

  auto* conv = app.add_subcommand("converge", "cost sweep over r_list with the J* reference");
  add_common(conv, conv_opts, true);
  BcpOptions conv_bcp;
  bool independent = false;
  conv->add_option("--dt", conv_bcp.dt, "Euler step for J*");
  conv->add_option("--n-paths", conv_bcp.n_paths, "Monte Carlo paths for J*");
  conv->add_flag("--independent", independent, "independent random numbers per policy");

  auto* thr = app.add_subcommand("thresholds", "print the threshold analysis constants");
  add_common(thr, thr_opts, true);

  auto* ld = app.add_subcommand("ld-check", "Poisson two-sided deviation frequency vs the Chernoff bound");
  add_common(ld, ld_opts, false);
  double ld_rate = 1.0, ld_eps = 0.5;
  std::vector<double> ld_t{10.0, 25.0, 50.0};
  std::size_t ld_samples = 1000000;
  ld->add_option("--rate", ld_rate, "Poisson rate");
  ld->add_option("--eps", ld_eps, "deviation size");
  ld->add_option("--t", ld_t, "time grid")->delimiter(',');
  ld->add_option("--samples", ld_samples, "samples per time point");

  auto* diag = app.add_subcommand("diagnostics", "state-space collapse and idle-time diagnostics per replication");
  add_common(diag, diag_opts, true);
  double diag_t_end = 1.0;
  std::optional<double> diag_d;
  diag->add_option("--t-end", diag_t_end, "scaled time window [0, t_end]");
  diag->add_option("--d", diag_d, "level multiplier d for the idle diagnostic (default: computed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) {
      const Config cfg = load(sim_opts);
      warn_if_below_ell_bar(cfg);
      PolicyKind kind = cfg.policies.front();
      if (!sim_policy.empty()) {
        auto parsed = parse_policy(sim_policy);
        if (!parsed) return emit_error("invalid_config", "unknown policy: " + sim_policy);
        kind = *parsed;
      }
      const RNetwork net = make_r_network(cfg.limits, sim_r.value_or(cfg.r_list.front()), cfg.ell0, cfg.c);
      const double horizon = sim_horizon.value_or(cfg.horizon) * net.r * net.r;
      const Trajectory traj = simulate(net, make_policy(kind, net), horizon, cfg.seed);
      Output out(sim_opts.out_path);
      write_trajectory_csv(out.stream(), traj);
    } else if (*bcp) {
      const Config cfg = load(bcp_opts);
      bcp_cfg.horizon = bcp_horizon.value_or(cfg.horizon);
      bcp_cfg.scheme = scheme == "grid" ? ReflectionScheme::grid : ReflectionScheme::bridge;
      const CostEstimate est = estimate_bcp(cfg.limits, bcp_cfg, cfg.seed).j_star;
      Output out(bcp_opts.out_path);
      auto& os = out.stream();
      os << std::setprecision(10) << "mean,stderr,n_paths,dt,horizon,truncation_bound\n";
      os << est.mean << ',';
      if (est.std_error) os << *est.std_error;
      os << ',' << est.n_paths << ',' << est.dt << ',' << est.horizon << ',' << est.truncation_bound << '\n';
    } else if (*conv) {
      const Config cfg = load(conv_opts);
      warn_if_below_ell_bar(cfg);
      SweepConfig sweep;
      sweep.r_list = cfg.r_list;
      sweep.policies = cfg.policies;
      sweep.ell0 = cfg.ell0;
      sweep.c = cfg.c;
      sweep.horizon_scaled = cfg.horizon;
      sweep.n_reps = cfg.replications;
      sweep.bcp = conv_bcp;
      sweep.common_random_numbers = !independent;
      const SweepTable table = convergence_sweep(cfg.limits, sweep, cfg.seed);
      Output out(conv_opts.out_path);
      write_sweep_csv(out.stream(), table);
    } else if (*thr) {
      const Config cfg = load(thr_opts);
      const ThresholdConstants k = compute_threshold_constants(cfg.limits);
      Output out(thr_opts.out_path);
      auto& os = out.stream();
      os << std::setprecision(12) << "name,value\n";
      os << "theta3," << k.theta3 << "\nrho2," << k.rho2 << "\nc," << k.c << "\nK," << k.K << "\nd," << k.d
         << "\ntheta," << k.theta << "\ngamma4," << k.gamma4 << "\nell_bar," << k.ell_bar << "\nkappa," << k.kappa
         << '\n';
    } else if (*ld) {
      std::uint64_t seed = 1;
      if (!ld_opts.config_path.empty()) seed = load_config(ld_opts.config_path).seed;
      if (ld_opts.seed) seed = *ld_opts.seed;
      const auto rows = ld_check(ld_rate, ld_eps, ld_t, ld_samples, seed);
      Output out(ld_opts.out_path);
      write_ld_csv(out.stream(), rows);
    } else if (*diag) {
      const Config cfg = load(diag_opts);
      warn_if_below_ell_bar(cfg);
      const ThresholdConstants k = compute_threshold_constants(cfg.limits);
      const double d = diag_d.value_or(k.d);
      Output out(diag_opts.out_path);
      auto& os = out.stream();
      os << std::setprecision(10)
         << "r,rep,collapse_sup1,collapse_sup3,event_E_hit,idle_mass_Y,product_sup,bound,bound_informative\n";
      for (double r : cfg.r_list) {
        const RNetwork net = make_r_network(cfg.limits, r, cfg.ell0, cfg.c);
        const Policy policy = make_policy(PolicyKind::threshold, net);
        const CollapseBound bound = collapse_event_bound(k, net, diag_t_end);
        std::vector<DiagnosticsReport> reports(cfg.replications);
        parallel_for(cfg.replications, [&](std::size_t rep) {
          const Trajectory traj = simulate(net, policy, r * r * diag_t_end, derive_seed(cfg.seed, rep));
          reports[rep] = run_diagnostics(diffusion_scale(traj, net), net, k, d, diag_t_end);
        });
        for (std::size_t rep = 0; rep < reports.size(); ++rep) {
          const auto& d_rep = reports[rep];
          os << r << ',' << rep << ',' << d_rep.collapse_sup1 << ',' << d_rep.collapse_sup3 << ','
             << (d_rep.event_E_hit ? 1 : 0) << ',' << d_rep.idle_mass_Y << ',' << d_rep.product_sup << ','
             << bound.value << ',' << (bound.informative ? 1 : 0) << '\n';
        }
      }
    }
  } catch (const InvalidConfig& e) {
    return emit_error("invalid_config", e.what(), e.violations());
  } catch (const std::domain_error& e) {
    return emit_error("invalid_config", e.what());
  } catch (const std::invalid_argument& e) {
    return emit_error("invalid_argument", e.what());
  } catch (const std::exception& e) {
    return emit_error("runtime_error", e.what());
  }
  return 0;
}
