#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gwstat/cli.hpp"

namespace cli = gwstat::cli;

namespace {

void add_common(CLI::App* cmd, cli::CommonConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "generator seed (printed when unset)")
      ->each([&cfg](const std::string&) { cfg.seed_set = true; });
  cmd->add_option("--out", cfg.out_path, "write the JSON report here");
  cmd->add_option("--table", cfg.table_path,
                  "write a flat CSV of the result rows here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian 2-Wasserstein distance, limit laws and inference"};
  app.require_subcommand(1);

  cli::DistConfig dist_cfg;
  auto* dist = app.add_subcommand("dist",
                                  "closed-form distance between two Gaussians");
  dist->add_option("--input", dist_cfg.input_path, "first parameter file")
      ->required();
  dist->add_option("--ref", dist_cfg.ref_path, "second parameter file")
      ->required();
  add_common(dist, dist_cfg);

  cli::EstimateConfig est_cfg;
  auto* est = app.add_subcommand("estimate", "fit a Gaussian to samples");
  est->add_option("--input", est_cfg.input_path, "samples CSV")->required();
  est->add_option("--params-out", est_cfg.params_out,
                  "write fitted parameters here");
  add_common(est, est_cfg);

  cli::CiConfig ci_cfg;
  auto* ci = app.add_subcommand("ci", "confidence interval for the distance");
  ci->add_option("--input", ci_cfg.input_path, "samples CSV")->required();
  ci->add_option("--ref", ci_cfg.ref_path, "reference parameter file");
  ci->add_option("--input2", ci_cfg.input2_path, "second samples CSV");
  ci->add_option("--alpha", ci_cfg.alpha, "level (default 0.05)");
  add_common(ci, ci_cfg);

  cli::TestConfig test_cfg;
  auto* test = app.add_subcommand("test", "equality or neighborhood test");
  test->add_option("--mode", test_cfg.mode, "equality | neighborhood");
  test->add_option("--input", test_cfg.input_path, "samples CSV")->required();
  test->add_option("--ref", test_cfg.ref_path, "reference parameter file");
  test->add_option("--input2", test_cfg.input2_path, "second samples CSV");
  test->add_option("--alpha", test_cfg.alpha, "level (default 0.05)");
  test->add_option("--delta", test_cfg.delta, "neighborhood radius");
  test->add_option("--null-draws", test_cfg.null_draws,
                   "null-law draws (default 1e5)");
  add_common(test, test_cfg);

  cli::BootstrapConfig boot_cfg;
  auto* boot = app.add_subcommand("bootstrap", "bootstrap the estimator");
  boot->add_option("--scheme", boot_cfg.scheme, "n (n-of-n) | m (m-of-n)");
  boot->add_option("--input", boot_cfg.input_path, "samples CSV")->required();
  boot->add_option("--ref", boot_cfg.ref_path, "reference parameter file")
      ->required();
  boot->add_option("--b-reps", boot_cfg.b_reps, "replicates (default 2000)");
  boot->add_option("--m", boot_cfg.m, "resample size (default ceil(n^{2/3}))");
  add_common(boot, boot_cfg);

  cli::ProteinConfig prot_cfg;
  auto* prot = app.add_subcommand("protein", "site-wise isotropic-reference test");
  prot->add_option("--input", prot_cfg.input_path, "sites CSV")->required();
  prot->add_option("--ref", prot_cfg.ref_path, "references CSV")->required();
  prot->add_option("--alpha", prot_cfg.alpha, "level (default 0.05)");
  prot->add_option("--null-draws", prot_cfg.null_draws,
                   "null-law draws (default 1e5)");
  add_common(prot, prot_cfg);

  cli::McCltConfig mc_cfg;
  auto* mc = app.add_subcommand("mc-clt",
                                "Monte Carlo check of the limit theorems");
  mc->add_option("--theorem", mc_cfg.theorem, "one-sample | two-sample | null");
  mc->add_option("--dim", mc_cfg.dim, "dimension (default 2)");
  mc->add_option("--n", mc_cfg.n_grid, "sample-size grid (default 2000)")
      ->delimiter(',');
  mc->add_option("--reps", mc_cfg.replicates, "replicates (default 5000)");
  mc->add_option("--tol", mc_cfg.tolerance, "KS tolerance override");
  mc->add_option("--p", mc_cfg.p_path, "first parameter file");
  mc->add_option("--q", mc_cfg.q_path, "second parameter file");
  mc->add_option("--cert-configs", mc_cfg.cert_configs,
                 "variance-certification configurations (default 3)");
  mc->add_option("--cert-draws", mc_cfg.cert_draws,
                 "oracle draws per configuration (default 1e5)");
  add_common(mc, mc_cfg);

  cli::TDemoConfig t_cfg;
  auto* tdemo = app.add_subcommand(
      "t-demo", "matched-moment lower bound on multivariate-t clouds");
  tdemo->add_option("--dim", t_cfg.dim, "dimension (default 3)");
  tdemo->add_option("--dof", t_cfg.dof, "degrees of freedom, >= 2");
  tdemo->add_option("--n", t_cfg.n, "cloud size (default 1500)");
  tdemo->add_option("--epsilon", t_cfg.epsilon,
                    "entropic regularization (default 0.5)");
  add_common(tdemo, t_cfg);

  CLI11_PARSE(app, argc, argv);

  if (dist->parsed()) return cli::cmd_dist(dist_cfg, std::cout, std::cerr);
  if (est->parsed()) return cli::cmd_estimate(est_cfg, std::cout, std::cerr);
  if (ci->parsed()) return cli::cmd_ci(ci_cfg, std::cout, std::cerr);
  if (test->parsed()) return cli::cmd_test(test_cfg, std::cout, std::cerr);
  if (boot->parsed()) return cli::cmd_bootstrap(boot_cfg, std::cout, std::cerr);
  if (prot->parsed()) return cli::cmd_protein(prot_cfg, std::cout, std::cerr);
  if (mc->parsed()) return cli::cmd_mc_clt(mc_cfg, std::cout, std::cerr);
  if (tdemo->parsed()) return cli::cmd_t_demo(t_cfg, std::cout, std::cerr);
  return cli::kExitUsage;
}
