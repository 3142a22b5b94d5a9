#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace gwstat::cli {

using Json = nlohmann::ordered_json;

// Exit codes: 0 success, 1 usage/input errors, 2 statistical degeneracies.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDegenerate = 2;

struct CommonConfig {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_path;    // JSON report destination; empty writes none
  std::string table_path;  // flat CSV of the result rows, for plotting
};

struct DistConfig : CommonConfig {
  std::string input_path;  // Gaussian parameter file
  std::string ref_path;    // Gaussian parameter file
};

struct EstimateConfig : CommonConfig {
  std::string input_path;   // samples CSV
  std::string params_out;   // optional fitted parameter file
};

struct CiConfig : CommonConfig {
  std::string input_path;    // samples CSV
  std::string ref_path;      // parameter file (one-sample)
  std::string input2_path;   // samples CSV (two-sample)
  double alpha = 0.05;
};

struct TestConfig : CommonConfig {
  std::string mode = "equality";  // equality | neighborhood
  std::string input_path;
  std::string ref_path;
  std::string input2_path;
  double alpha = 0.05;
  double delta = 0.0;
  std::size_t null_draws = 100000;
};

struct BootstrapConfig : CommonConfig {
  std::string scheme = "n";  // n | m
  std::string input_path;
  std::string ref_path;
  std::size_t b_reps = 2000;
  std::size_t m = 0;  // 0: ceil(n^{2/3}) for the m scheme
};

struct ProteinConfig : CommonConfig {
  std::string input_path;  // sites CSV
  std::string ref_path;    // references CSV
  double alpha = 0.05;
  std::size_t null_draws = 100000;
};

struct McCltConfig : CommonConfig {
  std::string theorem = "one-sample";  // one-sample | two-sample | null
  int dim = 2;
  std::vector<int> n_grid = {2000};
  std::size_t replicates = 5000;
  double tolerance = 0.0;  // 0: default per theorem (0.05 CLT, 0.03 null)
  std::string p_path;      // optional parameter files
  std::string q_path;
  int cert_configs = 3;           // variance certification block
  std::size_t cert_draws = 100000;
  int cross_check_n = 100000;     // d=1 quantile-formula block
};

struct TDemoConfig : CommonConfig {
  int dim = 3;
  double dof = 2.5;
  int n = 1500;
  double epsilon = 0.5;  // entropic regularization for the cloud estimate
};

int cmd_dist(const DistConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_estimate(const EstimateConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_ci(const CiConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_test(const TestConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bootstrap(const BootstrapConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_protein(const ProteinConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_mc_clt(const McCltConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_t_demo(const TDemoConfig& cfg, std::ostream& out, std::ostream& err);

/// Resolves the seed: the configured one, or a fresh one that is printed to
/// err so the run can be replayed.
std::uint64_t resolve_seed(const CommonConfig& cfg, std::ostream& err);

}  // namespace gwstat::cli
