#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hawkes/limits.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

/// Which rescaled error process an experiment tracks.
enum class Functional {
  CountH,               // sqrt(T) (N_{H,Tt}/T - lambda ||R_I|| t)
  CountI,               // immigration analogue
  CountTotal,           // both streams, total-event error
  Atom,                 // Hawkes counts restricted to one Discrete atom
  CumulativeIntensity,  // sqrt(T) (int_0^{Tt} Z / T - lambda ||R_I|| t)
  ShotH,                // sqrt(T) (S_H(Tt)/T - psi_H(inf) lambda ||R_I|| t)
  ShotI,
  ShotTotal
};

Functional functional_from_string(const std::string& name);
std::string to_string(Functional f);

struct ExperimentConfig {
  std::string name;
  ModelSpec spec;
  Functional functional = Functional::CountH;
  int atom_index = 0;
  std::vector<double> T_list{500.0};
  int replicas = 100;
  int grid_points = 20;  // evaluation grid g/grid_points, g = 1..grid_points
  std::uint64_t seed = 1;
  int threads = 1;
  std::string mode = "clt";  // "clt" or "lln"
  double tol_rel = 0.10;
  double cov_tol_rel = 0.15;
  double ks_pvalue_min = 0.01;
  std::optional<double> reference_variance;  // overrides the computed one
};

/// Rescaled error of the point measure tested against f at grid times in
/// (0,1]; origin nullopt means both streams combined.
Eigen::ArrayXd rescale_measure(const PathRecord& path, double T,
                               const std::function<double(const Mark&)>& f,
                               const Eigen::ArrayXd& grid, double drift_rate,
                               std::optional<Origin> origin);

Eigen::ArrayXd rescale_cumulative_intensity(const ModelSpec& spec, const PathRecord& path,
                                            double T, const Eigen::ArrayXd& grid,
                                            double drift_rate);

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> rescale_shot(const ModelSpec& spec,
                                                       const PathRecord& path,
                                                       const ShotShape& shot, double T,
                                                       const Eigen::ArrayXd& grid,
                                                       double drift_H, double drift_I);

/// One-sample Kolmogorov-Smirnov statistic and asymptotic p-value against
/// Normal(mean0, var0).
std::pair<double, double> ks_normal(const std::vector<double>& samples, double mean0,
                                    double var0);

struct StatsReport {
  double T = 0.0;
  Eigen::ArrayXd grid;
  Eigen::ArrayXd mean;
  Eigen::ArrayXd variance;  // unbiased, divide by R-1
  Eigen::ArrayXd std_error;
  Eigen::MatrixXd covariance;
  double ks_stat = 0.0;
  double ks_p = 1.0;
  double sup_median = 0.0;  // median over replicas of sup_t of the raw deviation
  double sup_q90 = 0.0;
  double reference_variance = 0.0;
  double reference_drift = 0.0;
  std::vector<std::string> checks;
  bool pass = true;

  nlohmann::json to_json() const;
  void write_csv(std::ostream& os) const;
};

struct ExperimentResult {
  std::vector<StatsReport> reports;  // one per T, in T_list order
  bool pass = true;

  nlohmann::json to_json() const;
};

/// Deterministic given the config: replica r uses RNG stream r, aggregation
/// runs in replica order regardless of thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, const LimitConstants& limits);

}  // namespace hawkes
