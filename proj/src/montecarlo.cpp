#include "hawkes/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace hawkes {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * double(sorted.size() - 1);
  const auto i = std::size_t(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double w = pos - double(i);
  return (1.0 - w) * sorted[i] + w * sorted[i + 1];
}

double drift_for(const ExperimentConfig& c, const LimitConstants& l) {
  switch (c.functional) {
    case Functional::CountH: return l.drifts.hawkes_drift;
    case Functional::CountI: return l.drifts.immigration_drift;
    case Functional::CountTotal: return l.drifts.hawkes_drift + l.drifts.immigration_drift;
    case Functional::Atom: return l.drifts.per_atom.at(std::size_t(c.atom_index));
    case Functional::CumulativeIntensity:
      if (c.spec.mu0.value)
        throw InvalidParams("cumulative-intensity drift needs mu0 = 0");
      return l.drifts.hawkes_drift;
    case Functional::ShotH: return l.drifts.shot_drift_H;
    case Functional::ShotI: return l.drifts.shot_drift_I;
    case Functional::ShotTotal: return l.drifts.shot_drift_H + l.drifts.shot_drift_I;
  }
  throw InvalidParams("unknown functional");
}

double reference_variance_for(const ExperimentConfig& c, const LimitConstants& l) {
  if (c.reference_variance) return *c.reference_variance;
  switch (c.functional) {
    case Functional::CountH: return l.count_variance_H;
    case Functional::CountI: return c.spec.lambda_I;
    case Functional::CountTotal:
      if (!l.cor315) throw NotStandardForm("total-count reference needs the standard form");
      return l.cor315->total_variance;
    case Functional::Atom: return l.atom_variances.at(std::size_t(c.atom_index));
    case Functional::CumulativeIntensity: return l.sigma_z2;
    case Functional::ShotH:
    case Functional::ShotI:
    case Functional::ShotTotal: {
      if (!l.shot) throw InvalidParams("shot functional needs a shot shape");
      if (c.functional == Functional::ShotH) return l.shot->var_H;
      if (c.functional == Functional::ShotI) return l.shot->var_I;
      return l.shot->total;
    }
  }
  throw InvalidParams("unknown functional");
}

Eigen::ArrayXd replica_values(const ExperimentConfig& c, const PathRecord& path, double T,
                              const Eigen::ArrayXd& grid, double drift,
                              const Drifts& drifts) {
  switch (c.functional) {
    case Functional::CountH:
      return rescale_measure(path, T, [](const Mark&) { return 1.0; }, grid, drift,
                             Origin::Hawkes);
    case Functional::CountI:
      return rescale_measure(path, T, [](const Mark&) { return 1.0; }, grid, drift,
                             Origin::Immigration);
    case Functional::CountTotal:
      return rescale_measure(path, T, [](const Mark&) { return 1.0; }, grid, drift,
                             std::nullopt);
    case Functional::Atom: {
      const Mark target = c.spec.nu_H.atoms().at(std::size_t(c.atom_index)).mark;
      return rescale_measure(path, T,
                             [target](const Mark& u) { return u == target ? 1.0 : 0.0; },
                             grid, drift, Origin::Hawkes);
    }
    case Functional::CumulativeIntensity:
      return rescale_cumulative_intensity(c.spec, path, T, grid, drift);
    case Functional::ShotH:
    case Functional::ShotI:
    case Functional::ShotTotal: {
      if (!c.spec.shot) throw InvalidParams("shot functional needs a shot shape");
      auto [sh, si] = rescale_shot(c.spec, path, *c.spec.shot, T, grid,
                                   drifts.shot_drift_H, drifts.shot_drift_I);
      if (c.functional == Functional::ShotH) return sh;
      if (c.functional == Functional::ShotI) return si;
      return sh + si;
    }
  }
  throw InvalidParams("unknown functional");
}

}  // namespace

Functional functional_from_string(const std::string& name) {
  if (name == "count_H") return Functional::CountH;
  if (name == "count_I") return Functional::CountI;
  if (name == "count_total") return Functional::CountTotal;
  if (name == "atom") return Functional::Atom;
  if (name == "cumulative_intensity") return Functional::CumulativeIntensity;
  if (name == "shot_H") return Functional::ShotH;
  if (name == "shot_I") return Functional::ShotI;
  if (name == "shot_total") return Functional::ShotTotal;
  throw ConfigError("unknown functional: " + name);
}

std::string to_string(Functional f) {
  switch (f) {
    case Functional::CountH: return "count_H";
    case Functional::CountI: return "count_I";
    case Functional::CountTotal: return "count_total";
    case Functional::Atom: return "atom";
    case Functional::CumulativeIntensity: return "cumulative_intensity";
    case Functional::ShotH: return "shot_H";
    case Functional::ShotI: return "shot_I";
    case Functional::ShotTotal: return "shot_total";
  }
  return "?";
}

Eigen::ArrayXd rescale_measure(const PathRecord& path, double T,
                               const std::function<double(const Mark&)>& f,
                               const Eigen::ArrayXd& grid, double drift_rate,
                               std::optional<Origin> origin) {
  if (path.horizon < T * grid[grid.size() - 1] - 1e-12)
    throw OutOfRange("path horizon shorter than T * max grid time");
  const double sqrtT = std::sqrt(T);
  Eigen::ArrayXd out(grid.size());
  double acc = 0.0;
  std::size_t j = 0;
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    const double cutoff = T * grid[g];
    while (j < path.events.size() && path.events[j].time <= cutoff) {
      const Event& e = path.events[j++];
      if (!origin || e.origin == *origin) acc += f(e.mark);
    }
    out[g] = sqrtT * (acc / T - drift_rate * grid[g]);
  }
  return out;
}

Eigen::ArrayXd rescale_cumulative_intensity(const ModelSpec& spec, const PathRecord& path,
                                            double T, const Eigen::ArrayXd& grid,
                                            double drift_rate) {
  if (path.horizon < T * grid[grid.size() - 1] - 1e-12)
    throw OutOfRange("path horizon shorter than T * max grid time");
  const double sqrtT = std::sqrt(T);
  Eigen::ArrayXd out(grid.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g)
    out[g] = sqrtT * (cumulative_intensity(spec, path, T * grid[g]) / T -
                      drift_rate * grid[g]);
  return out;
}

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> rescale_shot(const ModelSpec& spec,
                                                       const PathRecord& path,
                                                       const ShotShape& shot, double T,
                                                       const Eigen::ArrayXd& grid,
                                                       double drift_H, double drift_I) {
  if (path.horizon < T * grid[grid.size() - 1] - 1e-12)
    throw OutOfRange("path horizon shorter than T * max grid time");
  const double sqrtT = std::sqrt(T);
  Eigen::ArrayXd oh(grid.size()), oi(grid.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    const auto [sh, si] = shot_noise_at(spec, path, shot, T * grid[g]);
    oh[g] = sqrtT * (sh / T - drift_H * grid[g]);
    oi[g] = sqrtT * (si / T - drift_I * grid[g]);
  }
  return {oh, oi};
}

std::pair<double, double> ks_normal(const std::vector<double>& samples, double mean0,
                                    double var0) {
  if (var0 <= 0.0) throw BadReference("ks_normal needs var0 > 0");
  if (samples.size() < 2) throw InvalidParams("ks_normal needs at least two samples");
  std::vector<double> x = samples;
  std::sort(x.begin(), x.end());
  const double n = double(x.size());
  const double sd = std::sqrt(var0);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = normal_cdf((x[i] - mean0) / sd);
    d = std::max({d, F - double(i) / n, double(i + 1) / n - F});
  }
  // asymptotic Kolmogorov distribution with the small-n correction
  const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k, sign = -sign)
    p += sign * std::exp(-2.0 * double(k) * double(k) * lam * lam);
  p = std::clamp(2.0 * p, 0.0, 1.0);
  return {d, p};
}

nlohmann::json StatsReport::to_json() const {
  nlohmann::json j;
  j["T"] = T;
  j["grid"] = std::vector<double>(grid.data(), grid.data() + grid.size());
  j["mean"] = std::vector<double>(mean.data(), mean.data() + mean.size());
  j["variance"] = std::vector<double>(variance.data(), variance.data() + variance.size());
  j["std_error"] = std::vector<double>(std_error.data(), std_error.data() + std_error.size());
  auto cov = nlohmann::json::array();
  for (Eigen::Index r = 0; r < covariance.rows(); ++r)
    cov.push_back(std::vector<double>(covariance.row(r).begin(), covariance.row(r).end()));
  j["covariance"] = cov;
  j["ks_stat"] = ks_stat;
  j["ks_p"] = ks_p;
  j["sup_median"] = sup_median;
  j["sup_q90"] = sup_q90;
  j["reference_variance"] = reference_variance;
  j["reference_drift"] = reference_drift;
  j["checks"] = checks;
  j["pass"] = pass;
  return j;
}

void StatsReport::write_csv(std::ostream& os) const {
  os << "t,mean,variance,std_error\n";
  os.precision(17);
  for (Eigen::Index g = 0; g < grid.size(); ++g)
    os << grid[g] << "," << mean[g] << "," << variance[g] << "," << std_error[g] << "\n";
}

nlohmann::json ExperimentResult::to_json() const {
  nlohmann::json j;
  j["pass"] = pass;
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  j["reports"] = arr;
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const LimitConstants& limits) {
  if (config.replicas < 2) throw ConfigError("replicas must be >= 2");
  if (config.grid_points < 1) throw ConfigError("grid_points must be >= 1");
  if (config.T_list.empty()) throw ConfigError("T list must not be empty");
  if (config.mode != "clt" && config.mode != "lln")
    throw ConfigError("mode must be clt or lln");

  Eigen::ArrayXd grid(config.grid_points);
  for (int g = 0; g < config.grid_points; ++g)
    grid[g] = double(g + 1) / double(config.grid_points);

  const double drift = drift_for(config, limits);
  const double ref_var =
      config.mode == "clt" ? reference_variance_for(config, limits) : 0.0;
  const std::size_t R = std::size_t(config.replicas);

  ExperimentResult result;
  for (const double T : config.T_list) {
    std::vector<Eigen::ArrayXd> values(R);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t r = next.fetch_add(1); r < R; r = next.fetch_add(1)) {
        const PathRecord path = simulate_path(config.spec, T, config.seed, r);
        values[r] = replica_values(config, path, T, grid, drift, limits.drifts);
      }
    };
    const unsigned pool = std::max(1u, unsigned(config.threads > 0
                                                    ? config.threads
                                                    : int(std::thread::hardware_concurrency())));
    if (pool <= 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (unsigned i = 0; i < pool; ++i) threads.emplace_back(worker);
      for (auto& th : threads) th.join();
    }

    // aggregation is single-threaded in replica order: byte-stable results
    StatsReport rep;
    rep.T = T;
    rep.grid = grid;
    rep.reference_variance = ref_var;
    rep.reference_drift = drift;
    const auto G = grid.size();
    rep.mean = Eigen::ArrayXd::Zero(G);
    for (std::size_t r = 0; r < R; ++r) rep.mean += values[r];
    rep.mean /= double(R);
    rep.covariance = Eigen::MatrixXd::Zero(G, G);
    for (std::size_t r = 0; r < R; ++r) {
      const Eigen::VectorXd d = (values[r] - rep.mean).matrix();
      rep.covariance += d * d.transpose();
    }
    rep.covariance /= double(R - 1);
    rep.variance = rep.covariance.diagonal().array();
    if ((rep.variance < 0.0).any()) throw Error("negative variance estimate");
    rep.std_error = (rep.variance / double(R)).sqrt();

    std::vector<double> sups(R);
    const double sqrtT = std::sqrt(T);
    for (std::size_t r = 0; r < R; ++r) sups[r] = values[r].abs().maxCoeff() / sqrtT;
    std::sort(sups.begin(), sups.end());
    rep.sup_median = quantile_sorted(sups, 0.5);
    rep.sup_q90 = quantile_sorted(sups, 0.9);

    if (config.mode == "clt") {
      const double v1 = rep.variance[G - 1];
      if (ref_var > 0.0) {
        const bool ok = std::abs(v1 - ref_var) <= config.tol_rel * ref_var;
        rep.checks.push_back(std::string("variance@t=1 ") + (ok ? "pass" : "FAIL") +
                             " (got " + std::to_string(v1) + ", want " +
                             std::to_string(ref_var) + " +-" +
                             std::to_string(100.0 * config.tol_rel) + "%)");
        rep.pass = rep.pass && ok;

        if (R >= 100) {
          std::vector<double> at1(R);
          for (std::size_t r = 0; r < R; ++r) at1[r] = values[r][G - 1];
          std::tie(rep.ks_stat, rep.ks_p) = ks_normal(at1, 0.0, ref_var);
          const bool ks_ok = rep.ks_p > config.ks_pvalue_min;
          rep.checks.push_back(std::string("ks@t=1 ") + (ks_ok ? "pass" : "FAIL") +
                               " (p=" + std::to_string(rep.ks_p) + ")");
          rep.pass = rep.pass && ks_ok;
        }
        if (config.functional == Functional::CumulativeIntensity &&
            config.grid_points % 2 == 0) {
          const double cov = rep.covariance(G / 2 - 1, G - 1);
          const double want = 0.5 * ref_var;
          const bool ok_cov = std::abs(cov - want) <= config.cov_tol_rel * want;
          rep.checks.push_back(std::string("covariance@(0.5,1) ") +
                               (ok_cov ? "pass" : "FAIL") + " (got " +
                               std::to_string(cov) + ", want " + std::to_string(want) + ")");
          rep.pass = rep.pass && ok_cov;
        }
      } else {
        // degenerate limit: variance must collapse with T
        const bool ok = v1 < 0.05;
        rep.checks.push_back(std::string("variance@t=1 -> 0 ") + (ok ? "pass" : "FAIL") +
                             " (got " + std::to_string(v1) + ")");
        rep.pass = rep.pass && ok;
      }
    }
    result.pass = result.pass && rep.pass;
    result.reports.push_back(std::move(rep));
  }

  if (config.mode == "lln" && result.reports.size() >= 2) {
    bool decreasing = true;
    for (std::size_t i = 1; i < result.reports.size(); ++i)
      decreasing = decreasing &&
                   result.reports[i].sup_median < result.reports[i - 1].sup_median;
    result.reports.back().checks.push_back(
        std::string("sup-deviation medians strictly decreasing in T ") +
        (decreasing ? "pass" : "FAIL"));
    result.reports.back().pass = result.reports.back().pass && decreasing;
    result.pass = result.pass && decreasing;
  }
  return result;
}

}  // namespace hawkes
