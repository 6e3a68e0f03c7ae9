// Acceptance gate: one line per criterion, tolerances pinned below.
// Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hawkes/limits.hpp"
#include "hawkes/microbes.hpp"
#include "hawkes/montecarlo.hpp"
#include "hawkes/resolvent.hpp"

using namespace hawkes;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void line(const char* id, const std::string& name, bool pass, bool counted = true) {
  std::printf("[%5s] %-62s %s\n", id, name.c_str(), pass ? "PASS" : "FAIL");
  std::fflush(stdout);
  if (counted && !pass) ++failures;
}

void fail_with(const char* id, const std::string& name, const std::exception& e) {
  line(id, name + " (" + e.what() + ")", false);
}

ModelSpec unmarked(double a, double b, double lambda = 1.0) {
  ModelSpec spec;
  spec.lambda_I = lambda;
  spec.kernel = exponential_kernel(a, b);
  spec.nu_H = MarkDistribution::point_mass(Mark{});
  spec.nu_I = spec.nu_H;
  return spec;
}

ModelSpec two_atom() {
  ModelSpec spec;
  spec.lambda_I = 1.0;
  Mark m0, m1;
  m1.label = 1;
  spec.nu_H = MarkDistribution::discrete({{m0, 0.5}, {m1, 0.5}});
  spec.nu_I = spec.nu_H;
  spec.kernel = scale_kernel_by_label(exponential_kernel(1.0, 1.0), {0.3, 0.7});
  return spec;
}

ExperimentConfig experiment(const ModelSpec& spec, Functional f, double T, int replicas,
                            std::uint64_t seed) {
  ExperimentConfig c;
  c.spec = spec;
  c.functional = f;
  c.T_list = {T};
  c.replicas = replicas;
  c.grid_points = 20;
  c.seed = seed;
  c.threads = 0;  // hardware pool; results are thread-count independent
  return c;
}

const ResolventTable kNoTable{};

double exp_resolvent_error(double a, double b, double h, double horizon) {
  const auto n = Eigen::Index(std::llround(horizon / h));
  const GridFunction phi = tabulate(h, n, [&](double t) { return a * std::exp(-b * t); });
  const GridFunction R = solve_resolvent(phi);
  double err = 0.0;
  for (Eigen::Index i = 0; i <= n; ++i)
    err = std::max(err, std::abs(R.values[i] - a * std::exp(-(b - a) * R.time_at(i))));
  return err;
}

void criterion1() {
  const std::string name = "resolvent oracle a e^{-(b-a)t}, h=1e-3, second order";
  try {
    bool ok = true;
    for (double a : {0.5, 0.9}) {
      const double e_h = exp_resolvent_error(a, 1.0, 1e-3, 40.0);
      const double e_2h = exp_resolvent_error(a, 1.0, 2e-3, 40.0);
      ok = ok && e_h < 1e-5 && e_2h / e_h >= 3.5;
    }
    line("1", name, ok);
  } catch (const std::exception& e) {
    fail_with("1", name, e);
  }
}

void criterion2() {
  const std::string name = "L1 identities ||R|| = ||phi||/(1-||phi||) within 1e-3";
  try {
    bool ok = true;
    for (double a : {0.3, 0.5, 0.9}) {
      const ResolventTable t = build_table(unmarked(a, 1.0), 1e-3, 40.0);
      const double want = a / (1.0 - a);
      ok = ok && std::abs(t.l1_RH - want) <= 1e-3 * std::max(1.0, want) &&
           std::abs(t.l1_RI - want) <= 1e-3 * std::max(1.0, want);
    }
    ModelSpec power = unmarked(0.5, 1.0);
    power.kernel = power_kernel(0.75, 1.0, 2.5);  // mass 0.5
    const ResolventTable t = build_table(power, 2e-3, 400.0);
    ok = ok && std::abs(t.l1_RH - 1.0) <= 1e-3;
    line("2", name, ok);
  } catch (const std::exception& e) {
    fail_with("2", name, e);
  }
}

void criterion3() {
  const std::string name = "mean intensity and compensator within 4 SE (R=2000, T=200)";
  try {
    const ModelSpec spec = unmarked(0.5, 1.0);
    const ResolventTable table = build_table(spec, 1e-3, 200.0);
    const int R = 2000, probes = 20;
    const double T = 200.0;
    std::vector<double> sum(probes, 0.0), sumsq(probes, 0.0);
    double csum = 0.0, csumsq = 0.0;
    for (int r = 0; r < R; ++r) {
      const PathRecord p = simulate_path(spec, T, 2024, std::uint64_t(r));
      for (int i = 0; i < probes; ++i) {
        const double z = intensity_at(spec, p, double(i + 1) * 10.0);
        sum[std::size_t(i)] += z;
        sumsq[std::size_t(i)] += z * z;
      }
      const double c = double(p.count(Origin::Hawkes)) - cumulative_intensity(spec, p, T);
      csum += c;
      csumsq += c * c;
    }
    bool ok = true;
    for (int i = 0; i < probes; ++i) {
      const double mean = sum[std::size_t(i)] / R;
      const double se = std::sqrt((sumsq[std::size_t(i)] / R - mean * mean) / R);
      ok = ok && std::abs(mean - table.meanZ.at(double(i + 1) * 10.0)) <= 4.0 * se;
    }
    const double cmean = csum / R;
    const double cse = std::sqrt((csumsq / R - cmean * cmean) / R);
    ok = ok && std::abs(cmean) <= 4.0 * cse;
    line("3", name, ok);
  } catch (const std::exception& e) {
    fail_with("3", name, e);
  }
}

void criterion4() {
  const std::string name = "FLLN sup deviation strictly decreasing, T in {50,200,800}";
  try {
    const LimitConstants limits = limit_constants(unmarked(0.5, 1.0), kNoTable);
    ExperimentConfig counts = experiment(unmarked(0.5, 1.0), Functional::CountH, 800.0, 200, 41);
    counts.T_list = {50.0, 200.0, 800.0};
    counts.mode = "lln";
    ModelSpec with_shot = unmarked(0.5, 1.0);
    with_shot.shot = unit_shot();
    ExperimentConfig shots = experiment(with_shot, Functional::ShotH, 800.0, 200, 42);
    shots.T_list = {50.0, 200.0, 800.0};
    shots.mode = "lln";
    const LimitConstants shot_limits = limit_constants(with_shot, kNoTable);
    const bool ok =
        run_experiment(counts, limits).pass && run_experiment(shots, shot_limits).pass;
    line("4", name, ok);
  } catch (const std::exception& e) {
    fail_with("4", name, e);
  }
}

void criterion5() {
  const std::string name =
      "cumulative-intensity CLT: var 2.0 +-10%, cov 1.0 +-15%, KS p>0.01";
  try {
    const ModelSpec spec = unmarked(0.5, 1.0);
    const LimitConstants limits = limit_constants(spec, kNoTable);
    bool ok = std::abs(limits.sigma_z2 - 2.0) < 1e-12;
    ExperimentConfig c = experiment(spec, Functional::CumulativeIntensity, 500.0, 10000, 51);
    c.tol_rel = 0.10;
    c.cov_tol_rel = 0.15;
    c.ks_pvalue_min = 0.01;
    const ExperimentResult res = run_experiment(c, limits);
    line("5", name, ok && res.pass);
    const StatsReport& rep = res.reports.at(0);
    const auto g = rep.grid.size() - 1;
    const bool moments_ok = std::abs(rep.variance[g] - 2.0) <= 0.2 &&
                            std::abs(rep.covariance(g / 2, g) - 1.0) <= 0.15;
    line("5~", "  variance and covariance sub-checks alone", ok && moments_ok,
         /*counted=*/false);
  } catch (const std::exception& e) {
    fail_with("5", name, e);
  }
}

void criterion6() {
  const std::string name = "point-measure CLT: total var 8.0, per-atom var/drift";
  try {
    const ModelSpec spec = unmarked(0.5, 1.0);
    const LimitConstants limits = limit_constants(spec, kNoTable);
    bool ok = limits.cor315 && std::abs(limits.cor315->total_variance - 8.0) < 1e-12;
    ExperimentConfig total = experiment(spec, Functional::CountTotal, 500.0, 10000, 61);
    total.tol_rel = 0.10;
    total.ks_pvalue_min = -1.0;  // KS reported, not gated here
    ok = ok && run_experiment(total, limits).pass;

    const ModelSpec atoms = two_atom();
    const LimitConstants atom_limits = limit_constants(atoms, kNoTable);
    ok = ok && std::abs(atom_limits.atom_variances.at(0) - 1.38) < 1e-9 &&
         std::abs(atom_limits.atom_variances.at(1) - 1.78) < 1e-9;
    for (int k = 0; k < 2; ++k) {
      ExperimentConfig c =
          experiment(atoms, Functional::Atom, 1600.0, 2000, 62 + std::uint64_t(k));
      c.atom_index = k;
      c.tol_rel = 0.10;
      c.ks_pvalue_min = -1.0;
      const ExperimentResult res = run_experiment(c, atom_limits);
      const StatsReport& rep = res.reports.at(0);
      const auto g = rep.grid.size() - 1;
      ok = ok && res.pass && std::abs(rep.mean[g]) <= 3.0 * rep.std_error[g];
    }
    line("6", name, ok);
  } catch (const std::exception& e) {
    fail_with("6", name, e);
  }
}

void criterion7() {
  const std::string name = "shot-noise CLT: saturating psi +-10%, compact psi -> 0";
  try {
    ModelSpec spec = unmarked(0.5, 1.0);
    spec.shot = exp_saturating_shot(1.0, 1.0);  // psi = 1 - e^{-t}
    const LimitConstants limits = limit_constants(spec, kNoTable);
    ExperimentConfig c = experiment(spec, Functional::ShotTotal, 500.0, 10000, 71);
    c.tol_rel = 0.10;
    c.ks_pvalue_min = -1.0;  // KS reported, not gated here
    bool ok = run_experiment(c, limits).pass;

    ModelSpec compact = unmarked(0.5, 1.0);
    compact.shot = boxcar_shot(1.0, 1.0);
    const LimitConstants compact_limits = limit_constants(compact, kNoTable);
    ExperimentConfig cc = experiment(compact, Functional::ShotTotal, 500.0, 2000, 72);
    ok = ok && run_experiment(cc, compact_limits).pass;  // checks var@t=1 < 0.05
    line("7", name, ok);
  } catch (const std::exception& e) {
    fail_with("7", name, e);
  }
}

void criterion8() {
  MicrobeParams params;
  params.gamma_H = params.gamma_I = 0.5;
  params.life_H = params.life_I = LifeLaw::exponential(1.0);

  const std::string progeny_name = "microbes: progeny drift 2, MC total variance 8.0 +-10%";
  try {
    const ProgenyConstants pg = progeny_constants(params);
    bool ok = std::abs(pg.drift - 2.0) < 1e-9;
    const ModelSpec model = build_model(params);
    const LimitConstants limits = limit_constants(model, kNoTable);
    ExperimentConfig c = experiment(model, Functional::CountTotal, 500.0, 4000, 81);
    c.tol_rel = 0.10;
    c.ks_pvalue_min = -1.0;      // KS reported, not gated here
    c.reference_variance = 8.0;  // pinned target for this criterion
    ok = ok && run_experiment(c, limits).pass;
    line("8", progeny_name, ok);

    ExperimentConfig alt = c;
    alt.reference_variance = pg.total_variance;  // closed form, = 10.0 here
    line("8~", "  same run against the closed-form progeny variance",
         run_experiment(alt, limits).pass, /*counted=*/false);
  } catch (const std::exception& e) {
    fail_with("8", progeny_name, e);
  }

  const std::string popint_name =
      "microbes: population integral, 1e-6 identity and MC +-10%";
  try {
    MicrobeParams pi = params;
    pi.toxin = ToxinFamily::population_integral();
    const ProgenyConstants constants = population_integral_constants(pi);
    const ModelSpec model = build_model(pi);
    const LimitConstants limits = limit_constants(model, kNoTable);
    bool ok = limits.shot &&
              std::abs(constants.total_variance - limits.shot->total) <= 1e-6;
    ExperimentConfig c = experiment(model, Functional::ShotTotal, 400.0, 3000, 82);
    c.tol_rel = 0.10;
    c.ks_pvalue_min = -1.0;
    ok = ok && run_experiment(c, limits).pass;
    line("8b", popint_name, ok);
  } catch (const std::exception& e) {
    fail_with("8b", popint_name, e);
  }
}

void criterion9() {
  const std::string name = "power-kernel resolvent tail slope <= -1.2";
  try {
    ModelSpec spec = unmarked(0.5, 1.0);
    spec.kernel = power_kernel(0.75, 1.0, 2.5);
    const auto n = Eigen::Index(std::llround(1000.0 / 0.02));
    const GridFunction phi =
        tabulate(0.02, n, [&](double t) { return spec.kernel.phi(t, Mark{}); });
    const TailSummary s = l1_and_tail(solve_resolvent(phi), spec.theta0);
    line("9", name, s.tail_fit <= -1.2 && s.tail_fit > -3.0);
  } catch (const std::exception& e) {
    fail_with("9", name, e);
  }
}

void criterion10(const std::string& cli) {
  const std::string name = "verify runs byte-identical across repeats and thread counts";
  if (cli.empty()) {
    line("10", name + " (no CLI path given)", false);
    return;
  }
  try {
    const fs::path dir = fs::temp_directory_path() / "hawkes_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "config.json";
    {
      std::ofstream os(cfg);
      os << R"({"model": {"kernel": {"type": "exponential", "a": 0.5, "b": 1.0}},
                "experiment": {"functional": "count_H", "T": [50], "replicas": 60,
                               "grid_points": 8, "seed": 12, "tol_rel": 10.0}})";
    }
    auto run = [&](const std::string& out, int threads) {
      const std::string cmd = "\"" + cli + "\" verify-clt --config \"" + cfg.string() +
                              "\" --out \"" + (dir / out).string() + "\" --threads " +
                              std::to_string(threads) + " > /dev/null 2>&1";
      return std::system(cmd.c_str()) == 0;
    };
    auto slurp = [&](const std::string& out, const char* file) {
      std::ifstream is(dir / out / file, std::ios::binary);
      std::ostringstream ss;
      ss << is.rdbuf();
      return ss.str();
    };
    bool ok = run("a", 2) && run("b", 4) && run("c", 2);
    for (const char* file : {"report.json", "report_T50.csv"}) {
      const std::string a = slurp("a", file);
      ok = ok && !a.empty() && a == slurp("b", file) && a == slurp("c", file);
    }
    fs::remove_all(dir);
    line("10", name, ok);
  } catch (const std::exception& e) {
    fail_with("10", name, e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10(cli);
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures;
}
