#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

/// A point of the mark space. `label` carries discrete identities (atom
/// index, offspring count), `tag` a secondary discrete coordinate
/// (e.g. origin class), `values` any real components (e.g. life lengths).
struct Mark {
  int label = 0;
  int tag = 0;
  Eigen::VectorXd values;
};

bool operator==(const Mark& a, const Mark& b);

struct MarkAtom {
  Mark mark;
  double prob = 0.0;
};

/// nu_H or nu_I. Either a finite list of atoms or a pure sampler
/// (seed, index) -> Mark integrated by fixed-seed Monte Carlo.
class MarkDistribution {
 public:
  using Sampler = std::function<Mark(std::uint64_t seed, std::uint64_t index)>;

  static MarkDistribution discrete(std::vector<MarkAtom> atoms);
  static MarkDistribution point_mass(Mark mark);
  static MarkDistribution sampled(Sampler sampler, std::uint64_t seed,
                                  std::size_t integration_samples = 100000);

  bool is_discrete() const { return !atoms_.empty(); }
  const std::vector<MarkAtom>& atoms() const { return atoms_; }
  std::size_t integration_samples() const { return samples_; }

  /// nu-expectation of f: exact weighted sum over atoms, or the fixed-seed
  /// M-sample average for sampled distributions.
  double expect(const std::function<double(const Mark&)>& f) const;

  /// One draw, consuming randomness from rng.
  Mark sample(CounterRng& rng) const;

  /// The index-th integration sample (sampled distributions only).
  Mark integration_sample(std::uint64_t index) const;

 private:
  std::vector<MarkAtom> atoms_;
  Sampler sampler_;
  std::uint64_t seed_ = 0;
  std::size_t samples_ = 0;
};

/// Excitation kernel phi(t,u) with its exact non-increasing majorant
/// M(t,u) = sup_{s>=t} phi(s,u), closed-form norms, and the running
/// integral used for exact cumulative-intensity evaluation.
struct Kernel {
  std::function<double(double, const Mark&)> phi;
  std::function<double(double, const Mark&)> majorant;
  std::function<double(double, const Mark&)> integral;  // \int_0^t phi(s,u)ds
  std::function<double(const Mark&)> l1;                // ||phi(u)||_{L^1}
  std::function<double(const Mark&)> sup;               // ||phi(u)||_inf

  // When > 0, phi(t,u) = scale(u)*exp(-exp_rate*t); enables O(1) intensity
  // state updates in the simulator.
  double exp_rate = 0.0;
  std::function<double(const Mark&)> scale;
};

/// phi(t,u) = a*exp(-b*t), mark-independent.
Kernel exponential_kernel(double a, double b);
/// phi(t,u) = a*(1+b*t)^{-p}, p > 1.
Kernel power_kernel(double a, double b, double p);
/// phi(t,u) = a*1_{t<y}.
Kernel boxcar_kernel(double a, double y);
/// phi(t,u) = scales[u.label] * base(t,u); base must be mark-independent.
Kernel scale_kernel_by_label(const Kernel& base, std::vector<double> scales);

/// Shot shape psi(t,u), cadlag in t with finite limit psi(inf,u).
struct ShotShape {
  std::function<double(double, const Mark&)> psi;
  std::function<double(const Mark&)> psi_inf;

  double tail(double t, const Mark& u) const { return psi_inf(u) - psi(t, u); }
};

/// psi = 1_{t>=0}: counting reduction.
ShotShape unit_shot();
/// psi = c*(1-exp(-b*t)), psi_inf = c.
ShotShape exp_saturating_shot(double c, double b);
/// psi = c*1_{t<y}, compact support, psi_inf = 0.
ShotShape boxcar_shot(double c, double y);

/// Deterministic exogenous intensity mu0 with declared norms.
struct Exogenous {
  std::function<double(double)> value;  // null => identically 0
  double sup = 0.0;
  double l1 = 0.0;
  double l2alpha = 0.0;

  double at(double t) const { return value ? value(t) : 0.0; }
};

struct ModelSpec {
  std::string name;
  double lambda_I = 1.0;
  MarkDistribution nu_I;
  MarkDistribution nu_H;
  Kernel kernel;
  Exogenous mu0;
  std::optional<ShotShape> shot;

  // Declared moment parameters (alpha > 1, theta0 > a/(2a-2),
  // theta1 > (2a-1)/(2a-2)).
  double alpha = 2.0;
  double theta0 = 1.1;
  double theta1 = 1.6;

  // Optional closed forms for the mean kernels phi_i(t) = nu_i[phi(t,.)];
  // set by builders when known, else computed from the distribution.
  std::function<double(double)> phi_mean_H;
  std::function<double(double)> phi_mean_I;

  std::uint64_t hash() const;
};

/// nu_H-expectation of ||phi(u)||_{L^1}; < 1 is the stability condition.
double branching_ratio(const ModelSpec& spec);

/// Mean kernel phi_i(t) under the named distribution ('H' or 'I').
double mean_kernel_at(const ModelSpec& spec, char which, double t);

struct ValidationReport {
  double branching = 0.0;
  bool stable = false;
  bool c1_ok = false;       // nu_i(||phi||_inf^{2a} + ||phi||_{L1}^{2a}) finite
  bool c2_ok = true;        // sup_t nu_i(|psi(t,.)|^{2a}) finite on probe grid
  bool params_ok = false;   // alpha/theta constraints
  std::vector<std::string> warnings;

  bool pass() const { return stable && c1_ok && c2_ok && params_ok; }
  std::string to_string() const;
};

/// Checks the checkable parts of the standing moment conditions.
/// Report-only; grid-probed checks are advisory and flagged as warnings.
ValidationReport validate(const ModelSpec& spec);

}  // namespace hawkes
