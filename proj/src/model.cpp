#include "hawkes/model.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace hawkes {

bool operator==(const Mark& a, const Mark& b) {
  return a.label == b.label && a.tag == b.tag && a.values.size() == b.values.size() &&
         (a.values.size() == 0 || (a.values.array() == b.values.array()).all());
}

MarkDistribution MarkDistribution::discrete(std::vector<MarkAtom> atoms) {
  if (atoms.empty()) throw InvalidParams("discrete mark distribution needs atoms");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (a.prob < 0.0) throw InvalidParams("negative atom probability");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidParams("atom probabilities sum to " + std::to_string(total));
  MarkDistribution d;
  d.atoms_ = std::move(atoms);
  return d;
}

MarkDistribution MarkDistribution::point_mass(Mark mark) {
  return discrete({MarkAtom{std::move(mark), 1.0}});
}

MarkDistribution MarkDistribution::sampled(Sampler sampler, std::uint64_t seed,
                                           std::size_t integration_samples) {
  if (!sampler) throw InvalidParams("null mark sampler");
  if (integration_samples < 2) throw InvalidParams("integration_samples < 2");
  MarkDistribution d;
  d.sampler_ = std::move(sampler);
  d.seed_ = seed;
  d.samples_ = integration_samples;
  return d;
}

double MarkDistribution::expect(const std::function<double(const Mark&)>& f) const {
  if (is_discrete()) {
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.prob * f(a.mark);
    return acc;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < samples_; ++i) acc += f(sampler_(seed_, i));
  return acc / double(samples_);
}

Mark MarkDistribution::sample(CounterRng& rng) const {
  if (is_discrete()) {
    double u = rng.uniform();
    for (const auto& a : atoms_) {
      if (u < a.prob) return a.mark;
      u -= a.prob;
    }
    return atoms_.back().mark;
  }
  // a fresh random key makes the pure sampler an i.i.d. draw
  return sampler_(rng.next_u64(), 0);
}

Mark MarkDistribution::integration_sample(std::uint64_t index) const {
  if (is_discrete()) throw InvalidParams("integration_sample on discrete distribution");
  return sampler_(seed_, index);
}

Kernel exponential_kernel(double a, double b) {
  if (a < 0.0 || b <= 0.0) throw InvalidKernel("exponential kernel needs a >= 0, b > 0");
  Kernel k;
  k.phi = [a, b](double t, const Mark&) { return t < 0.0 ? 0.0 : a * std::exp(-b * t); };
  k.majorant = k.phi;  // decreasing
  k.integral = [a, b](double t, const Mark&) {
    return t <= 0.0 ? 0.0 : a / b * (-std::expm1(-b * t));
  };
  k.l1 = [a, b](const Mark&) { return a / b; };
  k.sup = [a](const Mark&) { return a; };
  k.exp_rate = b;
  k.scale = [a](const Mark&) { return a; };
  return k;
}

Kernel power_kernel(double a, double b, double p) {
  if (a < 0.0 || b <= 0.0 || p <= 1.0) throw InvalidKernel("power kernel needs a >= 0, b > 0, p > 1");
  Kernel k;
  k.phi = [a, b, p](double t, const Mark&) {
    return t < 0.0 ? 0.0 : a * std::pow(1.0 + b * t, -p);
  };
  k.majorant = k.phi;  // decreasing
  k.integral = [a, b, p](double t, const Mark&) {
    return t <= 0.0 ? 0.0 : a / (b * (p - 1.0)) * (1.0 - std::pow(1.0 + b * t, 1.0 - p));
  };
  k.l1 = [a, b, p](const Mark&) { return a / (b * (p - 1.0)); };
  k.sup = [a](const Mark&) { return a; };
  return k;
}

Kernel boxcar_kernel(double a, double y) {
  if (a < 0.0 || y <= 0.0) throw InvalidKernel("boxcar kernel needs a >= 0, y > 0");
  Kernel k;
  k.phi = [a, y](double t, const Mark&) { return (t >= 0.0 && t < y) ? a : 0.0; };
  k.majorant = k.phi;  // non-increasing
  k.integral = [a, y](double t, const Mark&) { return t <= 0.0 ? 0.0 : a * std::min(t, y); };
  k.l1 = [a, y](const Mark&) { return a * y; };
  k.sup = [a](const Mark&) { return a; };
  return k;
}

Kernel scale_kernel_by_label(const Kernel& base, std::vector<double> scales) {
  for (double s : scales)
    if (s < 0.0) throw InvalidKernel("negative kernel scale");
  auto at = [scales](const Mark& u) -> double {
    if (u.label < 0 || std::size_t(u.label) >= scales.size())
      throw InvalidKernel("mark label outside kernel scale table");
    return scales[std::size_t(u.label)];
  };
  Kernel k;
  k.phi = [at, f = base.phi](double t, const Mark& u) { return at(u) * f(t, u); };
  k.majorant = [at, f = base.majorant](double t, const Mark& u) { return at(u) * f(t, u); };
  k.integral = [at, f = base.integral](double t, const Mark& u) { return at(u) * f(t, u); };
  k.l1 = [at, f = base.l1](const Mark& u) { return at(u) * f(u); };
  k.sup = [at, f = base.sup](const Mark& u) { return at(u) * f(u); };
  k.exp_rate = base.exp_rate;
  if (base.exp_rate > 0.0)
    k.scale = [at, f = base.scale](const Mark& u) { return at(u) * f(u); };
  return k;
}

ShotShape unit_shot() {
  ShotShape s;
  s.psi = [](double t, const Mark&) { return t >= 0.0 ? 1.0 : 0.0; };
  s.psi_inf = [](const Mark&) { return 1.0; };
  return s;
}

ShotShape exp_saturating_shot(double c, double b) {
  if (b <= 0.0) throw InvalidParams("exp_saturating shot needs b > 0");
  ShotShape s;
  s.psi = [c, b](double t, const Mark&) { return t < 0.0 ? 0.0 : c * (-std::expm1(-b * t)); };
  s.psi_inf = [c](const Mark&) { return c; };
  return s;
}

ShotShape boxcar_shot(double c, double y) {
  if (y <= 0.0) throw InvalidParams("boxcar shot needs y > 0");
  ShotShape s;
  s.psi = [c, y](double t, const Mark&) { return (t >= 0.0 && t < y) ? c : 0.0; };
  s.psi_inf = [](const Mark&) { return 0.0; };
  return s;
}

std::uint64_t ModelSpec::hash() const {
  // identity fingerprint for PathRecord provenance
  std::uint64_t h = 1469598103934665603ull;
  auto fold = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (char c : name) fold(std::uint64_t(std::uint8_t(c)));
  auto fold_d = [&](double x) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    fold(bits);
  };
  fold_d(lambda_I);
  fold_d(alpha);
  fold_d(theta0);
  fold_d(theta1);
  return h;
}

double branching_ratio(const ModelSpec& spec) {
  const double m = spec.nu_H.expect([&](const Mark& u) {
    const double v = spec.kernel.l1(u);
    if (!std::isfinite(v)) throw InvalidKernel("non-finite ||phi(u)||_{L^1}");
    return v;
  });
  return m;
}

double mean_kernel_at(const ModelSpec& spec, char which, double t) {
  const auto& closed = (which == 'H') ? spec.phi_mean_H : spec.phi_mean_I;
  if (closed) return closed(t);
  const auto& dist = (which == 'H') ? spec.nu_H : spec.nu_I;
  if (dist.is_discrete())
    return dist.expect([&](const Mark& u) { return spec.kernel.phi(t, u); });
  // fall back to a reduced fixed-seed average; per-grid-point integration at
  // the full sample count would dominate the resolvent solve
  const std::size_t m = std::min<std::size_t>(dist.integration_samples(), 2000);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) acc += spec.kernel.phi(t, dist.integration_sample(i));
  return acc / double(m);
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  os << "branching=" << branching << " stable=" << (stable ? "pass" : "fail")
     << " C1=" << (c1_ok ? "pass" : "fail") << " C2=" << (c2_ok ? "pass" : "fail")
     << " params=" << (params_ok ? "pass" : "fail") << "\n";
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  return os.str();
}

ValidationReport validate(const ModelSpec& spec) {
  ValidationReport r;
  r.branching = branching_ratio(spec);
  r.stable = spec.lambda_I > 0.0 && r.branching < 1.0;

  const double a2 = 2.0 * spec.alpha;
  auto c1_integrand = [&](const Mark& u) {
    return std::pow(spec.kernel.sup(u), a2) + std::pow(spec.kernel.l1(u), a2);
  };
  const double c1H = spec.nu_H.expect(c1_integrand);
  const double c1I = spec.nu_I.expect(c1_integrand);
  r.c1_ok = std::isfinite(c1H) && std::isfinite(c1I);

  if (spec.shot) {
    // probe grid only; the supremum over all t is not checkable numerically
    for (double t : {0.0, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
      auto m2a = [&](const Mark& u) { return std::pow(std::abs(spec.shot->psi(t, u)), a2); };
      if (!std::isfinite(spec.nu_H.expect(m2a)) || !std::isfinite(spec.nu_I.expect(m2a))) {
        r.c2_ok = false;
        break;
      }
    }
    r.warnings.push_back("shot moment condition probed on a finite grid only");
  }

  r.params_ok = spec.alpha > 1.0 &&
                spec.theta0 > spec.alpha / (2.0 * spec.alpha - 2.0) &&
                spec.theta1 > (2.0 * spec.alpha - 1.0) / (2.0 * spec.alpha - 2.0);
  if (!spec.nu_H.is_discrete() || !spec.nu_I.is_discrete())
    r.warnings.push_back("sampled-mark moment checks are fixed-seed Monte Carlo estimates");
  return r;
}

}  // namespace hawkes
