#include "hawkes/limits.hpp"

#include <cmath>

namespace hawkes {

namespace {

// Exact L1 masses via the renewal identities ||R_H|| = m/(1-m) and
// ||R_I|| = ||phi_I||/(1-m); the grid table is cross-checked against the
// same identities elsewhere, so every constant here is closed-form algebra.
struct Masses {
  double m;      // branching ratio nu_H(||phi(u)||)
  double factor; // 1/(1-m)
  double l1_RH;
  double l1_RI;
};

Masses masses(const ModelSpec& spec) {
  const double m = branching_ratio(spec);
  if (m >= 1.0) throw Unstable("||phi_H||_{L^1} >= 1");
  Masses out;
  out.m = m;
  out.factor = 1.0 / (1.0 - m);
  out.l1_RH = m * out.factor;
  out.l1_RI = spec.nu_I.expect(spec.kernel.l1) * out.factor;
  return out;
}

// ||R(u)||_{L^1} = ||phi(u)||_{L^1} / (1-m), Sampled and Discrete alike.
std::function<double(const Mark&)> mark_R_l1(const ModelSpec& spec, double factor) {
  return [l1 = spec.kernel.l1, factor](const Mark& u) { return factor * l1(u); };
}

bool standard_form(const ModelSpec& spec) {
  if (spec.mu0.value) return false;
  if (!spec.nu_H.is_discrete() || !spec.nu_I.is_discrete()) return false;
  const auto& a = spec.nu_H.atoms();
  const auto& b = spec.nu_I.atoms();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i].mark == b[i].mark) || a[i].prob != b[i].prob) return false;
  return true;
}

}  // namespace

Drifts lln_drifts(const ModelSpec& spec, const ResolventTable& table) {
  (void)table;
  const Masses ms = masses(spec);
  Drifts d;
  d.hawkes_drift = spec.lambda_I * ms.l1_RI;
  d.immigration_drift = spec.lambda_I;
  if (spec.shot) {
    d.shot_drift_H = d.hawkes_drift * spec.nu_H.expect(spec.shot->psi_inf);
    d.shot_drift_I = spec.lambda_I * spec.nu_I.expect(spec.shot->psi_inf);
  }
  if (spec.nu_H.is_discrete())
    for (const auto& atom : spec.nu_H.atoms()) d.per_atom.push_back(d.hawkes_drift * atom.prob);
  return d;
}

double sigma_z2(const ModelSpec& spec, const ResolventTable& table) {
  (void)table;
  const Masses ms = masses(spec);
  auto l1sq = [&](const Mark& u) {
    const double v = spec.kernel.l1(u);
    return v * v;
  };
  return spec.lambda_I * ms.factor * ms.factor *
         (ms.l1_RI * spec.nu_H.expect(l1sq) + spec.nu_I.expect(l1sq));
}

double measure_clt_variance(const ModelSpec& spec, const ResolventTable& table,
                            const std::function<double(const Mark&)>& f) {
  (void)table;
  const Masses ms = masses(spec);
  const auto R = mark_R_l1(spec, ms.factor);
  const double nu_f = spec.nu_H.expect(f);
  const double hterm = spec.nu_H.expect([&](const Mark& u) {
    const double v = f(u) + nu_f * R(u);
    return v * v;
  });
  const double iterm = spec.nu_I.expect([&](const Mark& u) {
    const double r = R(u);
    return r * r;
  });
  return spec.lambda_I * ms.l1_RI * hterm + spec.lambda_I * nu_f * nu_f * iterm;
}

ShotVariances shot_clt_variances(const ModelSpec& spec, const ResolventTable& table,
                                 const ShotShape& shot) {
  (void)table;
  const Masses ms = masses(spec);
  const auto R = mark_R_l1(spec, ms.factor);
  const double psiH_inf = spec.nu_H.expect(shot.psi_inf);
  auto lifted_sq = [&](const Mark& u) {
    const double v = shot.psi_inf(u) + psiH_inf * R(u);
    return v * v;
  };
  ShotVariances out;
  out.var_I = spec.lambda_I * spec.nu_I.expect([&](const Mark& u) {
    const double v = shot.psi_inf(u);
    return v * v;
  });
  out.var_H_white = spec.lambda_I * ms.l1_RI * spec.nu_H.expect(lifted_sq);
  const double iR2 = spec.nu_I.expect([&](const Mark& u) {
    const double r = R(u);
    return r * r;
  });
  out.var_H = out.var_H_white + spec.lambda_I * psiH_inf * psiH_inf * iR2;
  out.var_I_lifted = spec.lambda_I * spec.nu_I.expect(lifted_sq);
  out.total = out.var_H_white + out.var_I_lifted;
  return out;
}

Corollary315 corollary315(const ModelSpec& spec, const ResolventTable& table) {
  if (!standard_form(spec))
    throw NotStandardForm("corollary315 needs nu_I = nu_H (discrete) and mu0 = 0");
  const Masses ms = masses(spec);
  const double lambda = spec.lambda_I;
  const auto R = mark_R_l1(spec, ms.factor);

  Corollary315 c;
  c.coef_I = std::sqrt(lambda);
  c.coef_H = std::sqrt(lambda * ms.l1_RH);
  c.sigma_z = std::sqrt(sigma_z2(spec, table));

  const double nuH_R = spec.nu_H.expect(R);
  const double nuI_R = spec.nu_I.expect(R);
  if (c.sigma_z > 0.0) {
    c.cross_IZ = lambda * nuI_R / (c.coef_I * c.sigma_z);
    c.cross_HZ = c.coef_H > 0.0 ? lambda * ms.l1_RI * nuH_R / (c.coef_H * c.sigma_z) : 0.0;
    c.printed_cross_IZ = std::sqrt(lambda) / (c.sigma_z * (1.0 - ms.m));
    c.printed_cross_HZ =
        std::sqrt(lambda) * std::sqrt(ms.m) / (c.sigma_z * std::pow(1.0 - ms.m, 1.5));
  }

  auto one_plus_R_sq = [&](const Mark& u) {
    const double v = 1.0 + R(u);
    return v * v;
  };
  c.total_variance = lambda * ms.l1_RI * spec.nu_H.expect(one_plus_R_sq) +
                     lambda * spec.nu_I.expect(one_plus_R_sq);
  return c;
}

LimitConstants limit_constants(const ModelSpec& spec, const ResolventTable& table) {
  LimitConstants c;
  c.drifts = lln_drifts(spec, table);
  c.sigma_z2 = sigma_z2(spec, table);
  c.count_variance_H = measure_clt_variance(spec, table, [](const Mark&) { return 1.0; });
  if (spec.nu_H.is_discrete()) {
    const auto& atoms = spec.nu_H.atoms();
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const Mark target = atoms[k].mark;
      c.atom_variances.push_back(measure_clt_variance(
          spec, table, [target](const Mark& u) { return u == target ? 1.0 : 0.0; }));
    }
  }
  if (spec.shot) c.shot = shot_clt_variances(spec, table, *spec.shot);
  try {
    c.cor315 = corollary315(spec, table);
  } catch (const NotStandardForm&) {
  }
  return c;
}

nlohmann::json to_json(const LimitConstants& c) {
  nlohmann::json j;
  j["hawkes_drift"] = c.drifts.hawkes_drift;
  j["immigration_drift"] = c.drifts.immigration_drift;
  j["shot_drift_H"] = c.drifts.shot_drift_H;
  j["shot_drift_I"] = c.drifts.shot_drift_I;
  for (std::size_t k = 0; k < c.drifts.per_atom.size(); ++k)
    j["drift_atom_" + std::to_string(k)] = c.drifts.per_atom[k];
  j["sigma_Z2"] = c.sigma_z2;
  j["count_variance_H"] = c.count_variance_H;
  for (std::size_t k = 0; k < c.atom_variances.size(); ++k)
    j["variance_atom_" + std::to_string(k)] = c.atom_variances[k];
  if (c.shot) {
    j["shot_var_I"] = c.shot->var_I;
    j["shot_var_H"] = c.shot->var_H;
    j["shot_var_H_white"] = c.shot->var_H_white;
    j["shot_var_I_lifted"] = c.shot->var_I_lifted;
    j["shot_var_total"] = c.shot->total;
  }
  if (c.cor315) {
    j["cor315_coef_I"] = c.cor315->coef_I;
    j["cor315_coef_H"] = c.cor315->coef_H;
    j["cor315_sigma_Z"] = c.cor315->sigma_z;
    j["cor315_cross_IZ"] = c.cor315->cross_IZ;
    j["cor315_cross_HZ"] = c.cor315->cross_HZ;
    j["cor315_printed_cross_IZ"] = c.cor315->printed_cross_IZ;
    j["cor315_printed_cross_HZ"] = c.cor315->printed_cross_HZ;
    j["cor315_total_variance"] = c.cor315->total_variance;
  }
  return j;
}

}  // namespace hawkes
