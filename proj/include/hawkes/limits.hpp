#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "hawkes/model.hpp"
#include "hawkes/resolvent.hpp"

namespace hawkes {

/// FLLN drift rates (per unit rescaled time).
struct Drifts {
  double hawkes_drift = 0.0;       // lambda_I * ||R_I||
  double immigration_drift = 0.0;  // lambda_I
  double shot_drift_H = 0.0;       // psi_H(inf) * lambda_I * ||R_I||
  double shot_drift_I = 0.0;       // psi_I(inf) * lambda_I
  std::vector<double> per_atom;    // lambda_I * ||R_I|| * nu_H({k})
};

Drifts lln_drifts(const ModelSpec& spec, const ResolventTable& table);

/// Variance rate of the Brownian limit of the centered cumulative intensity.
double sigma_z2(const ModelSpec& spec, const ResolventTable& table);

/// Variance at t=1 of the limit of the rescaled Hawkes-measure error
/// tested against f: the white-noise algebra for
/// W_H(f + nu_H(f)||R||) + nu_H(f) W_I(||R||).
double measure_clt_variance(const ModelSpec& spec, const ResolventTable& table,
                            const std::function<double(const Mark&)>& f);

struct ShotVariances {
  double var_I = 0.0;        // limit of the immigration shot noise alone
  double var_H = 0.0;        // limit of the Hawkes shot noise alone
  double var_H_white = 0.0;  // W_H(psi_inf + psi_H(inf)||R||) component
  double var_I_lifted = 0.0; // W_I(psi_inf + psi_H(inf)||R||) component
  double total = 0.0;        // combined S_H + S_I limit variance
};

ShotVariances shot_clt_variances(const ModelSpec& spec, const ResolventTable& table,
                                 const ShotShape& shot);

/// Coefficients of the standard-Hawkes decomposition
///   sqrt(l)*B_I + sqrt(l*m/(1-m))*B_H + sigma_Z*B_Z.
/// Cross-covariations are computed from the white-noise representation;
/// the corollary's printed values are reported side by side, unasserted.
struct Corollary315 {
  double coef_I = 0.0;
  double coef_H = 0.0;
  double sigma_z = 0.0;
  double cross_IZ = 0.0;
  double cross_HZ = 0.0;
  double printed_cross_IZ = 0.0;
  double printed_cross_HZ = 0.0;
  double total_variance = 0.0;  // total-count error variance at t=1
};

Corollary315 corollary315(const ModelSpec& spec, const ResolventTable& table);

struct LimitConstants {
  Drifts drifts;
  double sigma_z2 = 0.0;
  double count_variance_H = 0.0;        // measure variance with f == 1
  std::vector<double> atom_variances;   // f = indicator of each Discrete atom
  std::optional<ShotVariances> shot;
  std::optional<Corollary315> cor315;
};

/// Every constant the Monte Carlo harness consumes.  cor315 is filled only
/// for standard-form specs (nu_I = nu_H, mu0 = 0).
LimitConstants limit_constants(const ModelSpec& spec, const ResolventTable& table);

/// Flat JSON document, one numeric field per constant.
nlohmann::json to_json(const LimitConstants& c);

}  // namespace hawkes
