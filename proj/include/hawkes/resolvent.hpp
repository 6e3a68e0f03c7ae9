#pragma once

#include <filesystem>
#include <vector>

#include "hawkes/grid.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

/// Forward trapezoidal product-integration solve of
///   R(t) = phi(t) + \int_0^t R(t-s) phi(s) ds.
/// The i-th value appears linearly with coefficient (1 - h*phi[0]/2)
/// and is isolated algebraically, so the residual of the discrete
/// equation is zero by construction.
GridFunction solve_resolvent(const GridFunction& phi);

/// R_I(t) = phi_I(t) + \int_0^t R_H(t-s) phi_I(s) ds (direct convolution).
GridFunction solve_cross_resolvent(const GridFunction& phi_I, const GridFunction& RH);

/// R(t,u) = phi(t,u) + \int_0^t R_H(t-s) phi(s,u) ds; same quadrature.
GridFunction mark_resolvent(const GridFunction& phi_u, const GridFunction& RH);

struct TailSummary {
  double l1 = 0.0;        // grid mass + geometric tail extrapolation
  double tail_fit = 0.0;  // LS slope of log(int_t^inf g) vs log t; NaN sentinel
};

/// Total mass with a geometric tail correction fitted on the last decade
/// of grid points, plus the fitted log-log tail slope.  Throws
/// HorizonTooShort when the last-decade mass exceeds 10% of the total.
TailSummary l1_and_tail(const GridFunction& g, double theta);

struct ResolventTable {
  GridFunction RH;
  GridFunction RI;
  GridFunction meanZ;
  std::vector<GridFunction> mark_R;  // one per Discrete nu_H atom
  double l1_RH = 0.0;
  double l1_RI = 0.0;
  std::vector<double> l1_marks;
};

/// E[Z(t)] = mu0(t) + (R_H * mu0)(t) + lambda_I \int_0^t R_I(s) ds.
GridFunction mean_intensity(const ModelSpec& spec, const ResolventTable& table);

/// Solve everything on a uniform grid: RH, RI, per-atom resolvents,
/// L1 masses and the mean intensity.
ResolventTable build_table(const ModelSpec& spec, double h = 1e-3, double horizon = 40.0);

/// Directory of CSVs plus a manifest with h, horizon and L1 values.
void write_table(const std::filesystem::path& dir, const ResolventTable& table);

}  // namespace hawkes
