#pragma once

#include <vector>

#include <json.hpp>

#include "hawkes/model.hpp"

namespace hawkes {

/// Life-length law of one bud; named families with closed-form moments and
/// Gaussian quadrature for exact polynomial integration.
struct LifeLaw {
  enum class Family { Exponential, Uniform, Point };
  Family family = Family::Point;
  double a = 1.0;  // mean | lower bound | the point
  double b = 0.0;  // unused | upper bound | unused

  static LifeLaw exponential(double mean);
  static LifeLaw uniform(double lo, double hi);
  static LifeLaw point(double y);

  double moment(int k) const;     // E[Y^k], k = 1, 2
  double survival(double t) const;

  /// Probability-weighted nodes integrating y-polynomials of degree < 2n
  /// exactly (Golub-Welsch).
  void quadrature(int n, std::vector<double>& nodes, std::vector<double>& weights) const;
};

/// Toxin cumulative function T(t,y), deterministic given the life length.
struct ToxinFamily {
  enum class Kind { UnitCount, PopulationIntegral, Rate, DeathRelease };
  Kind kind = Kind::UnitCount;
  double c = 1.0;  // Rate multiplier or DeathRelease amount

  static ToxinFamily unit_count();
  static ToxinFamily population_integral();
  static ToxinFamily rate(double c);
  static ToxinFamily death_release(double theta);

  double value(double t, double y) const;  // T(t,y), constant for t >= y
  double terminal(double y) const;         // T(y,y)
};

struct MicrobeParams {
  std::vector<double> p_H{1.0};  // p[j] = P(litter size = j+1), finite support
  std::vector<double> p_I{1.0};
  LifeLaw life_H = LifeLaw::exponential(1.0);
  LifeLaw life_I = LifeLaw::exponential(1.0);
  double gamma_H = 0.0;  // boxcar budding rates gamma_i(t,y) = c_i 1_{t<y}
  double gamma_I = 0.0;
  ToxinFamily toxin;
  double lambda_I = 1.0;
  double alpha = 2.0;
  int quadrature_nodes = 24;
};

struct SideNorms {
  double gamma_l1 = 0.0;     // ||gamma||_{Lambda^1}
  double gamma_l2sq = 0.0;   // ||gamma||^2_{Lambda^2}
  double toxin_l1 = 0.0;     // ||T||_{Lambda^1}
  double toxin_l2sq = 0.0;   // ||T||^2_{Lambda^2}
  double cross = 0.0;        // <gamma, T>
  double y_gamma_cross = 0.0;  // int y ||gamma(y)|| Lambda(dy)
  double gprime = 0.0;       // g'(1)
  double gsecond = 0.0;      // g''(1)
  double lambda1 = 0.0;      // ||Lambda^1|| = E[Y]
  double lambda2sq = 0.0;    // ||Lambda^2||^2 = E[Y^2]
};

struct MicrobeNorms {
  SideNorms H, I;
};

MicrobeNorms norms(const MicrobeParams& params);

/// Every constant displayed with the budding/toxin limit theorem: both drift
/// lines, the four diffusion coefficients (squared), the in-pair correlation
/// coefficients, and the scalar total variances at t = 1.
struct Theorem61 {
  double drift_B = 0.0;
  double drift_T = 0.0;
  double hawkes_prefactor = 0.0;  // g'_I ||gamma||_{Lambda_I^1} / (1-m), = drift_B
  double c_H1_sq = 0.0, c_I1_sq = 0.0;
  double c_H2_sq = 0.0, c_I2_sq = 0.0;
  double corr_H = 0.0, corr_I = 0.0;  // <B_{i1}, B_{i2}>_1
  double var_B_total = 0.0;           // prefactor*c_H1^2 + c_I1^2
  double var_T_total = 0.0;           // prefactor*c_H2^2 + c_I2^2
};

Theorem61 theorem61_constants(const MicrobeParams& params);

struct ProgenyConstants {
  double drift = 0.0;
  double c_H2_sq = 0.0, c_I2_sq = 0.0;
  double total_variance = 0.0;
};

/// Total-progeny specialization (unit-count toxin).
ProgenyConstants progeny_constants(const MicrobeParams& params);

/// Integral-of-population specialization (toxin t ^ y); needs alpha > 3/2.
ProgenyConstants population_integral_constants(const MicrobeParams& params);

/// The marked-Hawkes model of the microbe population: kernel
/// phi(t,u) = sum_j gamma_i(t, y_j), shot psi(t,u) = sum_j T_j(t, y_j).
/// Mark distributions are Discrete: litter sizes from the finite p-vectors,
/// life lengths on Gaussian quadrature nodes, so every nu-integral the limit
/// theory needs (polynomials in the y_j) is exact.
ModelSpec build_model(const MicrobeParams& params);

/// Flat JSON in the LimitConstants layout.
nlohmann::json microbe_constants_json(const MicrobeParams& params);

}  // namespace hawkes
