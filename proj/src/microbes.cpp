#include "hawkes/microbes.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace hawkes {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights the
// squared first eigenvector components times the zeroth moment.
void gauss_from_jacobi(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0,
                       std::vector<double>& nodes, std::vector<double>& weights) {
  const auto n = diag.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = off[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(std::size_t(n));
  weights.resize(std::size_t(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    nodes[std::size_t(i)] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    weights[std::size_t(i)] = mu0 * v * v;
  }
}

void check_probabilities(const std::vector<double>& p, const char* name) {
  if (p.empty()) throw InvalidParams(std::string(name) + " must not be empty");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw InvalidParams(std::string(name) + " has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidParams(std::string(name) + " must sum to 1");
}

struct GenFun {
  double gprime = 0.0, gsecond = 0.0;
};

GenFun generating(const std::vector<double>& p) {
  GenFun g;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double k = double(j + 1);
    g.gprime += k * p[j];
    g.gsecond += k * (k - 1.0) * p[j];
  }
  return g;
}

SideNorms side_norms(const std::vector<double>& p, const LifeLaw& life, double gamma,
                     const ToxinFamily& toxin) {
  check_probabilities(p, "offspring law");
  if (gamma < 0.0) throw InvalidParams("budding rate must be nonnegative");
  SideNorms s;
  const GenFun g = generating(p);
  s.gprime = g.gprime;
  s.gsecond = g.gsecond;
  s.lambda1 = life.moment(1);
  s.lambda2sq = life.moment(2);
  // boxcar gamma: ||gamma(y)||_{L^1} = c*y
  s.gamma_l1 = gamma * s.lambda1;
  s.gamma_l2sq = gamma * gamma * s.lambda2sq;
  switch (toxin.kind) {
    case ToxinFamily::Kind::UnitCount:
      s.toxin_l1 = 1.0;
      s.toxin_l2sq = 1.0;
      s.cross = gamma * s.lambda1;
      break;
    case ToxinFamily::Kind::PopulationIntegral:
      s.toxin_l1 = s.lambda1;
      s.toxin_l2sq = s.lambda2sq;
      s.cross = gamma * s.lambda2sq;
      break;
    case ToxinFamily::Kind::Rate:
      s.toxin_l1 = toxin.c * s.lambda1;
      s.toxin_l2sq = toxin.c * toxin.c * s.lambda2sq;
      s.cross = gamma * toxin.c * s.lambda2sq;
      break;
    case ToxinFamily::Kind::DeathRelease:
      s.toxin_l1 = toxin.c;
      s.toxin_l2sq = toxin.c * toxin.c;
      s.cross = gamma * toxin.c * s.lambda1;
      break;
  }
  s.y_gamma_cross = gamma * s.lambda2sq;
  return s;
}

}  // namespace

LifeLaw LifeLaw::exponential(double mean) {
  if (mean <= 0.0) throw InvalidParams("exponential life mean must be positive");
  return {Family::Exponential, mean, 0.0};
}

LifeLaw LifeLaw::uniform(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi)) throw InvalidParams("uniform life needs 0 <= lo < hi");
  return {Family::Uniform, lo, hi};
}

LifeLaw LifeLaw::point(double y) {
  if (y <= 0.0) throw InvalidParams("point life length must be positive");
  return {Family::Point, y, 0.0};
}

double LifeLaw::moment(int k) const {
  switch (family) {
    case Family::Exponential: return k == 1 ? a : 2.0 * a * a;
    case Family::Uniform: return k == 1 ? 0.5 * (a + b) : (a * a + a * b + b * b) / 3.0;
    case Family::Point: return k == 1 ? a : a * a;
  }
  throw InvalidParams("unknown life family");
}

double LifeLaw::survival(double t) const {
  if (t <= 0.0) return 1.0;
  switch (family) {
    case Family::Exponential: return std::exp(-t / a);
    case Family::Uniform: return t >= b ? 0.0 : (t <= a ? 1.0 : (b - t) / (b - a));
    case Family::Point: return t < a ? 1.0 : 0.0;
  }
  throw InvalidParams("unknown life family");
}

void LifeLaw::quadrature(int n, std::vector<double>& nodes, std::vector<double>& weights) const {
  if (n < 1) throw InvalidParams("quadrature needs at least one node");
  switch (family) {
    case Family::Point:
      nodes = {a};
      weights = {1.0};
      return;
    case Family::Uniform: {
      Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), off = Eigen::VectorXd::Zero(n);
      for (int i = 1; i < n; ++i)
        off[i - 1] = double(i) / std::sqrt(4.0 * double(i) * double(i) - 1.0);
      gauss_from_jacobi(diag, off, 2.0, nodes, weights);
      for (int i = 0; i < n; ++i) {
        nodes[std::size_t(i)] = a + 0.5 * (nodes[std::size_t(i)] + 1.0) * (b - a);
        weights[std::size_t(i)] *= 0.5;
      }
      return;
    }
    case Family::Exponential: {
      Eigen::VectorXd diag(n), off = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) diag[i] = 2.0 * double(i) + 1.0;
      for (int i = 1; i < n; ++i) off[i - 1] = double(i);
      gauss_from_jacobi(diag, off, 1.0, nodes, weights);
      for (int i = 0; i < n; ++i) nodes[std::size_t(i)] *= a;
      return;
    }
  }
  throw InvalidParams("unknown life family");
}

ToxinFamily ToxinFamily::unit_count() { return {Kind::UnitCount, 1.0}; }
ToxinFamily ToxinFamily::population_integral() { return {Kind::PopulationIntegral, 1.0}; }

ToxinFamily ToxinFamily::rate(double c) {
  if (c < 0.0) throw InvalidParams("toxin rate must be nonnegative");
  return {Kind::Rate, c};
}

ToxinFamily ToxinFamily::death_release(double theta) {
  if (theta < 0.0) throw InvalidParams("released toxin amount must be nonnegative");
  return {Kind::DeathRelease, theta};
}

double ToxinFamily::value(double t, double y) const {
  if (t < 0.0) return 0.0;
  switch (kind) {
    case Kind::UnitCount: return 1.0;
    case Kind::PopulationIntegral: return std::min(t, y);
    case Kind::Rate: return c * std::min(t, y);
    case Kind::DeathRelease: return t >= y ? c : 0.0;
  }
  throw InvalidParams("unknown toxin family");
}

double ToxinFamily::terminal(double y) const {
  switch (kind) {
    case Kind::UnitCount: return 1.0;
    case Kind::PopulationIntegral: return y;
    case Kind::Rate: return c * y;
    case Kind::DeathRelease: return c;
  }
  throw InvalidParams("unknown toxin family");
}

MicrobeNorms norms(const MicrobeParams& params) {
  MicrobeNorms n;
  n.H = side_norms(params.p_H, params.life_H, params.gamma_H, params.toxin);
  n.I = side_norms(params.p_I, params.life_I, params.gamma_I, params.toxin);
  return n;
}

Theorem61 theorem61_constants(const MicrobeParams& params) {
  const MicrobeNorms nm = norms(params);
  const double m = nm.H.gprime * nm.H.gamma_l1;
  if (m >= 1.0) throw Unstable("g'_H(1)||gamma||_{Lambda_H^1} >= 1");
  const double f = 1.0 / (1.0 - m);

  Theorem61 t;
  t.drift_B = nm.I.gprime * nm.I.gamma_l1 * f;
  t.drift_T = nm.I.gprime *
              (nm.I.toxin_l1 +
               nm.H.gprime * (nm.I.gamma_l1 * nm.H.toxin_l1 - nm.H.gamma_l1 * nm.I.toxin_l1)) *
              f;
  t.hawkes_prefactor = t.drift_B;

  const double a = nm.H.gprime * nm.H.toxin_l1 * f;
  auto c1_sq = [&](const SideNorms& s) {
    return (s.gprime * s.gamma_l2sq + s.gsecond * s.gamma_l1 * s.gamma_l1) * f * f;
  };
  auto c2_sq = [&](const SideNorms& s) {
    const double lin = s.toxin_l1 + a * s.gamma_l1;
    return s.gprime * (s.toxin_l2sq + 2.0 * a * s.cross + a * a * s.gamma_l2sq) +
           s.gsecond * lin * lin;
  };
  auto corr = [&](const SideNorms& s, double c1sq, double c2sq) {
    if (c1sq <= 0.0 || c2sq <= 0.0) return 0.0;
    const double num =
        (s.gprime * s.cross + s.gsecond * s.gamma_l1 * s.toxin_l1) * f +
        nm.H.gprime * nm.H.toxin_l1 *
            (s.gprime * s.gamma_l2sq + s.gsecond * s.gamma_l1 * s.gamma_l1) * f * f;
    return num / std::sqrt(c1sq * c2sq);
  };

  t.c_H1_sq = c1_sq(nm.H);
  t.c_I1_sq = c1_sq(nm.I);
  t.c_H2_sq = c2_sq(nm.H);
  t.c_I2_sq = c2_sq(nm.I);
  t.corr_H = corr(nm.H, t.c_H1_sq, t.c_H2_sq);
  t.corr_I = corr(nm.I, t.c_I1_sq, t.c_I2_sq);
  t.var_B_total = t.hawkes_prefactor * t.c_H1_sq + t.c_I1_sq;
  t.var_T_total = t.hawkes_prefactor * t.c_H2_sq + t.c_I2_sq;
  return t;
}

ProgenyConstants progeny_constants(const MicrobeParams& params) {
  MicrobeParams p = params;
  p.toxin = ToxinFamily::unit_count();
  const Theorem61 t = theorem61_constants(p);
  return {t.drift_T, t.c_H2_sq, t.c_I2_sq, t.var_T_total};
}

ProgenyConstants population_integral_constants(const MicrobeParams& params) {
  if (params.alpha <= 1.5)
    throw ConditionViolated("integral of population needs alpha > 3/2");
  MicrobeParams p = params;
  p.toxin = ToxinFamily::population_integral();
  const Theorem61 t = theorem61_constants(p);
  return {t.drift_T, t.c_H2_sq, t.c_I2_sq, t.var_T_total};
}

ModelSpec build_model(const MicrobeParams& params) {
  check_probabilities(params.p_H, "p_H");
  check_probabilities(params.p_I, "p_I");
  if (params.gamma_H < 0.0 || params.gamma_I < 0.0)
    throw InvalidKernel("budding rates must be nonnegative");
  if (params.lambda_I < 0.0) throw InvalidParams("lambda_I must be nonnegative");

  auto make_marks = [&](const std::vector<double>& p, const LifeLaw& life, int tag) {
    std::vector<double> nodes, weights;
    life.quadrature(params.quadrature_nodes, nodes, weights);
    std::vector<MarkAtom> atoms;
    std::size_t projected = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      std::size_t tuples = 1;
      for (std::size_t l = 0; l <= j; ++l) tuples *= nodes.size();
      projected += tuples;
    }
    if (projected > 200000)
      throw InvalidParams("life-length quadrature atom count too large; "
                          "reduce quadrature_nodes or the offspring support");
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] == 0.0) continue;
      const int k = int(j) + 1;
      std::vector<std::size_t> idx(std::size_t(k), 0);
      while (true) {
        Mark mark;
        mark.label = k;
        mark.tag = tag;
        mark.values.resize(k);
        double w = p[j];
        for (int l = 0; l < k; ++l) {
          mark.values[l] = nodes[idx[std::size_t(l)]];
          w *= weights[idx[std::size_t(l)]];
        }
        atoms.push_back({std::move(mark), w});
        int l = k - 1;
        while (l >= 0 && ++idx[std::size_t(l)] == nodes.size()) idx[std::size_t(l--)] = 0;
        if (l < 0) break;
      }
    }
    return MarkDistribution::discrete(std::move(atoms));
  };

  const double gH = params.gamma_H, gI = params.gamma_I;
  auto rate_of = [gH, gI](const Mark& u) { return u.tag == 0 ? gH : gI; };

  ModelSpec spec;
  spec.name = "microbes";
  spec.lambda_I = params.lambda_I;
  spec.alpha = params.alpha;
  spec.nu_H = make_marks(params.p_H, params.life_H, 0);
  spec.nu_I = make_marks(params.p_I, params.life_I, 1);

  Kernel kernel;
  kernel.phi = [rate_of](double t, const Mark& u) {
    if (t < 0.0) return 0.0;
    int alive = 0;
    for (Eigen::Index l = 0; l < u.values.size(); ++l)
      if (t < u.values[l]) ++alive;
    return rate_of(u) * double(alive);
  };
  kernel.majorant = kernel.phi;  // already non-increasing in t
  kernel.integral = [rate_of](double t, const Mark& u) {
    if (t <= 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index l = 0; l < u.values.size(); ++l) s += std::min(t, u.values[l]);
    return rate_of(u) * s;
  };
  kernel.l1 = [rate_of](const Mark& u) { return rate_of(u) * u.values.sum(); };
  kernel.sup = [rate_of](const Mark& u) { return rate_of(u) * double(u.values.size()); };
  spec.kernel = std::move(kernel);

  ShotShape shot;
  shot.psi = [toxin = params.toxin](double t, const Mark& u) {
    if (t < 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index l = 0; l < u.values.size(); ++l) s += toxin.value(t, u.values[l]);
    return s;
  };
  shot.psi_inf = [toxin = params.toxin](const Mark& u) {
    double s = 0.0;
    for (Eigen::Index l = 0; l < u.values.size(); ++l) s += toxin.terminal(u.values[l]);
    return s;
  };
  spec.shot = std::move(shot);
  return spec;
}

nlohmann::json microbe_constants_json(const MicrobeParams& params) {
  const Theorem61 t = theorem61_constants(params);
  nlohmann::json j;
  j["drift_B"] = t.drift_B;
  j["drift_T"] = t.drift_T;
  j["hawkes_prefactor"] = t.hawkes_prefactor;
  j["c_H1_sq"] = t.c_H1_sq;
  j["c_I1_sq"] = t.c_I1_sq;
  j["c_H2_sq"] = t.c_H2_sq;
  j["c_I2_sq"] = t.c_I2_sq;
  j["corr_H"] = t.corr_H;
  j["corr_I"] = t.corr_I;
  j["var_B_total"] = t.var_B_total;
  j["var_T_total"] = t.var_T_total;
  const ProgenyConstants pg = progeny_constants(params);
  j["progeny_drift"] = pg.drift;
  j["progeny_c_H2_sq"] = pg.c_H2_sq;
  j["progeny_c_I2_sq"] = pg.c_I2_sq;
  j["progeny_total_variance"] = pg.total_variance;
  if (params.alpha > 1.5) {
    const ProgenyConstants pi = population_integral_constants(params);
    j["popint_drift"] = pi.drift;
    j["popint_c_H2_sq"] = pi.c_H2_sq;
    j["popint_c_I2_sq"] = pi.c_I2_sq;
    j["popint_total_variance"] = pi.total_variance;
  }
  return j;
}

}  // namespace hawkes
