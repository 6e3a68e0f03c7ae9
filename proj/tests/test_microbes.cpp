#include <doctest.h>

#include "hawkes/limits.hpp"
#include "hawkes/microbes.hpp"

using namespace hawkes;

namespace {

// one immigrant line, one bud per division, Exp(1) life, budding rate 1/2
MicrobeParams star() {
  MicrobeParams p;
  p.gamma_H = 0.5;
  p.gamma_I = 0.5;
  p.life_H = LifeLaw::exponential(1.0);
  p.life_I = LifeLaw::exponential(1.0);
  return p;
}

MicrobeParams mixed() {
  MicrobeParams p;
  p.p_H = {0.3, 0.7};
  p.p_I = {1.0};
  p.life_H = LifeLaw::uniform(0.5, 1.5);
  p.life_I = LifeLaw::exponential(0.8);
  p.gamma_H = 0.3;
  p.gamma_I = 0.6;
  return p;
}

const ResolventTable kNoTable{};

double uniform_moment(double lo, double hi, int k) {
  return (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (double(k + 1) * (hi - lo));
}

}  // namespace

TEST_CASE("life-law moments and survival") {
  const LifeLaw e = LifeLaw::exponential(1.5);
  CHECK(e.moment(1) == 1.5);
  CHECK(e.moment(2) == doctest::Approx(2.0 * 1.5 * 1.5));
  CHECK(e.survival(1.5) == doctest::Approx(std::exp(-1.0)));
  const LifeLaw u = LifeLaw::uniform(0.5, 2.5);
  CHECK(u.moment(1) == doctest::Approx(1.5));
  CHECK(u.moment(2) == doctest::Approx(uniform_moment(0.5, 2.5, 2)));
  CHECK(u.survival(0.25) == 1.0);
  CHECK(u.survival(1.5) == doctest::Approx(0.5));
  CHECK(u.survival(3.0) == 0.0);
  const LifeLaw pt = LifeLaw::point(2.0);
  CHECK(pt.moment(2) == 4.0);
  CHECK(pt.survival(1.9) == 1.0);
  CHECK(pt.survival(2.0) == 0.0);
  CHECK_THROWS_AS(LifeLaw::exponential(0.0), InvalidParams);
  CHECK_THROWS_AS(LifeLaw::uniform(2.0, 1.0), InvalidParams);
  CHECK_THROWS_AS(LifeLaw::point(-1.0), InvalidParams);
}

TEST_CASE("quadrature integrates polynomials exactly") {
  std::vector<double> nodes, weights;
  for (const LifeLaw& law : {LifeLaw::exponential(1.5), LifeLaw::uniform(0.5, 2.5)}) {
    law.quadrature(6, nodes, weights);
    REQUIRE(nodes.size() == 6);
    double mass = 0.0;
    for (double w : weights) mass += w;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 1; k <= 4; ++k) {
      double got = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) got += weights[i] * std::pow(nodes[i], k);
      const double want = law.family == LifeLaw::Family::Exponential
                              ? std::tgamma(double(k + 1)) * std::pow(law.a, k)
                              : uniform_moment(law.a, law.b, k);
      CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
  }
  LifeLaw::point(2.0).quadrature(6, nodes, weights);
  CHECK(nodes == std::vector<double>{2.0});
  CHECK(weights == std::vector<double>{1.0});
}

TEST_CASE("toxin families") {
  const double y = 2.0;
  CHECK(ToxinFamily::unit_count().value(0.5, y) == 1.0);
  CHECK(ToxinFamily::unit_count().value(-0.5, y) == 0.0);
  CHECK(ToxinFamily::population_integral().value(1.0, y) == 1.0);
  CHECK(ToxinFamily::population_integral().value(5.0, y) == y);
  CHECK(ToxinFamily::rate(3.0).value(1.0, y) == 3.0);
  CHECK(ToxinFamily::rate(3.0).terminal(y) == 6.0);
  CHECK(ToxinFamily::death_release(1.5).value(1.0, y) == 0.0);
  CHECK(ToxinFamily::death_release(1.5).value(2.0, y) == 1.5);
  CHECK(ToxinFamily::death_release(1.5).terminal(y) == 1.5);
  CHECK_THROWS_AS(ToxinFamily::rate(-1.0), InvalidParams);
}

TEST_CASE("norms in closed form") {
  MicrobeParams p = star();
  MicrobeNorms n = norms(p);
  CHECK(n.H.gprime == 1.0);
  CHECK(n.H.gsecond == 0.0);
  CHECK(n.H.gamma_l1 == doctest::Approx(0.5));
  CHECK(n.H.gamma_l2sq == doctest::Approx(0.5));  // c^2 E[Y^2] = 0.25 * 2
  CHECK(n.H.toxin_l1 == 1.0);
  CHECK(n.H.cross == doctest::Approx(0.5));

  p.toxin = ToxinFamily::population_integral();
  n = norms(p);
  CHECK(n.H.toxin_l1 == doctest::Approx(1.0));
  CHECK(n.H.toxin_l2sq == doctest::Approx(2.0));
  CHECK(n.H.cross == doctest::Approx(1.0));  // c E[Y^2]

  MicrobeParams q = star();
  q.p_H = {0.2, 0.5, 0.3};
  n = norms(q);
  CHECK(n.H.gprime == doctest::Approx(2.1));
  CHECK(n.H.gsecond == doctest::Approx(2.8));
  MicrobeParams bad = star();
  bad.p_H = {0.5, 0.4};
  CHECK_THROWS_AS(norms(bad), InvalidParams);
}

TEST_CASE("frozen constants for the base scenario") {
  const MicrobeParams p = star();
  const Theorem61 t = theorem61_constants(p);
  CHECK(t.drift_B == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.hawkes_prefactor == t.drift_B);
  CHECK(t.c_H1_sq == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.c_I1_sq == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.var_B_total == doctest::Approx(4.0).epsilon(1e-12));
  // unit-count toxin
  CHECK(t.drift_T == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.c_H2_sq == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(t.c_I2_sq == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(t.var_T_total == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(t.corr_H == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-12));
  CHECK(std::abs(t.corr_H) <= 1.0);

  const ProgenyConstants pg = progeny_constants(p);
  CHECK(pg.drift == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pg.total_variance == doctest::Approx(10.0).epsilon(1e-12));

  const ProgenyConstants pi = population_integral_constants(p);
  CHECK(pi.drift == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pi.total_variance == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("the specializations override the configured toxin") {
  MicrobeParams p = star();
  p.toxin = ToxinFamily::rate(3.0);
  CHECK(progeny_constants(p).total_variance == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(population_integral_constants(p).total_variance ==
        doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("degenerate and invalid regimes") {
  MicrobeParams quiet = star();
  quiet.gamma_H = quiet.gamma_I = 0.0;
  const Theorem61 t = theorem61_constants(quiet);
  CHECK(t.drift_B == 0.0);
  CHECK(t.var_B_total == 0.0);
  CHECK(t.drift_T == doctest::Approx(1.0));  // immigrants alone count themselves

  MicrobeParams hot = star();
  hot.gamma_H = 1.2;
  CHECK_THROWS_AS(theorem61_constants(hot), Unstable);

  MicrobeParams shallow = star();
  shallow.alpha = 1.4;
  CHECK_THROWS_AS(population_integral_constants(shallow), ConditionViolated);
}

TEST_CASE("drift grows with the life length") {
  MicrobeParams a = star();
  a.life_H = a.life_I = LifeLaw::point(0.5);
  MicrobeParams b = a;
  b.life_H = b.life_I = LifeLaw::point(1.0);
  CHECK(theorem61_constants(b).drift_B > theorem61_constants(a).drift_B);
}

TEST_CASE("the assembled model evaluates the branching kernel pointwise") {
  MicrobeParams p = star();
  p.life_H = p.life_I = LifeLaw::point(2.0);
  p.gamma_H = p.gamma_I = 0.4;
  const ModelSpec spec = build_model(p);
  REQUIRE(spec.nu_H.atoms().size() == 1);
  const Mark u = spec.nu_H.atoms()[0].mark;
  CHECK(u.label == 1);
  CHECK(u.values.size() == 1);
  CHECK(spec.kernel.phi(1.0, u) == doctest::Approx(0.4));
  CHECK(spec.kernel.phi(2.5, u) == 0.0);
  CHECK(spec.kernel.l1(u) == doctest::Approx(0.8));
  CHECK(spec.kernel.sup(u) == doctest::Approx(0.4));
  CHECK(spec.kernel.integral(1.0, u) == doctest::Approx(0.4));
  CHECK(spec.kernel.integral(10.0, u) == doctest::Approx(0.8));
  CHECK(spec.shot->psi_inf(u) == 1.0);
  CHECK(branching_ratio(spec) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("model moments agree with every limit constant") {
  std::vector<MicrobeParams> cases;
  cases.push_back(star());
  {
    MicrobeParams p = star();
    p.toxin = ToxinFamily::population_integral();
    cases.push_back(p);
  }
  {
    MicrobeParams p = mixed();
    p.toxin = ToxinFamily::rate(2.0);
    cases.push_back(p);
  }
  {
    MicrobeParams p = mixed();
    p.life_H = LifeLaw::point(1.0);
    p.toxin = ToxinFamily::death_release(1.5);
    cases.push_back(p);
  }
  for (const MicrobeParams& p : cases) {
    const Theorem61 t = theorem61_constants(p);
    const ModelSpec spec = build_model(p);
    const Drifts d = lln_drifts(spec, kNoTable);
    CHECK(t.drift_B == doctest::Approx(d.hawkes_drift).epsilon(1e-9));
    CHECK(t.drift_T == doctest::Approx(d.shot_drift_H + d.shot_drift_I).epsilon(1e-9));
    CHECK(t.var_B_total == doctest::Approx(sigma_z2(spec, kNoTable)).epsilon(1e-9));
    const ShotVariances sv = shot_clt_variances(spec, kNoTable, *spec.shot);
    CHECK(t.var_T_total == doctest::Approx(sv.total).epsilon(1e-9));
  }
}

TEST_CASE("constants serialize flat") {
  const auto j = microbe_constants_json(star());
  CHECK(j.at("drift_B").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("progeny_total_variance").get<double>() == doctest::Approx(10.0));
  CHECK(j.at("popint_total_variance").get<double>() == doctest::Approx(16.0));
  for (const auto& [key, value] : j.items()) {
    (void)key;
    CHECK(value.is_number());
  }
  MicrobeParams shallow = star();
  shallow.alpha = 1.4;
  CHECK_FALSE(microbe_constants_json(shallow).contains("popint_total_variance"));
}
