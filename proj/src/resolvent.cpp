#include "hawkes/resolvent.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace hawkes {

namespace {

void check_nonnegative_finite(const GridFunction& g, const char* what) {
  if (!g.values.isFinite().all()) throw InvalidParams(std::string(what) + " has non-finite values");
  if ((g.values < 0.0).any()) throw InvalidParams(std::string(what) + " has negative values");
}

// Trapezoidal convolution term sum_{j=1}^{i-1} a[j] b[i-j] (interior points).
inline double interior_conv(const double* a, const double* b, Eigen::Index i) {
  double s = 0.0;
  for (Eigen::Index j = 1; j < i; ++j) s += a[j] * b[i - j];
  return s;
}

}  // namespace

GridFunction solve_resolvent(const GridFunction& phi) {
  check_nonnegative_finite(phi, "phi");
  const double mass = phi.trapezoid();
  if (mass >= 1.0) throw Unstable("discrete kernel mass >= 1");
  const double h = phi.h;
  const double c0 = 0.5 * h * phi.values[0];
  if (c0 >= 1.0) throw StepTooCoarse("h*phi(0)/2 >= 1");

  const auto n = phi.size();
  Eigen::ArrayXd R(n);
  const double* p = phi.values.data();
  double* r = R.data();
  r[0] = p[0];
  const double inv = 1.0 / (1.0 - c0);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double conv = 0.5 * r[0] * p[i] + interior_conv(r, p, i);
    r[i] = (p[i] + h * conv) * inv;
  }
  return GridFunction(h, std::move(R));
}

GridFunction solve_cross_resolvent(const GridFunction& phi_I, const GridFunction& RH) {
  if (!phi_I.same_grid(RH)) throw GridMismatch("phi_I and RH grids differ");
  check_nonnegative_finite(phi_I, "phi_I");
  const double h = phi_I.h;
  const auto n = phi_I.size();
  Eigen::ArrayXd out(n);
  const double* p = phi_I.values.data();
  const double* r = RH.values.data();
  out[0] = p[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    const double conv = 0.5 * (r[i] * p[0] + r[0] * p[i]) + interior_conv(r, p, i);
    out[i] = p[i] + h * conv;
  }
  return GridFunction(h, std::move(out));
}

GridFunction mark_resolvent(const GridFunction& phi_u, const GridFunction& RH) {
  return solve_cross_resolvent(phi_u, RH);
}

TailSummary l1_and_tail(const GridFunction& g, double theta) {
  if ((g.values < 0.0).any()) throw InvalidParams("l1_and_tail expects a nonnegative grid");
  TailSummary out;
  const auto n = g.size() - 1;
  const double total = g.trapezoid();
  if (total == 0.0) {
    out.l1 = 0.0;
    out.tail_fit = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  // geometric extrapolation fitted on the last decade of grid points
  const Eigen::Index i0 = n - n / 10;
  double window = 0.0;
  for (Eigen::Index i = i0; i < n; ++i) window += 0.5 * g.h * (g.values[i] + g.values[i + 1]);
  if (window > 0.1 * total) throw HorizonTooShort("last-decade mass exceeds 10% of total");

  double tail = 0.0;
  const double g0 = g.values[i0], g1 = g.values[n];
  if (g0 > 0.0 && g1 > 0.0 && g1 < g0) {
    const double rate = std::log(g0 / g1) / (g.h * double(n - i0));
    tail = g1 / rate;
  }
  out.l1 = total + tail;

  // LS slope of log Q(t) vs log t on the last decade in t, Q = int_t^inf g
  const GridFunction cum = g.cumulative();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Eigen::Index count = 0;
  const double t_lo = g.horizon() / 10.0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    const double t = g.time_at(i);
    const double q = out.l1 - cum.values[i];
    if (t < t_lo || q <= 0.0) continue;
    const double x = std::log(t), y = std::log(q);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) {
    out.tail_fit = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double denom = double(count) * sxx - sx * sx;
    out.tail_fit = (double(count) * sxy - sx * sy) / denom;
  }
  (void)theta;  // decay exponent is the caller's assertion threshold
  return out;
}

GridFunction mean_intensity(const ModelSpec& spec, const ResolventTable& table) {
  const GridFunction& RI = table.RI;
  const GridFunction& RH = table.RH;
  if (!RI.same_grid(RH)) throw GridMismatch("table grids differ");
  const double h = RI.h;
  const auto n = RI.size();

  Eigen::ArrayXd out = spec.lambda_I * RI.cumulative().values;
  if (spec.mu0.value) {
    const GridFunction mu = tabulate(h, n - 1, [&](double t) { return spec.mu0.at(t); });
    const GridFunction conv = solve_cross_resolvent(mu, RH);  // mu0 + RH * mu0
    out += conv.values;
  }
  return GridFunction(h, std::move(out));
}

ResolventTable build_table(const ModelSpec& spec, double h, double horizon) {
  const auto n = Eigen::Index(std::llround(horizon / h));
  ResolventTable t;
  const GridFunction phiH = tabulate(h, n, [&](double s) { return mean_kernel_at(spec, 'H', s); });
  const GridFunction phiI = tabulate(h, n, [&](double s) { return mean_kernel_at(spec, 'I', s); });
  t.RH = solve_resolvent(phiH);
  t.RI = solve_cross_resolvent(phiI, t.RH);
  t.l1_RH = l1_and_tail(t.RH, spec.theta0).l1;
  t.l1_RI = l1_and_tail(t.RI, spec.theta0).l1;
  if (spec.nu_H.is_discrete()) {
    for (const auto& atom : spec.nu_H.atoms()) {
      GridFunction phi_u =
          tabulate(h, n, [&](double s) { return spec.kernel.phi(s, atom.mark); });
      t.mark_R.push_back(mark_resolvent(phi_u, t.RH));
      t.l1_marks.push_back(l1_and_tail(t.mark_R.back(), spec.theta0).l1);
    }
  }
  t.meanZ = mean_intensity(spec, t);
  // trapezoidal ripple tolerance near a discontinuous phi(0)
  const double floor = -1e-8 * h;
  for (const GridFunction* g : {&t.RH, &t.RI}) {
    if ((g->values < floor).any()) throw InvalidParams("resolvent grid below ripple floor");
  }
  return t;
}

void write_table(const std::filesystem::path& dir, const ResolventTable& table) {
  std::filesystem::create_directories(dir);
  auto dump = [&](const std::string& name, const GridFunction& g, const std::string& col) {
    std::ofstream os(dir / name);
    write_csv(os, g, col);
  };
  dump("RH.csv", table.RH, "R_H");
  dump("RI.csv", table.RI, "R_I");
  dump("meanZ.csv", table.meanZ, "mean_intensity");
  for (std::size_t k = 0; k < table.mark_R.size(); ++k)
    dump("R_mark_" + std::to_string(k) + ".csv", table.mark_R[k], "R_mark");

  nlohmann::json manifest;
  manifest["h"] = table.RH.h;
  manifest["horizon"] = table.RH.horizon();
  manifest["l1_RH"] = table.l1_RH;
  manifest["l1_RI"] = table.l1_RI;
  manifest["l1_marks"] = table.l1_marks;
  std::ofstream os(dir / "manifest.json");
  os << manifest.dump(2) << "\n";
}

}  // namespace hawkes
