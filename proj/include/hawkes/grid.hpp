#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>

#include "hawkes/errors.hpp"

namespace hawkes {

/// Uniform-grid discretization v[i] ~ f(i*h) on [0, n*h].
struct GridFunction {
  double h = 0.0;
  Eigen::ArrayXd values;

  GridFunction() = default;
  GridFunction(double step, Eigen::ArrayXd v) : h(step), values(std::move(v)) {
    if (h <= 0.0) throw InvalidParams("grid step must be positive");
    if (values.size() < 2) throw InvalidParams("grid needs at least two points");
  }

  Eigen::Index size() const { return values.size(); }
  double horizon() const { return h * double(values.size() - 1); }
  double time_at(Eigen::Index i) const { return h * double(i); }

  /// Linear interpolation, clamped to the last value beyond the horizon.
  double at(double t) const;

  /// Trapezoidal mass over the grid (no tail extrapolation).
  double trapezoid() const;

  /// Running trapezoidal integral as a grid of the same shape.
  GridFunction cumulative() const;

  bool same_grid(const GridFunction& other) const {
    return h == other.h && values.size() == other.values.size();
  }
};

/// Tabulate f on an n+1 point grid with step h.
GridFunction tabulate(double h, Eigen::Index n, const std::function<double(double)>& f);

/// Two-column CSV (t,value) with a one-line header.
void write_csv(std::ostream& os, const GridFunction& g, const std::string& value_name);
GridFunction read_csv(std::istream& is);

}  // namespace hawkes
