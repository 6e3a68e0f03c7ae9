#include "hawkes/grid.hpp"

#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace hawkes {

double GridFunction::at(double t) const {
  if (t <= 0.0) return values[0];
  const double x = t / h;
  const auto i = Eigen::Index(x);
  if (i >= values.size() - 1) return values[values.size() - 1];
  const double w = x - double(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double GridFunction::trapezoid() const {
  const auto n = values.size();
  return h * (values.segment(1, n - 2).sum() + 0.5 * (values[0] + values[n - 1]));
}

GridFunction GridFunction::cumulative() const {
  Eigen::ArrayXd out(values.size());
  out[0] = 0.0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
  return GridFunction(h, std::move(out));
}

GridFunction tabulate(double h, Eigen::Index n, const std::function<double(double)>& f) {
  Eigen::ArrayXd v(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) v[i] = f(h * double(i));
  return GridFunction(h, std::move(v));
}

void write_csv(std::ostream& os, const GridFunction& g, const std::string& value_name) {
  os << "t," << value_name << "\n";
  os.precision(17);
  for (Eigen::Index i = 0; i < g.size(); ++i) os << g.time_at(i) << "," << g.values[i] << "\n";
}

GridFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidParams("empty grid CSV");
  std::vector<double> t, v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double a, b;
    char comma;
    if (!(ls >> a >> comma >> b) || comma != ',') throw InvalidParams("bad grid CSV row: " + line);
    t.push_back(a);
    v.push_back(b);
  }
  if (t.size() < 2) throw InvalidParams("grid CSV needs at least two rows");
  const double h = t[1] - t[0];
  Eigen::ArrayXd values = Eigen::Map<Eigen::ArrayXd>(v.data(), Eigen::Index(v.size()));
  return GridFunction(h, std::move(values));
}

}  // namespace hawkes
