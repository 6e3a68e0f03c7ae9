#include "hawkes/config.hpp"

#include <fstream>
#include <set>

namespace hawkes {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number(j.at(key), key) : fallback;
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where + " entry"));
  return out;
}

Kernel parse_kernel(const json& j) {
  check_keys(j, "kernel", {"type", "a", "b", "p", "y"});
  if (!j.contains("type")) throw ConfigError("kernel needs a type");
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return exponential_kernel(0.0, 1.0);
  if (type == "exponential")
    return exponential_kernel(number(j.at("a"), "kernel.a"), number(j.at("b"), "kernel.b"));
  if (type == "power")
    return power_kernel(number(j.at("a"), "kernel.a"), number(j.at("b"), "kernel.b"),
                        number(j.at("p"), "kernel.p"));
  if (type == "boxcar")
    return boxcar_kernel(number(j.at("a"), "kernel.a"), number(j.at("y"), "kernel.y"));
  throw ConfigError("unknown kernel type: " + type);
}

MarkDistribution parse_atoms(const json& j, const std::string& where,
                             std::vector<double>* scales) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a non-empty array");
  std::vector<MarkAtom> atoms;
  for (const auto& a : j) {
    check_keys(a, where + " atom", {"label", "prob", "scale"});
    Mark mark;
    mark.label = a.contains("label") ? a.at("label").get<int>() : int(atoms.size());
    const double prob = number(a.at("prob"), where + " atom prob");
    if (scales) {
      if (mark.label != int(scales->size()))
        throw ConfigError(where + " atom labels must be 0,1,2,... in order");
      scales->push_back(number_or(a, "scale", 1.0));
    }
    atoms.push_back({std::move(mark), prob});
  }
  return MarkDistribution::discrete(std::move(atoms));
}

ModelSpec parse_model(const json& j) {
  check_keys(j, "model", {"name", "lambda_I", "kernel", "marks", "nu_I", "mu0", "shot",
                          "alpha", "theta0", "theta1"});
  ModelSpec spec;
  spec.name = j.contains("name") ? j.at("name").get<std::string>() : "model";
  spec.lambda_I = number_or(j, "lambda_I", 1.0);
  if (spec.lambda_I < 0.0) throw ConfigError("lambda_I must be nonnegative");
  if (!j.contains("kernel")) throw ConfigError("model needs a kernel");
  Kernel base = parse_kernel(j.at("kernel"));

  std::vector<double> scales;
  if (j.contains("marks")) {
    spec.nu_H = parse_atoms(j.at("marks"), "marks", &scales);
    bool scaled = false;
    for (double s : scales) scaled = scaled || s != 1.0;
    spec.kernel = scaled ? scale_kernel_by_label(base, scales) : std::move(base);
  } else {
    spec.nu_H = MarkDistribution::point_mass(Mark{});
    spec.kernel = std::move(base);
  }

  if (j.contains("nu_I")) {
    const auto& ni = j.at("nu_I");
    if (ni.is_string() && ni.get<std::string>() == "same") {
      spec.nu_I = spec.nu_H;
    } else {
      spec.nu_I = parse_atoms(ni, "nu_I", nullptr);
      for (const auto& atom : spec.nu_I.atoms())
        if (!scales.empty() && (atom.mark.label < 0 || atom.mark.label >= int(scales.size())))
          throw ConfigError("nu_I atom label outside the marks label set");
    }
  } else {
    spec.nu_I = spec.nu_H;
  }

  if (j.contains("mu0")) {
    check_keys(j.at("mu0"), "mu0", {"constant"});
    const double c = number(j.at("mu0").at("constant"), "mu0.constant");
    if (c < 0.0) throw ConfigError("mu0.constant must be nonnegative");
    spec.mu0.value = [c](double) { return c; };
    spec.mu0.sup = c;
  }

  if (j.contains("shot")) {
    const auto& s = j.at("shot");
    check_keys(s, "shot", {"type", "c", "b", "y"});
    const std::string type = s.at("type").get<std::string>();
    if (type == "unit")
      spec.shot = unit_shot();
    else if (type == "exp_saturating")
      spec.shot = exp_saturating_shot(number(s.at("c"), "shot.c"), number(s.at("b"), "shot.b"));
    else if (type == "boxcar")
      spec.shot = boxcar_shot(number(s.at("c"), "shot.c"), number(s.at("y"), "shot.y"));
    else
      throw ConfigError("unknown shot type: " + type);
  }

  spec.alpha = number_or(j, "alpha", 2.0);
  spec.theta0 = number_or(j, "theta0", 1.1);
  spec.theta1 = number_or(j, "theta1", 1.6);
  return spec;
}

LifeLaw parse_life(const json& j, const std::string& where) {
  check_keys(j, where, {"family", "mean", "lo", "hi", "y"});
  const std::string family = j.at("family").get<std::string>();
  if (family == "exponential") return LifeLaw::exponential(number(j.at("mean"), where));
  if (family == "uniform")
    return LifeLaw::uniform(number(j.at("lo"), where), number(j.at("hi"), where));
  if (family == "point") return LifeLaw::point(number(j.at("y"), where));
  throw ConfigError("unknown life family: " + family);
}

ToxinFamily parse_toxin(const json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "unit_count") return ToxinFamily::unit_count();
    if (name == "population_integral") return ToxinFamily::population_integral();
    throw ConfigError("unknown toxin: " + name);
  }
  check_keys(j, "toxin", {"type", "c", "theta"});
  const std::string type = j.at("type").get<std::string>();
  if (type == "unit_count") return ToxinFamily::unit_count();
  if (type == "population_integral") return ToxinFamily::population_integral();
  if (type == "rate") return ToxinFamily::rate(number(j.at("c"), "toxin.c"));
  if (type == "death_release")
    return ToxinFamily::death_release(number(j.at("theta"), "toxin.theta"));
  throw ConfigError("unknown toxin type: " + type);
}

MicrobeParams parse_microbes(const json& j) {
  check_keys(j, "microbes",
             {"p_H", "p_I", "p", "life", "life_H", "life_I", "gamma", "gamma_H", "gamma_I",
              "toxin", "lambda_I", "alpha", "quadrature_nodes"});
  MicrobeParams p;
  if (j.contains("p")) p.p_H = p.p_I = number_list(j.at("p"), "p");
  if (j.contains("p_H")) p.p_H = number_list(j.at("p_H"), "p_H");
  if (j.contains("p_I")) p.p_I = number_list(j.at("p_I"), "p_I");
  if (j.contains("life")) p.life_H = p.life_I = parse_life(j.at("life"), "life");
  if (j.contains("life_H")) p.life_H = parse_life(j.at("life_H"), "life_H");
  if (j.contains("life_I")) p.life_I = parse_life(j.at("life_I"), "life_I");
  if (j.contains("gamma")) p.gamma_H = p.gamma_I = number(j.at("gamma"), "gamma");
  if (j.contains("gamma_H")) p.gamma_H = number(j.at("gamma_H"), "gamma_H");
  if (j.contains("gamma_I")) p.gamma_I = number(j.at("gamma_I"), "gamma_I");
  if (j.contains("toxin")) p.toxin = parse_toxin(j.at("toxin"));
  p.lambda_I = number_or(j, "lambda_I", 1.0);
  p.alpha = number_or(j, "alpha", 2.0);
  if (j.contains("quadrature_nodes")) p.quadrature_nodes = j.at("quadrature_nodes").get<int>();
  return p;
}

void parse_experiment(const json& j, ExperimentConfig& e) {
  check_keys(j, "experiment",
             {"functional", "atom_index", "T", "replicas", "grid_points", "seed", "threads",
              "mode", "tol_rel", "cov_tol_rel", "ks_pvalue_min", "reference_variance"});
  if (j.contains("functional"))
    e.functional = functional_from_string(j.at("functional").get<std::string>());
  if (j.contains("atom_index")) e.atom_index = j.at("atom_index").get<int>();
  if (j.contains("T")) e.T_list = number_list(j.at("T"), "T");
  if (j.contains("replicas")) e.replicas = j.at("replicas").get<int>();
  if (j.contains("grid_points")) e.grid_points = j.at("grid_points").get<int>();
  if (j.contains("seed")) e.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) e.threads = j.at("threads").get<int>();
  if (j.contains("mode")) e.mode = j.at("mode").get<std::string>();
  e.tol_rel = number_or(j, "tol_rel", e.tol_rel);
  e.cov_tol_rel = number_or(j, "cov_tol_rel", e.cov_tol_rel);
  e.ks_pvalue_min = number_or(j, "ks_pvalue_min", e.ks_pvalue_min);
  if (j.contains("reference_variance"))
    e.reference_variance = number(j.at("reference_variance"), "reference_variance");
  for (double T : e.T_list)
    if (T <= 0.0) throw ConfigError("every T must be positive");
  if (e.replicas < 2) throw ConfigError("replicas must be >= 2");
  if (e.grid_points < 1) throw ConfigError("grid_points must be >= 1");
  if (e.mode != "clt" && e.mode != "lln") throw ConfigError("mode must be clt or lln");
}

}  // namespace

Config parse_config(const nlohmann::json& j) {
  check_keys(j, "config", {"model", "microbes", "experiment", "resolvent", "simulate"});
  if (j.contains("model") == j.contains("microbes"))
    throw ConfigError("config needs exactly one of \"model\" or \"microbes\"");

  Config c;
  if (j.contains("model")) {
    c.spec = parse_model(j.at("model"));
  } else {
    c.microbes = parse_microbes(j.at("microbes"));
    c.spec = build_model(*c.microbes);
  }
  c.experiment.name = c.spec.name;
  c.experiment.spec = c.spec;
  if (j.contains("experiment")) parse_experiment(j.at("experiment"), c.experiment);
  if (j.contains("resolvent")) {
    check_keys(j.at("resolvent"), "resolvent", {"h", "horizon"});
    c.resolvent_h = number_or(j.at("resolvent"), "h", c.resolvent_h);
    c.resolvent_horizon = number_or(j.at("resolvent"), "horizon", c.resolvent_horizon);
    if (c.resolvent_h <= 0.0 || c.resolvent_horizon <= c.resolvent_h)
      throw ConfigError("resolvent needs 0 < h < horizon");
  }
  if (j.contains("simulate")) {
    check_keys(j.at("simulate"), "simulate", {"horizon"});
    c.simulate_horizon = number(j.at("simulate").at("horizon"), "simulate.horizon");
    if (c.simulate_horizon <= 0.0) throw ConfigError("simulate.horizon must be positive");
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace hawkes
