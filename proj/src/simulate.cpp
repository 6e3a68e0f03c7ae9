#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace hawkes {

namespace {

constexpr double kBoundCap = 1e9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// RNG substream roles within one path.
enum Role : std::uint64_t { kImmTimes = 0, kImmMarks = 1, kThinning = 2, kHawkesMarks = 3 };

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (unsigned char)(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (unsigned char)(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

std::size_t PathRecord::count(Origin o) const {
  return std::size_t(std::count_if(events.begin(), events.end(),
                                   [o](const Event& e) { return e.origin == o; }));
}

PathRecord simulate_path(const ModelSpec& spec, double horizon, std::uint64_t seed,
                         std::uint64_t path_index) {
  if (horizon <= 0.0) throw InvalidParams("horizon must be positive");
  if (branching_ratio(spec) >= 1.0) throw Unstable("branching ratio >= 1");

  PathRecord rec;
  rec.horizon = horizon;
  rec.seed = seed;
  rec.spec_hash = spec.hash();

  CounterRng rng_it(seed, path_index, kImmTimes);
  CounterRng rng_im(seed, path_index, kImmMarks);
  CounterRng rng_th(seed, path_index, kThinning);
  CounterRng rng_hm(seed, path_index, kHawkesMarks);

  std::vector<Event> imm;
  if (spec.lambda_I > 0.0) {
    double s = rng_it.exponential(spec.lambda_I);
    while (s <= horizon) {
      imm.push_back({s, spec.nu_I.sample(rng_im), Origin::Immigration});
      s += rng_it.exponential(spec.lambda_I);
    }
  }

  const bool exp_fast = spec.kernel.exp_rate > 0.0;
  const double decay = spec.kernel.exp_rate;
  double state = 0.0, state_time = 0.0;  // exp path: Z - mu0 at state_time
  std::vector<std::size_t> active;       // general path: indices into rec.events
  const double drop_eps = 1e-12 * (spec.lambda_I > 0.0 ? spec.lambda_I : 1.0);

  auto add_contribution = [&](std::size_t idx) {
    const Event& e = rec.events[idx];
    if (exp_fast) {
      state = state * std::exp(-decay * (e.time - state_time)) + spec.kernel.scale(e.mark);
      state_time = e.time;
    } else {
      active.push_back(idx);
    }
  };

  auto bound_at = [&](double t) {
    if (exp_fast) return spec.mu0.sup + state * std::exp(-decay * (t - state_time));
    double b = spec.mu0.sup;
    std::size_t kept = 0;
    for (std::size_t idx : active) {
      const Event& e = rec.events[idx];
      const double m = spec.kernel.majorant(t - e.time, e.mark);
      if (m < drop_eps) continue;  // dropped from Z too, so Z <= bound stays exact
      b += m;
      active[kept++] = idx;
    }
    active.resize(kept);
    return b;
  };

  auto intensity_now = [&](double t) {
    if (exp_fast) return spec.mu0.at(t) + state * std::exp(-decay * (t - state_time));
    double z = spec.mu0.at(t);
    for (std::size_t idx : active) {
      const Event& e = rec.events[idx];
      z += spec.kernel.phi(t - e.time, e.mark);
    }
    return z;
  };

  double t = 0.0;
  std::size_t next_imm = 0;
  while (true) {
    const double bound = bound_at(t);
    if (!(bound < kBoundCap)) throw IntensityBlowup("thinning bound exceeds cap");
    const double tc = bound > 0.0 ? t + rng_th.exponential(bound) : kInf;
    const double ti = next_imm < imm.size() ? imm[next_imm].time : kInf;
    if (std::min(tc, ti) > horizon) break;
    if (ti <= tc) {
      rec.events.push_back(std::move(imm[next_imm++]));
      add_contribution(rec.events.size() - 1);
      t = ti;
    } else {
      ++rec.proposed;
      const double z = intensity_now(tc);
      if (z > bound * (1.0 + 1e-9))
        throw InvalidKernel("intensity exceeds its majorant bound");
      const double u = rng_th.uniform();
      t = tc;
      if (u * bound <= z) {
        ++rec.accepted;
        rec.events.push_back({tc, spec.nu_H.sample(rng_hm), Origin::Hawkes});
        add_contribution(rec.events.size() - 1);
      }
    }
  }
  return rec;
}

double intensity_at(const ModelSpec& spec, const PathRecord& path, double t) {
  if (t < 0.0 || t > path.horizon) throw OutOfRange("t outside [0, horizon]");
  double z = spec.mu0.at(t);
  for (const Event& e : path.events) {
    if (e.time >= t) break;
    z += spec.kernel.phi(t - e.time, e.mark);
  }
  return z;
}

double cumulative_intensity(const ModelSpec& spec, const PathRecord& path, double t,
                            double h_mu) {
  if (t < 0.0 || t > path.horizon) throw OutOfRange("t outside [0, horizon]");
  double acc = 0.0;
  for (const Event& e : path.events) {
    if (e.time >= t) break;
    acc += spec.kernel.integral(t - e.time, e.mark);
  }
  if (spec.mu0.value) {
    const auto n = std::max<long>(1, std::lround(t / h_mu));
    const double h = t / double(n);
    double m = 0.5 * (spec.mu0.at(0.0) + spec.mu0.at(t));
    for (long i = 1; i < n; ++i) m += spec.mu0.at(h * double(i));
    acc += h * m;
  }
  return acc;
}

std::pair<double, double> shot_noise_at(const ModelSpec& spec, const PathRecord& path,
                                        const ShotShape& shot, double t) {
  (void)spec;
  if (t < 0.0 || t > path.horizon) throw OutOfRange("t outside [0, horizon]");
  double sh = 0.0, si = 0.0;
  for (const Event& e : path.events) {
    if (e.time > t) break;
    const double v = shot.psi(t - e.time, e.mark);
    (e.origin == Origin::Hawkes ? sh : si) += v;
  }
  return {sh, si};
}

std::size_t counting(const PathRecord& path, double t,
                     const std::function<bool(const Mark&)>& mark_predicate) {
  if (t < 0.0 || t > path.horizon) throw OutOfRange("t outside [0, horizon]");
  std::size_t n = 0;
  for (const Event& e : path.events) {
    if (e.time > t) break;
    if (e.origin == Origin::Hawkes && mark_predicate(e.mark)) ++n;
  }
  return n;
}

void write_csv(std::ostream& os, const PathRecord& path) {
  os << "time,origin,mark\n";
  os.precision(17);
  for (const Event& e : path.events)
    os << e.time << "," << (e.origin == Origin::Hawkes ? 'H' : 'I') << "," << e.mark.label
       << "\n";
}

void write_frame(std::ostream& os, const PathRecord& path) {
  os << "hawkes-path 1 " << path.events.size() << " " << path.spec_hash << " " << path.seed
     << "\n";
  put_f64(os, path.horizon);
  for (const Event& e : path.events) {
    put_f64(os, e.time);
    os.put(char(std::uint8_t(e.origin)));
    put_u32(os, std::uint32_t(e.mark.label));
  }
}

PathRecord read_frame(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw InvalidParams("empty path frame");
  std::istringstream hs(header);
  std::string magic;
  int version = 0;
  std::size_t n = 0;
  PathRecord rec;
  hs >> magic >> version >> n >> rec.spec_hash >> rec.seed;
  if (magic != "hawkes-path" || version != 1) throw InvalidParams("bad path frame header");
  rec.horizon = get_f64(is);
  rec.events.resize(n);
  for (Event& e : rec.events) {
    e.time = get_f64(is);
    e.origin = Origin(std::uint8_t(is.get()));
    e.mark.label = int(get_u32(is));
  }
  if (!is) throw InvalidParams("truncated path frame");
  return rec;
}

}  // namespace hawkes
