#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

enum class Origin : std::uint8_t { Immigration = 0, Hawkes = 1 };

struct Event {
  double time = 0.0;
  Mark mark;
  Origin origin = Origin::Immigration;
};

/// One exact path sample; events merged in time order, Immigration before
/// Hawkes at (probability-zero) ties.
struct PathRecord {
  std::vector<Event> events;
  double horizon = 0.0;
  std::uint64_t spec_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t accepted = 0;  // thinning diagnostics
  std::uint64_t proposed = 0;

  std::size_t count(Origin o) const;
};

/// Ogata thinning under the piecewise-constant bound
/// mu0.sup + sum_j majorant(t - t_j, u_j), exact in distribution and a
/// deterministic function of (spec, horizon, seed, path_index).
/// Kernels with exp_rate > 0 use an O(1) decayed-sum intensity state.
PathRecord simulate_path(const ModelSpec& spec, double horizon, std::uint64_t seed,
                         std::uint64_t path_index = 0);

/// Left-limit intensity Z(t-): mu0(t) plus phi over events strictly before t.
double intensity_at(const ModelSpec& spec, const PathRecord& path, double t);

/// int_0^t Z(s-) ds, exact per event via the kernel's running integral;
/// a mu0 contribution is integrated by trapezoid with step h_mu.
double cumulative_intensity(const ModelSpec& spec, const PathRecord& path, double t,
                            double h_mu = 0.01);

/// (S_H(t), S_I(t)) = sums of psi(t - s, u) over each origin's events, s <= t.
std::pair<double, double> shot_noise_at(const ModelSpec& spec, const PathRecord& path,
                                        const ShotShape& shot, double t);

/// Hawkes events with time <= t and mark satisfying the predicate.
std::size_t counting(const PathRecord& path, double t,
                     const std::function<bool(const Mark&)>& mark_predicate);

/// CSV: header "time,origin,mark", origin as I/H, mark-id = mark.label.
void write_csv(std::ostream& os, const PathRecord& path);

/// Versioned binary frame: one ASCII header line, then per event
/// little-endian f64 time + u8 origin + u32 mark index (= mark.label).
void write_frame(std::ostream& os, const PathRecord& path);
PathRecord read_frame(std::istream& is);

}  // namespace hawkes
