#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tempergap/ladder.hpp"
#include "tempergap/potential.hpp"

namespace tempergap {

class BasinGeometry;

/// Event counts accumulated by the step functions when a pointer is passed.
struct StepCounters {
  std::uint64_t steps = 0;
  std::uint64_t mrw_proposals = 0;
  std::uint64_t mrw_accepts = 0;
  std::uint64_t restriction_rejects = 0;
  std::uint64_t swap_proposals = 0;
  std::uint64_t swap_accepts = 0;
  std::uint64_t level_proposals = 0;
  std::uint64_t level_changes = 0;

  StepCounters& operator+=(const StepCounters& o);
};

/// Basin predicate used by the restricted chain.
using BasinLabelFn = std::function<int(const TorusPoint&)>;

/// log of the Metropolis ratio pi(y) / pi(x) at temperature eps.
inline double metropolis_log_ratio(double u_x, double u_y, double eps) { return -(u_y - u_x) / eps; }

/// log of the replica-swap ratio: (beta_{I+1} - beta_I) (U(X_{I+1}) - U(X_I)).
inline double swap_log_ratio(double beta_i, double beta_next, double u_i, double u_next) {
  return (beta_next - beta_i) * (u_next - u_i);
}

/// Accept with probability min(1, exp(log_ratio)); consumes one uniform draw.
bool metropolis_accept(double log_ratio, RngStream& rng);

TorusPoint mrw_step(const PotentialSpec& pot, double eps, double h, const TorusPoint& x, RngStream& rng,
                    StepCounters* counters = nullptr);

TorusPoint lazy_mrw_step(const PotentialSpec& pot, double eps, double h, const TorusPoint& x, RngStream& rng,
                         StepCounters* counters = nullptr);

/// MRW step that stays put when the proposal leaves the basin. Throws
/// std::invalid_argument when x is not in the basin.
TorusPoint restricted_mrw_step(const PotentialSpec& pot, const BasinLabelFn& basin, int label, double eps, double h,
                               const TorusPoint& x, RngStream& rng, StepCounters* counters = nullptr);
TorusPoint restricted_mrw_step(const PotentialSpec& pot, const BasinGeometry& geom, int label, double eps, double h,
                               const TorusPoint& x, RngStream& rng, StepCounters* counters = nullptr);

struct PTState {
  std::vector<TorusPoint> replicas;  // index k at temperature eps_k
};

struct STState {
  TorusPoint position;
  int level = 0;
};

/// Kernel S: hold with probability 1/2, else one adjacent swap proposal.
PTState pt_swap_sweep(const PotentialSpec& pot, const TemperatureLadder& ladder, PTState state, RngStream& rng,
                      StepCounters* counters = nullptr);

/// P_pt = S R S with R the lazy single-replica Metropolis update.
PTState pt_step(const PotentialSpec& pot, const TemperatureLadder& ladder, PTState state, RngStream& rng,
                StepCounters* counters = nullptr);

/// Level resampling (lazy), Metropolis update (lazy), level resampling.
STState st_step(const PotentialSpec& pot, const TemperatureLadder& ladder, STState state, RngStream& rng,
                StepCounters* counters = nullptr);

/// Level J with probability proportional to exp(-U(z)/eps_J), log-sum-exp stabilized.
int st_sample_level(double u, const TemperatureLadder& ladder, RngStream& rng);

}  // namespace tempergap
