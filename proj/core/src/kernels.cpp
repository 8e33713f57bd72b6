#include "tempergap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tempergap/basin.hpp"

namespace tempergap {

StepCounters& StepCounters::operator+=(const StepCounters& o) {
  steps += o.steps;
  mrw_proposals += o.mrw_proposals;
  mrw_accepts += o.mrw_accepts;
  restriction_rejects += o.restriction_rejects;
  swap_proposals += o.swap_proposals;
  swap_accepts += o.swap_accepts;
  level_proposals += o.level_proposals;
  level_changes += o.level_changes;
  return *this;
}

bool metropolis_accept(double log_ratio, RngStream& rng) {
  const double u = rng.uniform();
  return log_ratio >= 0.0 || u < std::exp(log_ratio);
}

namespace {

void check_params(double eps, double h) {
  if (!(eps > 0.0)) throw std::invalid_argument("mrw_step: temperature must be positive");
  if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("mrw_step: step size must lie in (0, 1]");
}

TorusPoint mrw_core(const PotentialSpec& pot, double eps, double h, const TorusPoint& x, RngStream& rng,
                    StepCounters* counters) {
  const TorusPoint y = sample_ball(x, h, rng);
  if (counters) ++counters->mrw_proposals;
  if (metropolis_accept(metropolis_log_ratio(pot.value(x), pot.value(y), eps), rng)) {
    if (counters) ++counters->mrw_accepts;
    return y;
  }
  return x;
}

}  // namespace

TorusPoint mrw_step(const PotentialSpec& pot, double eps, double h, const TorusPoint& x, RngStream& rng,
                    StepCounters* counters) {
  check_params(eps, h);
  return mrw_core(pot, eps, h, x, rng, counters);
}

TorusPoint lazy_mrw_step(const PotentialSpec& pot, double eps, double h, const TorusPoint& x, RngStream& rng,
                         StepCounters* counters) {
  check_params(eps, h);
  if (rng.bernoulli(0.5)) return x;
  return mrw_core(pot, eps, h, x, rng, counters);
}

TorusPoint restricted_mrw_step(const PotentialSpec& pot, const BasinLabelFn& basin, int label, double eps, double h,
                               const TorusPoint& x, RngStream& rng, StepCounters* counters) {
  check_params(eps, h);
  if (basin(x) != label) throw std::invalid_argument("restricted_mrw_step: start point lies outside the basin");
  const TorusPoint y = mrw_core(pot, eps, h, x, rng, counters);
  if (y == x) return x;
  if (basin(y) != label) {
    if (counters) {
      ++counters->restriction_rejects;
      --counters->mrw_accepts;
    }
    return x;
  }
  return y;
}

TorusPoint restricted_mrw_step(const PotentialSpec& pot, const BasinGeometry& geom, int label, double eps, double h,
                               const TorusPoint& x, RngStream& rng, StepCounters* counters) {
  return restricted_mrw_step(
      pot, [&geom](const TorusPoint& p) { return geom.label(p); }, label, eps, h, x, rng, counters);
}

PTState pt_swap_sweep(const PotentialSpec& pot, const TemperatureLadder& ladder, PTState state, RngStream& rng,
                      StepCounters* counters) {
  if (static_cast<int>(state.replicas.size()) != ladder.levels()) {
    throw std::invalid_argument("pt_swap_sweep: replica count does not match the ladder");
  }
  // N = 0 has no adjacent pair; S is the identity.
  if (ladder.N == 0) return state;
  if (rng.bernoulli(0.5)) return state;
  const int i = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(ladder.N)));
  if (counters) ++counters->swap_proposals;
  const double lr = swap_log_ratio(ladder.beta(i), ladder.beta(i + 1), pot.value(state.replicas[i]),
                                   pot.value(state.replicas[i + 1]));
  if (metropolis_accept(lr, rng)) {
    std::swap(state.replicas[i], state.replicas[i + 1]);
    if (counters) ++counters->swap_accepts;
  }
  return state;
}

PTState pt_step(const PotentialSpec& pot, const TemperatureLadder& ladder, PTState state, RngStream& rng,
                StepCounters* counters) {
  state = pt_swap_sweep(pot, ladder, std::move(state), rng, counters);
  if (!rng.bernoulli(0.5)) {
    const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(ladder.levels())));
    state.replicas[j] = mrw_step(pot, ladder.eps[j], ladder.h[j], state.replicas[j], rng, counters);
  }
  state = pt_swap_sweep(pot, ladder, std::move(state), rng, counters);
  return state;
}

int st_sample_level(double u, const TemperatureLadder& ladder, RngStream& rng) {
  const int n = ladder.levels();
  double top = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) top = std::max(top, -u / ladder.eps[k]);
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += std::exp(-u / ladder.eps[k] - top);
  double target = rng.uniform() * total;
  for (int k = 0; k < n; ++k) {
    target -= std::exp(-u / ladder.eps[k] - top);
    if (target < 0.0) return k;
  }
  return n - 1;
}

STState st_step(const PotentialSpec& pot, const TemperatureLadder& ladder, STState state, RngStream& rng,
                StepCounters* counters) {
  if (state.level < 0 || state.level > ladder.N) throw std::invalid_argument("st_step: level out of range");
  auto temperature_update = [&] {
    if (rng.bernoulli(0.5)) return;
    const int j = st_sample_level(pot.value(state.position), ladder, rng);
    if (counters) {
      ++counters->level_proposals;
      if (j != state.level) ++counters->level_changes;
    }
    state.level = j;
  };
  temperature_update();
  if (!rng.bernoulli(0.5)) {
    state.position = mrw_step(pot, ladder.eps[state.level], ladder.h[state.level], state.position, rng, counters);
  }
  temperature_update();
  return state;
}

}  // namespace tempergap
