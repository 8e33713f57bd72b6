#include "tempergap/chain.hpp"

#include <chrono>
#include <stdexcept>

#include "tempergap/basin.hpp"

namespace tempergap {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::MRW: return "MRW";
    case KernelKind::LazyMRW: return "LazyMRW";
    case KernelKind::RestrictedMRW: return "RestrictedMRW";
    case KernelKind::PT: return "PT";
    case KernelKind::ST: return "ST";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  for (auto k : {KernelKind::MRW, KernelKind::LazyMRW, KernelKind::RestrictedMRW, KernelKind::PT, KernelKind::ST}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown chain kind '" + name + "'");
}

KernelDescriptor mrw_kernel(PotentialSpec pot, double eps, double h, bool lazy) {
  KernelDescriptor k;
  k.kind = lazy ? KernelKind::LazyMRW : KernelKind::MRW;
  k.potential = std::move(pot);
  k.ladder = single_level(eps, h);
  return k;
}

KernelDescriptor restricted_kernel(PotentialSpec pot, std::shared_ptr<const BasinGeometry> geom, int label,
                                   double eps, double h) {
  if (!geom) throw std::invalid_argument("restricted kernel needs a basin geometry");
  if (label != 1 && label != 2) throw std::invalid_argument("basin label must be 1 or 2");
  KernelDescriptor k;
  k.kind = KernelKind::RestrictedMRW;
  k.potential = std::move(pot);
  k.ladder = single_level(eps, h);
  k.geometry = std::move(geom);
  k.basin_label = label;
  return k;
}

KernelDescriptor pt_kernel(PotentialSpec pot, TemperatureLadder ladder) {
  KernelDescriptor k;
  k.kind = KernelKind::PT;
  k.potential = std::move(pot);
  k.ladder = std::move(ladder);
  return k;
}

KernelDescriptor st_kernel(PotentialSpec pot, TemperatureLadder ladder) {
  KernelDescriptor k = pt_kernel(std::move(pot), std::move(ladder));
  k.kind = KernelKind::ST;
  return k;
}

const TorusPoint& coldest_point(const ChainState& s) {
  if (auto* p = std::get_if<TorusPoint>(&s)) return *p;
  if (auto* p = std::get_if<PTState>(&s)) return p->replicas.back();
  return std::get<STState>(s).position;
}

ChainState initial_state(const KernelDescriptor& k, const TorusPoint& x) {
  switch (k.kind) {
    case KernelKind::PT: return PTState{std::vector<TorusPoint>(k.ladder.levels(), x)};
    case KernelKind::ST: return STState{x, 0};
    default: return x;
  }
}

ChainState advance(const KernelDescriptor& k, const ChainState& s, RngStream& rng, StepCounters* counters) {
  const double eps = k.ladder.eps.at(0);
  const double h = k.ladder.h.at(0);
  switch (k.kind) {
    case KernelKind::MRW: return mrw_step(k.potential, eps, h, std::get<TorusPoint>(s), rng, counters);
    case KernelKind::LazyMRW: return lazy_mrw_step(k.potential, eps, h, std::get<TorusPoint>(s), rng, counters);
    case KernelKind::RestrictedMRW:
      return restricted_mrw_step(k.potential, *k.geometry, k.basin_label, eps, h, std::get<TorusPoint>(s), rng,
                                 counters);
    case KernelKind::PT: return pt_step(k.potential, k.ladder, std::get<PTState>(s), rng, counters);
    case KernelKind::ST: return st_step(k.potential, k.ladder, std::get<STState>(s), rng, counters);
  }
  throw std::logic_error("unreachable kernel kind");
}

Observable energy_observable(const PotentialSpec& pot) {
  return {"energy", [pot](const ChainState& s) { return pot.value(coldest_point(s)); }};
}

Observable basin_observable(std::shared_ptr<const BasinGeometry> geom) {
  return {"basin", [geom](const ChainState& s) { return static_cast<double>(geom->label(coldest_point(s))); }};
}

Observable basin_observable(BasinLabelFn fn) {
  return {"basin", [fn](const ChainState& s) { return static_cast<double>(fn(coldest_point(s))); }};
}

Observable coordinate_observable(int axis) {
  return {"x" + std::to_string(axis), [axis](const ChainState& s) { return coldest_point(s)[axis]; }};
}

Observable level_observable() {
  return {"level", [](const ChainState& s) {
            if (auto* st = std::get_if<STState>(&s)) return static_cast<double>(st->level);
            throw std::invalid_argument("level observable needs an ST state");
          }};
}

const std::vector<double>& Trace::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return columns[i];
  }
  throw std::out_of_range("trace has no observable '" + name + "'");
}

Trace run_chain(const KernelDescriptor& k, const ChainState& initial, const std::vector<Observable>& observables,
                const RunOptions& options, RngStream& rng) {
  if (options.steps < 1) throw std::invalid_argument("run_chain: steps must be >= 1");
  if (options.thin < 1) throw std::invalid_argument("run_chain: thin must be >= 1");
  if (options.burn_in < 0) throw std::invalid_argument("run_chain: burn-in must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  Trace t;
  t.descriptor = k;
  t.seed = rng.seed();
  t.stream_id = rng.stream_id();
  t.steps = options.steps;
  t.thin = options.thin;
  t.burn_in = options.burn_in;
  for (const auto& o : observables) t.names.push_back(o.name);
  t.columns.resize(observables.size());
  const long records = options.steps / options.thin;
  t.step_index.reserve(records);
  for (auto& c : t.columns) c.reserve(records);

  ChainState state = initial;
  for (long i = 0; i < options.burn_in; ++i) state = advance(k, state, rng, nullptr);
  for (long i = 1; i <= options.steps; ++i) {
    state = advance(k, state, rng, &t.counters);
    ++t.counters.steps;
    if (i % options.thin != 0) continue;
    t.step_index.push_back(i);
    for (std::size_t j = 0; j < observables.size(); ++j) {
      try {
        t.columns[j].push_back(observables[j].fn(state));
      } catch (const std::exception& e) {
        throw std::runtime_error("observable '" + observables[j].name + "' failed at step " + std::to_string(i) +
                                 ": " + e.what());
      }
    }
    if (options.store_states) t.states.push_back(state);
  }
  t.final_state = state;
  t.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

long count_crossings(const std::vector<double>& labels) {
  long n = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) n += labels[i] != labels[i - 1] ? 1 : 0;
  return n;
}

}  // namespace tempergap
