#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tempergap/kernels.hpp"

namespace tempergap {

enum class KernelKind { MRW, LazyMRW, RestrictedMRW, PT, ST };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Everything needed to iterate one chain. Single-temperature kinds use
/// level 0 of the ladder.
struct KernelDescriptor {
  KernelKind kind = KernelKind::MRW;
  PotentialSpec potential = flat_potential(1);
  TemperatureLadder ladder;
  std::shared_ptr<const BasinGeometry> geometry;  // RestrictedMRW
  int basin_label = 1;
};

KernelDescriptor mrw_kernel(PotentialSpec pot, double eps, double h, bool lazy = false);
KernelDescriptor restricted_kernel(PotentialSpec pot, std::shared_ptr<const BasinGeometry> geom, int label,
                                   double eps, double h);
KernelDescriptor pt_kernel(PotentialSpec pot, TemperatureLadder ladder);
KernelDescriptor st_kernel(PotentialSpec pot, TemperatureLadder ladder);

using ChainState = std::variant<TorusPoint, PTState, STState>;

/// The state of the coldest replica (PT), the walker (ST) or the single chain.
const TorusPoint& coldest_point(const ChainState& s);

/// Initial state with every replica (or the walker) at x; ST starts at level 0.
ChainState initial_state(const KernelDescriptor& k, const TorusPoint& x);

/// One step of the described kernel.
ChainState advance(const KernelDescriptor& k, const ChainState& s, RngStream& rng, StepCounters* counters = nullptr);

struct Observable {
  std::string name;
  std::function<double(const ChainState&)> fn;
};

Observable energy_observable(const PotentialSpec& pot);
Observable basin_observable(std::shared_ptr<const BasinGeometry> geom);
Observable basin_observable(BasinLabelFn fn);
Observable coordinate_observable(int axis);
Observable level_observable();

struct Trace {
  KernelDescriptor descriptor;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  long steps = 0;
  long thin = 1;
  long burn_in = 0;
  std::vector<std::string> names;
  std::vector<long> step_index;
  std::vector<std::vector<double>> columns;  // one column per observable
  std::vector<ChainState> states;            // filled only when requested
  StepCounters counters;
  double wall_seconds = 0.0;
  ChainState final_state;

  std::size_t length() const { return step_index.size(); }
  const std::vector<double>& column(const std::string& name) const;
};

struct RunOptions {
  long steps = 0;
  long thin = 1;
  long burn_in = 0;
  bool store_states = false;
};

/// Iterate the kernel, recording observables after every `thin`-th step past
/// the burn-in. Rejects steps < 1 and thin < 1.
Trace run_chain(const KernelDescriptor& k, const ChainState& initial, const std::vector<Observable>& observables,
                const RunOptions& options, RngStream& rng);

/// Number of label changes along a basin-indicator series.
long count_crossings(const std::vector<double>& labels);

}  // namespace tempergap
