#include <algorithm>
#include <limits>
#include <queue>

#include "grid_util.hpp"
#include "tempergap/potential.hpp"

namespace tempergap {

SaddleHeightResult saddle_height(const PotentialSpec& pot, const TorusPoint& m1, const TorusPoint& m2,
                                 int grid_resolution) {
  if (grid_resolution < 4) throw std::invalid_argument("saddle_height: resolution must be >= 4");
  if (m1.dim() != pot.dim() || m2.dim() != pot.dim()) {
    throw std::invalid_argument("saddle_height: dimension mismatch");
  }
  SaddleHeightResult out;
  if (torus_distance(m1, m2) == 0.0) {
    out.value = pot.value(m1);
    out.bottleneck = m1;
    out.path = {m1};
    return out;
  }

  const detail::PeriodicGrid grid(pot.dim(), grid_resolution);
  const auto n = static_cast<std::size_t>(grid.size());
  std::vector<double> u(n);
  for (std::int64_t k = 0; k < grid.size(); ++k) u[k] = pot.value(grid.point(k));

  const std::int64_t source = grid.nearest(m1);
  const std::int64_t target = grid.nearest(m2);

  // Bottleneck Dijkstra: cost of a path is the largest node value on it.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n, kInf);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<char> done(n, 0);
  using Entry = std::pair<double, std::int64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  best[source] = u[source];
  queue.emplace(best[source], source);
  while (!queue.empty()) {
    auto [cost, node] = queue.top();
    queue.pop();
    if (done[node]) continue;
    done[node] = 1;
    if (node == target) break;
    for (auto next : grid.axis_neighbors(node)) {
      if (done[next]) continue;
      const double cand = std::max(cost, u[next]);
      if (cand < best[next]) {
        best[next] = cand;
        parent[next] = node;
        queue.emplace(cand, next);
      }
    }
  }

  std::vector<std::int64_t> nodes;
  for (std::int64_t v = target; v != -1; v = parent[v]) nodes.push_back(v);
  std::reverse(nodes.begin(), nodes.end());
  std::int64_t arg = nodes.front();
  for (auto v : nodes) {
    if (u[v] > u[arg]) arg = v;
    out.path.push_back(grid.point(v));
  }
  out.value = best[target];
  out.bottleneck = grid.point(arg);
  return out;
}

}  // namespace tempergap
