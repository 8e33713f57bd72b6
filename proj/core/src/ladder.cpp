#include "tempergap/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tempergap {

TemperatureLadder build_ladder(double eps_high, double eps_low, double nu_bar, double eta) {
  if (!(eps_low > 0.0) || !(eps_low < eps_high) || !std::isfinite(eps_high)) {
    throw std::invalid_argument("build_ladder: need 0 < eps_low < eps_high");
  }
  if (!(nu_bar > 0.0) || !(eta > 0.0)) throw std::invalid_argument("build_ladder: nu_bar and eta must be positive");
  TemperatureLadder L;
  L.eps_high = eps_high;
  L.eps_low = eps_low;
  L.nu_bar = nu_bar;
  L.eta = eta;
  // Round-off in 1/(nu*eps) (e.g. 10.000000000000002) must not bump N.
  const double q = 1.0 / (nu_bar * eps_low);
  L.N = std::max(1, static_cast<int>(std::ceil(q * (1.0 - 1e-12))));
  const double b0 = 1.0 / eps_high;
  const double bN = 1.0 / eps_low;
  L.eps.resize(L.N + 1);
  L.h.resize(L.N + 1);
  for (int k = 0; k <= L.N; ++k) {
    L.eps[k] = k == 0 ? eps_high : (k == L.N ? eps_low : 1.0 / (b0 + k * (bN - b0) / L.N));
    L.h[k] = std::min(eta * L.eps[k] * L.eps[k], 1.0);
  }
  return L;
}

TemperatureLadder single_level(double eps, double h) { return custom_ladder({eps}, {h}); }

TemperatureLadder custom_ladder(std::vector<double> eps, std::vector<double> h) {
  if (eps.empty() || eps.size() != h.size()) throw std::invalid_argument("ladder: eps and h must match in length");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0) || !std::isfinite(eps[k])) throw std::invalid_argument("ladder: temperatures must be positive");
    if (!(h[k] > 0.0) || h[k] > 1.0) throw std::invalid_argument("ladder: step sizes must lie in (0, 1]");
    if (k > 0 && !(eps[k] <= eps[k - 1])) throw std::invalid_argument("ladder: temperatures must decrease");
  }
  TemperatureLadder L;
  L.N = static_cast<int>(eps.size()) - 1;
  L.eps_high = eps.front();
  L.eps_low = eps.back();
  L.eps = std::move(eps);
  L.h = std::move(h);
  return L;
}

}  // namespace tempergap
