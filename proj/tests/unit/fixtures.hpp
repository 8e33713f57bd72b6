#pragma once

#include <algorithm>
#include <memory>

#include "tempergap/basin.hpp"
#include "tempergap/perturbation.hpp"

// Shared, lazily built geometries: boundary extraction on DW2 takes seconds.
namespace fixtures {

inline const tempergap::CriticalPoint& lowest_saddle(const tempergap::BasinClassifier& cls) {
  const auto& s = cls.boundary_saddles();
  return *std::min_element(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
}

inline std::shared_ptr<const tempergap::BasinGeometry> dw2_geometry() {
  static const auto g = [] {
    const tempergap::BasinClassifier cls(tempergap::builtin_potential("DW2", {{"c_y", 6.0}, {"mu", 0.1}}));
    return std::make_shared<const tempergap::BasinGeometry>(tempergap::extract_boundary(cls, 0.01));
  }();
  return g;
}

inline std::shared_ptr<const tempergap::BasinGeometry> dw1_geometry() {
  static const auto g = [] {
    const tempergap::BasinClassifier cls(tempergap::builtin_potential("DW1"));
    return std::make_shared<const tempergap::BasinGeometry>(tempergap::extract_boundary(cls, 0.01));
  }();
  return g;
}

inline tempergap::PerturbedPotential perturbed(const std::shared_ptr<const tempergap::BasinGeometry>& g, double a,
                                               double eps) {
  const auto frame = tempergap::build_saddle_frame(*g, lowest_saddle(g->classifier()));
  return tempergap::build_perturbation(g, frame, a, eps);
}

}  // namespace fixtures
