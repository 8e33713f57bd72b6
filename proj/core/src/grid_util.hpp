#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tempergap/torus.hpp"

namespace tempergap::detail {

/// Periodic tensor grid with `res` nodes per axis at coordinates i/res.
class PeriodicGrid {
 public:
  PeriodicGrid(int dim, int res) : dim_(dim), res_(res) {
    total_ = 1;
    for (int i = 0; i < dim; ++i) total_ *= res;
  }

  int dim() const { return dim_; }
  int res() const { return res_; }
  std::int64_t size() const { return total_; }

  std::array<int, kMaxDim> unflatten(std::int64_t n) const {
    std::array<int, kMaxDim> idx{};
    for (int i = 0; i < dim_; ++i) {
      idx[i] = static_cast<int>(n % res_);
      n /= res_;
    }
    return idx;
  }

  std::int64_t flatten(const std::array<int, kMaxDim>& idx) const {
    std::int64_t n = 0;
    for (int i = dim_ - 1; i >= 0; --i) {
      const int k = ((idx[i] % res_) + res_) % res_;
      n = n * res_ + k;
    }
    return n;
  }

  TorusPoint point(std::int64_t n) const {
    const auto idx = unflatten(n);
    Vec raw(dim_);
    for (int i = 0; i < dim_; ++i) raw[i] = static_cast<double>(idx[i]) / res_;
    return wrap(raw);
  }

  /// Nearest node to x.
  std::int64_t nearest(const TorusPoint& x) const {
    std::array<int, kMaxDim> idx{};
    for (int i = 0; i < dim_; ++i) idx[i] = static_cast<int>(std::lround(x[i] * res_)) % res_;
    return flatten(idx);
  }

  /// Neighbors differing by +-1 along a single axis.
  std::vector<std::int64_t> axis_neighbors(std::int64_t n) const {
    std::vector<std::int64_t> out;
    out.reserve(2 * dim_);
    auto idx = unflatten(n);
    for (int i = 0; i < dim_; ++i) {
      for (int s : {-1, 1}) {
        auto j = idx;
        j[i] += s;
        out.push_back(flatten(j));
      }
    }
    return out;
  }

  /// All nodes of the (2r+1)^d block around n, excluding n itself.
  std::vector<std::int64_t> block_neighbors(std::int64_t n, int r) const {
    std::vector<std::int64_t> out;
    const auto idx = unflatten(n);
    const int width = 2 * r + 1;
    std::int64_t count = 1;
    for (int i = 0; i < dim_; ++i) count *= width;
    for (std::int64_t c = 0; c < count; ++c) {
      std::int64_t rem = c;
      auto j = idx;
      bool self = true;
      for (int i = 0; i < dim_; ++i) {
        const int off = static_cast<int>(rem % width) - r;
        rem /= width;
        j[i] += off;
        self = self && off == 0;
      }
      if (!self) out.push_back(flatten(j));
    }
    return out;
  }

 private:
  int dim_;
  int res_;
  std::int64_t total_;
};

}  // namespace tempergap::detail
