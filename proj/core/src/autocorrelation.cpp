#include "tempergap/autocorrelation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "tempergap/rng.hpp"

namespace tempergap {
namespace {

// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Unnormalized lagged products sum_s (x_s - mean)(x_{s+t} - mean), t = 0..max_lag.
std::vector<double> lagged_products(const std::vector<double>& x, double mean, int max_lag) {
  const std::size_t n = x.size();
  std::size_t len = 1;
  while (len < 2 * n) len <<= 1;
  double* in = fftw_alloc_real(len);
  fftw_complex* spec = fftw_alloc_complex(len / 2 + 1);
  fftw_plan fwd;
  fftw_plan bwd;
  {
    std::lock_guard lock(plan_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(len), spec, in, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < len; ++i) in[i] = i < n ? x[i] - mean : 0.0;
  fftw_execute(fwd);
  for (std::size_t k = 0; k < len / 2 + 1; ++k) {
    spec[k][0] = spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
    spec[k][1] = 0.0;
  }
  fftw_execute(bwd);
  std::vector<double> c(static_cast<std::size_t>(max_lag) + 1);
  for (int t = 0; t <= max_lag; ++t) c[t] = in[t] / static_cast<double>(len);
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(in);
  fftw_free(spec);
  return c;
}

double mean_of(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

struct Fit {
  double slope = 0.0;
  int first = 0;
  int last = 0;
  bool white = false;
};

Fit fit_window(const std::vector<double>& rho, double hi, double lo) {
  Fit f;
  if (rho.size() < 2 || !(rho[1] >= lo)) {
    f.white = true;
    return f;
  }
  int first = 1;
  while (first < static_cast<int>(rho.size()) && rho[first] > hi) ++first;
  int last = first;
  while (last + 1 < static_cast<int>(rho.size()) && rho[last + 1] >= lo) ++last;
  if (first >= static_cast<int>(rho.size()) || rho[first] < lo) {
    // rho jumps from above hi to below lo in one lag: anchor at rho(0) = 1.
    const int t = std::min<int>(first, static_cast<int>(rho.size()) - 1);
    f.first = f.last = t;
    f.slope = std::log(std::max(rho[t], 1e-300)) / t;
    return f;
  }
  f.first = first;
  f.last = last;
  if (last == first) {
    f.slope = std::log(rho[first]) / first;
    return f;
  }
  double st = 0, sy = 0, stt = 0, sty = 0;
  const int m = last - first + 1;
  for (int t = first; t <= last; ++t) {
    const double y = std::log(rho[t]);
    st += t;
    sy += y;
    stt += static_cast<double>(t) * t;
    sty += t * y;
  }
  f.slope = (m * sty - st * sy) / (m * stt - st * st);
  return f;
}

double gap_from_slope(double slope, long thin) { return 1.0 - std::exp(slope / static_cast<double>(thin)); }

}  // namespace

std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag) {
  if (x.size() < 2) throw std::invalid_argument("autocorrelation: need at least two samples");
  max_lag = std::min<int>(max_lag, static_cast<int>(x.size()) - 1);
  auto c = lagged_products(x, mean_of(x), max_lag);
  if (c[0] <= 0.0) return std::vector<double>(static_cast<std::size_t>(max_lag) + 1, 0.0);
  const double c0 = c[0];
  for (auto& v : c) v /= c0;
  return c;
}

double integrated_autocorrelation_time(const std::vector<double>& x) {
  const auto rho = autocorrelation(x, static_cast<int>(x.size()) - 1);
  double tau = 1.0;
  for (std::size_t t = 1; t < rho.size(); ++t) {
    tau += 2.0 * rho[t];
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0);
}

EmpiricalGap empirical_gap(const std::vector<double>& x, long thin, const EmpiricalGapOptions& opts) {
  if (thin < 1) throw std::invalid_argument("empirical_gap: thin must be >= 1");
  if (static_cast<long>(x.size()) < opts.min_length) {
    throw std::invalid_argument("empirical_gap: series shorter than " + std::to_string(opts.min_length) + " samples");
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
    throw std::invalid_argument("empirical_gap: constant series, the chain never moved the observable");
  }
  const int n = static_cast<int>(x.size());
  const int nb = std::max(2, opts.blocks);
  const int block = n / nb;
  const int max_lag = std::max(2, block - 1);

  EmpiricalGap out;
  const auto rho = autocorrelation(x, max_lag);
  out.tau_int = integrated_autocorrelation_time(x);
  out.block_length = block;
  out.block_length_ok = block >= 5.0 * out.tau_int;
  const Fit fit = fit_window(rho, opts.rho_high, opts.rho_low);
  if (fit.white) {
    out.white_noise = true;
    out.gap_lower_bound = gap_from_slope(std::log(opts.rho_low), thin);
    out.gap = out.ci_low = out.ci_high = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.slope = fit.slope;
  out.window_first = fit.first;
  out.window_last = fit.last;
  out.gap = gap_from_slope(fit.slope, thin);

  // Block bootstrap over per-block lagged-product sums about the global mean.
  const double mu = mean_of(x);
  const int lag_need = std::min(max_lag, std::max(fit.last + 2, 2));
  std::vector<std::vector<double>> stats(nb);
  for (int b = 0; b < nb; ++b) {
    const std::vector<double> part(x.begin() + static_cast<long>(b) * block, x.begin() + static_cast<long>(b + 1) * block);
    stats[b] = lagged_products(part, mu, lag_need);
  }
  RngStream rng(opts.seed, 0x0b00);
  std::vector<double> gaps;
  gaps.reserve(opts.bootstrap_samples);
  std::vector<double> acc(lag_need + 1);
  for (int s = 0; s < opts.bootstrap_samples; ++s) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int b = 0; b < nb; ++b) {
      const auto& st = stats[rng.uniform_index(nb)];
      for (int t = 0; t <= lag_need; ++t) acc[t] += st[t];
    }
    if (acc[0] <= 0.0) continue;
    std::vector<double> r(lag_need + 1);
    for (int t = 0; t <= lag_need; ++t) r[t] = acc[t] / acc[0];
    const Fit bf = fit_window(r, opts.rho_high, opts.rho_low);
    if (!bf.white) gaps.push_back(gap_from_slope(bf.slope, thin));
  }
  if (gaps.size() < 10) {
    out.ci_low = out.ci_high = out.gap;
    return out;
  }
  std::sort(gaps.begin(), gaps.end());
  auto q = [&](double p) { return gaps[static_cast<std::size_t>(p * (gaps.size() - 1))]; };
  out.ci_low = std::min(q(0.025), out.gap);
  out.ci_high = std::max(q(0.975), out.gap);
  return out;
}

EmpiricalGap empirical_gap(const Trace& trace, const std::string& observable, const EmpiricalGapOptions& opts) {
  return empirical_gap(trace.column(observable), trace.thin, opts);
}

}  // namespace tempergap
