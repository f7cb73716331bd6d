#include "trispin/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace trispin {
namespace {

constexpr double kPeakTimeResolution = 1e-10;
constexpr double kHorizonCap = 1e4;  // 1/cm^-1, bounds runtime as Omega -> 0

// |<target| e^{-iHt} |initial>|^2 from one spectral decomposition
class TransitionProbability {
 public:
  TransitionProbability(const Mat& h, int initial, int target) : es_(eig_hermitian(h)) {
    const Eigen::Index n = es_.values.size();
    coeffs_ = Vec(n);
    for (Eigen::Index k = 0; k < n; ++k)
      coeffs_[k] = es_.vectors(target, k) * std::conj(es_.vectors(initial, k));
  }

  double operator()(double t) const {
    Complex amplitude = 0.0;
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k)
      amplitude += coeffs_[k] * std::exp(Complex(0.0, -es_.values[k] * t));
    return std::norm(amplitude);
  }

 private:
  Eigensystem es_;
  Vec coeffs_;
};

template <typename F>
TransitionPeak golden_max(const F& f, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > kPeakTimeResolution) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double t = (a + b) / 2.0;
  return TransitionPeak{f(t), t};
}

struct SampledGrid {
  std::vector<double> times;
  std::vector<double> values;
};

SampledGrid sample_probability(const TransitionProbability& p, double horizon, int samples) {
  if (!(horizon > 0.0)) throw std::invalid_argument("transition search: horizon must be > 0");
  if (samples < 2) throw std::invalid_argument("transition search: need at least 2 samples");
  SampledGrid grid;
  grid.times = linspace(0.0, horizon, samples);
  grid.values.reserve(grid.times.size());
  for (double t : grid.times) grid.values.push_back(p(t));
  return grid;
}

TransitionPeak refine_around(const TransitionProbability& p, const SampledGrid& grid,
                             std::size_t index) {
  const double lo = index == 0 ? grid.times.front() : grid.times[index - 1];
  const double hi = index + 1 == grid.times.size() ? grid.times.back() : grid.times[index + 1];
  const TransitionPeak refined = golden_max(p, lo, hi);
  // on ties (up to roundoff noise in |amplitude|^2) keep the grid sample;
  // its time is exact
  if (grid.values[index] >= refined.probability - 1e-14)
    return TransitionPeak{grid.values[index], grid.times[index]};
  return refined;
}

}  // namespace

std::vector<ResonanceRecord> resonance_table(SpinQuantum s23) {
  if (s23.twice() != 2)
    throw std::invalid_argument("resonance_table is defined for the s23 = 1 model");
  const double sqrt2 = std::numbers::sqrt2;
  auto label = [](int tm1, int s23v, int m23v) {
    return DeviceLabel{tm1, 2 * s23v, 2 * m23v, std::nullopt};
  };
  return {
      {label(+1, 2, +1), label(-1, 2, +2), 2, 3, 1.0, 2.0 / 3.0},
      {label(+1, 2, -2), label(-1, 2, -1), 2, 3, 1.0, 2.0 / 3.0},
      {label(+1, 1, 0), label(-1, 1, +1), -2, 1, 1.0, sqrt2},
      {label(+1, 1, -1), label(-1, 1, 0), -2, 1, 1.0, sqrt2},
  };
}

TransitionPeak max_transition_probability(const Mat& h, const DeviceBasis& basis,
                                          const DeviceLabel& initial,
                                          const DeviceLabel& target,
                                          double horizon, int samples) {
  const TransitionProbability p(h, basis.index_of(initial), basis.index_of(target));
  const SampledGrid grid = sample_probability(p, horizon, samples);
  const std::size_t best = static_cast<std::size_t>(
      std::max_element(grid.values.begin(), grid.values.end()) - grid.values.begin());
  return refine_around(p, grid, best);
}

TransitionPeak first_transition_peak(const Mat& h, const DeviceBasis& basis,
                                     const DeviceLabel& initial,
                                     const DeviceLabel& target,
                                     double horizon, int samples) {
  const TransitionProbability p(h, basis.index_of(initial), basis.index_of(target));
  const SampledGrid grid = sample_probability(p, horizon, samples);
  for (std::size_t i = 1; i + 1 < grid.values.size(); ++i) {
    if (grid.values[i] >= grid.values[i - 1] && grid.values[i] >= grid.values[i + 1] &&
        grid.values[i] > 1e-9)
      return refine_around(p, grid, i);
  }
  const std::size_t best = static_cast<std::size_t>(
      std::max_element(grid.values.begin(), grid.values.end()) - grid.values.begin());
  return refine_around(p, grid, best);
}

ScanResult scan_dj(const ModelParams& base, std::span<const double> d_grid,
                   std::span<const double> jk_grid, const DeviceLabel& north,
                   const DeviceLabel& south, int jobs, int samples) {
  base.validate();
  if (d_grid.empty() || jk_grid.empty())
    throw std::invalid_argument("scan_dj: degenerate (empty) grid");
  for (double v : d_grid)
    if (!std::isfinite(v)) throw std::invalid_argument("scan_dj: non-finite d grid value");
  for (double v : jk_grid)
    if (!std::isfinite(v)) throw std::invalid_argument("scan_dj: non-finite j_k grid value");
  if (jobs < 1) throw std::invalid_argument("scan_dj: jobs must be >= 1");
  if (north.m_total() != south.m_total())
    throw std::invalid_argument("scan_dj: pair labels have different total magnetization; "
                                "transitions conserve m");
  const DeviceBasis basis = DeviceBasis::spin_space(base.s23);
  const int a = basis.index_of(north);
  const int b = basis.index_of(south);
  const double base_delta = base.delta_k();

  ScanResult result;
  result.d_grid.assign(d_grid.begin(), d_grid.end());
  result.jk_grid.assign(jk_grid.begin(), jk_grid.end());
  result.points.resize(d_grid.size() * jk_grid.size());

  auto evaluate = [&](std::size_t flat) {
    const std::size_t di = flat / jk_grid.size();
    const std::size_t ji = flat % jk_grid.size();
    ModelParams p = base;
    p.d_anis = d_grid[di];
    p.j_k2 = jk_grid[ji] + base_delta / 2.0;
    p.j_k3 = jk_grid[ji] - base_delta / 2.0;
    const Mat h = build_effective_hamiltonian(p);

    // local pair estimate sets the horizon; exactness is not needed here
    const double eps_est = (h(a, a) - h(b, b)).real();
    const double g_est = std::abs(h(a, b));
    const double omega_est = std::sqrt(g_est * g_est + eps_est * eps_est / 4.0);
    const double horizon =
        omega_est > 3.0 * std::numbers::pi / kHorizonCap ? 3.0 * std::numbers::pi / omega_est
                                                         : kHorizonCap;

    ScanPoint point;
    point.d = d_grid[di];
    point.j_k = jk_grid[ji];
    point.delta_k = base_delta;
    const TransitionPeak peak = max_transition_probability(h, basis, south, north, horizon, samples);
    point.amplitude = peak.probability;
    if (peak.probability > 1e-9) {
      const TransitionPeak first = first_transition_peak(h, basis, south, north, horizon, samples);
      point.frequency = std::numbers::pi / (2.0 * first.time);
    }
    result.points[flat] = point;
  };

  const std::size_t total = result.points.size();
  if (jobs == 1) {
    for (std::size_t flat = 0; flat < total; ++flat) evaluate(flat);
  } else {
    // fixed slot per grid point keeps the output independent of scheduling
    std::vector<std::thread> workers;
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w)
      workers.emplace_back([&, w] {
        for (std::size_t flat = w; flat < total; flat += n_workers) evaluate(flat);
      });
    for (std::thread& worker : workers) worker.join();
  }
  return result;
}

SpinHalfBound spin_half_max_amplitude(const ModelParams& base) {
  base.validate();
  if (base.s23.twice() != 1)
    throw std::invalid_argument("spin_half_max_amplitude requires the s23 = 1/2 model");

  auto label = [](int tm1, int ts23, int tm23) {
    return DeviceLabel{tm1, ts23, tm23, std::nullopt};
  };
  // the non-entangled poles are |m1>|1,+-1>; targets cover both coupled
  // multiplets in each m sector
  const std::vector<std::pair<DeviceLabel, DeviceLabel>> pairs = {
      {label(-1, 2, 2), label(+1, 2, 0)},   // |v>|1,+1> -> |^>|1,0>
      {label(-1, 2, 2), label(+1, 0, 0)},   // |v>|1,+1> -> |^>|0,0>
      {label(+1, 2, -2), label(-1, 2, 0)},  // |^>|1,-1> -> |v>|1,0>
      {label(+1, 2, -2), label(-1, 0, 0)},  // |^>|1,-1> -> |v>|0,0>
  };

  const DeviceBasis basis = DeviceBasis::spin_space(base.s23);
  SpinHalfBound bound;
  for (const auto& [initial, target] : pairs) {
    PairAmplitude entry{initial, target, 0.0, 0.0};
    for (int i = 1; i <= 40; ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double jk = sign * 0.05 * i;
        ModelParams p = base;
        p.j_k2 = jk;
        p.j_k3 = jk;
        const Mat h = build_effective_hamiltonian(p);
        const int ia = basis.index_of(initial);
        const int ib = basis.index_of(target);
        const double eps_est = (h(ib, ib) - h(ia, ia)).real();
        const double g_est = std::abs(h(ia, ib));
        const double omega_est = std::sqrt(g_est * g_est + eps_est * eps_est / 4.0);
        const double horizon = omega_est > 3.0 * std::numbers::pi / kHorizonCap
                                   ? 3.0 * std::numbers::pi / omega_est
                                   : kHorizonCap;
        const TransitionPeak peak =
            max_transition_probability(h, basis, initial, target, horizon, 1500);
        if (peak.probability > entry.amplitude) {
          entry.amplitude = peak.probability;
          entry.j_k_at_max = jk;
        }
      }
    }
    bound.max_amplitude = std::max(bound.max_amplitude, entry.amplitude);
    bound.per_pair.push_back(std::move(entry));
  }
  return bound;
}

}  // namespace trispin
