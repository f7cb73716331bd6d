#pragma once

#include "trispin/dynamics.hpp"

namespace trispin {

/// One DJ-resonance line: at J_K = (j_r_num/j_r_den) D the (north, south)
/// transition reaches probability p_r with Rabi frequency
/// omega_r_coefficient * |D|.
struct ResonanceRecord {
  DeviceLabel north;
  DeviceLabel south;
  int j_r_num = 0;
  int j_r_den = 1;
  double p_r = 1.0;
  double omega_r_coefficient = 0.0;

  double j_r_for(double d_anis) const {
    return static_cast<double>(j_r_num) * d_anis / static_cast<double>(j_r_den);
  }
};

/// The four pure-state switching transitions of the s23 = 1 model. Throws
/// for any other spin.
std::vector<ResonanceRecord> resonance_table(SpinQuantum s23);

struct TransitionPeak {
  double probability = 0.0;
  double time = 0.0;
};

/// Maximum of P(initial -> target) over [0, horizon]: sampled on a uniform
/// grid, then golden-section refined around the best sample to 1e-10 time
/// resolution.
TransitionPeak max_transition_probability(const Mat& h, const DeviceBasis& basis,
                                          const DeviceLabel& initial,
                                          const DeviceLabel& target,
                                          double horizon, int samples);

/// First interior local maximum of P(initial -> target) (golden-refined);
/// falls back to the global maximum when the horizon holds no interior peak.
/// The population period is pi/Omega, so Omega = pi / (2 t_first_peak) for a
/// closed pair.
TransitionPeak first_transition_peak(const Mat& h, const DeviceBasis& basis,
                                     const DeviceLabel& initial,
                                     const DeviceLabel& target,
                                     double horizon, int samples);

struct ScanPoint {
  double d = 0.0;
  double j_k = 0.0;
  double delta_k = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;  // pi / (2 t_first_peak); 0 for dark transitions
};

struct ScanResult {
  std::vector<double> d_grid;
  std::vector<double> jk_grid;
  std::vector<ScanPoint> points;  // row-major: d outer, j_k inner
};

/// Per grid point: set D = d and Sigma_K = 2 j_k (keeping the base Delta_K),
/// build the effective Hamiltonian, and record the peak south -> north
/// amplitude and its measured frequency. Horizon = 3 population periods of
/// the local pair estimate, capped at 1e4. Results land in pre-assigned
/// slots, so the output is identical for any worker count.
ScanResult scan_dj(const ModelParams& base, std::span<const double> d_grid,
                   std::span<const double> jk_grid, const DeviceLabel& north,
                   const DeviceLabel& south, int jobs = 1, int samples = 2000);

struct PairAmplitude {
  DeviceLabel initial;
  DeviceLabel target;
  double amplitude = 0.0;
  double j_k_at_max = 0.0;
};

struct SpinHalfBound {
  double max_amplitude = 0.0;
  std::vector<PairAmplitude> per_pair;
};

/// Brute-force maximum of the non-entangled -> entangled switching amplitude
/// in the s23 = 1/2 model, optimized over isotropic J_K (the anisotropy only
/// shifts the diagonal there). All four m-sector analogues are scanned and
/// reported; the overall maximum is returned.
SpinHalfBound spin_half_max_amplitude(const ModelParams& base);

}  // namespace trispin
