#pragma once

#include <span>

#include "trispin/model.hpp"

namespace trispin {

/// Hermitian (1e-12), unit trace (1e-12), positive semidefinite (eigenvalues
/// >= -1e-10). Checked on construction from raw matrices; evolution outputs
/// are produced through a trusted path and audited by the conservation tests.
class DensityMatrix {
 public:
  static DensityMatrix pure(const Vec& state);             // normalizes
  static DensityMatrix basis_state(int dim, int index);
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix from_matrix(Mat rho);               // validates

  int dimension() const { return static_cast<int>(rho_.rows()); }
  const Mat& matrix() const { return rho_; }
  double purity() const;  // tr(rho^2)

 private:
  struct Trusted {};
  DensityMatrix(Mat rho, Trusted) : rho_(std::move(rho)) {}

  Mat rho_;

  friend std::vector<DensityMatrix> evolve(const Mat&, const DensityMatrix&,
                                           std::span<const double>);
};

/// rho(t) = U(t) rho0 U(t)^H with U(t) = V e^{-i lambda t} V^H from a single
/// spectral decomposition of h. Trace, spectrum and purity are preserved.
std::vector<DensityMatrix> evolve(const Mat& h, const DensityMatrix& rho0,
                                  std::span<const double> times);

/// Diagonal of rho in registry order.
std::vector<double> populations(const DensityMatrix& rho, const DeviceBasis& basis);
double population_of(const DensityMatrix& rho, const DeviceBasis& basis,
                     const DeviceLabel& label);

/// H_2 = (eps/2) diag(1,-1) + g offdiag on the ordered (north, south) pair,
/// equal to the source matrix restricted to the pair up to a multiple of the
/// identity: eps = h_nn - h_ss, g = h_ns.
struct TwoLevelSystem {
  double eps = 0.0;  // cm^-1
  double g = 0.0;    // cm^-1
  DeviceLabel pole_north;
  DeviceLabel pole_south;

  double rabi_frequency() const;  // sqrt(g^2 + eps^2/4)
};

/// Extracts the pair (north, south) from h, requiring those rows/columns to
/// couple to nothing else: leakage above decoupling_tol throws. Works on a
/// full device-basis Hamiltonian or on a sector block.
TwoLevelSystem two_level_reduce(const Mat& h, int north, int south,
                                DeviceLabel north_label, DeviceLabel south_label,
                                double decoupling_tol = tol::pair_decoupling);
TwoLevelSystem reduce_pair(const Mat& h_device, const DeviceBasis& basis,
                           const DeviceLabel& north, const DeviceLabel& south,
                           double decoupling_tol = tol::pair_decoupling);

/// P(t) = (g/Omega)^2 sin^2(Omega t), Omega = sqrt(g^2 + eps^2/4);
/// identically 0 when Omega = 0.
double rabi_probability(const TwoLevelSystem& tls, double time);

struct BlochSample {
  double time = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;
  double weight = 0.0;  // rho_nn + rho_ss, the in-pair weight
};

/// With a = north, b = south: vz = rho_aa - rho_bb, vx = 2 Re rho_ab,
/// vy = -2 Im rho_ab (positive eps rotates V from +x toward +y). When the
/// evolution leaks outside the pair, |V| < weight <= 1.
BlochSample bloch_sample(const DensityMatrix& rho, const DeviceBasis& basis,
                         const DeviceLabel& north, const DeviceLabel& south,
                         double time = 0.0);

std::vector<BlochSample> bloch_trajectory(const Mat& h, const DeviceBasis& basis,
                                          const DeviceLabel& north,
                                          const DeviceLabel& south,
                                          const DensityMatrix& rho0,
                                          std::span<const double> times);
std::vector<BlochSample> bloch_trajectory(const Mat& h, const DeviceBasis& basis,
                                          const TwoLevelSystem& tls,
                                          const DensityMatrix& rho0,
                                          std::span<const double> times);

struct AxisProbabilities {
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
};

/// p_u = (weight + V.u)/2 for u in {x, y, z}. With full weight, pz is the
/// north-pole population.
AxisProbabilities axis_probabilities(const BlochSample& sample);

}  // namespace trispin
