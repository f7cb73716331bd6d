#include "trispin/dynamics.hpp"

#include <cmath>

namespace trispin {
namespace {

constexpr double kStateHermTol = 1e-12;
constexpr double kStateTraceTol = 1e-12;
constexpr double kStateEigenvalueFloor = -1e-10;

}  // namespace

DensityMatrix DensityMatrix::pure(const Vec& state) {
  const double norm = state.norm();
  if (!state.allFinite() || norm < 1e-12)
    throw std::invalid_argument("DensityMatrix::pure: state must be finite and non-null");
  const Vec psi = state / norm;
  return DensityMatrix(psi * psi.adjoint(), Trusted{});
}

DensityMatrix DensityMatrix::basis_state(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim)
    throw std::invalid_argument("DensityMatrix::basis_state: index out of range");
  Mat rho = Mat::Zero(dim, dim);
  rho(index, index) = 1.0;
  return DensityMatrix(std::move(rho), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw std::invalid_argument("DensityMatrix::maximally_mixed: dim must be >= 1");
  return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim), Trusted{});
}

DensityMatrix DensityMatrix::from_matrix(Mat rho) {
  if (rho.rows() != rho.cols() || !rho.allFinite())
    throw std::invalid_argument("DensityMatrix: matrix must be square and finite");
  if (max_abs(rho - rho.adjoint()) > kStateHermTol)
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within 1e-12");
  if (std::abs(rho.trace().real() - 1.0) > kStateTraceTol ||
      std::abs(rho.trace().imag()) > kStateTraceTol)
    throw std::invalid_argument("DensityMatrix: trace must equal 1 within 1e-12");
  Eigen::SelfAdjointEigenSolver<Mat> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("DensityMatrix: eigenvalue check failed to converge");
  if (solver.eigenvalues().minCoeff() < kStateEigenvalueFloor)
    throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
  return DensityMatrix(std::move(rho), Trusted{});
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

std::vector<DensityMatrix> evolve(const Mat& h, const DensityMatrix& rho0,
                                  std::span<const double> times) {
  if (h.rows() != rho0.dimension())
    throw std::invalid_argument("evolve: Hamiltonian and state dimensions differ");
  const Eigensystem es = eig_hermitian(h);
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  for (double t : times) {
    const Mat u = es.propagator(t);
    out.push_back(DensityMatrix(u * rho0.matrix() * u.adjoint(), DensityMatrix::Trusted{}));
  }
  return out;
}

std::vector<double> populations(const DensityMatrix& rho, const DeviceBasis& basis) {
  if (rho.dimension() != basis.dimension())
    throw std::invalid_argument("populations: state does not match the basis dimension");
  std::vector<double> out(static_cast<std::size_t>(basis.dimension()));
  for (int i = 0; i < basis.dimension(); ++i)
    out[static_cast<std::size_t>(i)] = rho.matrix()(i, i).real();
  return out;
}

double population_of(const DensityMatrix& rho, const DeviceBasis& basis,
                     const DeviceLabel& label) {
  if (rho.dimension() != basis.dimension())
    throw std::invalid_argument("population_of: state does not match the basis dimension");
  return rho.matrix()(basis.index_of(label), basis.index_of(label)).real();
}

double TwoLevelSystem::rabi_frequency() const {
  return std::sqrt(g * g + eps * eps / 4.0);
}

TwoLevelSystem two_level_reduce(const Mat& h, int north, int south,
                                DeviceLabel north_label, DeviceLabel south_label,
                                double decoupling_tol) {
  const int dim = static_cast<int>(h.rows());
  if (h.rows() != h.cols() || north < 0 || south < 0 || north >= dim || south >= dim ||
      north == south)
    throw std::invalid_argument("two_level_reduce: need two distinct in-range indices");
  for (int k = 0; k < dim; ++k) {
    if (k == north || k == south) continue;
    const double leak = std::max({std::abs(h(north, k)), std::abs(h(k, north)),
                                  std::abs(h(south, k)), std::abs(h(k, south))});
    if (leak > decoupling_tol)
      throw std::invalid_argument(
          "two_level_reduce: pair couples to basis state " + std::to_string(k) +
          " with magnitude " + std::to_string(leak) + "; not a closed two-level system");
  }
  const Complex coupling = h(north, south);
  if (std::abs(coupling.imag()) > decoupling_tol)
    throw std::invalid_argument("two_level_reduce: complex pair coupling is not supported");
  TwoLevelSystem tls;
  tls.eps = (h(north, north) - h(south, south)).real();
  tls.g = coupling.real();
  tls.pole_north = north_label;
  tls.pole_south = south_label;
  return tls;
}

TwoLevelSystem reduce_pair(const Mat& h_device, const DeviceBasis& basis,
                           const DeviceLabel& north, const DeviceLabel& south,
                           double decoupling_tol) {
  if (h_device.rows() != basis.dimension())
    throw std::invalid_argument("reduce_pair: matrix does not match the basis dimension");
  return two_level_reduce(h_device, basis.index_of(north), basis.index_of(south), north, south,
                          decoupling_tol);
}

double rabi_probability(const TwoLevelSystem& tls, double time) {
  const double omega = tls.rabi_frequency();
  if (omega == 0.0) return 0.0;
  const double ratio = tls.g / omega;
  const double osc = std::sin(omega * time);
  return ratio * ratio * osc * osc;
}

BlochSample bloch_sample(const DensityMatrix& rho, const DeviceBasis& basis,
                         const DeviceLabel& north, const DeviceLabel& south,
                         double time) {
  if (rho.dimension() != basis.dimension())
    throw std::invalid_argument("bloch_sample: state does not match the basis dimension");
  const int a = basis.index_of(north);
  const int b = basis.index_of(south);
  const Mat& m = rho.matrix();
  BlochSample sample;
  sample.time = time;
  sample.vz = (m(a, a) - m(b, b)).real();
  sample.vx = 2.0 * m(a, b).real();
  sample.vy = -2.0 * m(a, b).imag();
  sample.weight = (m(a, a) + m(b, b)).real();
  return sample;
}

std::vector<BlochSample> bloch_trajectory(const Mat& h, const DeviceBasis& basis,
                                          const DeviceLabel& north, const DeviceLabel& south,
                                          const DensityMatrix& rho0,
                                          std::span<const double> times) {
  const std::vector<DensityMatrix> states = evolve(h, rho0, times);
  std::vector<BlochSample> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    out.push_back(bloch_sample(states[i], basis, north, south, times[i]));
  return out;
}

std::vector<BlochSample> bloch_trajectory(const Mat& h, const DeviceBasis& basis,
                                          const TwoLevelSystem& tls,
                                          const DensityMatrix& rho0,
                                          std::span<const double> times) {
  return bloch_trajectory(h, basis, tls.pole_north, tls.pole_south, rho0, times);
}

AxisProbabilities axis_probabilities(const BlochSample& sample) {
  return AxisProbabilities{(sample.weight + sample.vx) / 2.0,
                           (sample.weight + sample.vy) / 2.0,
                           (sample.weight + sample.vz) / 2.0};
}

}  // namespace trispin
