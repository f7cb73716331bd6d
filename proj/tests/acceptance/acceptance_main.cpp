// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion pins its tolerance in code.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "trispin/resonance.hpp"

using namespace trispin;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << std::scientific << v;
  return out.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double uniform_away_from_zero(std::mt19937_64& rng, double lo, double hi) {
  const double magnitude = uniform(rng, lo, hi);
  return rng() % 2 == 0 ? magnitude : -magnitude;
}

DeviceLabel dl(int tm1, int s23, int m23) {
  return DeviceLabel{tm1, 2 * s23, 2 * m23, std::nullopt};
}

const DeviceLabel kNorth = dl(+1, 2, 1);  // entangled pole
const DeviceLabel kSouth = dl(-1, 2, 2);  // prepared product pole

// 1. Effective-model construction: after common-diagonal removal the m = 3/2
//    block equals (1/4)[[0, Dk, 2Sk], [Dk, -8Jh, -2Dk], [2Sk, -2Dk, -3Sk+4D]]
//    in the (north, third, south) ordering, entrywise within 1e-12 up to
//    basis sign conventions, over 100 random parameter draws.
bool criterion_block_construction(std::string& detail) {
  std::mt19937_64 rng(11);
  const DeviceBasis basis = DeviceBasis::spin_space(SpinQuantum(1.0));
  const std::array<DeviceLabel, 3> order = {kNorth, dl(+1, 1, 1), kSouth};
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    ModelParams p;
    p.s23 = SpinQuantum(1.0);
    p.j_h = uniform(rng, -2.0, 2.0);
    p.j_k2 = uniform(rng, -2.0, 2.0);
    p.j_k3 = uniform(rng, -2.0, 2.0);
    p.d_anis = uniform(rng, -2.0, 2.0);

    const Mat h = build_effective_hamiltonian(p);
    const BlockDecomposition blocks = block_decompose(h, basis, 1e-12);
    const Block& sector = blocks.block_for(1.5);
    const Mat cleaned = remove_common_diagonal(sector.matrix, p);

    Eigen::Matrix3d actual;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto a = std::find(sector.indices.begin(), sector.indices.end(),
                                 basis.index_of(order[static_cast<std::size_t>(i)]));
        const auto b = std::find(sector.indices.begin(), sector.indices.end(),
                                 basis.index_of(order[static_cast<std::size_t>(j)]));
        actual(i, j) =
            cleaned(a - sector.indices.begin(), b - sector.indices.begin()).real();
      }

    const double sk = p.sigma_k(), dk = p.delta_k();
    Eigen::Matrix3d reference;
    reference << 0.0, dk, 2.0 * sk,
        dk, -8.0 * p.j_h, -2.0 * dk,
        2.0 * sk, -2.0 * dk, -3.0 * sk + 4.0 * p.d_anis;
    reference /= 4.0;

    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 8; ++mask) {
      Eigen::Vector3d signs;
      for (int i = 0; i < 3; ++i) signs[i] = (mask >> i) & 1 ? -1.0 : 1.0;
      best = std::min(best, (signs.asDiagonal() * actual * signs.asDiagonal() - reference)
                                .cwiseAbs()
                                .maxCoeff());
    }
    worst = std::max(worst, best);
  }
  detail = "max entrywise deviation " + fmt(worst) + " over 100 draws (tol 1e-12)";
  return worst <= 1e-12;
}

// 2. Two-level reductions at Delta_K = 0: (eps, g) = (-(D - 3/2 J_K), J_K)
//    for the m = 3/2 pair and (D + J_K/2, J_K/sqrt(2)) for the m = 1/2 pair,
//    within 1e-12 over 50 random (D, J_K).
bool criterion_two_level_reductions(std::string& detail) {
  std::mt19937_64 rng(22);
  const DeviceBasis basis = DeviceBasis::spin_space(SpinQuantum(1.0));
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const double d = uniform(rng, -2.0, 2.0);
    const double jk = uniform(rng, -2.0, 2.0);
    const Mat h = build_effective_hamiltonian(
        ModelParams::isotropic(SpinQuantum(1.0), uniform(rng, -2.0, 2.0), jk, d));

    const TwoLevelSystem top = reduce_pair(h, basis, kNorth, kSouth);
    worst = std::max(worst, std::abs(top.eps + (d - 1.5 * jk)));
    worst = std::max(worst, std::abs(top.g - jk));

    const TwoLevelSystem mid = reduce_pair(h, basis, dl(+1, 1, 0), dl(-1, 1, 1));
    worst = std::max(worst, std::abs(mid.eps - (d + jk / 2.0)));
    worst = std::max(worst, std::abs(mid.g - jk / std::numbers::sqrt2));
  }
  detail = "max |eps,g| deviation " + fmt(worst) + " over 50 draws (tol 1e-12)";
  return worst <= 1e-12;
}

// 3. Resonance table at D = -0.60: each of the four transitions reaches
//    probability 1 within 1e-8 in the 18-dim evolution, with measured
//    frequency (2/3)|D| or sqrt(2)|D| within 1e-6.
bool criterion_resonance_table(std::string& detail) {
  const double d = -0.60;
  const DeviceBasis basis = DeviceBasis::spin_space(SpinQuantum(1.0));
  double worst_p = 1.0, worst_freq = 0.0;
  for (const ResonanceRecord& row : resonance_table(SpinQuantum(1.0))) {
    const Mat h = build_effective_hamiltonian(
        ModelParams::isotropic(SpinQuantum(1.0), -0.05, row.j_r_for(d), d));
    const double omega_r = row.omega_r_coefficient * std::abs(d);
    const double horizon = 3.0 * kPi / omega_r;
    worst_p = std::min(
        worst_p,
        max_transition_probability(h, basis, row.south, row.north, horizon, 2000).probability);
    const TransitionPeak first =
        first_transition_peak(h, basis, row.south, row.north, horizon, 2000);
    worst_freq = std::max(worst_freq, std::abs(kPi / (2.0 * first.time) - omega_r));
  }
  detail = "min peak probability 1 - " + fmt(1.0 - worst_p) + " (tol 1e-8), max frequency " +
           "deviation " + fmt(worst_freq) + " (tol 1e-6)";
  return worst_p >= 1.0 - 1e-8 && worst_freq <= 1e-6;
}

// 4. Analytic equivalence at Delta_K = 0: the m = 3/2 target population from
//    the exact 18-dim evolution matches (g/Omega)^2 sin^2(Omega t) at 1000
//    times within 1e-10, over 20 random (D, J_K, J_H).
bool criterion_rabi_equivalence(std::string& detail) {
  std::mt19937_64 rng(44);
  const DeviceBasis basis = DeviceBasis::spin_space(SpinQuantum(1.0));
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const double d = uniform_away_from_zero(rng, 0.1, 2.0);
    const double jk = uniform_away_from_zero(rng, 0.1, 2.0);
    const Mat h = build_effective_hamiltonian(
        ModelParams::isotropic(SpinQuantum(1.0), uniform(rng, -2.0, 2.0), jk, d));
    const TwoLevelSystem tls = reduce_pair(h, basis, kNorth, kSouth);
    const std::vector<double> times =
        linspace(0.0, 3.0 * kPi / tls.rabi_frequency(), 1000);
    const auto states = evolve(
        h, DensityMatrix::basis_state(18, basis.index_of(kSouth)), times);
    for (std::size_t i = 0; i < times.size(); ++i)
      worst = std::max(worst, std::abs(population_of(states[i], basis, kNorth) -
                                       rabi_probability(tls, times[i])));
  }
  detail = "max |evolved - analytic| " + fmt(worst) + " over 20 x 1000 samples (tol 1e-10)";
  return worst <= 1e-10;
}

// 5. Robust switching: J_H = -0.05, J_K = -0.40, D = -0.60, t = 0.05,
//    Delta_K / J_K = 0.072, prepared in the product pole. Peak pz >= 0.995
//    over the first three resonant periods in the effective space; the
//    site-resolved 36-dim result is computed and reported, and the criterion
//    passes if either space clears the bound. Runtime < 10 s.
bool criterion_robust_switching(std::string& detail) {
  const auto started = std::chrono::steady_clock::now();
  const ModelParams p =
      ModelParams::anisotropic(SpinQuantum(1.0), -0.05, -0.40, 0.072 * -0.40, -0.60, 0.05);
  const DeviceBasis basis = DeviceBasis::spin_space(p.s23);
  const double omega_r = 2.0 / 3.0 * std::abs(p.d_anis);
  const std::vector<double> times = linspace(0.0, 3.0 * kPi / omega_r, 2000);

  // effective space: pz = (weight + vz)/2 along the switching pair
  const Mat h_eff = build_effective_hamiltonian(p);
  const DensityMatrix rho0 =
      DensityMatrix::basis_state(18, basis.index_of(kSouth));
  double peak_eff = 0.0;
  for (const BlochSample& sample :
       bloch_trajectory(h_eff, basis, kNorth, kSouth, rho0, times))
    peak_eff = std::max(peak_eff, axis_probabilities(sample).pz);

  // site-resolved space: bonding-orbital start, site-traced readout
  const Mat h_full = build_full_hamiltonian(p, KondoNormalization::matched);
  Vec psi = Vec::Zero(36);
  psi[basis.index_of(kSouth)] = 1.0 / std::numbers::sqrt2;
  psi[18 + basis.index_of(kSouth)] = 1.0 / std::numbers::sqrt2;
  double peak_full = 0.0;
  for (const DensityMatrix& state : evolve(h_full, DensityMatrix::pure(psi), times)) {
    const DensityMatrix reduced = DensityMatrix::from_matrix(trace_out_site(state.matrix()));
    peak_full = std::max(peak_full, axis_probabilities(
                                        bloch_sample(reduced, basis, kNorth, kSouth)).pz);
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  detail = "peak pz: effective " + fmt(peak_eff) + ", site-resolved " + fmt(peak_full) +
           " (bound 0.995, either space); " + fmt(seconds) + " s";
  return (peak_eff >= 0.995 || peak_full >= 0.995) && seconds < 10.0;
}

// 6. Bloch rotation regimes: at the resonance |vx| stays below 1e-9 while vz
//    traverses [-1, 1]; with the contact exchange off, an equator state
//    precesses at rate |D| within 1e-6.
bool criterion_bloch_regimes(std::string& detail) {
  const DeviceBasis basis = DeviceBasis::spin_space(SpinQuantum(1.0));
  const double d = -0.60;

  const Mat h_res = build_effective_hamiltonian(
      ModelParams::isotropic(SpinQuantum(1.0), -0.05, 2.0 / 3.0 * d, d));
  const double omega = 2.0 / 3.0 * std::abs(d);
  std::vector<double> times = linspace(0.0, kPi / omega, 1000);
  times.push_back(kPi / (2.0 * omega));
  double max_vx = 0.0, min_vz = 1.0, max_vz = -1.0;
  for (const BlochSample& s : bloch_trajectory(
           h_res, basis, kNorth, kSouth,
           DensityMatrix::basis_state(18, basis.index_of(kSouth)), times)) {
    max_vx = std::max(max_vx, std::abs(s.vx));
    min_vz = std::min(min_vz, s.vz);
    max_vz = std::max(max_vz, s.vz);
  }

  const Mat h_free =
      build_effective_hamiltonian(ModelParams::isotropic(SpinQuantum(1.0), -0.05, 0.0, d));
  Vec psi = Vec::Zero(18);
  psi[basis.index_of(kNorth)] = 1.0 / std::numbers::sqrt2;
  psi[basis.index_of(kSouth)] = 1.0 / std::numbers::sqrt2;
  const std::vector<double> fine = linspace(0.0, 2.0 * kPi / std::abs(d), 4001);
  const auto samples = bloch_trajectory(h_free, basis, kNorth, kSouth,
                                        DensityMatrix::pure(psi), fine);
  double phase = 0.0;
  double previous = std::atan2(samples.front().vy, samples.front().vx);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double current = std::atan2(samples[i].vy, samples[i].vx);
    double delta = current - previous;
    while (delta > kPi) delta -= 2.0 * kPi;
    while (delta < -kPi) delta += 2.0 * kPi;
    phase += delta;
    previous = current;
  }
  const double rate_error = std::abs(std::abs(phase / fine.back()) - std::abs(d));

  detail = "resonance: max|vx| " + fmt(max_vx) + " (tol 1e-9), vz range [" + fmt(min_vz) +
           ", " + fmt(max_vz) + "]; precession rate error " + fmt(rate_error) + " (tol 1e-6)";
  return max_vx < 1e-9 && min_vz <= -1.0 + 1e-9 && max_vz >= 1.0 - 1e-8 &&
         rate_error <= 1e-6;
}

// 7. The s23 = 1/2 model's switching amplitude is 8/9 within 1e-6.
bool criterion_spin_half_bound(std::string& detail) {
  const SpinHalfBound bound =
      spin_half_max_amplitude(ModelParams::isotropic(SpinQuantum(0.5), -0.05, 0.0, -0.60));
  const double deviation = std::abs(bound.max_amplitude - 8.0 / 9.0);
  detail = "max amplitude " + fmt(bound.max_amplitude) + ", deviation from 8/9 " +
           fmt(deviation) + " (tol 1e-6)";
  return deviation <= 1e-6;
}

// 8. Conservation suite over randomized corpora of >= 100 instances each:
//    propagator unitarity and spectral reconstruction within 1e-10;
//    [H, total Sz] = 0 and Hermiticity within 1e-13 with sector sizes
//    {1,3,5,5,3,1}; trace/Hermiticity/purity of rho(t) within 1e-10.
bool criterion_conservation(std::string& detail) {
  std::mt19937_64 rng(88);
  double worst_unitary = 0.0, worst_rebuild = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const int dim = 2 + static_cast<int>(rng() % 35);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        a(i, j) = Complex(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
    const Mat h = (a + a.adjoint()) / 2.0;
    const Eigensystem es = eig_hermitian(h);
    const Mat u = es.propagator(uniform(rng, 0.0, 25.0));
    worst_unitary =
        std::max(worst_unitary, max_abs(u.adjoint() * u - Mat::Identity(dim, dim)));
    worst_rebuild = std::max(
        worst_rebuild,
        max_abs(es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint() - h));
  }

  const DeviceBasis basis = DeviceBasis::spin_space(SpinQuantum(1.0));
  const Mat sz = total_sz(basis);
  double worst_commutator = 0.0, worst_herm = 0.0;
  bool sizes_ok = true;
  for (int draw = 0; draw < 100; ++draw) {
    ModelParams p;
    p.s23 = SpinQuantum(1.0);
    p.j_h = uniform(rng, -2.0, 2.0);
    p.j_k2 = uniform(rng, -2.0, 2.0);
    p.j_k3 = uniform(rng, -2.0, 2.0);
    p.d_anis = uniform(rng, -2.0, 2.0);
    const Mat h = build_effective_hamiltonian(p);
    worst_commutator = std::max(worst_commutator, max_abs(h * sz - sz * h));
    worst_herm = std::max(worst_herm, max_abs(h - h.adjoint()));
    const BlockDecomposition blocks = block_decompose(h, basis, 1e-12);
    const std::array<std::size_t, 6> expected_sizes = {1, 3, 5, 5, 3, 1};
    sizes_ok = sizes_ok && blocks.blocks.size() == 6;
    for (std::size_t i = 0; sizes_ok && i < 6; ++i)
      sizes_ok = blocks.blocks[i].indices.size() == expected_sizes[i];
  }

  double worst_state = 0.0;
  int state_instances = 0;
  for (int draw = 0; draw < 12; ++draw) {
    ModelParams p;
    p.s23 = SpinQuantum(1.0);
    p.j_h = uniform(rng, -2.0, 2.0);
    p.j_k2 = uniform(rng, -2.0, 2.0);
    p.j_k3 = uniform(rng, -2.0, 2.0);
    p.d_anis = uniform(rng, -2.0, 2.0);
    const Mat h = build_effective_hamiltonian(p);
    Vec psi = Vec::Zero(18);
    for (int k = 0; k < 18; ++k) psi[k] = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    const DensityMatrix rho0 = DensityMatrix::pure(psi);
    const double purity0 = rho0.purity();
    const std::vector<double> times = linspace(0.0, 30.0, 10);
    for (const DensityMatrix& rho : evolve(h, rho0, times)) {
      ++state_instances;
      worst_state = std::max(worst_state, std::abs(rho.matrix().trace().real() - 1.0));
      worst_state = std::max(worst_state, max_abs(rho.matrix() - rho.matrix().adjoint()));
      worst_state = std::max(worst_state, std::abs(rho.purity() - purity0));
    }
  }

  detail = "unitarity " + fmt(worst_unitary) + ", reconstruction " + fmt(worst_rebuild) +
           " (tol 1e-10); [H,Sz] " + fmt(worst_commutator) + ", hermiticity " +
           fmt(worst_herm) + " (tol 1e-13); state drift " + fmt(worst_state) + " over " +
           std::to_string(state_instances) + " states (tol 1e-10)";
  return worst_unitary < 1e-10 && worst_rebuild < 1e-10 && worst_commutator < 1e-13 &&
         worst_herm < 1e-13 && sizes_ok && worst_state < 1e-10;
}

struct Criterion {
  const char* name;
  bool (*check)(std::string&);
};

}  // namespace

int main() {
  const std::array<Criterion, 8> criteria = {{
      {"block construction oracle", criterion_block_construction},
      {"two-level reduction constants", criterion_two_level_reductions},
      {"resonance table dynamics", criterion_resonance_table},
      {"analytic Rabi equivalence", criterion_rabi_equivalence},
      {"robust entangled-state switching", criterion_robust_switching},
      {"Bloch rotation regimes", criterion_bloch_regimes},
      {"spin-1/2 switching bound", criterion_spin_half_bound},
      {"conservation suite", criterion_conservation},
  }};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool passed = false;
    try {
      passed = criteria[i].check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!passed) ++failures;
    std::cout << "criterion " << i + 1 << " [" << criteria[i].name << "]: "
              << (passed ? "PASS" : "FAIL") << " - " << detail << "\n";
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: FAILED criteria: " + std::to_string(failures))
            << "\n";
  return failures;
}
