#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trispin/spin.hpp"

namespace trispin {

/// Coupling strengths (cm^-1) defining one model instance: a spin-1/2
/// particle exchange-coupled to two spin-s23 particles that carry a mutual
/// Heisenberg exchange and a uniaxial single-ion anisotropy, with the
/// spin-1/2 particle free to hop between the two sites.
struct ModelParams {
  SpinQuantum s23{1.0};  // spin of particles 2 and 3; 1/2 or 1
  double j_h = 0.0;      // Heisenberg exchange between particles 2 and 3
  double j_k2 = 0.0;     // contact exchange, particle 1 <-> particle 2
  double j_k3 = 0.0;     // contact exchange, particle 1 <-> particle 3
  double d_anis = 0.0;   // uniaxial anisotropy D
  Complex t_hop = 0.0;   // hopping amplitude of particle 1

  double sigma_k() const { return j_k2 + j_k3; }
  double delta_k() const { return j_k2 - j_k3; }
  double j_k() const { return sigma_k() / 2.0; }

  // throws std::invalid_argument on non-finite values or unsupported s23
  void validate() const;

  static ModelParams isotropic(SpinQuantum s23, double j_h, double j_k,
                               double d_anis, Complex t_hop = 0.0);
  // j_k2/3 = j_k +/- delta_k / 2
  static ModelParams anisotropic(SpinQuantum s23, double j_h, double j_k,
                                 double delta_k, double d_anis,
                                 Complex t_hop = 0.0);
};

/// |m1> (x) |s23, m23>, optionally tagged with the site particle 1 occupies.
/// Quantum numbers are stored doubled.
struct DeviceLabel {
  int twice_m1 = 1;
  int twice_s23 = 4;
  int twice_m23 = 4;
  std::optional<int> site;  // 2 or 3

  double m_total() const { return (twice_m1 + twice_m23) / 2.0; }

  // "m1:+1/2|s23:2|m23:+1", site-resolved labels append "|site:2"
  std::string to_string() const;
  static DeviceLabel parse(std::string_view text);

  friend bool operator==(const DeviceLabel&, const DeviceLabel&) = default;
};

struct ProductLabel {
  int twice_m1 = 1;
  int twice_m2 = 2;
  int twice_m3 = 2;
  std::optional<int> site;

  double m_total() const { return (twice_m1 + twice_m2 + twice_m3) / 2.0; }
  std::string to_string() const;

  friend bool operator==(const ProductLabel&, const ProductLabel&) = default;
};

/// Ordered device basis: descending m_total, then descending s23, then
/// descending m1. Site-resolved bases repeat that ordering for site 2, then
/// site 3 (matching the site (x) spin Kronecker layout of the full model).
class DeviceBasis {
 public:
  static DeviceBasis spin_space(SpinQuantum s23);     // dim 2(2s+1)^2
  static DeviceBasis site_resolved(SpinQuantum s23);  // dim 4(2s+1)^2

  int dimension() const { return static_cast<int>(labels_.size()); }
  const std::vector<DeviceLabel>& labels() const { return labels_; }
  const DeviceLabel& label(int index) const { return labels_.at(static_cast<std::size_t>(index)); }
  int index_of(const DeviceLabel& label) const;  // throws on unknown label
  double m_total(int index) const { return label(index).m_total(); }
  SpinQuantum s23() const { return s23_; }
  bool has_site_index() const { return site_resolved_; }

 private:
  DeviceBasis(SpinQuantum s23, bool site_resolved);

  SpinQuantum s23_;
  bool site_resolved_;
  std::vector<DeviceLabel> labels_;
  std::map<std::tuple<int, int, int, int>, int> index_;
};

/// Product basis in Kronecker order: particle 1 slowest, then particle 2,
/// then particle 3, each factor with m descending; the site-resolved variant
/// prepends the site factor (site 2 before site 3).
class ProductBasis {
 public:
  static ProductBasis spin_space(SpinQuantum s23);
  static ProductBasis site_resolved(SpinQuantum s23);

  int dimension() const { return static_cast<int>(labels_.size()); }
  const std::vector<ProductLabel>& labels() const { return labels_; }
  double m_total(int index) const { return labels_.at(static_cast<std::size_t>(index)).m_total(); }
  SpinQuantum s23() const { return s23_; }

 private:
  ProductBasis(SpinQuantum s23, bool site_resolved);

  SpinQuantum s23_;
  std::vector<ProductLabel> labels_;
};

inline DeviceBasis device_basis(SpinQuantum s23) { return DeviceBasis::spin_space(s23); }

/// Unitary whose columns are the device states in product coordinates:
/// |d_k> = sum_p U(p,k) |p>, so x_device = U^H x_product and
/// H_device = U^H H_product U.
Mat product_to_device(SpinQuantum s23);

enum class KondoNormalization {
  matched,  // bonding projection reproduces the effective Hamiltonian
  literal,  // second-quantized normalization; bonding projection halves j_k
};

/// H = j_k2 s1.S2 + j_k3 s1.S3 + j_h S2.S3 + D (S2z^2 + S3z^2) on the
/// 2(2s+1)^2 spin space, in device-basis coordinates. Real symmetric;
/// commutes with total Sz exactly (cross-m entries are structural zeros).
Mat build_effective_hamiltonian(const ModelParams& p);

/// Site-resolved Hamiltonian on the site (x) spin space (dim 4(2s+1)^2,
/// site-major, device ordering in the spin factor). The contact exchange
/// acts through site projectors: c * j_ki P_i (x) (s1.S_i) with c = 2
/// (matched) or c = 1 (literal); hopping is t |2><3| + t* |3><2| tensored
/// with the spin identity.
Mat build_full_hamiltonian(const ModelParams& p,
                           KondoNormalization kappa = KondoNormalization::matched);

/// <b|H|b> with |b> = (|2> + |3>)/sqrt(2) in the site factor; halves the
/// dimension. Throws if the dimension is odd.
Mat project_bonding(const Mat& h_full);

/// Partial trace over the leading 2-dim site factor.
Mat trace_out_site(const Mat& rho_full);

struct Block {
  double m_total = 0.0;
  std::vector<int> indices;  // registry indices, in registry order
  Mat matrix;
};

struct BlockDecomposition {
  std::vector<Block> blocks;  // descending m_total

  const Block& block_for(double m_total) const&;  // throws if absent
  const Block& block_for(double m_total) && = delete;  // would dangle
};

/// Groups basis indices by total magnetization and extracts the diagonal
/// blocks. Any cross-sector entry above leakage_tol throws: a Hamiltonian
/// that does not conserve total Sz is a construction bug.
BlockDecomposition block_decompose(const Mat& h, const std::vector<double>& m_per_index,
                                   double leakage_tol);
BlockDecomposition block_decompose(const Mat& h, const DeviceBasis& basis, double leakage_tol);
BlockDecomposition block_decompose(const Mat& h, const ProductBasis& basis, double leakage_tol);

/// Subtracts the constant diagonal (j_h + D + Sigma_K/4, plus t + t* when
/// include_tunneling is set) that block Hamiltonians are quoted without.
/// In the effective (no-site) space the tunneling contribution defaults off.
Mat remove_common_diagonal(const Mat& block, const ModelParams& p,
                           bool include_tunneling = false);

/// diag(m_total) over the registry.
Mat total_sz(const DeviceBasis& basis);

}  // namespace trispin
