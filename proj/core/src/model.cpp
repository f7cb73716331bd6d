#include "trispin/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <tuple>

namespace trispin {
namespace {

bool supported_s23(SpinQuantum s) { return s.twice() == 1 || s.twice() == 2; }

void require_supported_s23(SpinQuantum s) {
  if (!supported_s23(s))
    throw std::invalid_argument("unsupported s23 = " + std::to_string(s.value()) +
                                "; the model is defined for s23 in {1/2, 1}");
}

std::string format_half(int twice, bool forced_sign) {
  std::string out;
  if (twice > 0 && forced_sign) out += '+';
  if (twice % 2 == 0) {
    out += std::to_string(twice / 2);
  } else {
    out += std::to_string(twice);
    out += "/2";
  }
  return out;
}

int parse_half(std::string_view text, const std::string& field) {
  auto fail = [&] {
    throw std::invalid_argument("label field '" + field + "': cannot parse half-integer '" +
                                std::string(text) + "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  const std::size_t digits_begin = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == digits_begin) fail();
  int magnitude = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data() + digits_begin, text.data() + pos, magnitude);
  if (ec != std::errc{} || ptr != text.data() + pos) fail();
  int twice = 0;
  if (pos == text.size()) {
    twice = 2 * magnitude;
  } else if (text.substr(pos) == "/2") {
    twice = magnitude;
  } else {
    fail();
  }
  return negative ? -twice : twice;
}

std::tuple<int, int, int, int> label_key(const DeviceLabel& label) {
  return {label.twice_m1, label.twice_s23, label.twice_m23, label.site.value_or(-1)};
}

void check_label(const DeviceLabel& label) {
  if (std::abs(label.twice_m1) != 1)
    throw std::invalid_argument("label '" + label.to_string() + "': m1 must be +1/2 or -1/2");
  if (label.twice_s23 < 0)
    throw std::invalid_argument("label '" + label.to_string() + "': s23 must be non-negative");
  if (std::abs(label.twice_m23) > label.twice_s23)
    throw std::invalid_argument("label '" + label.to_string() + "': |m23| exceeds s23");
  if ((label.twice_s23 + label.twice_m23) % 2 != 0)
    throw std::invalid_argument("label '" + label.to_string() +
                                "': s23 - m23 must be an integer");
  if (label.site && *label.site != 2 && *label.site != 3)
    throw std::invalid_argument("label '" + label.to_string() + "': site must be 2 or 3");
}

// m_total desc, then s23 desc, then m1 desc
bool label_order(const DeviceLabel& a, const DeviceLabel& b) {
  const int ma = a.twice_m1 + a.twice_m23;
  const int mb = b.twice_m1 + b.twice_m23;
  return std::tuple(-ma, -a.twice_s23, -a.twice_m1) <
         std::tuple(-mb, -b.twice_s23, -b.twice_m1);
}

std::vector<DeviceLabel> spin_space_labels(SpinQuantum s23) {
  std::vector<DeviceLabel> labels;
  for (int tm1 : {1, -1})
    for (int ts = 2 * s23.twice(); ts >= 0; ts -= 2)
      for (int tm = ts; tm >= -ts; tm -= 2)
        labels.push_back(DeviceLabel{tm1, ts, tm, std::nullopt});
  std::stable_sort(labels.begin(), labels.end(), label_order);
  return labels;
}

// spin-factor pieces of the Hamiltonian in the product basis
struct SpinSpaceTerms {
  Mat kondo2;  // s1 . S2
  Mat kondo3;  // s1 . S3
  Mat heis;    // S2 . S3
  Mat anis;    // S2z^2 + S3z^2
};

SpinSpaceTerms spin_space_terms(SpinQuantum s23) {
  const SpinOperatorSet s1 = spin_operators(SpinQuantum(0.5));
  const SpinOperatorSet s = spin_operators(s23);
  const int n = s23.dimension();
  const Mat i2 = Mat::Identity(2, 2);
  const Mat in = Mat::Identity(n, n);
  const int dim = 2 * n * n;

  SpinSpaceTerms terms{Mat::Zero(dim, dim), Mat::Zero(dim, dim),
                       Mat::Zero(dim, dim), Mat::Zero(dim, dim)};
  const std::array<const Mat*, 3> a1{&s1.sx, &s1.sy, &s1.sz};
  const std::array<const Mat*, 3> a{&s.sx, &s.sy, &s.sz};
  for (int axis = 0; axis < 3; ++axis) {
    terms.kondo2 += kron(*a1[axis], *a[axis], in);
    terms.kondo3 += kron(*a1[axis], in, *a[axis]);
    terms.heis += kron(i2, *a[axis], *a[axis]);
  }
  const Mat sz2 = s.sz * s.sz;
  terms.anis = kron(i2, sz2, in) + kron(i2, in, sz2);
  return terms;
}

}  // namespace

void ModelParams::validate() const {
  require_supported_s23(s23);
  for (double v : {j_h, j_k2, j_k3, d_anis, t_hop.real(), t_hop.imag()})
    if (!std::isfinite(v))
      throw std::invalid_argument("model parameters must be finite");
}

ModelParams ModelParams::isotropic(SpinQuantum s23, double j_h, double j_k,
                                   double d_anis, Complex t_hop) {
  return ModelParams{s23, j_h, j_k, j_k, d_anis, t_hop};
}

ModelParams ModelParams::anisotropic(SpinQuantum s23, double j_h, double j_k,
                                     double delta_k, double d_anis, Complex t_hop) {
  return ModelParams{s23, j_h, j_k + delta_k / 2.0, j_k - delta_k / 2.0, d_anis, t_hop};
}

std::string DeviceLabel::to_string() const {
  std::string out = "m1:" + format_half(twice_m1, true) +
                    "|s23:" + format_half(twice_s23, false) +
                    "|m23:" + format_half(twice_m23, true);
  if (site) out += "|site:" + std::to_string(*site);
  return out;
}

DeviceLabel DeviceLabel::parse(std::string_view text) {
  DeviceLabel label;
  bool have_m1 = false, have_s23 = false, have_m23 = false;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = std::min(text.find('|', begin), text.size());
    const std::string_view part = text.substr(begin, end - begin);
    const std::size_t colon = part.find(':');
    if (colon == std::string_view::npos)
      throw std::invalid_argument("label '" + std::string(text) +
                                  "': expected key:value segments separated by '|'");
    const std::string key(part.substr(0, colon));
    const std::string_view value = part.substr(colon + 1);
    if (key == "m1") {
      label.twice_m1 = parse_half(value, key);
      have_m1 = true;
    } else if (key == "s23") {
      label.twice_s23 = parse_half(value, key);
      have_s23 = true;
    } else if (key == "m23") {
      label.twice_m23 = parse_half(value, key);
      have_m23 = true;
    } else if (key == "site") {
      label.site = parse_half(value, key) / 2;
    } else {
      throw std::invalid_argument("label '" + std::string(text) + "': unknown field '" +
                                  key + "'");
    }
    if (end == text.size()) break;
    begin = end + 1;
  }
  if (!have_m1 || !have_s23 || !have_m23)
    throw std::invalid_argument("label '" + std::string(text) +
                                "': m1, s23 and m23 are all required");
  check_label(label);
  return label;
}

std::string ProductLabel::to_string() const {
  std::string out = "m1:" + format_half(twice_m1, true) +
                    "|m2:" + format_half(twice_m2, true) +
                    "|m3:" + format_half(twice_m3, true);
  if (site) out += "|site:" + std::to_string(*site);
  return out;
}

DeviceBasis::DeviceBasis(SpinQuantum s23, bool site_resolved)
    : s23_(s23), site_resolved_(site_resolved) {
  require_supported_s23(s23);
  const std::vector<DeviceLabel> spin_labels = spin_space_labels(s23);
  if (!site_resolved) {
    labels_ = spin_labels;
  } else {
    labels_.reserve(2 * spin_labels.size());
    for (int site : {2, 3})
      for (DeviceLabel label : spin_labels) {
        label.site = site;
        labels_.push_back(label);
      }
  }
  for (int i = 0; i < static_cast<int>(labels_.size()); ++i)
    index_.emplace(label_key(labels_[static_cast<std::size_t>(i)]), i);
}

DeviceBasis DeviceBasis::spin_space(SpinQuantum s23) { return DeviceBasis(s23, false); }

DeviceBasis DeviceBasis::site_resolved(SpinQuantum s23) { return DeviceBasis(s23, true); }

int DeviceBasis::index_of(const DeviceLabel& label) const {
  check_label(label);
  const auto it = index_.find(label_key(label));
  if (it == index_.end())
    throw std::invalid_argument("label '" + label.to_string() + "' is not in this basis (s23 = " +
                                std::to_string(s23_.value()) +
                                (site_resolved_ ? ", site-resolved)" : ")"));
  return it->second;
}

ProductBasis::ProductBasis(SpinQuantum s23, bool site_resolved) : s23_(s23) {
  require_supported_s23(s23);
  const int ts = s23.twice();
  std::vector<ProductLabel> spin_labels;
  for (int tm1 : {1, -1})
    for (int tm2 = ts; tm2 >= -ts; tm2 -= 2)
      for (int tm3 = ts; tm3 >= -ts; tm3 -= 2)
        spin_labels.push_back(ProductLabel{tm1, tm2, tm3, std::nullopt});
  if (!site_resolved) {
    labels_ = std::move(spin_labels);
  } else {
    labels_.reserve(2 * spin_labels.size());
    for (int site : {2, 3})
      for (ProductLabel label : spin_labels) {
        label.site = site;
        labels_.push_back(label);
      }
  }
}

ProductBasis ProductBasis::spin_space(SpinQuantum s23) { return ProductBasis(s23, false); }

ProductBasis ProductBasis::site_resolved(SpinQuantum s23) { return ProductBasis(s23, true); }

Mat product_to_device(SpinQuantum s23) {
  require_supported_s23(s23);
  const int n = s23.dimension();
  const double s = s23.value();
  const int dim = 2 * n * n;
  const std::vector<DeviceLabel> labels = spin_space_labels(s23);
  Mat u = Mat::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const DeviceLabel& label = labels[static_cast<std::size_t>(col)];
    const int i1 = label.twice_m1 == 1 ? 0 : 1;
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const double m2 = s - i2;
        const double m3 = s - i3;
        const double coeff = clebsch_gordan(s, m2, s, m3, label.twice_s23 / 2.0,
                                            label.twice_m23 / 2.0);
        if (coeff != 0.0) u(i1 * n * n + i2 * n + i3, col) = coeff;
      }
  }
  return u;
}

Mat build_effective_hamiltonian(const ModelParams& p) {
  p.validate();
  const SpinSpaceTerms terms = spin_space_terms(p.s23);
  const Mat h_product = p.j_k2 * terms.kondo2 + p.j_k3 * terms.kondo3 +
                        p.j_h * terms.heis + p.d_anis * terms.anis;
  const Mat u = product_to_device(p.s23);
  return u.adjoint() * h_product * u;
}

Mat build_full_hamiltonian(const ModelParams& p, KondoNormalization kappa) {
  p.validate();
  const double c = kappa == KondoNormalization::matched ? 2.0 : 1.0;
  const SpinSpaceTerms terms = spin_space_terms(p.s23);
  const int dim_spin = 2 * p.s23.dimension() * p.s23.dimension();

  Mat p2 = Mat::Zero(2, 2);
  Mat p3 = Mat::Zero(2, 2);
  p2(0, 0) = 1.0;
  p3(1, 1) = 1.0;
  Mat hop = Mat::Zero(2, 2);
  hop(0, 1) = p.t_hop;
  hop(1, 0) = std::conj(p.t_hop);

  const Mat h_product =
      kron(p2, c * p.j_k2 * terms.kondo2) + kron(p3, c * p.j_k3 * terms.kondo3) +
      kron(Mat::Identity(2, 2), p.j_h * terms.heis + p.d_anis * terms.anis) +
      kron(hop, Mat::Identity(dim_spin, dim_spin));
  const Mat u = kron(Mat::Identity(2, 2), product_to_device(p.s23));
  return u.adjoint() * h_product * u;
}

Mat project_bonding(const Mat& h_full) {
  if (h_full.rows() != h_full.cols() || h_full.rows() % 2 != 0)
    throw std::invalid_argument("project_bonding: need a square matrix of even dimension");
  const Eigen::Index n = h_full.rows() / 2;
  return (h_full.topLeftCorner(n, n) + h_full.topRightCorner(n, n) +
          h_full.bottomLeftCorner(n, n) + h_full.bottomRightCorner(n, n)) / 2.0;
}

Mat trace_out_site(const Mat& rho_full) {
  if (rho_full.rows() != rho_full.cols() || rho_full.rows() % 2 != 0)
    throw std::invalid_argument("trace_out_site: need a square matrix of even dimension");
  const Eigen::Index n = rho_full.rows() / 2;
  return rho_full.topLeftCorner(n, n) + rho_full.bottomRightCorner(n, n);
}

const Block& BlockDecomposition::block_for(double m_total) const& {
  for (const Block& block : blocks)
    if (std::abs(block.m_total - m_total) < 0.25) return block;
  throw std::invalid_argument("no block with m_total = " + std::to_string(m_total));
}

BlockDecomposition block_decompose(const Mat& h, const std::vector<double>& m_per_index,
                                   double leakage_tol) {
  const int dim = static_cast<int>(h.rows());
  if (h.rows() != h.cols() || static_cast<int>(m_per_index.size()) != dim)
    throw std::invalid_argument("block_decompose: dimension mismatch");

  // doubled m as exact integer sector key
  std::vector<int> sector(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i)
    sector[static_cast<std::size_t>(i)] =
        static_cast<int>(std::llround(2.0 * m_per_index[static_cast<std::size_t>(i)]));

  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (sector[static_cast<std::size_t>(i)] == sector[static_cast<std::size_t>(j)]) continue;
      const double mag = std::abs(h(i, j));
      if (mag > leakage_tol)
        throw std::invalid_argument(
            "block_decompose: cross-sector entry |h(" + std::to_string(i) + "," +
            std::to_string(j) + ")| = " + std::to_string(mag) +
            " exceeds tolerance; the Hamiltonian does not conserve total Sz");
    }

  std::vector<int> keys;
  for (int key : sector)
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), std::greater<>());

  BlockDecomposition out;
  for (int key : keys) {
    Block block;
    block.m_total = key / 2.0;
    for (int i = 0; i < dim; ++i)
      if (sector[static_cast<std::size_t>(i)] == key) block.indices.push_back(i);
    const int size = static_cast<int>(block.indices.size());
    block.matrix = Mat(size, size);
    for (int a = 0; a < size; ++a)
      for (int b = 0; b < size; ++b)
        block.matrix(a, b) = h(block.indices[static_cast<std::size_t>(a)],
                               block.indices[static_cast<std::size_t>(b)]);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

BlockDecomposition block_decompose(const Mat& h, const DeviceBasis& basis, double leakage_tol) {
  if (h.rows() != basis.dimension())
    throw std::invalid_argument("block_decompose: matrix does not match the basis dimension");
  std::vector<double> m(static_cast<std::size_t>(basis.dimension()));
  for (int i = 0; i < basis.dimension(); ++i) m[static_cast<std::size_t>(i)] = basis.m_total(i);
  return block_decompose(h, m, leakage_tol);
}

BlockDecomposition block_decompose(const Mat& h, const ProductBasis& basis, double leakage_tol) {
  if (h.rows() != basis.dimension())
    throw std::invalid_argument("block_decompose: matrix does not match the basis dimension");
  std::vector<double> m(static_cast<std::size_t>(basis.dimension()));
  for (int i = 0; i < basis.dimension(); ++i) m[static_cast<std::size_t>(i)] = basis.m_total(i);
  return block_decompose(h, m, leakage_tol);
}

Mat remove_common_diagonal(const Mat& block, const ModelParams& p, bool include_tunneling) {
  double shift = p.j_h + p.d_anis + p.sigma_k() / 4.0;
  if (include_tunneling) shift += 2.0 * p.t_hop.real();
  return block - shift * Mat::Identity(block.rows(), block.cols());
}

Mat total_sz(const DeviceBasis& basis) {
  Mat sz = Mat::Zero(basis.dimension(), basis.dimension());
  for (int i = 0; i < basis.dimension(); ++i) sz(i, i) = basis.m_total(i);
  return sz;
}

}  // namespace trispin
