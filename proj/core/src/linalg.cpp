#include "trispin/linalg.hpp"

#include <cmath>

namespace trispin {

double max_abs(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& m, double relative_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, max_abs(m));
  return max_abs(m - m.adjoint()) <= relative_tol * scale;
}

Mat kron(const Mat& a, const Mat& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols();
  const Eigen::Index rb = b.rows(), cb = b.cols();
  Mat out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Mat kron(const Mat& a, const Mat& b, const Mat& c) { return kron(kron(a, b), c); }

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("linspace: need at least two samples");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

Mat Eigensystem::propagator(double time) const {
  const Eigen::Index n = values.size();
  Vec phases(n);
  for (Eigen::Index k = 0; k < n; ++k)
    phases[k] = std::exp(Complex(0.0, -values[k] * time));
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

Eigensystem eig_hermitian(const Mat& h) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("eig_hermitian: matrix must be square");
  if (!h.allFinite())
    throw std::invalid_argument("eig_hermitian: matrix has non-finite entries");
  if (!is_hermitian(h))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

Mat propagator(const Mat& h, double time) { return eig_hermitian(h).propagator(time); }

}  // namespace trispin
