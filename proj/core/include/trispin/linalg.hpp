#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace trispin {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

namespace tol {
// Comfortably below the smallest physical scale used anywhere in the model
// (0.0288 cm^-1).
inline constexpr double hermiticity = 1e-10;      // relative to max entry magnitude
inline constexpr double eigensolver = 1e-10;
inline constexpr double pair_decoupling = 1e-12;  // two-level extraction leakage
}  // namespace tol

double max_abs(const Mat& m);

bool is_hermitian(const Mat& m, double relative_tol = tol::hermiticity);

// (a (x) b)[i*rb + k, j*cb + l] = a(i,j) * b(k,l)
Mat kron(const Mat& a, const Mat& b);
Mat kron(const Mat& a, const Mat& b, const Mat& c);

// count evenly spaced samples covering [lo, hi]; count >= 2
std::vector<double> linspace(double lo, double hi, int count);

/// Spectral decomposition of a Hermitian matrix: eigenvalues ascending,
/// eigenvector columns orthonormal. Degenerate subspaces carry an arbitrary
/// orthonormal basis; consumers must stay basis-independent there.
struct Eigensystem {
  RealVec values;
  Mat vectors;

  // V diag(e^{-i lambda t}) V^H. hbar = 1: energies in cm^-1, times in
  // 1/cm^-1, so E*t is a phase in radians.
  Mat propagator(double time) const;
};

// Throws std::invalid_argument for non-square, non-finite or non-Hermitian
// input and std::runtime_error if the solver fails to converge.
Eigensystem eig_hermitian(const Mat& h);

Mat propagator(const Mat& h, double time);

}  // namespace trispin
