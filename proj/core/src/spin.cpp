#include "trispin/spin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace trispin {
namespace {

constexpr double kHalfIntegerTol = 1e-9;

int to_twice(double value, const char* what) {
  const double doubled = 2.0 * value;
  const double rounded = std::round(doubled);
  if (!std::isfinite(doubled) || std::abs(doubled - rounded) > kHalfIntegerTol)
    throw std::invalid_argument(std::string(what) + " must be a half-integer, got " +
                                std::to_string(value));
  return static_cast<int>(rounded);
}

// exact in double up to 22!
double factorial(int n) {
  static const std::array<double, 33> table = [] {
    std::array<double, 33> f{};
    f[0] = 1.0;
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<double>(i);
    return f;
  }();
  if (n < 0 || static_cast<std::size_t>(n) >= table.size())
    throw std::invalid_argument("clebsch_gordan: quantum numbers too large");
  return table[static_cast<std::size_t>(n)];
}

// factorial of a doubled-integer argument, which must be even and >= 0
double fac_half(int twice) { return factorial(twice / 2); }

}  // namespace

SpinQuantum::SpinQuantum(double s) : twice_(to_twice(s, "spin")) {
  if (twice_ < 0) throw std::invalid_argument("spin must be non-negative");
}

SpinQuantum SpinQuantum::from_twice(int twice_s) {
  if (twice_s < 0) throw std::invalid_argument("spin must be non-negative");
  SpinQuantum s(0.0);
  s.twice_ = twice_s;
  return s;
}

SpinOperatorSet spin_operators(SpinQuantum s) {
  const int n = s.dimension();
  const double sv = s.value();
  Mat sz = Mat::Zero(n, n);
  Mat sp = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = sv - k;
    sz(k, k) = m;
    if (k > 0) sp(k - 1, k) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
  }
  SpinOperatorSet ops;
  ops.s_minus = sp.adjoint();
  ops.sx = (sp + ops.s_minus) / 2.0;
  ops.sy = (sp - ops.s_minus) / Complex(0.0, 2.0);
  ops.sz = std::move(sz);
  ops.s_plus = std::move(sp);
  return ops;
}

double clebsch_gordan(double j1, double m1, double j2, double m2,
                      double j_total, double m_total) {
  const int tj1 = to_twice(j1, "j1"), tm1 = to_twice(m1, "m1");
  const int tj2 = to_twice(j2, "j2"), tm2 = to_twice(m2, "m2");
  const int tj = to_twice(j_total, "j_total"), tm = to_twice(m_total, "m_total");

  if (tj1 < 0 || tj2 < 0 || tj < 0)
    throw std::invalid_argument("clebsch_gordan: negative angular momentum");
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm) > tj)
    throw std::invalid_argument("clebsch_gordan: |m| exceeds j");
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0)
    throw std::invalid_argument("clebsch_gordan: j - m must be an integer");

  if (tm1 + tm2 != tm) return 0.0;
  if (tj < std::abs(tj1 - tj2) || tj > tj1 + tj2) return 0.0;
  if ((tj1 + tj2 + tj) % 2 != 0) return 0.0;  // j1 + j2 + J must be an integer

  // Racah's closed form; every factorial argument below is a true integer.
  const double prefactor = (tj + 1.0) *
      fac_half(tj1 + tj2 - tj) * fac_half(tj1 - tj2 + tj) * fac_half(-tj1 + tj2 + tj) /
      fac_half(tj1 + tj2 + tj + 2) *
      fac_half(tj + tm) * fac_half(tj - tm) *
      fac_half(tj1 - tm1) * fac_half(tj1 + tm1) *
      fac_half(tj2 - tm2) * fac_half(tj2 + tm2);

  const int kmin = std::max({0, -(tj - tj2 + tm1) / 2, -(tj - tj1 - tm2) / 2});
  const int kmax = std::min({(tj1 + tj2 - tj) / 2, (tj1 - tm1) / 2, (tj2 + tm2) / 2});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double denom = factorial(k) *
        fac_half(tj1 + tj2 - tj - 2 * k) * fac_half(tj1 - tm1 - 2 * k) *
        fac_half(tj2 + tm2 - 2 * k) * fac_half(tj - tj2 + tm1 + 2 * k) *
        fac_half(tj - tj1 - tm2 + 2 * k);
    sum += (k % 2 == 0 ? 1.0 : -1.0) / denom;
  }
  return std::sqrt(prefactor) * sum;
}

}  // namespace trispin
