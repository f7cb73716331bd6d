#pragma once

#include "trispin/linalg.hpp"

namespace trispin {

/// Half-integer spin magnitude, stored doubled so quantum numbers stay exact.
class SpinQuantum {
 public:
  // throws unless 2s is a non-negative integer
  explicit SpinQuantum(double s);
  static SpinQuantum from_twice(int twice_s);

  double value() const { return twice_ / 2.0; }
  int twice() const { return twice_; }
  int dimension() const { return twice_ + 1; }

  friend bool operator==(SpinQuantum, SpinQuantum) = default;

 private:
  int twice_;
};

/// Spin matrices in the |s,m> basis ordered m = s, s-1, ..., -s.
/// sz = diag(s, ..., -s); s_plus|s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>;
/// sx = (s_plus + s_minus)/2, sy = (s_plus - s_minus)/2i.
struct SpinOperatorSet {
  Mat sx, sy, sz, s_plus, s_minus;
};

SpinOperatorSet spin_operators(SpinQuantum s);

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention. Returns 0 when
/// M != m1 + m2 or J violates the triangle rule; throws std::invalid_argument
/// on malformed quantum numbers (2j not an integer, j - m not an integer,
/// |m| > j, negative j).
double clebsch_gordan(double j1, double m1, double j2, double m2,
                      double j_total, double m_total);

}  // namespace trispin
