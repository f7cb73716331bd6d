#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/cg_oracle.hpp"
#include "trispin/spin.hpp"

using namespace trispin;
using trispin::testing::CoupledBasisOracle;

TEST_SUITE_BEGIN("spin");

TEST_CASE("spin-1/2 matrices are half the Pauli matrices") {
  const SpinOperatorSet s = spin_operators(SpinQuantum(0.5));
  CHECK(s.sz(0, 0) == Complex(0.5));
  CHECK(s.sz(1, 1) == Complex(-0.5));
  CHECK(s.sx(0, 1) == Complex(0.5));
  CHECK(s.sx(1, 0) == Complex(0.5));
  CHECK(s.sy(0, 1) == Complex(0.0, -0.5));
  CHECK(s.sy(1, 0) == Complex(0.0, 0.5));
}

TEST_CASE("spin-1 ladder and z matrices") {
  const SpinOperatorSet s = spin_operators(SpinQuantum(1.0));
  const double sqrt2 = std::numbers::sqrt2;
  CHECK(std::abs(s.s_plus(0, 1) - sqrt2) <= 1e-15);
  CHECK(std::abs(s.s_plus(1, 2) - sqrt2) <= 1e-15);
  CHECK(std::abs(s.s_plus(0, 2)) == 0.0);
  CHECK(s.sz(0, 0) == Complex(1.0));
  CHECK(s.sz(1, 1) == Complex(0.0));
  CHECK(s.sz(2, 2) == Complex(-1.0));
}

TEST_CASE("spin-1 casimir") {
  const SpinOperatorSet s = spin_operators(SpinQuantum(1.0));
  const Mat casimir = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
  CHECK(max_abs(casimir - 2.0 * Mat::Identity(3, 3)) <= 1e-14);
}

TEST_CASE("commutation relations for small spins") {
  for (double sv : {0.5, 1.0, 1.5, 2.0}) {
    CAPTURE(sv);
    const SpinOperatorSet s = spin_operators(SpinQuantum(sv));
    const Complex i(0.0, 1.0);
    CHECK(max_abs(s.sx * s.sy - s.sy * s.sx - i * s.sz) <= 1e-12);
    CHECK(max_abs(s.sy * s.sz - s.sz * s.sy - i * s.sx) <= 1e-12);
    CHECK(max_abs(s.sz * s.sx - s.sx * s.sz - i * s.sy) <= 1e-12);
    CHECK(max_abs(s.s_plus - (s.sx + i * s.sy)) <= 1e-15);
    const double c = sv * (sv + 1.0);
    CHECK(max_abs(s.sx * s.sx + s.sy * s.sy + s.sz * s.sz -
                  c * Mat::Identity(s.sx.rows(), s.sx.cols())) <= 1e-12);
  }
}

TEST_CASE("SpinQuantum rejects non-half-integers") {
  CHECK_THROWS_AS(SpinQuantum(0.7), std::invalid_argument);
  CHECK_THROWS_AS(SpinQuantum(-0.5), std::invalid_argument);
  CHECK(SpinQuantum(1.5).twice() == 3);
  CHECK(SpinQuantum(1.5).dimension() == 4);
}

TEST_CASE("clebsch-gordan stretched state") {
  CHECK(clebsch_gordan(1, 1, 1, 1, 2, 2) == 1.0);
}

TEST_CASE("clebsch-gordan coefficients of the symmetric coupled state") {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(clebsch_gordan(1, 0, 1, 1, 2, 1) - inv_sqrt2) <= 1e-15);
  CHECK(std::abs(clebsch_gordan(1, 1, 1, 0, 2, 1) - inv_sqrt2) <= 1e-15);
}

TEST_CASE("clebsch-gordan signs of the antisymmetric combination") {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(clebsch_gordan(1, 1, 1, 0, 1, 1) - inv_sqrt2) <= 1e-15);
  CHECK(std::abs(clebsch_gordan(1, 0, 1, 1, 1, 1) + inv_sqrt2) <= 1e-15);
}

TEST_CASE("clebsch-gordan selection rules return zero") {
  CHECK(clebsch_gordan(1, 1, 1, 1, 2, 1) == 0.0);       // M != m1 + m2
  CHECK(clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0);       // J outside the triangle
  CHECK(clebsch_gordan(0.5, 0.5, 0.5, 0.5, 2, 1) == 0.0);
  CHECK(clebsch_gordan(0.5, 0.5, 1, 0, 0.5, 0.5) != 0.0);
}

TEST_CASE("clebsch-gordan rejects malformed quantum numbers") {
  CHECK_THROWS_AS((void)clebsch_gordan(1, 2, 1, -1, 2, 1), std::invalid_argument);   // |m| > j
  CHECK_THROWS_AS((void)clebsch_gordan(0.5, 0, 1, 0, 1, 0), std::invalid_argument);  // j - m
  CHECK_THROWS_AS((void)clebsch_gordan(0.3, 0.3, 1, 0, 1, 0), std::invalid_argument);
}

TEST_CASE("clebsch-gordan completeness for two spin-1 particles") {
  // rows: coupled (J, M); columns: product (m1, m2)
  Eigen::MatrixXd c(9, 9);
  int row = 0;
  for (int tj = 4; tj >= 0; tj -= 2)
    for (int tm = tj; tm >= -tj; tm -= 2) {
      int col = 0;
      for (int m1 = 1; m1 >= -1; --m1)
        for (int m2 = 1; m2 >= -1; --m2)
          c(row, col++) = clebsch_gordan(1, m1, 1, m2, tj / 2.0, tm / 2.0);
      ++row;
    }
  CHECK((c * c.transpose() - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((c.transpose() * c - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("clebsch-gordan matches the ladder-recursion oracle") {
  for (const auto& [j1, j2] : {std::pair{1.0, 1.0}, std::pair{0.5, 0.5}, std::pair{1.0, 0.5}}) {
    CAPTURE(j1);
    CAPTURE(j2);
    const CoupledBasisOracle oracle(j1, j2);
    for (double j = j1 + j2; j >= std::abs(j1 - j2) - 0.25; j -= 1.0)
      for (double m = j; m >= -j - 0.25; m -= 1.0)
        for (double m1 = j1; m1 >= -j1 - 0.25; m1 -= 1.0) {
          const double m2 = m - m1;
          if (std::abs(m2) > j2 + 0.25) continue;
          const double expected = oracle.coefficient(m1, m2, j, m);
          const double actual = clebsch_gordan(j1, m1, j2, m2, j, m);
          CHECK(std::abs(actual - expected) <= 1e-13);
        }
  }
}

TEST_SUITE_END();
