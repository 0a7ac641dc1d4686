#include "doctest.h"

#include <cmath>
#include <random>

#include "szrh/theta.hpp"

using namespace szrh;

namespace {

CMatrix i_identity(int g) {
  CMatrix B = CMatrix::Zero(g, g);
  for (int i = 0; i < g; ++i) B(i, i) = kI;
  return B;
}

// direct-summation oracle over the box |n_i| <= 10
Complex brute_theta(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi) {
  const int g = int(B.rows());
  Complex acc{0.0, 0.0};
  IVector n = IVector::Constant(g, -10);
  while (true) {
    CVector np = chi.p;
    for (int i = 0; i < g; ++i) np[i] += double(n[i]);
    Complex quad{0, 0}, lin{0, 0};
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) quad += np[i] * B(i, j) * np[j];
      lin += np[i] * (z[i] + chi.q[i]);
    }
    acc += std::exp(kPi * kI * quad + 2.0 * kPi * kI * lin);
    int i = 0;
    for (; i < g; ++i) {
      if (n[i] < 10) {
        ++n[i];
        break;
      }
      n[i] = -10;
    }
    if (i == g) break;
  }
  return acc;
}

}  // namespace

TEST_CASE("g=1 theta constant at B=i matches the direct sum") {
  const CMatrix B = i_identity(1);
  const auto ev = theta_char(CVector::Zero(1), B, ThetaCharacteristic::zero(1), 1e-13);
  CHECK(std::abs(ev.value - Complex(1.0864348112133080, 0.0)) < 1e-12);
  CHECK(std::abs(ev.value - brute_theta(CVector::Zero(1), B, ThetaCharacteristic::zero(1))) < 1e-13);
  CHECK(ev.error_bound <= 1e-13);
}

TEST_CASE("odd half-integer characteristic vanishes at z=0") {
  const CMatrix B = i_identity(1);
  ThetaCharacteristic odd;
  odd.p = CVector::Constant(1, Complex(0.5, 0.0));
  odd.q = CVector::Constant(1, Complex(0.5, 0.0));
  CHECK(odd.parity() == 1);
  CHECK(std::abs(theta_char(CVector::Zero(1), B, odd, 1e-13).value) < 1e-13);
}

TEST_CASE("diagonal Riemann matrix factorizes the lattice sum") {
  const auto v1 = theta_char(CVector::Zero(1), i_identity(1), ThetaCharacteristic::zero(1), 1e-13).value;
  const auto v2 = theta_char(CVector::Zero(2), i_identity(2), ThetaCharacteristic::zero(2), 1e-13).value;
  CHECK(std::abs(v2 - v1 * v1) < 1e-12);
}

TEST_CASE("quasi-periodicity residuals") {
  const CMatrix B = i_identity(1);
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  ThetaCharacteristic chi;
  chi.p = CVector::Constant(1, Complex(0.13, 0.0));
  chi.q = CVector::Constant(1, Complex(-0.21, 0.0));
  for (int rep = 0; rep < 4; ++rep) {
    CVector z(1);
    z[0] = Complex(u(rng), u(rng));
    IVector m0 = IVector::Zero(1), n0 = IVector::Zero(1);
    CHECK(quasi_periodicity_check(z, B, chi, m0, n0, 1e-13) < 1e-14);
    IVector m1 = IVector::Constant(1, 1);
    CHECK(quasi_periodicity_check(z, B, chi, m1, n0, 1e-13) < 1e-12);
    IVector n1 = IVector::Constant(1, 1);
    CHECK(quasi_periodicity_check(z, B, chi, m0, n1, 1e-13) < 1e-12);
  }
}

TEST_CASE("gradient matches central differences") {
  CMatrix B(2, 2);
  B << Complex(0.31, 1.12), Complex(0.05, 0.21), Complex(0.05, 0.21), Complex(-0.12, 0.87);
  ThetaCharacteristic chi;
  chi.p = CVector::Zero(2);
  chi.q = CVector::Zero(2);
  chi.p[0] = Complex(0.07, 0.0);
  chi.q[1] = Complex(0.19, 0.0);
  CVector z(2);
  z << Complex(0.11, 0.04), Complex(-0.23, 0.09);
  const auto ev = theta_char(z, B, chi, 1e-13);
  const double h = 1e-5;
  for (int k = 0; k < 2; ++k) {
    CVector zp = z, zm = z;
    zp[k] += h;
    zm[k] -= h;
    const Complex fd =
        (theta_char(zp, B, chi, 1e-13).value - theta_char(zm, B, chi, 1e-13).value) / (2.0 * h);
    CHECK(std::abs(fd - ev.gradient[k]) / std::abs(ev.gradient[k]) < 1e-7);
  }
}

TEST_CASE("heat equation links z-Hessian to B-derivative") {
  CMatrix B(2, 2);
  B << Complex(0.31, 1.12), Complex(0.05, 0.21), Complex(0.05, 0.21), Complex(-0.12, 0.87);
  const ThetaCharacteristic chi = ThetaCharacteristic::zero(2);
  CVector z(2);
  z << Complex(0.21, 0.03), Complex(0.05, -0.11);
  const CMatrix H = theta_char_hessian(z, B, chi, 1e-13);
  const double h = 1e-4;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      CMatrix Bp = B, Bm = B;
      Bp(k, l) += h;
      Bm(k, l) -= h;
      if (k != l) {
        Bp(l, k) += h;
        Bm(l, k) -= h;
      }
      const Complex fd =
          (theta_char(z, Bp, chi, 1e-13).value - theta_char(z, Bm, chi, 1e-13).value) / (2.0 * h);
      const Complex dB = (k == l) ? fd : fd / 2.0;  // symmetric perturbation counts both entries
      CHECK(std::abs(H(k, l) - 4.0 * kPi * kI * dB) / std::abs(H(k, l)) < 1e-6);
    }
  }
}

TEST_CASE("parity symmetry for half-integer characteristics") {
  CMatrix B(2, 2);
  B << Complex(0.2, 1.3), Complex(-0.1, 0.4), Complex(-0.1, 0.4), Complex(0.3, 1.1);
  CVector z(2);
  z << Complex(0.17, 0.05), Complex(-0.08, 0.12);
  IVector p2(2), q2(2);
  for (int a = 0; a < 4; ++a) {
    p2 << a % 2, a / 2;
    for (int b = 0; b < 4; ++b) {
      q2 << b % 2, b / 2;
      const ThetaCharacteristic chi = ThetaCharacteristic::half_integer(p2, q2);
      const double sign = chi.parity() == 0 ? 1.0 : -1.0;
      const Complex v1 = theta_char(z, B, chi, 1e-13).value;
      const Complex v2 = theta_char((-z).eval(), B, chi, 1e-13).value;
      CHECK(std::abs(v2 - sign * v1) < 1e-11 * std::max(1.0, std::abs(v1)));
    }
  }
}

TEST_CASE("truncation certificate: radius + 1 changes the value within the bound") {
  CMatrix B(2, 2);
  B << Complex(0.31, 1.12), Complex(0.05, 0.21), Complex(0.05, 0.21), Complex(-0.12, 0.87);
  const ThetaCharacteristic chi = ThetaCharacteristic::zero(2);
  CVector z(2);
  z << Complex(0.4, 0.1), Complex(-0.3, 0.2);
  const auto ev = theta_char(z, B, chi, 1e-10);
  const auto ev2 = theta_char(z, B, chi, 1e-10, ev.truncation_radius + 1.0);
  CHECK(std::abs(ev.value - ev2.value) <= ev.error_bound);
}

TEST_CASE("divisor distance and guards") {
  const CMatrix B = i_identity(1);
  ThetaCharacteristic odd;
  odd.p = CVector::Constant(1, Complex(0.5, 0.0));
  odd.q = CVector::Constant(1, Complex(0.5, 0.0));
  CHECK(theta_divisor_distance(B, odd, 1e-13) < 1e-12);
  CHECK(theta_divisor_distance(B, ThetaCharacteristic::zero(1), 1e-13) ==
        doctest::Approx(1.0864348112).epsilon(1e-9));

  CMatrix bad(1, 1);
  bad(0, 0) = Complex(0.3, -1.0);
  try {
    theta_char(CVector::Zero(1), bad, ThetaCharacteristic::zero(1), 1e-12);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotRiemannMatrix);
  }

  CMatrix tiny(1, 1);
  tiny(0, 0) = Complex(0.0, 1e-6);
  try {
    theta_char(CVector::Zero(1), tiny, ThetaCharacteristic::zero(1), 1e-12);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ToleranceUnachievable);
  }
}
