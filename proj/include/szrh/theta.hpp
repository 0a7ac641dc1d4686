#ifndef SZRH_THETA_HPP
#define SZRH_THETA_HPP

#include "szrh/types.hpp"

namespace szrh {

/// Characteristic vectors [p; q] of the theta series.
struct ThetaCharacteristic {
  CVector p;
  CVector q;

  static ThetaCharacteristic zero(int g) {
    return {CVector::Zero(g), CVector::Zero(g)};
  }
  /// Half-integer characteristic from integer vectors (entries of p2, q2 are
  /// taken mod 2; the characteristic is p2/2, q2/2).
  static ThetaCharacteristic half_integer(const IVector& p2, const IVector& q2);

  int dim() const { return int(p.size()); }
  bool is_half_integer(double tol = 1e-12) const;
  /// Parity 4 p.q mod 2 of a half-integer characteristic (0 even, 1 odd).
  int parity() const;
};

struct ThetaEvaluation {
  Complex value;
  CVector gradient;
  double truncation_radius = 0.0;
  double error_bound = 0.0;
};

/// Theta series with characteristics,
///   Theta[p;q](z|B) = sum_n exp{ pi i (n+p)^T B (n+p) + 2 pi i (n+p)^T (z+q) },
/// truncated to the ellipsoid on which the Gaussian tail bound is <= tol.
/// radius_override > 0 bypasses the bound-driven radius selection (testing).
ThetaEvaluation theta_char(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi,
                           double tol, double radius_override = 0.0);

/// Matrix of second z-derivatives of the series above.
CMatrix theta_char_hessian(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi,
                           double tol);

/// Residual of the quasi-periodicity law under z -> z + m + B n, normalized
/// by |Theta(z)|. The transformation factor is
///   exp{ -pi i n^T B n - 2 pi i n^T (z+q) + 2 pi i p^T m },
/// which follows directly from re-indexing the defining series.
double quasi_periodicity_check(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi,
                               const IVector& m, const IVector& n, double tol);

/// |Theta[p;q](0|B)|, the proximity proxy for the theta divisor.
double theta_divisor_distance(const CMatrix& B, const ThetaCharacteristic& chi, double tol);

/// Throws NotRiemannMatrix unless B is symmetric with positive-definite
/// imaginary part; returns the Cholesky factor L of Im B (Im B = L L^T).
RMatrix validate_riemann_matrix(const CMatrix& B, double sym_tol = 1e-9);

}  // namespace szrh

#endif  // SZRH_THETA_HPP
