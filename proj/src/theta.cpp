#include "szrh/theta.hpp"

#include <cmath>
#include <functional>

namespace szrh {

namespace {

// upper incomplete gamma for s a positive multiple of 1/2
double upper_gamma(double s, double x) {
  double val, scur;
  if (std::abs(s - std::round(s)) < 0.25) {
    val = std::exp(-x);  // Gamma(1, x)
    scur = 1.0;
  } else {
    val = std::sqrt(kPi) * std::erfc(std::sqrt(x));  // Gamma(1/2, x)
    scur = 0.5;
  }
  while (scur < s - 0.25) {
    val = scur * val + std::pow(x, scur) * std::exp(-x);
    scur += 1.0;
  }
  return val;
}

struct LatticeSum {
  Complex value{0.0, 0.0};
  CVector gradient;
  CMatrix hessian;
  double radius = 0.0;
  double error_bound = 0.0;
};

// shared evaluation core: value, gradient, optionally the z-Hessian
LatticeSum lattice_sum(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi,
                       double tol, bool want_hessian, double radius_override) {
  const int g = int(B.rows());
  if (z.size() != g || chi.p.size() != g || chi.q.size() != g)
    fail(Errc::DimensionMismatch, "theta argument dimensions do not match the Riemann matrix");
  if (tol <= 0.0 && radius_override <= 0.0) fail(Errc::Internal, "theta tolerance must be positive");
  const RMatrix L = validate_riemann_matrix(B);
  const RMatrix Y = B.imag();
  const RMatrix X = B.real();

  const RVector pr = chi.p.real();
  const RVector pi_ = chi.p.imag();
  const CVector zeta = z + chi.q;
  const RVector s = X * pi_ + zeta.imag();
  const RVector Yinv_s = Y.llt().solve(s);
  const double logK = kPi * s.dot(Yinv_s) + kPi * pi_.dot(Y * pi_) - 2.0 * kPi * pi_.dot(zeta.real());
  if (logK > 690.0)
    fail(Errc::ToleranceUnachievable, "theta prefactor overflows double range (|Im argument| too large)");
  const double K = std::exp(logK);

  // upper-triangular factor of pi * Y
  Eigen::LLT<RMatrix> lltPiY((kPi * Y).eval());
  const RMatrix U = lltPiY.matrixU();

  // shortest vector of the lattice U Z^g (small-box search)
  double rho = std::numeric_limits<double>::infinity();
  {
    IVector n = IVector::Constant(g, -2);
    while (true) {
      bool zero = true;
      for (int i = 0; i < g; ++i) zero = zero && n[i] == 0;
      if (!zero) {
        RVector nd = n.cast<double>();
        rho = std::min(rho, (U * nd).norm());
      }
      int i = 0;
      for (; i < g; ++i) {
        if (n[i] < 2) {
          ++n[i];
          break;
        }
        n[i] = -2;
      }
      if (i == g) break;
    }
  }

  auto tail = [&](double R) {
    if (R <= 0.5 * rho) return std::numeric_limits<double>::infinity();
    const double x = (R - 0.5 * rho) * (R - 0.5 * rho);
    return g * std::pow(2.0, g - 1) * upper_gamma(0.5 * g, x) / std::pow(rho, g);
  };

  double R;
  if (radius_override > 0.0) {
    R = radius_override;
  } else {
    R = std::max(1.5, 0.5 * rho + 1.0);
    while (K * tail(R) > tol) {
      R += 0.25;
      if (R > 40.0)
        fail(Errc::ToleranceUnachievable,
             "truncation radius cap exceeded (badly scaled Riemann matrix?)");
    }
  }

  const RVector c0 = pr + Yinv_s;  // ellipsoid center offset: nu + Y^-1 s = n + c0

  LatticeSum out;
  out.gradient = CVector::Zero(g);
  if (want_hessian) out.hessian = CMatrix::Zero(g, g);
  out.radius = R;
  out.error_bound = (radius_override > 0.0) ? K * tail(R) : K * tail(R);

  // Fincke-Pohst enumeration of || U (n + c0) || <= R, descending dimension
  IVector n = IVector::Zero(g);
  const Complex two_pi_i = 2.0 * kPi * kI;
  std::function<void(int, double)> recurse = [&](int level, double used) {
    // row `level` of U involves n_j for j >= level
    double lin = 0.0;
    for (int j = level + 1; j < g; ++j) lin += U(level, j) * (n[j] + c0[j]);
    const double budget = R * R - used;
    if (budget < 0.0) return;
    const double rad = std::sqrt(budget);
    const double lo = (-rad - lin) / U(level, level) - c0[level];
    const double hi = (rad - lin) / U(level, level) - c0[level];
    const long nlo = long(std::ceil(lo - 1e-12));
    const long nhi = long(std::floor(hi + 1e-12));
    for (long ni = nlo; ni <= nhi; ++ni) {
      n[level] = int(ni);
      const double term = U(level, level) * (ni + c0[level]) + lin;
      const double used2 = used + term * term;
      if (level == 0) {
        if (used2 > R * R + 1e-12) continue;
        // full complex exponent for this lattice point
        CVector np = chi.p;
        for (int i = 0; i < g; ++i) np[i] += double(n[i]);
        Complex quad{0.0, 0.0};
        for (int i = 0; i < g; ++i)
          for (int j = 0; j < g; ++j) quad += np[i] * B(i, j) * np[j];
        Complex lin2{0.0, 0.0};
        for (int i = 0; i < g; ++i) lin2 += np[i] * zeta[i];
        const Complex expo = kPi * kI * quad + two_pi_i * lin2;
        const Complex t = std::exp(expo);
        out.value += t;
        out.gradient += (two_pi_i * t) * np;
        if (want_hessian) out.hessian += (two_pi_i * two_pi_i * t) * (np * np.transpose());
      } else {
        recurse(level - 1, used2);
      }
    }
    n[level] = 0;
  };
  recurse(g - 1, 0.0);
  return out;
}

}  // namespace

RMatrix validate_riemann_matrix(const CMatrix& B, double sym_tol) {
  if (B.rows() != B.cols() || B.rows() < 1)
    fail(Errc::NotRiemannMatrix, "period matrix must be square and nonempty");
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
    fail(Errc::NotRiemannMatrix, "period matrix is not symmetric");
  Eigen::LLT<RMatrix> llt(B.imag().eval());
  if (llt.info() != Eigen::Success)
    fail(Errc::NotRiemannMatrix, "imaginary part of the period matrix is not positive definite");
  return llt.matrixL();
}

ThetaCharacteristic ThetaCharacteristic::half_integer(const IVector& p2, const IVector& q2) {
  ThetaCharacteristic chi;
  chi.p = CVector::Zero(p2.size());
  chi.q = CVector::Zero(q2.size());
  for (int i = 0; i < p2.size(); ++i) chi.p[i] = 0.5 * (((p2[i] % 2) + 2) % 2);
  for (int i = 0; i < q2.size(); ++i) chi.q[i] = 0.5 * (((q2[i] % 2) + 2) % 2);
  return chi;
}

bool ThetaCharacteristic::is_half_integer(double tol) const {
  for (int i = 0; i < p.size(); ++i) {
    const Complex tp = 2.0 * p[i], tq = 2.0 * q[i];
    if (std::abs(tp.imag()) > tol || std::abs(tq.imag()) > tol) return false;
    if (std::abs(tp.real() - std::round(tp.real())) > tol) return false;
    if (std::abs(tq.real() - std::round(tq.real())) > tol) return false;
  }
  return true;
}

int ThetaCharacteristic::parity() const {
  if (!is_half_integer()) fail(Errc::Internal, "parity is defined for half-integer characteristics");
  long acc = 0;
  for (int i = 0; i < p.size(); ++i)
    acc += std::lround(2.0 * p[i].real()) * std::lround(2.0 * q[i].real());
  return int(((acc % 2) + 2) % 2);
}

ThetaEvaluation theta_char(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi,
                           double tol, double radius_override) {
  LatticeSum s = lattice_sum(z, B, chi, tol, false, radius_override);
  return {s.value, s.gradient, s.radius, s.error_bound};
}

CMatrix theta_char_hessian(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi,
                           double tol) {
  return lattice_sum(z, B, chi, tol, true, 0.0).hessian;
}

double quasi_periodicity_check(const CVector& z, const CMatrix& B, const ThetaCharacteristic& chi,
                               const IVector& m, const IVector& n, double tol) {
  const int g = int(B.rows());
  CVector shift = CVector::Zero(g);
  for (int i = 0; i < g; ++i) shift[i] = double(m[i]);
  const CVector nB = B * n.cast<double>().cast<Complex>();
  const CVector z2 = z + shift + nB;

  const ThetaEvaluation lhs = theta_char(z2, B, chi, tol);
  const ThetaEvaluation rhs = theta_char(z, B, chi, tol);

  Complex expo{0.0, 0.0};
  const CVector nd = n.cast<double>().cast<Complex>();
  const CVector md = m.cast<double>().cast<Complex>();
  expo += -kPi * kI * (nd.array() * nB.array()).sum();
  Complex nzq{0.0, 0.0};
  for (int i = 0; i < g; ++i) nzq += nd[i] * (z[i] + chi.q[i]);
  expo += -2.0 * kPi * kI * nzq;
  Complex pm{0.0, 0.0};
  for (int i = 0; i < g; ++i) pm += chi.p[i] * md[i];
  expo += 2.0 * kPi * kI * pm;

  const Complex predicted = std::exp(expo) * rhs.value;
  return std::abs(lhs.value - predicted) / std::max(std::abs(rhs.value), 1e-300);
}

double theta_divisor_distance(const CMatrix& B, const ThetaCharacteristic& chi, double tol) {
  return std::abs(theta_char(CVector::Zero(B.rows()), B, chi, tol).value);
}

}  // namespace szrh
