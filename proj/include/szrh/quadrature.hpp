#ifndef SZRH_QUADRATURE_HPP
#define SZRH_QUADRATURE_HPP

#include <cmath>
#include <functional>

#include "szrh/types.hpp"

namespace szrh {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed once per order by Newton iteration on P_n and cached.
struct GaussRule {
  RVector nodes;
  RVector weights;
};

const GaussRule& gauss_legendre(int n);

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_depth = 30;
  int panel_order = 16;
};

namespace detail {

// One panel of the n-point rule mapped to the segment [a, b] in the complex
// plane. F has signature void(Complex lambda, CVector& out) and must fill a
// vector of fixed dimension dim.
template <typename F>
CVector gauss_panel(F&& f, Complex a, Complex b, int dim, const GaussRule& rule) {
  CVector acc = CVector::Zero(dim);
  CVector val(dim);
  const Complex mid = 0.5 * (a + b);
  const Complex half = 0.5 * (b - a);
  for (int i = 0; i < rule.nodes.size(); ++i) {
    f(mid + half * rule.nodes[i], val);
    acc += rule.weights[i] * val;
  }
  return (half * acc).eval();
}

template <typename F>
void adaptive_rec(F&& f, Complex a, Complex b, int dim, const GaussRule& rule, double tol,
                  int depth, int max_depth, const CVector& whole, CVector& out) {
  const Complex mid = 0.5 * (a + b);
  CVector left = gauss_panel(f, a, mid, dim, rule);
  CVector right = gauss_panel(f, mid, b, dim, rule);
  const double err = (left + right - whole).cwiseAbs().maxCoeff();
  if (err <= tol || depth >= max_depth) {
    if (err > tol && depth >= max_depth)
      fail(Errc::QuadratureNotConverged,
           "segment quadrature error " + std::to_string(err) + " above tolerance after max subdivisions");
    out += left + right;
    return;
  }
  adaptive_rec(f, a, mid, dim, rule, 0.5 * tol, depth + 1, max_depth, left, out);
  adaptive_rec(f, mid, b, dim, rule, 0.5 * tol, depth + 1, max_depth, right, out);
}

}  // namespace detail

/// Adaptive Gauss-Legendre integral of a vector-valued integrand along the
/// straight segment [a, b]. Deterministic: subdivision and summation order are
/// fixed by the recursion.
template <typename F>
CVector integrate_segment(F&& f, Complex a, Complex b, int dim,
                          const QuadratureOptions& opts = {}) {
  const GaussRule& rule = gauss_legendre(opts.panel_order);
  CVector whole = detail::gauss_panel(f, a, b, dim, rule);
  CVector out = CVector::Zero(dim);
  detail::adaptive_rec(f, a, b, dim, rule, opts.abs_tol, 0, opts.max_depth, whole, out);
  return out;
}

/// Scalar convenience wrapper.
template <typename F>
Complex integrate_segment_scalar(F&& f, Complex a, Complex b, const QuadratureOptions& opts = {}) {
  auto vf = [&](Complex z, CVector& out) { out[0] = f(z); };
  return integrate_segment(vf, a, b, 1, opts)[0];
}

}  // namespace szrh

#endif  // SZRH_QUADRATURE_HPP
