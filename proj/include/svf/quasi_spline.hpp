// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace svf {

// Centered cardinal B-spline of degree p (support [-(p+1)/2, (p+1)/2]),
// evaluated by the two-term recursion. p in 0..5.
double bspline_eval(int p, double x);

// Values B_p(u - n) for the p + 1 shifts n = first, ..., first + p that can be
// non-zero at u, computed together by the uniform Cox-de Boor triangle.
struct BsplineWeights {
  int first = 0;
  int count = 0;
  double value[6] = {};
  double derivative[6] = {};
};
BsplineWeights bspline_weights(int p, double u, bool with_derivative = false);

// Symmetric coefficients c_{p,j}, j = -floor(p/2)..floor(p/2), of the local
// functional L_p making the quasi-interpolant reproduce polynomials of degree
// <= p. Derived once per degree by exact rational elimination. p in 2..5.
const std::vector<double>& qi_coeffs(int p);

struct QIOperator {
  int degree = 3;
  double h = 1;
  std::vector<double> coeffs;

  static QIOperator make(int degree, double h);
  int half_width() const { return degree / 2; }
  // Sup-norm bound sum |c_j| of the univariate operator.
  double norm() const;
};

// Q_p(f)(x) = sum_n L_p(f_{n,p}) B_p(x / h - n) for samples f_i = f(i h),
// i = 0..samples.size()-1. Samples outside the grid are supplied by degree-p
// polynomial extension of the nearest p + 1 samples.
double qi_apply_1d(const QIOperator& op, std::span<const double> samples, double x);

// Uniform-knot tensor-product spline of degree m in D variables over [0,1]^D
// with knot spacing h = 1/N. Coefficients cover shifts -pad..N+pad per axis,
// stored row-major with the last axis fastest.
class TensorSpline {
 public:
  TensorSpline() = default;

  // Quasi-interpolates values given on the (N+1)^D lattice (row-major).
  static TensorSpline build(int degree, int dim, int N, std::span<const double> values);
  static TensorSpline from_coefficients(int degree, int dim, int N, std::vector<double> coeffs);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  int N() const { return N_; }
  double h() const { return 1.0 / N_; }
  int pad() const { return pad_; }
  int coeffs_per_axis() const { return N_ + 1 + 2 * pad_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double operator()(std::span<const double> x) const;
  double eval(std::span<const double> x, std::span<double> gradient) const;

  friend bool operator==(const TensorSpline&, const TensorSpline&) = default;

 private:
  double eval_impl(std::span<const double> x, double* gradient) const;

  int degree_ = 3;
  int dim_ = 0;
  int N_ = 0;
  int pad_ = 0;
  std::vector<double> coeffs_;
};

// Shift padding needed so every point of [0,1] sees all its non-zero B-splines.
int spline_pad(int degree);

}  // namespace svf
