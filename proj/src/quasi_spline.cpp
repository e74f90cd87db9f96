// SPDX-License-Identifier: Apache-2.0
#include "svf/quasi_spline.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include <boost/rational.hpp>

#include "svf/error.hpp"

namespace svf {

namespace {

using Rational = boost::rational<long long>;

void check_degree(int p, int lo, int hi) {
  if (p < lo || p > hi)
    fail(ErrorCode::UnsupportedDegree, "B-spline degree " + std::to_string(p) + " outside " +
                                           std::to_string(lo) + ".." + std::to_string(hi));
}

template <class T>
T bspline_rec(int p, T x) {
  const T half = T(1) / T(2);
  if (p == 0) return (x >= -half && x < half) ? T(1) : T(0);
  const T r = T(p + 1) / T(2);
  return ((x + r) * bspline_rec(p - 1, x + half) + (r - x) * bspline_rec(p - 1, x - half)) / T(p);
}

// Solves the monomial-reproduction conditions at a knot for the symmetric
// coefficients c_0, c_1 = c_{-1}, ..., c_K:
//   sum_j c_j sum_n (n + j)^r B_p(n) = [r == 0],   r = 0, 2, ..., 2K.
std::vector<double> derive_qi_coeffs(int p) {
  const int K = p / 2;
  const int support = (p + 1) / 2;
  std::vector<Rational> b(2 * support + 1);
  for (int n = -support; n <= support; ++n) b[n + support] = bspline_rec<Rational>(p, Rational(n));

  auto moment = [&](int shift, int r) {
    Rational s = 0;
    for (int n = -support; n <= support; ++n) {
      Rational term = 1;
      for (int e = 0; e < r; ++e) term *= Rational(n + shift);
      s += term * b[n + support];
    }
    return s;
  };

  const int m = K + 1;
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1));
  for (int row = 0; row < m; ++row) {
    const int r = 2 * row;
    a[row][0] = moment(0, r);
    for (int j = 1; j <= K; ++j) a[row][j] = moment(j, r) + moment(-j, r);
    a[row][m] = r == 0 ? 1 : 0;
  }
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    while (a[pivot][col].numerator() == 0) ++pivot;
    std::swap(a[pivot], a[col]);
    for (int row = 0; row < m; ++row) {
      if (row == col || a[row][col].numerator() == 0) continue;
      const Rational f = a[row][col] / a[col][col];
      for (int k = col; k <= m; ++k) a[row][k] -= f * a[col][k];
    }
  }
  std::vector<double> c(2 * K + 1);
  for (int j = 0; j <= K; ++j) {
    const Rational v = a[j][m] / a[j][j];
    const double value = boost::rational_cast<double>(v);
    c[K + j] = value;
    c[K - j] = value;
  }
  return c;
}

// f at index i (possibly outside 0..L-1) via polynomial extension of degree
// min(p, L-1) through the nearest samples.
double extended_sample(std::span<const double> f, int i, int p) {
  const int L = static_cast<int>(f.size());
  if (i >= 0 && i < L) return f[i];
  const int count = std::min(p + 1, L);
  const int first = i < 0 ? 0 : L - count;
  double s = 0;
  for (int j = 0; j < count; ++j) {
    double w = 1;
    for (int k = 0; k < count; ++k)
      if (k != j) w *= static_cast<double>(i - (first + k)) / static_cast<double>(j - k);
    s += w * f[first + j];
  }
  return s;
}

// Coefficients for shifts -pad..L-1+pad from one line of samples.
void filter_line(std::span<const double> line, int p, int pad, std::span<double> out) {
  const auto& c = qi_coeffs(p);
  const int K = p / 2;
  const int L = static_cast<int>(line.size());
  for (int n = -pad; n < L + pad; ++n) {
    double s = 0;
    for (int j = -K; j <= K; ++j) s += c[j + K] * extended_sample(line, n + j, p);
    out[n + pad] = s;
  }
}

double clamp_unit(double x) {
  if (x < -1e-12 || x > 1 + 1e-12 || std::isnan(x))
    fail(ErrorCode::OutOfDomain, "spline evaluation outside [0,1]: " + std::to_string(x));
  return std::min(1.0, std::max(0.0, x));
}

}  // namespace

double bspline_eval(int p, double x) {
  check_degree(p, 0, 5);
  if (std::abs(x) >= 0.5 * (p + 1)) return 0;
  return bspline_rec<double>(p, x);
}

BsplineWeights bspline_weights(int p, double u, bool with_derivative) {
  check_degree(p, 0, 5);
  BsplineWeights w;
  const double s = u + 0.5 * (p + 1);
  const double k = std::floor(s);
  const double frac = s - k;
  w.first = static_cast<int>(k) - p;
  w.count = p + 1;

  auto basis = [frac](int deg, double* out) {
    double left[7];
    double right[7];
    out[0] = 1;
    for (int j = 1; j <= deg; ++j) {
      left[j] = frac + j - 1;
      right[j] = j - frac;
      double saved = 0;
      for (int r = 0; r < j; ++r) {
        const double temp = out[r] / (right[r + 1] + left[j - r]);
        out[r] = saved + right[r + 1] * temp;
        saved = left[j - r] * temp;
      }
      out[j] = saved;
    }
  };
  basis(p, w.value);
  if (with_derivative) {
    if (p == 0) {
      w.derivative[0] = 0;
    } else {
      // N_p'(y) = N_{p-1}(y) - N_{p-1}(y - 1).
      double lower[6];
      basis(p - 1, lower);
      for (int r = 0; r <= p; ++r) {
        const double a = r >= 1 ? lower[r - 1] : 0;
        const double b = r <= p - 1 ? lower[r] : 0;
        w.derivative[r] = a - b;
      }
    }
  }
  return w;
}

const std::vector<double>& qi_coeffs(int p) {
  check_degree(p, 2, 5);
  static std::once_flag once;
  static std::array<std::vector<double>, 6> table;
  std::call_once(once, [] {
    for (int q = 2; q <= 5; ++q) table[q] = derive_qi_coeffs(q);
  });
  return table[p];
}

QIOperator QIOperator::make(int degree, double h) {
  QIOperator op;
  op.degree = degree;
  op.h = h;
  op.coeffs = qi_coeffs(degree);
  return op;
}

double QIOperator::norm() const {
  double s = 0;
  for (double c : coeffs) s += std::abs(c);
  return s;
}

int spline_pad(int degree) { return (degree + 1) / 2; }

double qi_apply_1d(const QIOperator& op, std::span<const double> samples, double x) {
  const int L = static_cast<int>(samples.size());
  if (L < 2) fail(ErrorCode::IncompleteGrid, "need at least 2 samples");
  const double extent = (L - 1) * op.h;
  if (x < -1e-12 * extent || x > extent * (1 + 1e-12) || std::isnan(x))
    fail(ErrorCode::OutOfDomain, "x outside the sampled range");
  const int p = op.degree;
  const int K = p / 2;
  const auto w = bspline_weights(p, x / op.h);
  double s = 0;
  for (int r = 0; r < w.count; ++r) {
    if (w.value[r] == 0) continue;
    const int n = w.first + r;
    double l = 0;
    for (int j = -K; j <= K; ++j) l += op.coeffs[j + K] * extended_sample(samples, n + j, p);
    s += l * w.value[r];
  }
  return s;
}

TensorSpline TensorSpline::build(int degree, int dim, int N, std::span<const double> values) {
  check_degree(degree, 2, 5);
  if (dim < 1 || dim > 6) fail(ErrorCode::DimensionUnsupported, "tensor spline dimension out of range");
  if (N < 1) fail(ErrorCode::IncompleteGrid, "N must be >= 1");
  std::size_t expected = 1;
  for (int a = 0; a < dim; ++a) expected *= static_cast<std::size_t>(N + 1);
  if (values.size() != expected)
    fail(ErrorCode::IncompleteGrid, "lattice has " + std::to_string(values.size()) +
                                        " values, expected " + std::to_string(expected));

  const int pad = spline_pad(degree);
  const int L = N + 1;
  const int C = L + 2 * pad;
  std::vector<int> size(dim, L);
  std::vector<double> current(values.begin(), values.end());
  std::vector<double> line(L);
  std::vector<double> filtered(C);
  // Apply the univariate operator axis by axis; the tensor operator is their
  // composition.
  for (int axis = 0; axis < dim; ++axis) {
    std::size_t outer = 1, inner = 1;
    for (int a = 0; a < axis; ++a) outer *= size[a];
    for (int a = axis + 1; a < dim; ++a) inner *= size[a];
    std::vector<double> next(outer * C * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        for (int k = 0; k < L; ++k) line[k] = current[(o * L + k) * inner + in];
        filter_line(line, degree, pad, filtered);
        for (int k = 0; k < C; ++k) next[(o * C + k) * inner + in] = filtered[k];
      }
    }
    size[axis] = C;
    current = std::move(next);
  }
  return from_coefficients(degree, dim, N, std::move(current));
}

TensorSpline TensorSpline::from_coefficients(int degree, int dim, int N, std::vector<double> coeffs) {
  check_degree(degree, 2, 5);
  TensorSpline s;
  s.degree_ = degree;
  s.dim_ = dim;
  s.N_ = N;
  s.pad_ = spline_pad(degree);
  std::size_t expected = 1;
  for (int a = 0; a < dim; ++a) expected *= static_cast<std::size_t>(s.coeffs_per_axis());
  if (coeffs.size() != expected)
    fail(ErrorCode::DimensionMismatch, "coefficient array has wrong size");
  s.coeffs_ = std::move(coeffs);
  return s;
}

double TensorSpline::operator()(std::span<const double> x) const { return eval_impl(x, nullptr); }

double TensorSpline::eval(std::span<const double> x, std::span<double> gradient) const {
  return eval_impl(x, gradient.data());
}

double TensorSpline::eval_impl(std::span<const double> x, double* gradient) const {
  if (static_cast<int>(x.size()) != dim_) fail(ErrorCode::DimensionMismatch, "point dimension mismatch");
  const int C = coeffs_per_axis();
  std::array<BsplineWeights, 6> w;
  for (int a = 0; a < dim_; ++a) {
    w[a] = bspline_weights(degree_, clamp_unit(x[a]) * N_, gradient != nullptr);
    // Drop shifts outside the coefficient range; their weights vanish on [0,1].
    if (w[a].first + pad_ < 0) {
      const int drop = -(w[a].first + pad_);
      for (int r = 0; r + drop < w[a].count; ++r) {
        w[a].value[r] = w[a].value[r + drop];
        w[a].derivative[r] = w[a].derivative[r + drop];
      }
      w[a].first += drop;
      w[a].count -= drop;
    }
    if (w[a].first + pad_ + w[a].count > C) w[a].count = C - (w[a].first + pad_);
  }

  std::array<int, 6> k{};
  double sum = 0;
  std::array<double, 6> grad{};
  while (true) {
    std::size_t flat = 0;
    double weight = 1;
    for (int a = 0; a < dim_; ++a) {
      flat = flat * C + static_cast<std::size_t>(w[a].first + pad_ + k[a]);
      weight *= w[a].value[k[a]];
    }
    const double c = coeffs_[flat];
    sum += weight * c;
    if (gradient) {
      for (int a = 0; a < dim_; ++a) {
        double g = c * w[a].derivative[k[a]];
        for (int b = 0; b < dim_; ++b)
          if (b != a) g *= w[b].value[k[b]];
        grad[a] += g;
      }
    }
    int a = dim_ - 1;
    while (a >= 0 && ++k[a] == w[a].count) k[a--] = 0;
    if (a < 0) break;
  }
  if (gradient)
    for (int a = 0; a < dim_; ++a) gradient[a] = grad[a] * N_;
  return sum;
}

}  // namespace svf
