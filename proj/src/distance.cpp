// SPDX-License-Identifier: Apache-2.0
#include "svf/distance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "svf/error.hpp"
#include "svf/parallel.hpp"

namespace svf {

namespace {

// Small fixed-capacity vectors and matrices: points live in at most 4 + 1
// dimensions here, so these never touch the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

// Exponent tuples of total degree <= degree in n variables, graded order.
std::vector<std::vector<int>> monomials(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(n, 0);
  for (int total = 0; total <= degree; ++total) {
    // Enumerate compositions of `total` into n parts, first variable largest first.
    auto rec = [&](auto&& self, int var, int left) -> void {
      if (var == n - 1) {
        e[var] = left;
        out.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[var] = k;
        self(self, var + 1, left - k);
      }
    };
    if (n == 0) {
      if (total == 0) out.push_back({});
      continue;
    }
    rec(rec, 0, total);
  }
  return out;
}

struct Patch {
  std::vector<std::vector<int>> exps;
  Eigen::VectorXd c;

  double value(const Vec& u, Vec* grad) const {
    const int n = static_cast<int>(u.size());
    double v = 0;
    if (grad) grad->setZero(n);
    for (std::size_t b = 0; b < exps.size(); ++b) {
      double mono = 1;
      for (int a = 0; a < n; ++a) mono *= std::pow(u[a], exps[b][a]);
      v += c[b] * mono;
      if (!grad) continue;
      for (int a = 0; a < n; ++a) {
        if (exps[b][a] == 0) continue;
        double dm = exps[b][a] * std::pow(u[a], exps[b][a] - 1);
        for (int o = 0; o < n; ++o)
          if (o != a) dm *= std::pow(u[o], exps[b][o]);
        (*grad)[a] += c[b] * dm;
      }
    }
    return v;
  }
};

Vec to_vec(std::span<const double> p) {
  Vec v(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) v[a] = p[a];
  return v;
}

double dist(std::span<const double> x, const Vec& c) {
  double s = 0;
  for (std::size_t a = 0; a < x.size(); ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
  return std::sqrt(s);
}

}  // namespace

MLSConfig MLSConfig::for_spacing(double h, int m, double factor) {
  MLSConfig cfg;
  cfg.m = m;
  cfg.rho = factor * h;
  return cfg;
}

double wendland(double r) {
  if (r < 0) r = -r;
  if (r >= 1) return 0;
  const double s = 1 - r;
  return s * s * s * s * (4 * r + 1);
}

int polynomial_basis_size(int n, int degree) {
  // binomial(n + degree, n)
  long long num = 1;
  long long den = 1;
  for (int k = 1; k <= n; ++k) {
    num *= degree + k;
    den *= k;
  }
  return static_cast<int>(num / den);
}

IndexedCloud::IndexedCloud(PointCloud cloud)
    : cloud_(std::move(cloud)), tree_(cloud_.dim(), cloud_.coords()) {}

MLSProjection mls_project(std::span<const double> p, const PointCloud& cloud,
                          const MLSConfig& cfg) {
  IndexedCloud indexed(cloud);
  return mls_project(p, indexed, cfg);
}

MLSProjection mls_project(std::span<const double> p, const IndexedCloud& indexed,
                          const MLSConfig& cfg) {
  const int D = indexed.dim();
  if (static_cast<int>(p.size()) != D)
    fail(ErrorCode::DimensionMismatch, "query has " + std::to_string(p.size()) +
                                           " coordinates, cloud has " + std::to_string(D));
  if (cfg.m < 1) fail(ErrorCode::UnsupportedDegree, "MLS needs m >= 1");
  const int basis = polynomial_basis_size(D - 1, cfg.m - 1);
  const PointCloud& cloud = indexed.cloud();
  if (static_cast<int>(cloud.size()) < std::max(basis, D))
    fail(ErrorCode::InsufficientNeighbors, "cloud has " + std::to_string(cloud.size()) +
                                               " points, patch needs " + std::to_string(basis));

  if (D > 8) fail(ErrorCode::DimensionUnsupported, "MLS supports at most 8 coordinates");
  const Vec pv = to_vec(p);
  const auto seed = indexed.tree().nearest(p);
  Vec q = to_vec(cloud.point(seed.index));

  double rho = cfg.rho;
  std::vector<std::size_t> nb;
  auto gather = [&](const Vec& center) {
    for (int grow = 0;; ++grow) {
      nb = indexed.tree().radius(std::span<const double>(center.data(), D), rho);
      // Points on the support boundary carry no weight.
      std::erase_if(nb, [&](std::size_t k) {
        return wendland(dist(cloud.point(k), center) / rho) <= 0;
      });
      if (static_cast<int>(nb.size()) >= std::max(basis, D)) return;
      if (grow >= cfg.max_support_growth)
        fail(ErrorCode::InsufficientNeighbors,
             std::to_string(nb.size()) + " neighbors within " + std::to_string(rho) +
                 ", patch needs " + std::to_string(std::max(basis, D)));
      rho *= 1.5;
    }
  };

  Vec normal = Vec::Zero(D);
  Mat frame;
  int iterations = 0;
  std::vector<double> w;
  for (int it = 0; it < std::max(1, cfg.max_plane_iterations); ++it) {
    gather(q);
    Vec centroid = Vec::Zero(D);
    double wsum = 0;
    w.resize(nb.size());
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const auto x = cloud.point(nb[k]);
      w[k] = wendland(dist(x, q) / rho);
      for (int a = 0; a < D; ++a) centroid[a] += w[k] * x[a];
      wsum += w[k];
    }
    centroid /= wsum;
    Mat cov = Mat::Zero(D, D);
    Vec x(D);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const auto xp = cloud.point(nb[k]);
      for (int a = 0; a < D; ++a) x[a] = xp[a] - centroid[a];
      cov.noalias() += w[k] * x * x.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
    const Vec& ev = eig.eigenvalues();
    if (!(ev[D - 1] > 0) || ev[1] <= cfg.pivot_floor * ev[D - 1])
      fail(ErrorCode::DegenerateNeighborhood, "neighbors do not span a hyperplane");
    Vec n = eig.eigenvectors().col(0);
    if (iterations == 0) {
      if (n.dot(pv - centroid) < 0) n = -n;
    } else if (n.dot(normal) < 0) {
      n = -n;
    }
    const double rotation = iterations == 0 ? 1.0 : (n - normal).norm();
    normal = n;
    frame = eig.eigenvectors().rightCols(D - 1);
    q = pv - normal * normal.dot(pv - centroid);
    ++iterations;
    if (rotation < cfg.plane_tolerance) break;
  }

  // Weighted least-squares height function over the reference plane, in
  // coordinates scaled by rho.
  gather(q);
  Patch patch;
  patch.exps = monomials(D - 1, cfg.m - 1);
  const int B = static_cast<int>(patch.exps.size());
  Eigen::MatrixXd A(nb.size(), B);
  Eigen::VectorXd f(nb.size());
  Eigen::VectorXd wt(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const Vec x = to_vec(cloud.point(nb[k])) - q;
    const Vec u = frame.transpose() * x / rho;
    for (int b = 0; b < B; ++b) {
      double mono = 1;
      for (int a = 0; a < D - 1; ++a) mono *= std::pow(u[a], patch.exps[b][a]);
      A(k, b) = mono;
    }
    f[k] = normal.dot(x) / rho;
    wt[k] = wendland(x.norm() / rho);
  }
  const Eigen::MatrixXd M = A.transpose() * wt.asDiagonal() * A;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  const Eigen::VectorXd piv = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !(piv.maxCoeff() > 0) ||
      piv.minCoeff() <= cfg.pivot_floor * piv.maxCoeff())
    fail(ErrorCode::DegenerateNeighborhood, "patch normal equations are singular");
  patch.c = ldlt.solve(A.transpose() * (wt.asDiagonal() * f));

  // Gauss-Newton for the closest patch point, with step halving.
  const Vec up = frame.transpose() * (pv - q) / rho;
  const double fp = normal.dot(pv - q) / rho;
  Vec u = up;
  Vec grad(D - 1);
  auto objective = [&](const Vec& x) {
    const double g = patch.value(x, nullptr);
    return (x - up).squaredNorm() + (g - fp) * (g - fp);
  };
  double phi = objective(u);
  for (int it = 0; it < 50; ++it) {
    const double g = patch.value(u, &grad);
    const Mat H = Mat::Identity(D - 1, D - 1) + grad * grad.transpose();
    const Vec rhs = (u - up) + (g - fp) * grad;
    const Vec step = -H.ldlt().solve(rhs);
    double scale = 1;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Vec cand = u + scale * step;
      const double pc = objective(cand);
      if (pc <= phi) {
        u = cand;
        phi = pc;
        moved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!moved || scale * step.norm() < 1e-14) break;
  }

  MLSProjection out;
  const double g = patch.value(u, nullptr);
  const Vec foot = q + rho * (frame * u + normal * g);
  out.foot.assign(foot.data(), foot.data() + D);
  out.distance = (pv - foot).norm();
  out.normal.assign(normal.data(), normal.data() + D);
  out.neighbors = static_cast<int>(nb.size());
  out.plane_iterations = iterations;
  return out;
}

std::size_t SignedDistanceGrid::far_count() const {
  return static_cast<std::size_t>(std::count(far.begin(), far.end(), std::uint8_t{1}));
}

SignedDistanceGrid build_signed_grid(const SampledSVF& svf, const PointCloud& cloud,
                                     const MLSConfig& cfg) {
  const int d = svf.dim();
  const int D = d + 1;
  if (cloud.dim() != D)
    fail(ErrorCode::DimensionMismatch, "cloud dimension " + std::to_string(cloud.dim()) +
                                           " does not match graph dimension " + std::to_string(D));
  if (cloud.empty()) fail(ErrorCode::InsufficientNeighbors, "empty cloud");
  if (svf.N() < 1) fail(ErrorCode::IncompleteGrid, "need at least two samples");

  SignedDistanceGrid grid;
  grid.dim = D;
  grid.N = svf.N();
  const int n = grid.n();
  std::size_t total = 1;
  for (int a = 0; a < D; ++a) total *= static_cast<std::size_t>(n);
  grid.values.assign(total, 0.0);
  grid.far.assign(total, 0);

  const double h = svf.h();
  const double far_radius = 3.0 * (cfg.m + 1) * h;
  const IndexedCloud indexed(cloud);
  std::atomic<std::size_t> fallbacks{0};

  parallel_for(total, [&](std::size_t flat) {
    std::vector<int> idx(D);
    std::size_t rest = flat;
    for (int a = D - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    std::vector<double> p(D);
    for (int a = 0; a < D; ++a) p[a] = idx[a] * h;

    const double nearest = std::sqrt(indexed.tree().nearest(p).dist2);
    double magnitude = nearest;
    if (nearest > far_radius) {
      grid.far[flat] = 1;
    } else {
      try {
        // Cloud points lie on the surface, so the nearest one bounds the distance.
        magnitude = std::min(mls_project(p, indexed, cfg).distance, nearest);
      } catch (const Error&) {
        fallbacks.fetch_add(1, std::memory_order_relaxed);
      }
    }

    bool inside = false;
    const std::span<const double> x(p.data() + 1, d);
    if (svf.kind() == SampleKind::Intervals)
      inside = svf.interval(idx[0]).contains(x[0]);
    else
      inside = svf.grid(idx[0]).contains(x);
    grid.values[flat] = inside ? magnitude : -magnitude;
  });
  grid.fallbacks = fallbacks.load();
  return grid;
}

}  // namespace svf
