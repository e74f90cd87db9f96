// SPDX-License-Identifier: Apache-2.0
#include "svf/marching.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "svf/error.hpp"
#include "svf/parallel.hpp"
#include "svf/roots.hpp"

namespace svf {

namespace {

bool inside(double v) { return v >= 0; }

// Up to two segments joining the crossing edges of a quad. Corners are in
// cyclic order, edge e joins corner e and corner e + 1; edge_vertex holds -1
// for edges without a crossing.
int quad_segments(const double v[4], const int edge_vertex[4], std::array<int, 2> out[2]) {
  int crossing[4];
  int n = 0;
  for (int e = 0; e < 4; ++e)
    if (edge_vertex[e] >= 0) crossing[n++] = e;
  if (n == 2) {
    out[0] = {edge_vertex[crossing[0]], edge_vertex[crossing[1]]};
    return 1;
  }
  if (n != 4) return 0;
  // Asymptotic decider: value of the bilinear interpolant at its saddle.
  const double saddle = (v[0] * v[2] - v[1] * v[3]) / (v[0] + v[2] - v[1] - v[3]);
  if (inside(saddle) == inside(v[0])) {
    // Corners 0 and 2 are joined through the centre; cut off 1 and 3.
    out[0] = {edge_vertex[0], edge_vertex[1]};
    out[1] = {edge_vertex[2], edge_vertex[3]};
  } else {
    out[0] = {edge_vertex[3], edge_vertex[0]};
    out[1] = {edge_vertex[1], edge_vertex[2]};
  }
  return 2;
}

struct EdgeJob {
  std::size_t node = 0;
  int axis = 0;
};

template <int D>
struct Lattice {
  int cells = 0;
  int n = 0;
  std::vector<double> values;

  std::size_t flat(const std::array<int, D>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < D; ++a) f = f * n + idx[a];
    return f;
  }
  std::array<int, D> unflat(std::size_t f) const {
    std::array<int, D> idx{};
    for (int a = D - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(f % n);
      f /= n;
    }
    return idx;
  }
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = axis + 1; a < D; ++a) s *= n;
    return s;
  }
};

template <int D>
Lattice<D> sample_lattice(const ScalarField& f, int cells) {
  if (cells < 1) fail(ErrorCode::InvalidArgument, "extraction needs at least one cell");
  Lattice<D> lat;
  lat.cells = cells;
  lat.n = cells + 1;
  std::size_t total = 1;
  for (int a = 0; a < D; ++a) total *= lat.n;
  lat.values.resize(total);
  parallel_for(total, [&](std::size_t i) {
    const auto idx = lat.unflat(i);
    double x[D];
    for (int a = 0; a < D; ++a) x[a] = static_cast<double>(idx[a]) / cells;
    lat.values[i] = f(std::span<const double>(x, D));
  });
  return lat;
}

// Finds every lattice edge whose end points differ in membership and polishes
// the crossing by bisection. edge_id[node * D + axis] receives the vertex id.
template <int D>
std::vector<std::array<double, D>> crossing_vertices(const ScalarField& f, const Lattice<D>& lat,
                                                     std::vector<int>& edge_id) {
  std::vector<EdgeJob> jobs;
  edge_id.assign(lat.values.size() * D, -1);
  for (std::size_t node = 0; node < lat.values.size(); ++node) {
    const auto idx = lat.unflat(node);
    for (int a = 0; a < D; ++a) {
      if (idx[a] + 1 >= lat.n) continue;
      const std::size_t other = node + lat.stride(a);
      if (inside(lat.values[node]) != inside(lat.values[other])) {
        edge_id[node * D + a] = static_cast<int>(jobs.size());
        jobs.push_back({node, a});
      }
    }
  }
  std::vector<std::array<double, D>> vertices(jobs.size());
  const double h = 1.0 / lat.cells;
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto idx = lat.unflat(jobs[j].node);
    const int axis = jobs[j].axis;
    double x[D];
    for (int a = 0; a < D; ++a) x[a] = idx[a] * h;
    const double base = x[axis];
    const double fa = lat.values[jobs[j].node];
    const double fb = lat.values[jobs[j].node + lat.stride(axis)];
    // Classify by membership so that a node value of exactly zero counts as
    // inside, matching the lattice classification.
    auto g = [&](double s) {
      if (s == 0) return fa >= 0 ? 1.0 : -1.0;
      if (s == h) return fb >= 0 ? 1.0 : -1.0;
      x[axis] = base + s;
      const double v = f(std::span<const double>(x, D));
      return v >= 0 ? 1.0 : -1.0;
    };
    const double s = bisect(g, 0.0, h, kRootTolerance);
    for (int a = 0; a < D; ++a) vertices[j][a] = idx[a] * h;
    vertices[j][axis] = base + s;
  });
  return vertices;
}

}  // namespace

Contour extract_contour(const ScalarField& f, int cells) {
  const auto lat = sample_lattice<2>(f, cells);
  std::vector<int> edge_id;
  Contour out;
  out.vertices = crossing_vertices<2>(f, lat, edge_id);
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const std::size_t n00 = lat.flat({i, j});
      const std::size_t n10 = lat.flat({i + 1, j});
      const std::size_t n11 = lat.flat({i + 1, j + 1});
      const std::size_t n01 = lat.flat({i, j + 1});
      const double v[4] = {lat.values[n00], lat.values[n10], lat.values[n11], lat.values[n01]};
      const int ev[4] = {edge_id[n00 * 2 + 0], edge_id[n10 * 2 + 1], edge_id[n01 * 2 + 0],
                         edge_id[n00 * 2 + 1]};
      std::array<int, 2> seg[2];
      const int count = quad_segments(v, ev, seg);
      for (int s = 0; s < count; ++s) out.segments.push_back(seg[s]);
    }
  }
  return out;
}

TriangleMesh extract_isosurface(const ScalarField& f, int cells) {
  const auto lat = sample_lattice<3>(f, cells);
  std::vector<int> edge_id;
  TriangleMesh out;
  out.vertices = crossing_vertices<3>(f, lat, edge_id);

  // Corner c of a cube sits at offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
  static constexpr int kFaces[6][4] = {{0, 2, 6, 4}, {1, 3, 7, 5}, {0, 1, 5, 4},
                                       {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 5, 7, 6}};
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      for (int k = 0; k < cells; ++k) {
        std::size_t node[8];
        double v[8];
        int in_count = 0;
        for (int c = 0; c < 8; ++c) {
          node[c] = lat.flat({i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1)});
          v[c] = lat.values[node[c]];
          in_count += inside(v[c]);
        }
        if (in_count == 0 || in_count == 8) continue;

        auto edge_vertex = [&](int a, int b) {
          if (node[a] > node[b]) std::swap(a, b);
          const int axis = (a ^ b) == 1 ? 0 : (a ^ b) == 2 ? 1 : 2;
          return edge_id[node[a] * 3 + axis];
        };
        // Adjacency between crossing vertices through face segments.
        std::map<int, std::vector<int>> adj;
        for (const auto& face : kFaces) {
          const double fv[4] = {v[face[0]], v[face[1]], v[face[2]], v[face[3]]};
          const int ev[4] = {edge_vertex(face[0], face[1]), edge_vertex(face[1], face[2]),
                             edge_vertex(face[2], face[3]), edge_vertex(face[3], face[0])};
          std::array<int, 2> seg[2];
          const int count = quad_segments(fv, ev, seg);
          for (int s = 0; s < count; ++s) {
            adj[seg[s][0]].push_back(seg[s][1]);
            adj[seg[s][1]].push_back(seg[s][0]);
          }
        }

        // Trilinear gradient at a local point, used to orient triangles.
        auto gradient = [&](const std::array<double, 3>& p) {
          const double u[3] = {p[0] * cells - i, p[1] * cells - j, p[2] * cells - k};
          std::array<double, 3> g{};
          for (int c = 0; c < 8; ++c) {
            const int bit[3] = {c & 1, (c >> 1) & 1, (c >> 2) & 1};
            for (int a = 0; a < 3; ++a) {
              double w = bit[a] ? 1.0 : -1.0;
              for (int b = 0; b < 3; ++b)
                if (b != a) w *= bit[b] ? u[b] : 1 - u[b];
              g[a] += w * v[c];
            }
          }
          return g;
        };

        std::map<int, bool> used;
        for (const auto& entry : adj) {
          const int start = entry.first;
          if (used[start]) continue;
          std::vector<int> loop{start};
          used[start] = true;
          int prev = -1, cur = start;
          while (true) {
            // Each crossing vertex lies on two faces of the cube, so it has
            // exactly two neighbours and the segments form disjoint cycles.
            const auto& nb_cur = adj[cur];
            const int next = nb_cur[0] != prev ? nb_cur[0] : nb_cur[1];
            if (next == start || used[next]) break;
            used[next] = true;
            loop.push_back(next);
            prev = cur;
            cur = next;
          }
          if (loop.size() < 3) continue;
          for (std::size_t t = 1; t + 1 < loop.size(); ++t) {
            std::array<int, 3> tri = {loop[0], loop[t], loop[t + 1]};
            const auto& a = out.vertices[tri[0]];
            const auto& b = out.vertices[tri[1]];
            const auto& c = out.vertices[tri[2]];
            const double e1[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
            const double e2[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
            const double nrm[3] = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                                   e1[0] * e2[1] - e1[1] * e2[0]};
            const std::array<double, 3> centroid = {(a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3,
                                                    (a[2] + b[2] + c[2]) / 3};
            const auto g = gradient(centroid);
            if (nrm[0] * g[0] + nrm[1] * g[1] + nrm[2] * g[2] > 0) std::swap(tri[1], tri[2]);
            out.triangles.push_back(tri);
          }
        }
      }
    }
  }
  return out;
}

std::variant<Contour, TriangleMesh> zero_level_extract(const TensorSpline& s,
                                                       std::span<const FixedAxis> fixed, int cells) {
  const int D = s.dim();
  std::vector<int> free_axes;
  std::vector<double> base(D, 0.0);
  std::vector<bool> is_fixed(D, false);
  for (const auto& fa : fixed) {
    if (fa.axis < 0 || fa.axis >= D || is_fixed[fa.axis])
      fail(ErrorCode::InvalidArgument, "bad fixed axis " + std::to_string(fa.axis));
    is_fixed[fa.axis] = true;
    base[fa.axis] = fa.value;
  }
  for (int a = 0; a < D; ++a)
    if (!is_fixed[a]) free_axes.push_back(a);
  const int free_dim = static_cast<int>(free_axes.size());
  if (free_dim != 2 && free_dim != 3)
    fail(ErrorCode::DimensionUnsupported,
         "zero-level extraction needs 2 or 3 free axes, got " + std::to_string(free_dim));
  if (cells <= 0) cells = 2 * s.N();

  ScalarField field = [&s, free_axes, base](std::span<const double> y) {
    double x[6];
    for (std::size_t a = 0; a < base.size(); ++a) x[a] = base[a];
    for (std::size_t a = 0; a < free_axes.size(); ++a) x[free_axes[a]] = y[a];
    return s(std::span<const double>(x, base.size()));
  };
  if (free_dim == 2) return extract_contour(field, cells);
  return extract_isosurface(field, cells);
}

bool is_closed_manifold(const TriangleMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) ++directed[{t[e], t[(e + 1) % 3]}];
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto it = directed.find({edge.second, edge.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_obj(std::ostream& out, const Contour& contour) {
  out.precision(17);
  for (const auto& v : contour.vertices) out << "v " << v[0] << ' ' << v[1] << " 0\n";
  for (const auto& s : contour.segments) out << "l " << s[0] + 1 << ' ' << s[1] + 1 << '\n';
}

std::vector<std::vector<double>> zero_set_points(const ScalarField& f, int dim, int cells) {
  const int n = cells + 1;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= n;
  const double step = 1.0 / cells;
  auto unflatten = [&](std::size_t flat, std::vector<int>& idx) {
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % n);
      flat /= n;
    }
  };

  std::vector<double> values(total);
  parallel_for(total, [&](std::size_t flat) {
    std::vector<int> idx(dim);
    unflatten(flat, idx);
    std::vector<double> x(dim);
    for (int a = 0; a < dim; ++a) x[a] = idx[a] * step;
    values[flat] = f(x);
  });

  std::vector<std::vector<std::vector<double>>> per_node(total);
  parallel_for(total, [&](std::size_t flat) {
    std::vector<int> idx(dim);
    unflatten(flat, idx);
    std::size_t stride = 1;
    for (int a = dim - 1; a >= 0; --a) {
      if (idx[a] + 1 < n) {
        const double v0 = values[flat];
        const double v1 = values[flat + stride];
        if ((v0 >= 0) != (v1 >= 0)) {
          std::vector<double> x(dim);
          for (int b = 0; b < dim; ++b) x[b] = idx[b] * step;
          // Bisection on the stored endpoint signs; nodes on the zero set
          // may not reproduce their sign when re-evaluated.
          const bool in0 = v0 >= 0;
          double lo = x[a];
          double hi = lo + step;
          for (int it = 0; it < 48; ++it) {
            x[a] = 0.5 * (lo + hi);
            ((f(x) >= 0) == in0 ? lo : hi) = x[a];
          }
          x[a] = 0.5 * (lo + hi);
          per_node[flat].push_back(std::move(x));
        }
      }
      stride *= n;
    }
  });
  std::vector<std::vector<double>> out;
  for (auto& v : per_node)
    for (auto& p : v) out.push_back(std::move(p));
  return out;
}

}  // namespace svf
