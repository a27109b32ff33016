#include "dmp/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "dmp/errors.hpp"

namespace dmp {

namespace {

Vec constraint_row(const Mat& normals, int c)
{
  Vec a = normals.row(c / 2).transpose();
  return (c % 2 == 0) ? a : Vec(-a);
}

Mat constraint_rows(const Mat& normals, const std::vector<int>& cs)
{
  Mat a(static_cast<Eigen::Index>(cs.size()), normals.cols());
  for (std::size_t r = 0; r < cs.size(); ++r)
    a.row(static_cast<Eigen::Index>(r)) = constraint_row(normals, cs[r]).transpose();
  return a;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b)
{
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool includes(const std::vector<int>& big, const std::vector<int>& small)
{
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Least squares on the tight constraints; keeps vertices on their facets to
// rounding accuracy no matter how many cuts produced them.
Vec polish(const Mat& normals, const Vec& support, const std::vector<int>& cs, const Vec& x0)
{
  const Mat a = constraint_rows(normals, cs);
  Vec b(static_cast<Eigen::Index>(cs.size()));
  for (std::size_t r = 0; r < cs.size(); ++r)
    b[static_cast<Eigen::Index>(r)] = support[cs[r] / 2];
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  if (qr.rank() < a.cols())
    return x0;
  return qr.solve(b);
}

struct Vertex
{
  Vec x;
  std::vector<int> act;
};

} // namespace

int constraint_rank(const Mat& normals, const std::vector<int>& constraints)
{
  if (constraints.empty())
    return 0;
  Eigen::FullPivLU<Mat> lu(constraint_rows(normals, constraints));
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

VertexSet enumerate_vertices(const Mat& normals, const Vec& support)
{
  const int m = static_cast<int>(normals.rows());
  const int n = static_cast<int>(normals.cols());
  if (support.size() != m)
    throw GeometryError("enumerate_vertices: support length does not match normals");
  for (int i = 0; i < m; ++i)
    if (!(support[i] > 0.0) || !std::isfinite(support[i]))
      throw GeometryError("enumerate_vertices: support numbers must be positive and finite");

  // pick n independent pairs for the starting parallelotope
  std::vector<int> basis;
  Mat q(n, 0);
  for (int i = 0; i < m && static_cast<int>(basis.size()) < n; ++i) {
    Vec v = normals.row(i).transpose();
    Vec r = v - q * (q.transpose() * v);
    if (r.norm() > 1e-8 * v.norm()) {
      basis.push_back(i);
      q.conservativeResize(n, q.cols() + 1);
      q.col(q.cols() - 1) = r.normalized();
    }
  }
  if (static_cast<int>(basis.size()) < n)
    throw GeometryError("normals do not span R^" + std::to_string(n) + " (body is unbounded)");

  const double tol = 1e-10 * support.maxCoeff();
  Mat b(n, n);
  Vec hb(n);
  for (int r = 0; r < n; ++r) {
    b.row(r) = normals.row(basis[r]);
    hb[r] = support[basis[r]];
  }
  const Eigen::FullPivLU<Mat> blu(b);

  std::vector<Vertex> verts;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Vertex v;
    Vec rhs(n);
    for (int r = 0; r < n; ++r) {
      const bool neg = (mask >> r) & 1u;
      rhs[r] = neg ? -hb[r] : hb[r];
      v.act.push_back(2 * basis[r] + (neg ? 1 : 0));
    }
    std::sort(v.act.begin(), v.act.end());
    v.x = blu.solve(rhs);
    verts.push_back(std::move(v));
  }

  std::vector<bool> used(m, false);
  for (int i : basis)
    used[i] = true;

  for (int i = 0; i < m; ++i) {
    if (used[i])
      continue;
    for (int c : {2 * i, 2 * i + 1}) {
      const Vec a = constraint_row(normals, c);
      const double h = support[i];
      std::vector<double> slack(verts.size());
      bool any_out = false;
      for (std::size_t v = 0; v < verts.size(); ++v) {
        slack[v] = a.dot(verts[v].x) - h;
        if (slack[v] > tol)
          any_out = true;
      }
      if (!any_out) {
        for (std::size_t v = 0; v < verts.size(); ++v)
          if (slack[v] >= -tol)
            verts[v].act.insert(std::upper_bound(verts[v].act.begin(), verts[v].act.end(), c), c);
        continue;
      }

      std::vector<Vertex> created;
      for (std::size_t p = 0; p < verts.size(); ++p) {
        if (slack[p] >= -tol)
          continue;
        for (std::size_t o = 0; o < verts.size(); ++o) {
          if (slack[o] <= tol)
            continue;
          std::vector<int> z = intersect(verts[p].act, verts[o].act);
          if (static_cast<int>(z.size()) < n - 1)
            continue;
          bool adjacent = true;
          for (std::size_t r = 0; r < verts.size() && adjacent; ++r)
            if (r != p && r != o && includes(verts[r].act, z))
              adjacent = false;
          if (!adjacent || constraint_rank(normals, z) != n - 1)
            continue;
          const double t = slack[p] / (slack[p] - slack[o]);
          Vertex nv;
          nv.act = std::move(z);
          nv.act.insert(std::upper_bound(nv.act.begin(), nv.act.end(), c), c);
          nv.x = polish(normals, support, nv.act, verts[p].x + t * (verts[o].x - verts[p].x));
          created.push_back(std::move(nv));
        }
      }

      std::vector<Vertex> next;
      next.reserve(verts.size() + created.size());
      for (std::size_t v = 0; v < verts.size(); ++v) {
        if (slack[v] > tol)
          continue;
        if (slack[v] >= -tol)
          verts[v].act.insert(std::upper_bound(verts[v].act.begin(), verts[v].act.end(), c), c);
        next.push_back(std::move(verts[v]));
      }
      for (Vertex& nv : created) {
        auto dup = std::find_if(next.begin(), next.end(), [&](const Vertex& w) {
          return (w.x - nv.x).lpNorm<Eigen::Infinity>() <= 10.0 * tol;
        });
        if (dup == next.end()) {
          next.push_back(std::move(nv));
        } else {
          std::vector<int> merged;
          std::set_union(dup->act.begin(), dup->act.end(), nv.act.begin(), nv.act.end(),
                         std::back_inserter(merged));
          dup->act = std::move(merged);
        }
      }
      verts = std::move(next);
    }
  }

  VertexSet out;
  out.tolerance = tol;
  out.vertices.resize(n, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t v = 0; v < verts.size(); ++v) {
    out.vertices.col(static_cast<Eigen::Index>(v)) = verts[v].x;
    out.active.push_back(std::move(verts[v].act));
  }
  return out;
}

} // namespace dmp
