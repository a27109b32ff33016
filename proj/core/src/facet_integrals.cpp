#include "dmp/facet_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <map>

#include "dmp/errors.hpp"
#include "dmp/parallel.hpp"

namespace dmp {

namespace {

struct Face
{
  std::vector<int> verts;   // indices into the vertex set
  std::vector<int> tight;   // constraints tight on the whole face
  int dim = 0;
  Vec foot;                 // projection of the origin onto the affine hull
  Vec centroid;
};

using Radial = std::function<double(double)>;

class PyramidIntegrator
{
public:
  PyramidIntegrator(const SymmetricPolytope& K, int nodes)
    : K_(K), n_(K.dim()), base_(gauss_legendre(nodes, 0.0, 1.0))
  {
  }

  Face facet(int constraint) const
  {
    std::vector<int> verts;
    const auto& act = K_.vertex_set().active;
    for (std::size_t v = 0; v < act.size(); ++v)
      if (std::binary_search(act[v].begin(), act[v].end(), constraint))
        verts.push_back(static_cast<int>(v));
    return make_face(std::move(verts));
  }

  // Integral of g(|x - foot|) over the face.
  double integrate(const Face& f, const Radial& g) const
  {
    if (f.dim == 0)
      return g(0.0);
    std::map<std::vector<int>, bool> seen;
    double total = 0.0;
    const auto& act = K_.vertex_set().active;
    for (int c = 0; c < 2 * K_.pair_count(); ++c) {
      if (std::binary_search(f.tight.begin(), f.tight.end(), c))
        continue;
      std::vector<int> sub;
      for (int v : f.verts)
        if (std::binary_search(act[v].begin(), act[v].end(), c))
          sub.push_back(v);
      if (sub.empty() || seen.count(sub))
        continue;
      seen[sub] = true;
      Face s = make_face(std::move(sub));
      if (s.dim != f.dim - 1)
        continue;
      const Vec step = s.foot - f.foot;
      const double dist = step.norm();
      if (dist <= 1e-14 * (1.0 + f.foot.norm()))
        continue;
      const double sign = step.dot(s.foot - f.centroid) >= 0.0 ? 1.0 : -1.0;
      const int d = f.dim;
      const double scale = f.foot.norm();
      Radial lifted = [this, &g, dist, d, scale](double r) {
        const double reach = std::sqrt(dist * dist + r * r);
        return radial_average(g, reach, d, scale);
      };
      total += sign * dist * integrate(s, lifted);
    }
    return total;
  }

private:
  Face make_face(std::vector<int> verts) const
  {
    const auto& vs = K_.vertex_set();
    Face f;
    f.verts = std::move(verts);
    f.tight = vs.active[f.verts.front()];
    for (std::size_t i = 1; i < f.verts.size(); ++i) {
      std::vector<int> keep;
      const auto& a = vs.active[f.verts[i]];
      std::set_intersection(f.tight.begin(), f.tight.end(), a.begin(), a.end(),
                            std::back_inserter(keep));
      f.tight = std::move(keep);
    }
    f.dim = n_ - constraint_rank(K_.normal_matrix(), f.tight);
    f.centroid = Vec::Zero(n_);
    for (int v : f.verts)
      f.centroid += vs.vertices.col(v);
    f.centroid /= static_cast<double>(f.verts.size());
    if (f.dim == 0) {
      f.foot = vs.vertices.col(f.verts.front());
    } else {
      Mat a(static_cast<Eigen::Index>(f.tight.size()), n_);
      Vec b(a.rows());
      for (std::size_t r = 0; r < f.tight.size(); ++r) {
        const int c = f.tight[r];
        const double sgn = (c % 2 == 0) ? 1.0 : -1.0;
        a.row(static_cast<Eigen::Index>(r)) = sgn * K_.normal_matrix().row(c / 2);
        b[static_cast<Eigen::Index>(r)] = K_.support_numbers()[c / 2];
      }
      f.foot = a.completeOrthogonalDecomposition().solve(b);
    }
    return f;
  }

  // int_0^1 g(s * reach) s^{d-1} ds. The integrand varies on the scale
  // scale/reach near s = 0, so panels are graded geometrically there.
  double radial_average(const Radial& g, double reach, int d, double scale) const
  {
    double edges[64];
    int count = 0;
    edges[count++] = 0.0;
    const double rho = scale / reach;
    if (rho < 0.5) {
      double e = rho / 8.0;
      while (e < 1.0 && count < 60) {
        edges[count++] = e;
        e *= 2.0;
      }
    } else {
      edges[count++] = 0.5;
    }
    edges[count++] = 1.0;
    double acc = 0.0;
    for (int p = 0; p + 1 < count; ++p) {
      const double lo = edges[p], width = edges[p + 1] - edges[p];
      for (std::size_t i = 0; i < base_.nodes.size(); ++i) {
        const double s = lo + width * base_.nodes[i];
        double w = width * base_.weights[i];
        for (int e = 1; e < d; ++e)
          w *= s;
        acc += w * g(s * reach);
      }
    }
    return acc;
  }

  const SymmetricPolytope& K_;
  int n_;
  LineRule base_;
};

} // namespace

Vec exact_pair_curvature(const SymmetricPolytope& K, double q, const FacetIntegralOptions& options)
{
  if (!std::isfinite(q))
    throw DomainError("exact_pair_curvature: q must be finite");
  const int m = K.pair_count();
  const int n = K.dim();
  const PyramidIntegrator integrator(K, options.nodes_per_panel);
  Vec out = Vec::Zero(m);
  parallel::for_each(static_cast<std::size_t>(m), [&](std::size_t idx) {
    const int i = static_cast<int>(idx);
    if (!K.facet()[i])
      return;
    const double h = K.support_numbers()[i];
    const double h2 = h * h;
    const double ex = 0.5 * (q - n);
    const Face f = integrator.facet(2 * i);
    const Radial g = [h2, ex](double r) { return std::pow(h2 + r * r, ex); };
    // the facet at -v_i is the reflection of the one at v_i
    out[i] = 2.0 * h / n * integrator.integrate(f, g);
  });
  return out;
}

} // namespace dmp
