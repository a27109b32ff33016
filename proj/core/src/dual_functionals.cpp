#include "dmp/dual_functionals.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "dmp/errors.hpp"
#include "dmp/parallel.hpp"

namespace dmp {

double dual_quermass(const Body& K, double q, const SphericalGrid& grid)
{
  const int n = body_dim(K);
  if (grid.dim() != n)
    throw DomainError("dual_quermass: grid and body differ in dimension");
  if (!std::isfinite(q))
    throw DomainError("dual_quermass: q must be finite");
  return std::visit(
    [&](const auto& body) {
      return integrate(grid, [&](const DirectionRef& u) { return std::pow(body.radial(u), q); }) / n;
    },
    K);
}

double dual_quermass_grassmann(const Body& K, int i, int samples, std::uint64_t seed,
                               int sub_resolution)
{
  const int n = body_dim(K);
  if (i < 1 || i > n)
    throw DomainError("dual_quermass_grassmann: need 1 <= i <= n");
  if (samples < 1)
    throw DomainError("dual_quermass_grassmann: samples must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Mat> frames(static_cast<std::size_t>(samples));
  for (Mat& f : frames) {
    Mat g(n, i);
    for (int c = 0; c < i; ++c)
      for (int r = 0; r < n; ++r)
        g(r, c) = normal(rng);
    Eigen::HouseholderQR<Mat> qr(g);
    f = Mat(qr.householderQ()).leftCols(i);
  }

  const SphericalGrid sub = sub_sphere_rule(i, sub_resolution);
  const double sum = parallel::sum(frames.size(), [&](std::size_t s) {
    const Mat& f = frames[s];
    double acc = 0.0;
    for (std::size_t k = 0; k < sub.size(); ++k) {
      const Vec u = f * sub.node(k);
      acc += sub.weight(k) * std::pow(radial_eval(K, u), i);
    }
    return acc / i;
  });
  return unit_ball_volume(n) / unit_ball_volume(i) * sum / samples;
}

const char* to_string(CurvatureMethod method)
{
  return method == CurvatureMethod::exact ? "exact" : "grid";
}

CurvatureMeasure dual_curvature(const SymmetricPolytope& K, double q, const SphericalGrid& grid)
{
  const int n = K.dim();
  if (grid.dim() != n)
    throw DomainError("dual_curvature: grid and body differ in dimension");
  if (q == 0.0 || !std::isfinite(q))
    throw DomainError("dual_curvature: q must be finite and nonzero");
  const int m = K.pair_count();
  const std::size_t chunks = parallel::chunk_count(grid.size());
  std::vector<Vec> partial(chunks, Vec::Zero(m));
  parallel::for_chunks(grid.size(), [&](std::size_t c, std::size_t b, std::size_t e) {
    Vec& acc = partial[c];
    for (std::size_t i = b; i < e; ++i) {
      const auto u = grid.node(i);
      double best = std::numeric_limits<double>::infinity();
      int cell = 0;
      for (int p = 0; p < m; ++p) {
        const double d = std::abs(K.normal_matrix().row(p).dot(u));
        if (d > 0.0 && K.support_numbers()[p] / d < best) {
          best = K.support_numbers()[p] / d;
          cell = p;
        }
      }
      acc[cell] += grid.weight(i) * std::pow(best, q);
    }
  });
  CurvatureMeasure out;
  out.normals = K.normals();
  out.pair_values = Vec::Zero(m);
  for (const Vec& p : partial)
    out.pair_values += p;
  out.pair_values /= n;
  out.q = q;
  out.total = out.pair_values.sum();
  out.method = CurvatureMethod::grid;
  return out;
}

CurvatureMeasure dual_curvature_exact(const SymmetricPolytope& K, double q,
                                      const FacetIntegralOptions& options)
{
  if (q == 0.0 || !std::isfinite(q))
    throw DomainError("dual_curvature: q must be finite and nonzero");
  CurvatureMeasure out;
  out.normals = K.normals();
  out.pair_values = exact_pair_curvature(K, q, options);
  out.q = q;
  out.total = out.pair_values.sum();
  out.method = CurvatureMethod::exact;
  return out;
}

double dual_quermass_exact(const SymmetricPolytope& K, double q, const FacetIntegralOptions& options)
{
  return exact_pair_curvature(K, q, options).sum();
}

DiscreteEvenMeasure to_measure(const CurvatureMeasure& c)
{
  std::vector<AtomPair> atoms;
  for (std::size_t i = 0; i < c.normals.size(); ++i)
    if (c.pair_values[static_cast<Eigen::Index>(i)] > 0.0)
      atoms.push_back({c.normals[i], c.pair_values[static_cast<Eigen::Index>(i)]});
  return DiscreteEvenMeasure(atoms);
}

namespace {

template <class Quermass, class Curvature>
VariationalReport variational(const SymmetricPolytope& K, const Vec& f, double q, double t_step,
                              Quermass&& quermass, Curvature&& curvature)
{
  if (q == 0.0 || !std::isfinite(q))
    throw DomainError("variational_check: q must be finite and nonzero");
  if (!(t_step >= 1e-6 && t_step <= 1e-2))
    throw DomainError("variational_check: t_step must lie in [1e-6, 1e-2]");
  if (f.size() != K.pair_count())
    throw DomainError("variational_check: f must have one value per normal pair");
  const LogWulffFamily family{K.normals(), K.support_numbers(), f};
  VariationalReport r;
  r.lhs = (quermass(log_wulff_member(family, t_step)) -
           quermass(log_wulff_member(family, -t_step))) /
          (2.0 * t_step);
  r.rhs = q * f.dot(curvature(K));
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.rel_error = scale > 0.0 ? std::abs(r.lhs - r.rhs) / scale : 0.0;
  return r;
}

} // namespace

VariationalReport variational_check(const SymmetricPolytope& K, const Vec& f, double q,
                                    double t_step, const SphericalGrid& grid)
{
  return variational(
    K, f, q, t_step, [&](const SymmetricPolytope& P) { return dual_quermass(Body{P}, q, grid); },
    [&](const SymmetricPolytope& P) { return dual_curvature(P, q, grid).pair_values; });
}

VariationalReport variational_check(const SymmetricPolytope& K, const Vec& f, double q,
                                    double t_step)
{
  return variational(
    K, f, q, t_step, [&](const SymmetricPolytope& P) { return dual_quermass_exact(P, q); },
    [&](const SymmetricPolytope& P) { return exact_pair_curvature(P, q); });
}

} // namespace dmp
