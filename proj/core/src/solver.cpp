#include "dmp/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dmp {

namespace {

constexpr double kSameDirection = 1.0 - 1e-12;

void check_q(double q, int n)
{
  if (!(q > 0.0) || !(q <= n))
    throw DomainError("solver: q must lie in (0, n]");
}

// mu's pair weight at each normal; every atom must be one of the normals.
Vec targets(const DiscreteEvenMeasure& mu, const std::vector<UnitVector>& normals)
{
  Vec t = Vec::Zero(static_cast<Eigen::Index>(normals.size()));
  for (int a = 0; a < mu.size(); ++a) {
    const Vec u = mu.directions().row(a).transpose();
    bool found = false;
    for (std::size_t i = 0; i < normals.size() && !found; ++i)
      if (std::abs(normals[i].dot(u)) >= kSameDirection) {
        t[static_cast<Eigen::Index>(i)] += mu.weights()[a];
        found = true;
      }
    if (!found) {
      std::ostringstream msg;
      msg << "solver: atom " << a << " is not among the normals";
      throw DomainError(msg.str());
    }
  }
  return t;
}

PhiValue evaluate(const DiscreteEvenMeasure& mu, const std::vector<UnitVector>& normals,
                  const Vec& h, double q, const SphericalGrid* grid)
{
  if (mu.dim() == 0 || normals.empty() || normals.front().dim() != mu.dim())
    throw DomainError("phi: normals and measure differ in dimension");
  check_q(q, mu.dim());
  if (h.size() != static_cast<Eigen::Index>(normals.size()))
    throw DomainError("phi: need one support number per normal");
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (!(h[i] > 0.0) || !std::isfinite(h[i]))
      throw DomainError("phi: support numbers must be positive and finite");

  const SymmetricPolytope P(normals, h);
  PhiValue v;
  v.curvature = grid ? dual_curvature(P, q, *grid).pair_values : exact_pair_curvature(P, q);
  v.quermass = v.curvature.sum();
  if (!(v.quermass > 0.0) || !std::isfinite(v.quermass))
    throw GeometryError("phi: Wulff shape has no interior");
  const Vec t = targets(mu, normals);
  const double total = mu.total();
  v.reduced_support = P.reduced_support();
  v.entropy = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i)
    if (t[i] > 0.0)
      v.entropy -= t[i] * std::log(v.reduced_support[i]);
  v.entropy /= total;
  v.phi = v.entropy + std::log(v.quermass) / q;
  v.gradient = v.curvature / v.quermass - t / total;
  v.aspect = v.reduced_support.minCoeff() / P.diameter();
  return v;
}

// Tightens h to h_[h] and rescales so max h = 1; phi and the gradient are
// unchanged by both operations.
Vec normalize(PhiValue& v, double q)
{
  const double s = v.reduced_support.maxCoeff();
  v.reduced_support /= s;
  v.entropy += std::log(s);
  const double f = std::pow(s, -q);
  v.curvature *= f;
  v.quermass *= f;
  return v.reduced_support;
}

Vec project(const Vec& x) { return x.array() - x.mean(); }

} // namespace

PhiValue evaluate_phi(const DiscreteEvenMeasure& mu, const std::vector<UnitVector>& normals,
                      const Vec& h, double q, const SphericalGrid& grid)
{
  return evaluate(mu, normals, h, q, &grid);
}

PhiValue evaluate_phi(const DiscreteEvenMeasure& mu, const std::vector<UnitVector>& normals,
                      const Vec& h, double q)
{
  return evaluate(mu, normals, h, q, nullptr);
}

namespace {

std::vector<UnitVector> atom_normals(const DiscreteEvenMeasure& mu)
{
  std::vector<UnitVector> out;
  for (int a = 0; a < mu.size(); ++a)
    out.push_back(mu.direction(a));
  return out;
}

} // namespace

double phi(const DiscreteEvenMeasure& mu, const Vec& h, double q, const SphericalGrid& grid)
{
  return evaluate(mu, atom_normals(mu), h, q, &grid).phi;
}

Vec phi_gradient(const DiscreteEvenMeasure& mu, const Vec& h, double q, const SphericalGrid& grid)
{
  return evaluate(mu, atom_normals(mu), h, q, &grid).gradient;
}

std::vector<UnitVector> solver_normals(const DiscreteEvenMeasure& mu,
                                       const std::vector<UnitVector>& extra)
{
  const int n = mu.dim();
  std::vector<UnitVector> out = atom_normals(mu);
  for (const UnitVector& v : extra) {
    if (v.dim() != n)
      throw DomainError("solver_normals: extra normal has the wrong dimension");
    bool seen = false;
    for (const UnitVector& w : out)
      seen = seen || std::abs(v.dot(w)) >= kSameDirection;
    if (!seen)
      out.push_back(UnitVector::normalized(canonical_direction(v.coords())));
  }
  Mat N(static_cast<Eigen::Index>(out.size()), n);
  for (std::size_t i = 0; i < out.size(); ++i)
    N.row(static_cast<Eigen::Index>(i)) = out[i].coords().transpose();
  Eigen::JacobiSVD<Mat> svd(N, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double cut = 1e-9 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  for (int c = 0; c < n; ++c)
    if (c >= sv.size() || sv[c] <= cut)
      out.push_back(UnitVector::normalized(canonical_direction(svd.matrixV().col(c))));
  return out;
}

const char* to_string(SolveStatus status)
{
  switch (status) {
  case SolveStatus::converged:
    return "converged";
  case SolveStatus::diverging:
    return "diverging";
  case SolveStatus::max_iters:
    break;
  }
  return "max_iters";
}

namespace {

std::string gate_message(const SmiReport& r)
{
  std::ostringstream msg;
  msg << "measure fails the subspace mass inequality: a " << r.witness.dim
      << "-dimensional subspace carries ratio " << r.witness.ratio << " >= bound "
      << r.witness.bound;
  return msg.str();
}

} // namespace

SmiGateError::SmiGateError(SmiReport report)
  : DomainError(gate_message(report)), report_(std::move(report))
{
}

SolveResult maximize(const DiscreteEvenMeasure& mu, const SolveConfig& cfg)
{
  const int n = mu.dim();
  check_q(cfg.q, n);
  if (!(cfg.tol > 0.0))
    throw DomainError("maximize: tol must be positive");
  if (cfg.max_iters < 0)
    throw DomainError("maximize: max_iters must be nonnegative");
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0))
    throw DomainError("maximize: backtrack factor must lie in (0, 1)");
  if (!(cfg.sufficient_increase > 0.0 && cfg.sufficient_increase < 1.0))
    throw DomainError("maximize: sufficient-increase constant must lie in (0, 1)");
  if (!(cfg.initial_step > 0.0) || !(cfg.max_step > 0.0))
    throw DomainError("maximize: step sizes must be positive");

  std::optional<SmiReport> smi;
  if (cfg.q < n && !cfg.override_smi) {
    smi = smi_check(mu, cfg.q);
    if (!smi->passes)
      throw SmiGateError(*smi);
  }

  const std::vector<UnitVector> normals = solver_normals(mu, cfg.extra_normals);
  std::optional<SphericalGrid> grid;
  if (cfg.method == CurvatureMethod::grid)
    grid = build_default_grid(n, cfg.grid_resolution);
  const SphericalGrid* gp = grid ? &*grid : nullptr;
  auto eval = [&](const Vec& h) { return evaluate(mu, normals, h, cfg.q, gp); };

  PhiValue cur = eval(Vec::Ones(static_cast<Eigen::Index>(normals.size())));
  Vec h = normalize(cur, cfg.q);
  Vec x = h.array().log();

  std::vector<double> trace{cur.phi};
  SolveStatus status = SolveStatus::max_iters;
  Vec x_prev, g_prev;
  int it = 0;
  for (;; ++it) {
    const Vec& g = cur.gradient;
    if (g.lpNorm<Eigen::Infinity>() <= cfg.tol) {
      status = SolveStatus::converged;
      break;
    }
    if (cur.aspect < cfg.diverging_ratio) {
      status = SolveStatus::diverging;
      break;
    }
    if (it >= cfg.max_iters)
      break;

    const Vec d = project(g);
    double alpha = cfg.initial_step;
    if (x_prev.size() > 0) {
      const Vec s = project(x - x_prev);
      const double sy = s.dot(g - g_prev);
      if (sy < 0.0)
        alpha = s.squaredNorm() / -sy;
    }
    const double dmax = d.lpNorm<Eigen::Infinity>();
    alpha = std::min(alpha, cfg.max_step / dmax);
    const double slope = g.dot(d);

    std::optional<PhiValue> next;
    for (int tries = 0; tries < 60 && !next; ++tries, alpha *= cfg.backtrack) {
      try {
        PhiValue trial = eval((x + alpha * d).array().exp());
        if (trial.phi >= cur.phi + cfg.sufficient_increase * alpha * slope)
          next = std::move(trial);
      } catch (const GeometryError&) {
      }
    }
    if (!next)
      break;

    x_prev = x;
    g_prev = g;
    cur = std::move(*next);
    h = normalize(cur, cfg.q);
    x = h.array().log();
    trace.push_back(cur.phi);
  }

  const SymmetricPolytope K(normals, h);
  const double c = std::pow(mu.total() / cur.quermass, 1.0 / cfg.q);
  SymmetricPolytope body = K.scaled(c);
  const Vec C = gp ? dual_curvature(body, cfg.q, *gp).pair_values
                   : exact_pair_curvature(body, cfg.q);
  const double residual = (C - targets(mu, normals)).lpNorm<Eigen::Infinity>() / mu.total();

  return SolveResult{std::move(body),
                     c,
                     std::move(trace),
                     residual,
                     status,
                     it,
                     cur.gradient.lpNorm<Eigen::Infinity>(),
                     h,
                     smi,
                     cfg.method};
}

VerifyReport verify_solution(const SolveResult& result, const DiscreteEvenMeasure& mu, double q,
                             int resolution)
{
  const SymmetricPolytope& K = result.body;
  const SphericalGrid grid = build_default_grid(K.dim(), resolution);
  VerifyReport r;
  r.resolution = resolution;
  r.curvature = dual_curvature(K, q, grid).pair_values;
  r.target = targets(mu, K.normals());
  r.abs_error = (r.curvature - r.target).cwiseAbs();
  r.rel_error = r.abs_error;
  for (Eigen::Index i = 0; i < r.rel_error.size(); ++i)
    r.rel_error[i] /= r.target[i] > 0.0 ? r.target[i] : mu.total();
  r.max_rel_error = r.rel_error.size() > 0 ? r.rel_error.maxCoeff() : 0.0;
  r.total_gap = std::abs(r.curvature.sum() - mu.total());
  return r;
}

} // namespace dmp
