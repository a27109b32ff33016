#include "dmp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_set>

#include "dmp/errors.hpp"

namespace dmp {

Vec canonical_direction(const Vec& v)
{
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-12)
      return v[i] < 0.0 ? Vec(-v) : v;
  return v;
}

DiscreteEvenMeasure::DiscreteEvenMeasure(const std::vector<AtomPair>& pairs)
{
  if (pairs.empty())
    throw DomainError("measure: no atoms");
  const int n = pairs.front().dir.dim();
  std::vector<Vec> dirs;
  std::vector<double> w;
  for (const AtomPair& p : pairs) {
    if (p.dir.dim() != n)
      throw DomainError("measure: atoms have mixed dimensions");
    if (!(p.weight > 0.0) || !std::isfinite(p.weight))
      throw DomainError("measure: pair weights must be positive and finite");
    const Vec c = canonical_direction(p.dir.coords());
    auto same = std::find_if(dirs.begin(), dirs.end(), [&](const Vec& d) {
      return (d - c).lpNorm<Eigen::Infinity>() <= 1e-12;
    });
    if (same == dirs.end()) {
      dirs.push_back(c);
      w.push_back(p.weight);
    } else {
      w[static_cast<std::size_t>(same - dirs.begin())] += p.weight;
    }
  }
  directions_.resize(static_cast<Eigen::Index>(dirs.size()), n);
  weights_.resize(static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    directions_.row(static_cast<Eigen::Index>(i)) = dirs[i].transpose();
    weights_[static_cast<Eigen::Index>(i)] = w[i];
  }
}

DiscreteEvenMeasure DiscreteEvenMeasure::scaled(double c) const
{
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("measure: scale factor must be positive");
  DiscreteEvenMeasure out = *this;
  out.weights_ *= c;
  return out;
}

// ------------------------------------------------------------ entropy

double entropy(const DiscreteEvenMeasure& mu, const PositiveFunction& f)
{
  double acc = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    const Vec u = mu.directions().row(i).transpose();
    const double v = f(u);
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("entropy: function is not positive at atom " + std::to_string(i));
    acc += mu.weights()[i] * std::log(v);
  }
  return -acc / mu.total();
}

double entropy(const DiscreteEvenMeasure& mu, const Body& body)
{
  if (body_dim(body) != mu.dim())
    throw DomainError("entropy: body and measure differ in dimension");
  return entropy(mu, [&](const DirectionRef& v) { return support_eval(body, v); });
}

// ------------------------------------------------------------ partitions

namespace {

void check_basis(const Mat& basis, int n, const char* who)
{
  if (basis.rows() != n || basis.cols() != n ||
      (basis.transpose() * basis - Mat::Identity(n, n)).lpNorm<Eigen::Infinity>() > 1e-10)
    throw DomainError(std::string(who) + ": basis must be an orthonormal n x n matrix");
}

void check_delta(double delta, int n, const char* who)
{
  if (!(delta > 0.0) || !(delta < 1.0 / std::sqrt(static_cast<double>(n))))
    throw DomainError(std::string(who) + ": delta must lie in (0, 1/sqrt(n))");
}

} // namespace

int partition_cell(const DirectionRef& v, const Mat& basis, double delta)
{
  const Vec c = basis.transpose() * v;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i)
    if (std::abs(c[i]) >= delta)
      return static_cast<int>(i);
  throw DomainError("partition_cell: direction lies in no cell");
}

PartitionMasses partition_masses(const DiscreteEvenMeasure& mu, const Mat& basis, double delta)
{
  const int n = mu.dim();
  check_basis(basis, n, "partition_masses");
  check_delta(delta, n, "partition_masses");
  PartitionMasses out;
  out.basis = basis;
  out.delta = delta;
  out.lambda = Vec::Zero(n);
  out.cell.resize(static_cast<std::size_t>(mu.size()));
  for (int a = 0; a < mu.size(); ++a) {
    const int c = partition_cell(mu.directions().row(a).transpose(), basis, delta);
    out.cell[static_cast<std::size_t>(a)] = c;
    out.lambda[c] += mu.weights()[a];
  }
  out.lambda /= mu.total();
  return out;
}

// ------------------------------------------------------------ SMI

SmiReport smi_check(const DiscreteEvenMeasure& mu, double q)
{
  const int n = mu.dim();
  const int m = mu.size();
  if (!(q > 0.0) || !(q < n))
    throw DomainError("smi_check: q must lie in (0, n)");
  if (m > kSmiMaxPairs)
    throw CapabilityError("smi_check: " + std::to_string(m) + " atom pairs exceed the exact " +
                          "enumeration limit of " + std::to_string(kSmiMaxPairs));
  const Mat& dirs = mu.directions();
  const double total = mu.total();

  SmiReport report;
  report.margin = std::numeric_limits<double>::infinity();
  std::unordered_set<std::uint32_t> seen;

  for (int size = 1; size <= std::min(n - 1, m); ++size) {
    std::vector<int> comb(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i)
      comb[static_cast<std::size_t>(i)] = i;
    while (true) {
      Mat span(n, size);
      for (int i = 0; i < size; ++i)
        span.col(i) = dirs.row(comb[static_cast<std::size_t>(i)]).transpose();
      Eigen::ColPivHouseholderQR<Mat> qr(span);
      qr.setThreshold(1e-9);
      if (qr.rank() == size) {
        const Mat basis = Mat(qr.householderQ()).leftCols(size);
        std::uint32_t mask = 0;
        double mass = 0.0;
        std::vector<int> inside;
        for (int a = 0; a < m; ++a) {
          const Vec u = dirs.row(a).transpose();
          if ((u - basis * (basis.transpose() * u)).norm() <= 1e-9) {
            mask |= (1u << a);
            mass += mu.weights()[a];
            inside.push_back(a);
          }
        }
        if (seen.insert(mask).second) {
          ++report.subspaces_checked;
          const double ratio = mass / total;
          const double bound = std::min(static_cast<double>(size) / q, 1.0);
          const double m = bound - ratio;
          const bool tie = std::abs(m - report.margin) <= 1e-12;
          if ((m < report.margin && !tie) || (tie && ratio > report.witness.ratio + 1e-12)) {
            report.margin = bound - ratio;
            report.witness.basis = basis;
            report.witness.dim = size;
            report.witness.ratio = ratio;
            report.witness.bound = bound;
            report.witness.atoms = std::move(inside);
          }
        }
      }
      // next combination in lexicographic order
      int i = size - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == m - size + i)
        --i;
      if (i < 0)
        break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  report.passes = report.margin > 0.0;
  return report;
}

// ------------------------------------------------------------ bounds

double rearrangement_bound(const Vec& lambda, const Vec& x, const Vec& sigma)
{
  const Eigen::Index n = lambda.size();
  if (n == 0 || x.size() != n || sigma.size() != n)
    throw DomainError("rearrangement_bound: lambda, x and sigma must have equal nonzero length");
  if (std::abs(sigma[n - 1] - 1.0) > 1e-12)
    throw PreconditionError("rearrangement_bound: sigma_n must equal 1", static_cast<int>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] < 0.0)
      throw PreconditionError("rearrangement_bound: negative lambda", static_cast<int>(i));
    if (i > 0 && x[i] < x[i - 1])
      throw PreconditionError("rearrangement_bound: x is not ascending", static_cast<int>(i));
  }
  if (std::abs(lambda.sum() - 1.0) > 1e-12)
    throw PreconditionError("rearrangement_bound: lambda does not sum to 1", static_cast<int>(n - 1));
  double prefix = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    prefix += lambda[i];
    if (prefix > sigma[i] + 1e-12)
      throw PreconditionError("rearrangement_bound: prefix sum exceeds sigma at index " +
                                std::to_string(i),
                              static_cast<int>(i));
  }
  double bound = 0.0;
  double prev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    bound += (sigma[i] - prev) * x[i];
    prev = sigma[i];
  }
  return bound;
}

double entropy_partition_bound(const DiscreteEvenMeasure& mu, const Ellipsoid& Q, double delta0)
{
  if (Q.dim() != mu.dim())
    throw DomainError("entropy_partition_bound: dimension mismatch");
  const PartitionMasses pm = partition_masses(mu, Q.axes(), delta0);
  double bound = -std::log(0.5 * delta0);
  for (int i = 0; i < mu.dim(); ++i)
    bound -= pm.lambda[i] * std::log(Q.semiaxes()[i]);
  return bound;
}

EntropyChainReport entropy_chain_check(const DiscreteEvenMeasure& mu, double q,
                                       const std::vector<Ellipsoid>& sequence,
                                       const Mat& limit_basis)
{
  const int n = mu.dim();
  if (!(q > 1.0) || !(q < n))
    throw DomainError("entropy_chain_check: q must lie in (1, n)");
  check_basis(limit_basis, n, "entropy_chain_check");

  EntropyChainReport report;
  Vec lambda;
  for (int j = 1; j <= 60 && report.delta0 == 0.0; ++j) {
    const double delta = std::ldexp(1.0 / std::sqrt(static_cast<double>(n)), -j);
    lambda = partition_masses(mu, limit_basis, delta).lambda;
    double prefix = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n - 1; ++i) {
      prefix += lambda[i];
      slack = std::min(slack, std::min((i + 1) / q, 1.0) - prefix);
    }
    if (slack > 0.0) {
      report.delta0 = delta;
      report.t0 = 0.5 * slack;
    }
  }
  if (report.delta0 == 0.0)
    throw PreconditionError("entropy_chain_check: no delta0 gives positive prefix slack; "
                            "the measure violates the subspace mass inequality along this basis",
                            0);

  Vec sigma(n);
  for (int i = 0; i < n - 1; ++i)
    sigma[i] = std::min((i + 1) / q, 1.0) - report.t0;
  sigma[n - 1] = 1.0;
  const int fq = static_cast<int>(std::floor(q));

  report.max_gap = -std::numeric_limits<double>::infinity();
  for (const Ellipsoid& Q : sequence) {
    if (Q.dim() != n)
      throw DomainError("entropy_chain_check: ellipsoid dimension mismatch");
    EntropyChainStep step;
    double drift = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec e = limit_basis.col(i);
      const Vec el = Q.axes().col(i);
      drift = std::max(drift, std::min((e - el).norm(), (e + el).norm()));
    }
    step.aligned = drift < 0.5 * report.delta0;

    const Vec x = Q.semiaxes().array().log();
    step.entropy = entropy(mu, Body{Q});
    step.partition_bound = -std::log(0.5 * report.delta0) - lambda.dot(x);
    step.rearranged_bound =
      -std::log(0.5 * report.delta0) - rearrangement_bound(lambda, x, sigma);

    double expl = report.t0 * x[0];
    if (q < n - 1) {
      for (int i = 0; i < fq; ++i)
        expl -= x[i] / q;
      expl -= (q - fq) / q * x[fq];
    } else {
      for (int i = 0; i < n - 1; ++i)
        expl -= x[i] / q;
    }
    step.explicit_bound = expl;
    step.gap = step.entropy - expl;

    if (step.aligned) {
      const double slop = 1e-12 * (1.0 + std::abs(step.rearranged_bound));
      if (step.entropy > step.partition_bound + slop ||
          step.partition_bound > step.rearranged_bound + slop)
        report.chain_holds = false;
    }
    report.max_gap = std::max(report.max_gap, step.gap);
    report.steps.push_back(step);
  }
  return report;
}

} // namespace dmp
