#include "dmp/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dmp/errors.hpp"

namespace dmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_orthonormal(const Mat& axes, const char* who)
{
  if (axes.rows() != axes.cols() || axes.rows() < 2)
    throw DomainError(std::string(who) + ": axes must be a square matrix with n >= 2");
  const double err = (axes.transpose() * axes - Mat::Identity(axes.rows(), axes.cols()))
                         .lpNorm<Eigen::Infinity>();
  if (err > 1e-12)
    throw DomainError(std::string(who) + ": axes are not orthonormal (error " +
                      std::to_string(err) + ")");
}

void check_ascending_positive(const Vec& a, const char* who)
{
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !std::isfinite(a[i]))
      throw DomainError(std::string(who) + ": parameters must be positive and finite");
    if (i > 0 && a[i] < a[i - 1])
      throw DomainError(std::string(who) + ": parameters must be sorted ascending");
  }
}

} // namespace

// ------------------------------------------------------------ polytope

SymmetricPolytope::SymmetricPolytope(std::vector<UnitVector> normals, Vec support)
  : normals_(std::move(normals)), support_(std::move(support))
{
  if (normals_.empty())
    throw GeometryError("polytope: no normals");
  const int n = normals_.front().dim();
  if (n < 2)
    throw GeometryError("polytope: dimension must be at least 2");
  if (static_cast<Eigen::Index>(normals_.size()) != support_.size())
    throw GeometryError("polytope: normals and support numbers differ in length");
  if (static_cast<int>(normals_.size()) < n)
    throw GeometryError("polytope: fewer normal pairs than the dimension");
  normal_matrix_.resize(static_cast<Eigen::Index>(normals_.size()), n);
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    if (normals_[i].dim() != n)
      throw GeometryError("polytope: normals have mixed dimensions");
    normal_matrix_.row(static_cast<Eigen::Index>(i)) = normals_[i].coords().transpose();
  }
  vset_ = enumerate_vertices(normal_matrix_, support_);
  derive();
}

void SymmetricPolytope::derive()
{
  const int m = pair_count();
  const int n = dim();
  const Mat proj = normal_matrix_ * vset_.vertices;
  reduced_.resize(m);
  active_.assign(m, false);
  facet_.assign(m, false);
  for (int i = 0; i < m; ++i) {
    reduced_[i] = std::min(support_[i], proj.row(i).cwiseAbs().maxCoeff());
    active_[i] = reduced_[i] >= support_[i] - 10.0 * vset_.tolerance;

    std::vector<int> common;
    bool first = true;
    for (std::size_t v = 0; v < vset_.active.size(); ++v) {
      const auto& act = vset_.active[v];
      if (!std::binary_search(act.begin(), act.end(), 2 * i))
        continue;
      if (first) {
        common = act;
        first = false;
      } else {
        std::vector<int> keep;
        std::set_intersection(common.begin(), common.end(), act.begin(), act.end(),
                              std::back_inserter(keep));
        common = std::move(keep);
      }
    }
    facet_[i] = !first && n - constraint_rank(normal_matrix_, common) == n - 1;
  }
}

double SymmetricPolytope::radial(const DirectionRef& u) const
{
  double best = kInf;
  for (int i = 0; i < pair_count(); ++i) {
    const double d = std::abs(normal_matrix_.row(i).dot(u));
    if (d > 0.0)
      best = std::min(best, support_[i] / d);
  }
  return best;
}

int SymmetricPolytope::radial_cell(const DirectionRef& u) const
{
  double best = kInf;
  int cell = 0;
  for (int i = 0; i < pair_count(); ++i) {
    const double d = std::abs(normal_matrix_.row(i).dot(u));
    if (d > 0.0 && support_[i] / d < best) {
      best = support_[i] / d;
      cell = i;
    }
  }
  return cell;
}

double SymmetricPolytope::support(const DirectionRef& v) const
{
  return (vset_.vertices.transpose() * v).cwiseAbs().maxCoeff();
}

double SymmetricPolytope::diameter() const
{
  return 2.0 * vset_.vertices.colwise().norm().maxCoeff();
}

SymmetricPolytope SymmetricPolytope::scaled(double c) const
{
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("polytope: scale factor must be positive");
  SymmetricPolytope out = *this;
  out.support_ *= c;
  out.vset_.vertices *= c;
  out.vset_.tolerance *= c;
  out.reduced_ *= c;
  return out;
}

// ------------------------------------------------------------ ellipsoid

Ellipsoid::Ellipsoid(Mat axes, Vec semiaxes) : axes_(std::move(axes)), semiaxes_(std::move(semiaxes))
{
  check_orthonormal(axes_, "ellipsoid");
  if (semiaxes_.size() != axes_.cols())
    throw DomainError("ellipsoid: semiaxes length does not match the dimension");
  check_ascending_positive(semiaxes_, "ellipsoid");
}

Ellipsoid Ellipsoid::aligned(Vec semiaxes)
{
  const int n = static_cast<int>(semiaxes.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return semiaxes[a] < semiaxes[b]; });
  Mat axes = Mat::Zero(n, n);
  Vec sorted(n);
  for (int c = 0; c < n; ++c) {
    axes(order[c], c) = 1.0;
    sorted[c] = semiaxes[order[c]];
  }
  return Ellipsoid(axes, sorted);
}

Ellipsoid Ellipsoid::ball(int n, double radius)
{
  return Ellipsoid(Mat::Identity(n, n), Vec::Constant(n, radius));
}

double Ellipsoid::radial(const DirectionRef& u) const
{
  return 1.0 / (axes_.transpose() * u).cwiseQuotient(semiaxes_).norm();
}

double Ellipsoid::support(const DirectionRef& v) const
{
  return (axes_.transpose() * v).cwiseProduct(semiaxes_).norm();
}

Ellipsoid Ellipsoid::scaled(double c) const
{
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("ellipsoid: scale factor must be positive");
  return Ellipsoid(axes_, semiaxes_ * c);
}

// ------------------------------------------------------------ barrier

BarrierBody::BarrierBody(Mat axes, int k, Vec params)
  : axes_(std::move(axes)), k_(k), params_(std::move(params))
{
  check_orthonormal(axes_, "barrier");
  const int n = dim();
  if (n < 3 || k_ < 1 || k_ > n - 2)
    throw DomainError("barrier: need n >= 3 and 1 <= k <= n-2");
  if (params_.size() != k_ + 1)
    throw DomainError("barrier: expected k+1 parameters");
  check_ascending_positive(params_, "barrier");
  if (!(params_[k_] < 1.0))
    throw DomainError("barrier: parameters must be below 1");
}

BarrierBody BarrierBody::aligned(int n, int k, Vec params)
{
  return BarrierBody(Mat::Identity(n, n), k, std::move(params));
}

double BarrierBody::ellipsoid_radial(const DirectionRef& u1) const
{
  return 1.0 / u1.cwiseQuotient(params_.head(k_)).norm();
}

double BarrierBody::radial(const DirectionRef& u) const
{
  const Vec y = axes_.transpose() * u;
  const double e = y.head(k_).cwiseQuotient(params_.head(k_)).norm();
  const double s = std::abs(y[k_]);
  const double b = y.tail(dim() - k_ - 1).norm();
  double r = kInf;
  if (e > 0.0)
    r = std::min(r, 1.0 / e);
  if (s > 0.0)
    r = std::min(r, params_[k_] / s);
  if (b > 0.0)
    r = std::min(r, 1.0 / b);
  return r;
}

double BarrierBody::support(const DirectionRef& v) const
{
  const Vec y = axes_.transpose() * v;
  return y.head(k_).cwiseProduct(params_.head(k_)).norm() + params_[k_] * std::abs(y[k_]) +
         y.tail(dim() - k_ - 1).norm();
}

// ------------------------------------------------------------ cylinder

Cylinder::Cylinder(Mat axes, int k, Vec semiaxes)
  : axes_(std::move(axes)), k_(k), semiaxes_(std::move(semiaxes))
{
  check_orthonormal(axes_, "cylinder");
  if (k_ < 1 || k_ > dim() - 1)
    throw DomainError("cylinder: need 1 <= k <= n-1");
  if (semiaxes_.size() != k_)
    throw DomainError("cylinder: expected k semiaxes");
  for (Eigen::Index i = 0; i < semiaxes_.size(); ++i)
    if (!(semiaxes_[i] > 0.0) || !std::isfinite(semiaxes_[i]))
      throw DomainError("cylinder: semiaxes must be positive and finite");
}

Cylinder Cylinder::aligned(int n, int k, Vec semiaxes)
{
  return Cylinder(Mat::Identity(n, n), k, std::move(semiaxes));
}

double Cylinder::ellipsoid_radial(const DirectionRef& w) const
{
  return 1.0 / w.cwiseQuotient(semiaxes_).norm();
}

double Cylinder::radial(const DirectionRef& u) const
{
  const Vec y = axes_.transpose() * u;
  const double e = y.head(k_).cwiseQuotient(semiaxes_).norm();
  const double b = y.tail(dim() - k_).norm();
  double r = kInf;
  if (e > 0.0)
    r = std::min(r, 1.0 / e);
  if (b > 0.0)
    r = std::min(r, 1.0 / b);
  return r;
}

double Cylinder::support(const DirectionRef& v) const
{
  const Vec y = axes_.transpose() * v;
  return y.head(k_).cwiseProduct(semiaxes_).norm() + y.tail(dim() - k_).norm();
}

// ------------------------------------------------------------ dispatch

int body_dim(const Body& body)
{
  return std::visit([](const auto& b) { return b.dim(); }, body);
}

double support_eval(const Body& body, const DirectionRef& v)
{
  return std::visit([&](const auto& b) { return b.support(v); }, body);
}

double radial_eval(const Body& body, const DirectionRef& u)
{
  return std::visit([&](const auto& b) { return b.radial(u); }, body);
}

SymmetricPolytope wulff_shape(std::vector<UnitVector> normals, Vec h)
{
  return SymmetricPolytope(std::move(normals), std::move(h));
}

SymmetricPolytope log_wulff_member(const LogWulffFamily& family, double t)
{
  if (family.base_support.size() != family.direction.size())
    throw GeometryError("log-Wulff family: support and direction lengths differ");
  const Vec h = family.base_support.array() * (t * family.direction.array()).exp();
  return wulff_shape(family.normals, h);
}

// ------------------------------------------------------------ barrier coords

namespace {

void check_barrier_coords(const BarrierBody& G, const GeneralCoords& c)
{
  if (c.k != G.k() || c.j != 1 || c.u1.size() != G.k() ||
      c.u3.size() != G.dim() - G.k() - 1)
    throw DomainError("barrier_radial: coordinates must use the split (k, 1)");
}

} // namespace

double barrier_radial(const BarrierBody& G, const GeneralCoords& c)
{
  check_barrier_coords(G, c);
  const double rb = G.ellipsoid_radial(c.u1);
  const double a = G.params()[G.k()];
  const double ct = std::cos(c.theta), st = std::sin(c.theta);
  const double cp = std::cos(c.phi), sp = std::sin(c.phi);
  if (c.theta <= std::atan(a / rb)) {
    if (c.phi <= std::atan(ct / rb))
      return rb / (cp * ct);
    return 1.0 / sp;
  }
  if (c.phi <= std::atan(st / a))
    return a / (st * cp);
  return 1.0 / sp;
}

double barrier_radial_min(const BarrierBody& G, const GeneralCoords& c)
{
  check_barrier_coords(G, c);
  const double rb = G.ellipsoid_radial(c.u1);
  const double a = G.params()[G.k()];
  const double d1 = std::cos(c.phi) * std::cos(c.theta);
  const double d2 = std::cos(c.phi) * std::sin(c.theta);
  const double d3 = std::sin(c.phi);
  double r = kInf;
  if (d1 > 0.0)
    r = std::min(r, rb / d1);
  if (d2 > 0.0)
    r = std::min(r, a / d2);
  if (d3 > 0.0)
    r = std::min(r, 1.0 / d3);
  return r;
}

// ------------------------------------------------------------ Hausdorff

HausdorffReport hausdorff_distance(const Body& a, const Body& b, int resolution)
{
  const int n = body_dim(a);
  if (body_dim(b) != n)
    throw DomainError("hausdorff_distance: bodies differ in dimension");
  const SphericalGrid grid = n <= 4 ? build_default_grid(n, resolution)
                                    : build_grid(n, std::max(resolution * resolution, 4096),
                                                 GridScheme::monte_carlo, 0);
  auto gap = [&](const Vec& v) { return std::abs(support_eval(a, v) - support_eval(b, v)); };

  const std::size_t half = grid.size() / 2;
  std::vector<double> g(half);
  for (std::size_t i = 0; i < half; ++i)
    g[i] = gap(grid.node(i));

  std::vector<std::size_t> order(half);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t seeds = std::min<std::size_t>(8, half);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(seeds),
                    order.end(), [&](std::size_t x, std::size_t y) { return g[x] > g[y]; });

  double best = g[order[0]];
  // compass search on the sphere from the best nodes
  const double start_step = 4.0 * std::acos(-1.0) / resolution;
  for (std::size_t s = 0; s < seeds; ++s) {
    Vec v = grid.node(order[s]);
    double val = g[order[s]];
    double step = start_step;
    while (step > 1e-10) {
      bool moved = false;
      for (int d = 0; d < n && !moved; ++d)
        for (double sign : {1.0, -1.0}) {
          Vec w = v;
          w[d] += sign * step;
          w.normalize();
          const double wv = gap(w);
          if (wv > val) {
            v = w;
            val = wv;
            moved = true;
            break;
          }
        }
      if (!moved)
        step *= 0.5;
    }
    best = std::max(best, val);
  }
  HausdorffReport report;
  report.distance = best;
  report.resolution = resolution;
  report.scheme = grid.scheme();
  return report;
}

} // namespace dmp
