#include "dmp/spherical_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "dmp/errors.hpp"
#include "dmp/parallel.hpp"

namespace dmp {

using std::numbers::pi;

double unit_ball_volume(int n)
{
  if (n < 0)
    throw DomainError("unit_ball_volume: negative dimension");
  // omega_n = (2 pi / n) omega_{n-2}
  double v = n % 2 == 0 ? 1.0 : 2.0;
  for (int d = 2 + n % 2; d <= n; d += 2)
    v *= 2.0 * pi / d;
  return v;
}

double sphere_area(int n) { return n * unit_ball_volume(n); }

// ---------------------------------------------------------------- UnitVector

UnitVector::UnitVector(Vec coords) : coords_(std::move(coords))
{
  if (coords_.size() < 1)
    throw DomainError("UnitVector: empty coordinates");
  const double norm = coords_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-12)
    throw DomainError("UnitVector: |coords| = " + std::to_string(norm) + " is not 1");
}

UnitVector UnitVector::normalized(const Vec& v)
{
  const double norm = v.norm();
  if (!std::isfinite(norm) || norm == 0.0)
    throw DomainError("UnitVector: cannot normalize a zero or non-finite vector");
  return UnitVector(v / norm, Trusted{});
}

UnitVector UnitVector::axis(int n, int i)
{
  if (i < 0 || i >= n)
    throw DomainError("UnitVector::axis: index out of range");
  return UnitVector(Vec::Unit(n, i), Trusted{});
}

UnitVector UnitVector::operator-() const { return UnitVector(-coords_, Trusted{}); }

// ------------------------------------------------------------- line rules

namespace {

// P_order(x) and its derivative by the three-term recurrence.
std::pair<double, double> legendre(int order, double x)
{
  double p0 = 1.0, p1 = x;
  for (int l = 2; l <= order; ++l) {
    const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
    p0 = p1;
    p1 = p2;
  }
  return {p1, order * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

LineRule gauss_legendre(int order, double a, double b)
{
  if (order < 1)
    throw DomainError("gauss_legendre: order must be positive");
  LineRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    const double dp = legendre(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[order - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[order - 1 - i] = half * w;
  }
  if (order % 2 == 1)
    rule.nodes[order / 2] = mid;
  return rule;
}

LineRule composite_gauss_legendre(int order, const std::vector<double>& edges)
{
  LineRule out;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    if (edges[p + 1] <= edges[p])
      continue;
    const LineRule r = gauss_legendre(order, edges[p], edges[p + 1]);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

const char* to_string(GridScheme scheme)
{
  switch (scheme) {
  case GridScheme::product_angle:
    return "product-angle";
  case GridScheme::monte_carlo:
    return "monte-carlo";
  case GridScheme::split_product:
    return "split-product";
  }
  return "unknown";
}

// ------------------------------------------------------------ grid assembly

struct GridAssembly
{
  // `half_nodes` holds one representative per antipodal pair.
  static SphericalGrid make(int n, int resolution, GridScheme scheme,
                            std::optional<std::uint64_t> seed, const Mat& half_nodes,
                            const Vec& half_weights)
  {
    const Eigen::Index h = half_nodes.cols();
    SphericalGrid g;
    g.dim_ = n;
    g.resolution_ = resolution;
    g.scheme_ = scheme;
    g.seed_ = seed;
    g.nodes_.resize(n, 2 * h);
    g.nodes_.leftCols(h) = half_nodes;
    g.nodes_.rightCols(h) = -half_nodes;
    g.weights_.resize(2 * h);
    g.weights_.head(h) = half_weights;
    g.weights_.tail(h) = half_weights;
    return g;
  }

  static SphericalGrid with_nodes(const SphericalGrid& src, Mat nodes)
  {
    SphericalGrid g = src;
    g.nodes_ = std::move(nodes);
    return g;
  }
};

double SphericalGrid::total_weight() const
{
  const std::size_t half = size() / 2;
  return parallel::sum(half, [&](std::size_t i) { return 2.0 * weight(i); });
}

SphericalGrid SphericalGrid::reflected() const
{
  return GridAssembly::with_nodes(*this, -nodes_);
}

SphericalGrid SphericalGrid::transformed(const Mat& orthogonal) const
{
  if (orthogonal.rows() != dim_ || orthogonal.cols() != dim_)
    throw DomainError("SphericalGrid::transformed: matrix size mismatch");
  if (!(orthogonal.transpose() * orthogonal).isIdentity(1e-10))
    throw DomainError("SphericalGrid::transformed: matrix is not orthogonal");
  // negation commutes with the map, so the antipodal layout is preserved
  return GridAssembly::with_nodes(*this, orthogonal * nodes_);
}

namespace {

void check_size(double count, int n, int resolution)
{
  if (count > static_cast<double>(kMaxGridNodes)) {
    std::ostringstream msg;
    msg << "grid size limit: n=" << n << " resolution=" << resolution << " needs "
        << count << " nodes (limit " << kMaxGridNodes << ")";
    throw CapabilityError(msg.str());
  }
}

SphericalGrid product_angle_grid(int n, int r)
{
  // azimuth: 2r uniform nodes; the first r form the half set, the rest are
  // their negations (phi + pi together with theta -> pi - theta)
  const double dphi = pi / r;
  const int polar = n - 2;
  check_size(std::pow(static_cast<double>(r), polar) * 2.0 * r, n, r);

  const LineRule theta = gauss_legendre(r, 0.0, pi);
  std::size_t half = static_cast<std::size_t>(r);
  for (int p = 0; p < polar; ++p)
    half *= static_cast<std::size_t>(r);

  Mat nodes(n, static_cast<Eigen::Index>(half));
  Vec weights(static_cast<Eigen::Index>(half));
  std::vector<int> idx(polar, 0);
  Eigen::Index col = 0;
  for (std::size_t t = 0; t < half / r; ++t) {
    // decode polar indices
    std::size_t rem = t;
    for (int p = polar - 1; p >= 0; --p) {
      idx[p] = static_cast<int>(rem % r);
      rem /= r;
    }
    double sin_prod = 1.0;
    double w_polar = 1.0;
    Vec base(n);
    for (int p = 0; p < polar; ++p) {
      const double th = theta.nodes[idx[p]];
      base[p] = sin_prod * std::cos(th);
      w_polar *= theta.weights[idx[p]] * std::pow(std::sin(th), n - 2 - p);
      sin_prod *= std::sin(th);
    }
    for (int k = 0; k < r; ++k) {
      const double ph = (k + 0.5) * dphi;
      Vec u = base;
      u[n - 2] = sin_prod * std::cos(ph);
      u[n - 1] = sin_prod * std::sin(ph);
      nodes.col(col) = u;
      weights[col] = w_polar * dphi;
      ++col;
    }
  }
  return GridAssembly::make(n, r, GridScheme::product_angle, std::nullopt, nodes, weights);
}

SphericalGrid monte_carlo_grid(int n, int resolution, std::uint64_t seed)
{
  const int count = resolution + (resolution % 2);
  check_size(count, n, resolution);
  const int half = count / 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat nodes(n, half);
  for (int c = 0; c < half; ++c) {
    Vec g(n);
    double norm = 0.0;
    do {
      for (int i = 0; i < n; ++i)
        g[i] = normal(rng);
      norm = g.norm();
    } while (norm < 1e-12);
    nodes.col(c) = g / norm;
  }
  const Vec weights = Vec::Constant(half, sphere_area(n) / count);
  return GridAssembly::make(n, resolution, GridScheme::monte_carlo, seed, nodes, weights);
}

} // namespace

SphericalGrid build_grid(int n, int resolution, GridScheme scheme,
                         std::optional<std::uint64_t> seed)
{
  if (n < 2)
    throw DomainError("build_grid: dimension must be at least 2");
  if (resolution < 8)
    throw DomainError("build_grid: resolution must be at least 8");
  switch (scheme) {
  case GridScheme::product_angle:
    return product_angle_grid(n, resolution);
  case GridScheme::monte_carlo:
    return monte_carlo_grid(n, resolution, seed.value_or(0));
  case GridScheme::split_product:
    break;
  }
  throw DomainError("build_grid: split-product grids are built with build_split_grid");
}

SphericalGrid build_default_grid(int n, int resolution)
{
  if (n <= 4)
    return build_grid(n, resolution, GridScheme::product_angle);
  return build_grid(n, resolution, GridScheme::monte_carlo, 0);
}

SphericalGrid sub_sphere_rule(int d, int resolution)
{
  if (d < 1)
    throw DomainError("sub_sphere_rule: dimension must be at least 1");
  if (d == 1) {
    Mat half(1, 1);
    half(0, 0) = 1.0;
    return GridAssembly::make(1, 1, GridScheme::product_angle, std::nullopt, half,
                              Vec::Ones(1));
  }
  return build_grid(d, std::max(resolution, 8), GridScheme::product_angle);
}

SphericalGrid build_split_grid(int n, int k, int j, const Mat& frame,
                               const SplitGridOptions& opt)
{
  if (k < 1 || j < 1 || k + j >= n)
    throw DomainError("build_split_grid: need k, j >= 1 and k + j < n");
  if (frame.rows() != n || frame.cols() != n ||
      !(frame.transpose() * frame).isIdentity(1e-10))
    throw DomainError("build_split_grid: frame must be an orthonormal n x n matrix");
  const int l = n - k - j;

  std::vector<double> theta_edges;
  for (int p = 0; p <= opt.theta_panels; ++p)
    theta_edges.push_back(0.5 * pi * p / opt.theta_panels);
  const LineRule theta = composite_gauss_legendre(opt.nodes_per_panel, theta_edges);

  std::vector<double> phi_edges;
  if (opt.graded_octaves <= 0) {
    for (int p = 0; p <= opt.phi_panels; ++p)
      phi_edges.push_back(0.5 * pi * p / opt.phi_panels);
  } else {
    for (int p = 0; p <= opt.phi_panels; ++p)
      phi_edges.push_back(0.25 * pi * p / opt.phi_panels);
    // octave o covers pi/2 - (pi/4) 2^{-o+1} .. pi/2 - (pi/4) 2^{-o}, two panels each
    for (int o = 1; o <= opt.graded_octaves; ++o) {
      const double lo = 0.25 * pi * std::ldexp(1.0, -o + 1);
      const double hi = 0.25 * pi * std::ldexp(1.0, -o);
      phi_edges.push_back(0.5 * pi - 0.5 * (lo + hi));
      phi_edges.push_back(0.5 * pi - hi);
    }
    phi_edges.push_back(0.5 * pi);
  }
  const LineRule phi = composite_gauss_legendre(opt.nodes_per_panel, phi_edges);

  const SphericalGrid s1 = sub_sphere_rule(k, opt.sub_resolution);
  const SphericalGrid s2 = sub_sphere_rule(j, opt.sub_resolution);
  const SphericalGrid s3 =
    sub_sphere_rule(l, opt.ball_resolution > 0 ? opt.ball_resolution : opt.sub_resolution);
  const std::size_t half2 = s2.size() / 2;

  const double count = static_cast<double>(theta.nodes.size()) * phi.nodes.size() *
                       s1.size() * half2 * s3.size();
  check_size(2.0 * count, n, opt.nodes_per_panel);

  Mat local_nodes(n, static_cast<Eigen::Index>(count));
  Vec weights(static_cast<Eigen::Index>(count));
  Eigen::Index col = 0;
  for (std::size_t a = 0; a < theta.nodes.size(); ++a) {
    const double ct = std::cos(theta.nodes[a]), st = std::sin(theta.nodes[a]);
    for (std::size_t b = 0; b < phi.nodes.size(); ++b) {
      const double cp = std::cos(phi.nodes[b]), sp = std::sin(phi.nodes[b]);
      const double jac = general_coords_jacobian(n, k, j, theta.nodes[a], phi.nodes[b]) *
                         theta.weights[a] * phi.weights[b];
      for (std::size_t i1 = 0; i1 < s1.size(); ++i1)
        for (std::size_t i2 = 0; i2 < half2; ++i2)
          for (std::size_t i3 = 0; i3 < s3.size(); ++i3) {
            auto c = local_nodes.col(col);
            c.head(k) = s1.node(i1) * (cp * ct);
            c.segment(k, j) = s2.node(i2) * (cp * st);
            c.tail(l) = s3.node(i3) * sp;
            weights[col] = jac * s1.weight(i1) * s2.weight(i2) * s3.weight(i3);
            ++col;
          }
    }
  }
  return GridAssembly::make(n, opt.nodes_per_panel, GridScheme::split_product, std::nullopt,
                            frame * local_nodes, weights);
}

double integrate(const SphericalGrid& grid, const SphereFunction& f)
{
  const std::size_t half = grid.size() / 2;
  auto checked = [&](std::size_t i) {
    const double v = f(grid.node(i));
    if (!std::isfinite(v)) {
      std::vector<double> node(grid.node(i).data(), grid.node(i).data() + grid.dim());
      std::ostringstream msg;
      msg << "integrate: non-finite integrand value at node " << i;
      throw EvaluationError(msg.str(), std::move(node));
    }
    return v;
  };
  // antipodal pairs are summed together so odd integrands cancel exactly
  return parallel::sum(half, [&](std::size_t i) {
    return grid.weight(i) * (checked(i) + checked(i + half));
  });
}

// ---------------------------------------------------------- general coords

double general_coords_jacobian(int n, int k, int j, double theta, double phi)
{
  if (k < 1 || j < 1 || k + j >= n)
    throw DomainError("general_coords_jacobian: need k, j >= 1 and k + j < n");
  const double eps = 1e-15;
  if (theta < -eps || theta > 0.5 * pi + eps || phi < -eps || phi > 0.5 * pi + eps)
    throw DomainError("general_coords_jacobian: angles must lie in [0, pi/2]");
  auto ipow = [](double x, int e) { return e == 0 ? 1.0 : std::pow(x, e); };
  return ipow(std::cos(phi), k + j - 1) * ipow(std::sin(phi), n - k - j - 1) *
         ipow(std::cos(theta), k - 1) * ipow(std::sin(theta), j - 1);
}

UnitVector GeneralCoords::direction() const
{
  const int n = static_cast<int>(u1.size() + u2.size() + u3.size());
  return direction(Mat::Identity(n, n));
}

UnitVector GeneralCoords::direction(const Mat& frame) const
{
  if (u1.size() != k || u2.size() != j || u3.size() < 1)
    throw DomainError("GeneralCoords: sub-direction sizes do not match the split");
  const int n = k + j + static_cast<int>(u3.size());
  Vec local(n);
  local.head(k) = u1 * (std::cos(phi) * std::cos(theta));
  local.segment(k, j) = u2 * (std::cos(phi) * std::sin(theta));
  local.tail(u3.size()) = u3 * std::sin(phi);
  return UnitVector::normalized(frame * local);
}

} // namespace dmp
