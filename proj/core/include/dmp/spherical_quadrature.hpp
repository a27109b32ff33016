#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace dmp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using DirectionRef = Eigen::Ref<const Eigen::VectorXd>;

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// Surface measure of S^{n-1}, i.e. n * unit_ball_volume(n). sphere_area(1) == 2.
double sphere_area(int n);

/// A point on S^{n-1}. Construction checks |coords| = 1 within 1e-12.
class UnitVector
{
public:
  explicit UnitVector(Vec coords);

  /// Normalizes a nonzero vector; throws DomainError on zero or non-finite input.
  static UnitVector normalized(const Vec& v);
  static UnitVector axis(int n, int i);

  const Vec& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }
  double dot(const UnitVector& other) const { return coords_.dot(other.coords_); }
  double dot(const DirectionRef& v) const { return coords_.dot(v); }
  UnitVector operator-() const;

private:
  struct Trusted {};
  UnitVector(Vec coords, Trusted) : coords_(std::move(coords)) {}

  Vec coords_;
};

/// Nodes and weights of a 1-D Gauss-Legendre rule on [a, b].
struct LineRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
LineRule gauss_legendre(int order, double a = -1.0, double b = 1.0);
/// Composite rule over consecutive panels [edges[i], edges[i+1]].
LineRule composite_gauss_legendre(int order, const std::vector<double>& edges);

enum class GridScheme
{
  product_angle,
  monte_carlo,
  split_product,
};

const char* to_string(GridScheme scheme);

/// Quadrature nodes and weights on S^{n-1}. Weights carry full surface
/// measure. Node i + size()/2 is the exact negation of node i, with equal
/// weight, for every scheme.
class SphericalGrid
{
public:
  int dim() const { return dim_; }
  int resolution() const { return resolution_; }
  GridScheme scheme() const { return scheme_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }

  /// n x N, one node per column.
  const Mat& nodes() const { return nodes_; }
  const Vec& weights() const { return weights_; }
  auto node(std::size_t i) const { return nodes_.col(static_cast<Eigen::Index>(i)); }
  double weight(std::size_t i) const { return weights_[static_cast<Eigen::Index>(i)]; }
  double total_weight() const;

  /// Same weights at the negated nodes.
  SphericalGrid reflected() const;

  /// Applies an orthogonal map to every node.
  SphericalGrid transformed(const Mat& orthogonal) const;

private:
  friend struct GridAssembly;

  int dim_ = 0;
  int resolution_ = 0;
  GridScheme scheme_ = GridScheme::product_angle;
  std::optional<std::uint64_t> seed_;
  Mat nodes_;
  Vec weights_;
};

/// Largest node count any builder will allocate.
inline constexpr std::size_t kMaxGridNodes = 40'000'000;

/// Product-angle: Gauss-Legendre in each polar angle (resolution nodes) and
/// 2*resolution uniform azimuth nodes. Monte Carlo: `resolution` seeded
/// antipodal samples with equal weights.
SphericalGrid build_grid(int n, int resolution, GridScheme scheme,
                         std::optional<std::uint64_t> seed = std::nullopt);

/// Product-angle for n <= 4, Monte Carlo (seed 0) above.
SphericalGrid build_default_grid(int n, int resolution);

/// Grid in the general spherical coordinates
///   u = (u1 cos(phi) cos(theta), u2 cos(phi) sin(theta), u3 sin(phi))
/// expressed in the columns of `frame`, with u1 in S^{k-1}, u2 in S^{j-1},
/// u3 in S^{n-k-j-1}.
struct SplitGridOptions
{
  int nodes_per_panel = 12;
  int theta_panels = 8;
  /// Panels in phi; with grading the panels cluster geometrically at pi/2.
  int phi_panels = 8;
  int graded_octaves = 0;
  int sub_resolution = 16;
  /// Resolution of the u3 factor; 0 means sub_resolution.
  int ball_resolution = 0;
};
SphericalGrid build_split_grid(int n, int k, int j, const Mat& frame,
                               const SplitGridOptions& options = {});

/// Rule on S^{d-1} for d >= 1 used inside nested integrals. S^0 is {+1, -1}
/// with unit weights; larger spheres use the product-angle grid.
SphericalGrid sub_sphere_rule(int d, int resolution);

using SphereFunction = std::function<double(const DirectionRef&)>;

/// Sum of weight_i * f(node_i). Throws EvaluationError at the first
/// non-finite value. Safe to call concurrently on a shared grid.
double integrate(const SphericalGrid& grid, const SphereFunction& f);

/// Coordinates (k, j, theta, phi, u1, u2, u3) of a direction.
struct GeneralCoords
{
  int k = 1;
  int j = 1;
  double theta = 0.0;
  double phi = 0.0;
  Vec u1;
  Vec u2;
  Vec u3;

  /// The direction in the standard basis (or in `frame` when given).
  UnitVector direction() const;
  UnitVector direction(const Mat& frame) const;
};

/// cos^{k+j-1}(phi) sin^{n-k-j-1}(phi) cos^{k-1}(theta) sin^{j-1}(theta).
double general_coords_jacobian(int n, int k, int j, double theta, double phi);

} // namespace dmp
