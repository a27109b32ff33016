#pragma once

#include <variant>
#include <vector>

#include "dmp/halfspace.hpp"
#include "dmp/spherical_quadrature.hpp"

namespace dmp {

/// {x : |x . v_i| <= h_i}. Support numbers are kept exactly as given; the
/// Wulff reduction h_[h] and the activity flags are derived from vertices.
class SymmetricPolytope
{
public:
  SymmetricPolytope(std::vector<UnitVector> normals, Vec support);

  int dim() const { return static_cast<int>(normal_matrix_.cols()); }
  int pair_count() const { return static_cast<int>(normal_matrix_.rows()); }
  const std::vector<UnitVector>& normals() const { return normals_; }
  /// m x n, row i is v_i.
  const Mat& normal_matrix() const { return normal_matrix_; }
  const Vec& support_numbers() const { return support_; }

  const Mat& vertices() const { return vset_.vertices; }
  const VertexSet& vertex_set() const { return vset_; }

  /// h_[h](v_i) = max over vertices of |v_i . x|; never exceeds h_i.
  const Vec& reduced_support() const { return reduced_; }
  /// Pair i touches the boundary (h_[h](v_i) = h_i within tolerance).
  const std::vector<bool>& active() const { return active_; }
  /// Pair i carries a full (n-1)-dimensional facet.
  const std::vector<bool>& facet() const { return facet_; }

  /// Radial function; ties between pairs go to the lowest index.
  double radial(const DirectionRef& u) const;
  /// Index of the pair attaining the radial minimum.
  int radial_cell(const DirectionRef& u) const;
  /// Support function from the vertex set. At stored normals use
  /// reduced_support() or support_numbers() as appropriate.
  double support(const DirectionRef& v) const;

  double inradius() const { return support_.minCoeff(); }
  double diameter() const;

  /// Same normals, support numbers multiplied by c > 0.
  SymmetricPolytope scaled(double c) const;

private:
  SymmetricPolytope() = default;
  void derive();

  std::vector<UnitVector> normals_;
  Mat normal_matrix_;
  Vec support_;
  VertexSet vset_;
  Vec reduced_;
  std::vector<bool> active_;
  std::vector<bool> facet_;
};

/// Ellipsoid with orthonormal axes (columns) and ascending semiaxes.
class Ellipsoid
{
public:
  Ellipsoid(Mat axes, Vec semiaxes);
  static Ellipsoid aligned(Vec semiaxes);
  static Ellipsoid ball(int n, double radius = 1.0);

  int dim() const { return static_cast<int>(semiaxes_.size()); }
  const Mat& axes() const { return axes_; }
  const Vec& semiaxes() const { return semiaxes_; }

  double radial(const DirectionRef& u) const;
  double support(const DirectionRef& v) const;
  Ellipsoid scaled(double c) const;

private:
  Mat axes_;
  Vec semiaxes_;
};

/// Product of an ellipsoid in span(e_1..e_k), the segment |x.e_{k+1}| <= a_{k+1}
/// and the unit ball in span(e_{k+2}..e_n).
class BarrierBody
{
public:
  BarrierBody(Mat axes, int k, Vec params);
  static BarrierBody aligned(int n, int k, Vec params);

  int dim() const { return static_cast<int>(axes_.cols()); }
  int k() const { return k_; }
  const Mat& axes() const { return axes_; }
  const Vec& params() const { return params_; }

  /// Radial function of the k-dimensional ellipsoid factor.
  double ellipsoid_radial(const DirectionRef& u1) const;
  /// min{ rho_bar/|y1|, a_{k+1}/|y2|, 1/|y3| } with y the frame coordinates.
  double radial(const DirectionRef& u) const;
  /// Sum of the supports of the three factors.
  double support(const DirectionRef& v) const;

private:
  Mat axes_;
  int k_;
  Vec params_;
};

/// Product of an ellipsoid in span(e_1..e_k) with semiaxes a and the unit
/// ball in the orthogonal complement.
class Cylinder
{
public:
  Cylinder(Mat axes, int k, Vec semiaxes);
  static Cylinder aligned(int n, int k, Vec semiaxes);

  int dim() const { return static_cast<int>(axes_.cols()); }
  int k() const { return k_; }
  const Mat& axes() const { return axes_; }
  const Vec& semiaxes() const { return semiaxes_; }

  double ellipsoid_radial(const DirectionRef& w) const;
  double radial(const DirectionRef& u) const;
  double support(const DirectionRef& v) const;

private:
  Mat axes_;
  int k_;
  Vec semiaxes_;
};

using Body = std::variant<SymmetricPolytope, Ellipsoid, BarrierBody, Cylinder>;

int body_dim(const Body& body);
double support_eval(const Body& body, const DirectionRef& v);
double radial_eval(const Body& body, const DirectionRef& u);

/// {x : |x . v_i| <= h_i}; same as constructing the polytope.
SymmetricPolytope wulff_shape(std::vector<UnitVector> normals, Vec h);

struct LogWulffFamily
{
  std::vector<UnitVector> normals;
  Vec base_support;
  Vec direction;
};

/// Wulff shape of h_i exp(t f_i).
SymmetricPolytope log_wulff_member(const LogWulffFamily& family, double t);

/// Four-case evaluation in coordinates (u1, theta, phi) with
/// j = 1. Requires coords.k == G.k().
double barrier_radial(const BarrierBody& G, const GeneralCoords& coords);
/// Direct minimum over the three constraint ratios at the same coordinates.
double barrier_radial_min(const BarrierBody& G, const GeneralCoords& coords);

struct HausdorffReport
{
  double distance = 0.0;
  int resolution = 0;
  GridScheme scheme = GridScheme::product_angle;
};

/// max |h_A - h_B| over a direction grid, refined locally around the
/// best nodes.
HausdorffReport hausdorff_distance(const Body& a, const Body& b, int resolution = 64);

} // namespace dmp
