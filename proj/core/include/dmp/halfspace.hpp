#pragma once

#include <vector>

#include "dmp/spherical_quadrature.hpp"

namespace dmp {

/// Vertices of {x : |v_i . x| <= h_i} with their tight constraints.
/// Constraint 2i is v_i . x <= h_i and 2i+1 is -v_i . x <= h_i.
struct VertexSet
{
  Mat vertices;                         ///< n x V
  std::vector<std::vector<int>> active; ///< sorted tight constraints per vertex
  double tolerance = 0.0;               ///< absolute slack counted as tight
};

/// Double description enumeration. `normals` is m x n (one pair per row).
/// Throws GeometryError when the normals do not span R^n or some h_i <= 0.
VertexSet enumerate_vertices(const Mat& normals, const Vec& support);

/// Numerical rank of the rows of `normals` (with sign) selected by
/// constraint indices.
int constraint_rank(const Mat& normals, const std::vector<int>& constraints);

} // namespace dmp
