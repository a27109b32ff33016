#pragma once

#include "dmp/bodies.hpp"

namespace dmp {

struct FacetIntegralOptions
{
  /// Gauss-Legendre nodes per radial panel.
  int nodes_per_panel = 10;
};

/// Per-pair values (h_i/n) * integral over both facets of |x|^{q-n} dA,
/// which is the dual curvature of the pair. Inactive pairs get 0.
/// Exact up to 1-D quadrature error in the pyramid decomposition.
Vec exact_pair_curvature(const SymmetricPolytope& K, double q,
                         const FacetIntegralOptions& options = {});

} // namespace dmp
