#pragma once

#include <vector>

#include "dmp/bodies.hpp"

namespace dmp {

/// The four pieces of the barrier body's dual quermassintegral, split by
/// which constraint of G attains the radial function.
struct BarrierIntegrals
{
  double I1 = 0.0;  ///< ellipsoid face
  double I2 = 0.0;  ///< ball face over the ellipsoid range of theta
  double I3 = 0.0;  ///< segment face
  double I4 = 0.0;  ///< ball face over the segment range of theta
  int n = 0;
  int k = 0;
  double q = 0.0;
  Vec params;

  double sum() const { return I1 + I2 + I3 + I4; }
};

struct BarrierQuermass
{
  BarrierIntegrals parts;
  double total = 0.0;  ///< (2/n) |S^{n-k-2}| (I1 + I2 + I3 + I4)
};

/// Split-product grid in G's frame, graded in phi so thin bodies are resolved.
SphericalGrid barrier_grid(const BarrierBody& G, int resolution);

/// Plain quadrature of rho_G^q over `grid`.
double barrier_quermass_direct(const BarrierBody& G, double q, const SphericalGrid& grid);
/// Same on barrier_grid(G, resolution).
double barrier_quermass_direct(const BarrierBody& G, double q, int resolution = 16);

/// Nested quadrature over (u1, theta, phi) with the case boundaries as
/// panel edges.
BarrierQuermass barrier_quermass_decomposed(const BarrierBody& G, double q, int resolution = 16);

/// The same pieces after the substitutions s = tan-type, t = tan-type and
/// s -> 1/s, t -> 1/t on the unbounded ranges, so every integral lives on
/// the unit square. DomainError for q >= n, where the tails diverge.
BarrierQuermass barrier_quermass_transformed(const BarrierBody& G, double q, int resolution = 16);

/// W(G) / (a_1...a_k a_{k+1}^{q-k}) along the family; needs k < q < k+1.
std::vector<double> barrier_bound_ratio(const std::vector<BarrierBody>& family, double q,
                                        int resolution = 16);

/// Dual quermassintegral of the ellipsoid-times-ball cylinder.
double cylinder_quermass(const Cylinder& T, double q, int resolution = 16);

/// W(T) / (a_1...a_k) along the family; needs k < q <= n.
std::vector<double> cylinder_bound_ratio(const std::vector<Cylinder>& family, double q,
                                         int resolution = 16);

} // namespace dmp
