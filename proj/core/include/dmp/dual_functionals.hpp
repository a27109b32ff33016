#pragma once

#include <cstdint>
#include <vector>

#include "dmp/bodies.hpp"
#include "dmp/facet_integrals.hpp"
#include "dmp/measures.hpp"

namespace dmp {

/// (1/n) * integral of rho_K^q over the grid.
double dual_quermass(const Body& K, double q, const SphericalGrid& grid);

/// Mean over random i-dimensional subspaces of the i-volume of the
/// section, times omega_n/omega_i. Integer 1 <= i <= n; i = n gives the volume.
double dual_quermass_grassmann(const Body& K, int i, int samples, std::uint64_t seed,
                               int sub_resolution = 64);

/// grid: each node goes to the pair attaining the radial minimum.
/// exact: facet integrals over the face lattice.
enum class CurvatureMethod
{
  grid,
  exact,
};

const char* to_string(CurvatureMethod method);

struct CurvatureMeasure
{
  std::vector<UnitVector> normals;  ///< same indexing as the polytope
  Vec pair_values;                  ///< mass of {v_i, -v_i}
  double q = 0.0;
  double total = 0.0;
  CurvatureMethod method = CurvatureMethod::grid;
};

CurvatureMeasure dual_curvature(const SymmetricPolytope& K, double q, const SphericalGrid& grid);
CurvatureMeasure dual_curvature_exact(const SymmetricPolytope& K, double q,
                                      const FacetIntegralOptions& options = {});

/// Sum of the exact pair curvatures, i.e. the dual quermassintegral of K.
double dual_quermass_exact(const SymmetricPolytope& K, double q,
                           const FacetIntegralOptions& options = {});

/// Atoms at the normals with positive pair value.
DiscreteEvenMeasure to_measure(const CurvatureMeasure& c);

struct VariationalReport
{
  double lhs = 0.0;        ///< central difference of t -> W(K_t)
  double rhs = 0.0;        ///< q * sum f_i C_i
  double rel_error = 0.0;
};

/// Compares the derivative of the dual quermassintegral along the
/// log-Wulff family h exp(t f) with q times the curvature integral of f.
/// `grid` selects the grid route; the overload without it uses facet integrals.
VariationalReport variational_check(const SymmetricPolytope& K, const Vec& f, double q,
                                    double t_step, const SphericalGrid& grid);
VariationalReport variational_check(const SymmetricPolytope& K, const Vec& f, double q,
                                    double t_step);

} // namespace dmp
