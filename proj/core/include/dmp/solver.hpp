#pragma once

#include <optional>
#include <vector>

#include "dmp/dual_functionals.hpp"
#include "dmp/errors.hpp"
#include "dmp/measures.hpp"

namespace dmp {

/// Value and log-gradient of Phi_mu = E_mu(h_[h]) + (1/q) log W(q, [h]).
struct PhiValue
{
  double phi = 0.0;
  double entropy = 0.0;
  double quermass = 0.0;  ///< W of the Wulff shape
  Vec curvature;          ///< pair curvature values at the normals
  Vec gradient;           ///< d phi / d log h_i
  Vec reduced_support;    ///< h_[h] at the normals
  double aspect = 0.0;    ///< inradius / diameter of the Wulff shape
};

/// Phi and its gradient with curvature from the grid.
PhiValue evaluate_phi(const DiscreteEvenMeasure& mu, const std::vector<UnitVector>& normals,
                      const Vec& h, double q, const SphericalGrid& grid);
/// Same with facet integrals.
PhiValue evaluate_phi(const DiscreteEvenMeasure& mu, const std::vector<UnitVector>& normals,
                      const Vec& h, double q);

/// Normals are the atom directions of mu.
double phi(const DiscreteEvenMeasure& mu, const Vec& h, double q, const SphericalGrid& grid);
Vec phi_gradient(const DiscreteEvenMeasure& mu, const Vec& h, double q, const SphericalGrid& grid);

/// Atom directions of mu, then the given extras that are new, then (if the
/// result does not span) an orthonormal basis of the missing complement.
std::vector<UnitVector> solver_normals(const DiscreteEvenMeasure& mu,
                                       const std::vector<UnitVector>& extra = {});

struct SolveConfig
{
  double q = 0.0;
  /// Added to the atom directions (see solver_normals).
  std::vector<UnitVector> extra_normals;
  CurvatureMethod method = CurvatureMethod::exact;
  /// Grid resolution when method == grid. Grid curvature is piecewise
  /// constant in h, so that backend stalls around tol ~ 1e-4.
  int grid_resolution = 128;
  double tol = 1e-6;
  int max_iters = 5000;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double sufficient_increase = 1e-4;
  /// Largest change of any log h_i in one step.
  double max_step = 0.5;
  /// Skip the subspace mass inequality gate.
  bool override_smi = false;
  /// inradius / diameter below this marks a degenerating sequence.
  double diverging_ratio = 1e-6;
};

enum class SolveStatus
{
  converged,
  max_iters,  ///< iteration cap hit, or no ascent step found by the line search
  diverging,
};

const char* to_string(SolveStatus status);

struct SolveResult
{
  SymmetricPolytope body;             ///< rescaled so W(q, body) = |mu|
  double c = 1.0;
  std::vector<double> phi_trace;      ///< phi at every accepted iterate
  double residual = 0.0;              ///< max_i |C_i(body) - mu_i| / |mu|
  SolveStatus status = SolveStatus::max_iters;
  int iterations = 0;
  double gradient_norm = 0.0;         ///< ||g||_inf at the last iterate
  Vec support;                        ///< normalized h at the last iterate (max 1)
  std::optional<SmiReport> smi;       ///< empty when the gate was skipped
  CurvatureMethod method = CurvatureMethod::exact;
};

/// Raised by maximize when mu fails the subspace mass inequality.
class SmiGateError : public DomainError
{
public:
  explicit SmiGateError(SmiReport report);
  const SmiReport& report() const { return report_; }

private:
  SmiReport report_;
};

/// Projected gradient ascent of Phi_mu over Wulff shapes with the solver
/// normals, followed by the rescaling c^q W = |mu|.
/// The gate runs for q < n unless overridden; smi_check's CapabilityError
/// for large atom counts propagates.
SolveResult maximize(const DiscreteEvenMeasure& mu, const SolveConfig& config);

struct VerifyReport
{
  int resolution = 0;
  Vec curvature;         ///< recomputed pair values
  Vec target;            ///< mu mass at each normal
  Vec abs_error;
  Vec rel_error;         ///< relative to the target, or to |mu| where it is 0
  double max_rel_error = 0.0;
  double total_gap = 0.0;  ///< |W(q, body) - |mu||
};

/// Recomputes the curvature of result.body on build_default_grid(n, resolution).
VerifyReport verify_solution(const SolveResult& result, const DiscreteEvenMeasure& mu, double q,
                             int resolution);

} // namespace dmp
