#pragma once

#include <functional>
#include <vector>

#include "dmp/bodies.hpp"

namespace dmp {

/// Total mass of the antipodal pair {u, -u}.
struct AtomPair
{
  UnitVector dir;
  double weight;
};

/// Finite even measure given by atom pairs. Representatives are made
/// canonical (first nonzero coordinate positive) and repeated directions
/// are merged by summing their weights.
class DiscreteEvenMeasure
{
public:
  explicit DiscreteEvenMeasure(const std::vector<AtomPair>& pairs);

  int dim() const { return static_cast<int>(directions_.cols()); }
  int size() const { return static_cast<int>(directions_.rows()); }
  /// m x n, row i is the canonical representative of pair i.
  const Mat& directions() const { return directions_; }
  const Vec& weights() const { return weights_; }
  UnitVector direction(int i) const { return UnitVector::normalized(directions_.row(i).transpose()); }
  double total() const { return weights_.sum(); }

  /// Same directions with weights multiplied by c > 0.
  DiscreteEvenMeasure scaled(double c) const;

private:
  Mat directions_;
  Vec weights_;
};

/// Sign-canonical representative: first coordinate above 1e-12 in magnitude
/// is positive.
Vec canonical_direction(const Vec& v);

using PositiveFunction = std::function<double(const DirectionRef&)>;

/// -(1/|mu|) sum_i w_i log f(u_i). Throws DomainError if f <= 0 at an atom.
double entropy(const DiscreteEvenMeasure& mu, const PositiveFunction& f);
/// Entropy of the body's support function.
double entropy(const DiscreteEvenMeasure& mu, const Body& body);

struct PartitionMasses
{
  Mat basis;              ///< n x n, columns e_1..e_n
  double delta = 0.0;
  Vec lambda;             ///< normalized cell masses
  std::vector<int> cell;  ///< cell index (0-based) of each atom pair
};

/// Largest i with |v . e_i| >= delta; DomainError if there is none.
int partition_cell(const DirectionRef& v, const Mat& basis, double delta);

/// Cells |v.e_i| >= delta, |v.e_j| < delta for j > i. Needs 0 < delta < 1/sqrt(n).
PartitionMasses partition_masses(const DiscreteEvenMeasure& mu, const Mat& basis, double delta);

struct SmiWitness
{
  Mat basis;                ///< n x i orthonormal basis of the subspace
  int dim = 0;
  double ratio = 0.0;       ///< mu(subspace)/|mu|
  double bound = 0.0;       ///< min(i/q, 1)
  std::vector<int> atoms;   ///< atom pairs inside the subspace
};

struct SmiReport
{
  bool passes = false;
  double margin = 0.0;      ///< min over subspaces of bound - ratio
  SmiWitness witness;
  long subspaces_checked = 0;
};

/// Largest number of atom pairs handled by the exact subspace enumeration.
inline constexpr int kSmiMaxPairs = 24;

/// Exact subspace mass inequality decision for 0 < q < n. Subspaces are
/// spans of independent atom subsets of size <= n-1 in size-major
/// lexicographic order. The witness attains the margin; among ties (within
/// 1e-12) it carries the largest mass, then comes first in that order.
SmiReport smi_check(const DiscreteEvenMeasure& mu, double q);

/// Lower bound sum (sigma_i - sigma_{i-1}) x_i for sum lambda_i x_i, valid
/// when x is ascending and lambda's prefix sums stay below sigma.
/// Throws PreconditionError naming the first violated index.
double rearrangement_bound(const Vec& lambda, const Vec& x, const Vec& sigma);

/// -log(delta0/2) - sum lambda_i log a_i with cells taken along Q's axes.
double entropy_partition_bound(const DiscreteEvenMeasure& mu, const Ellipsoid& Q, double delta0);

struct EntropyChainStep
{
  bool aligned = false;          ///< axes within delta0/2 of the limit basis
  double entropy = 0.0;          ///< E_mu(Q_l)
  double partition_bound = 0.0;  ///< cells of the limit basis, slack delta0/2
  double rearranged_bound = 0.0; ///< after the rearrangement inequality
  double explicit_bound = 0.0;   ///< closed form without the constant
  double gap = 0.0;              ///< entropy - explicit_bound
};

struct EntropyChainReport
{
  double delta0 = 0.0;
  double t0 = 0.0;
  std::vector<EntropyChainStep> steps;
  bool chain_holds = true;       ///< E <= partition <= rearranged at aligned steps
  double max_gap = 0.0;
};

/// Follows the ellipsoid sequence through the entropy estimate for 1 < q < n:
/// picks delta0 and t0 from the prefix slack along `limit_basis`, then
/// evaluates each inequality of the chain.
EntropyChainReport entropy_chain_check(const DiscreteEvenMeasure& mu, double q,
                                       const std::vector<Ellipsoid>& sequence,
                                       const Mat& limit_basis);

} // namespace dmp
