#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace dmp::testing {

SymmetricPolytope cube(int n)
{
  std::vector<UnitVector> normals;
  for (int i = 0; i < n; ++i)
    normals.push_back(UnitVector::axis(n, i));
  return SymmetricPolytope(normals, Vec::Ones(n));
}

SymmetricPolytope random_polytope(std::uint64_t seed, int n, int max_pairs)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> count(n + 1, std::max(n + 1, max_pairs));
  std::uniform_real_distribution<double> height(0.6, 1.4);
  const int m = count(rng);
  std::vector<UnitVector> normals;
  Vec h(m);
  for (int i = 0; i < m; ++i) {
    Vec v(n);
    for (int j = 0; j < n; ++j)
      v[j] = gauss(rng);
    normals.push_back(UnitVector::normalized(v));
    h[i] = height(rng);
  }
  return SymmetricPolytope(normals, h);
}

Vec random_vector(std::uint64_t seed, int size)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(size);
  for (int i = 0; i < size; ++i)
    v[i] = u(rng);
  return v;
}

Mat random_rotation(std::uint64_t seed, int n)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      g(r, c) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  // fix column signs so the distribution is Haar
  const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c)
    if (R(c, c) < 0.0)
      q.col(c) = -q.col(c);
  return q;
}

std::vector<UnitVector> spiral_directions(int count)
{
  std::vector<UnitVector> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = (i + 0.5) / count;
    const double r = std::sqrt(1.0 - z * z);
    Vec v(3);
    v << r * std::cos(golden * i), r * std::sin(golden * i), z;
    out.push_back(UnitVector::normalized(v));
  }
  return out;
}

DiscreteEvenMeasure axis_measure(int n, double w)
{
  std::vector<AtomPair> atoms;
  for (int i = 0; i < n; ++i)
    atoms.push_back({UnitVector::axis(n, i), w});
  return DiscreteEvenMeasure(atoms);
}

double rel_diff(double a, double b)
{
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

} // namespace dmp::testing
