#include <doctest.h>

#include <cmath>

#include "dmp/dual_functionals.hpp"
#include "dmp/facet_integrals.hpp"
#include "fixtures.hpp"

using namespace dmp;

namespace {

// Tensor Gauss-Legendre on [-1, 1]^2 of (1 + x^2 + y^2)^e.
double square_integral(double e)
{
  const LineRule r = composite_gauss_legendre(30, {-1.0, 0.0, 1.0});
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    for (std::size_t j = 0; j < r.nodes.size(); ++j)
      acc += r.weights[i] * r.weights[j] *
             std::pow(1.0 + r.nodes[i] * r.nodes[i] + r.nodes[j] * r.nodes[j], e);
  return acc;
}

} // namespace

TEST_CASE("cube cone volumes")
{
  const Vec c = exact_pair_curvature(testing::cube(3), 3.0);
  for (int i = 0; i < 3; ++i)
    CHECK(c[i] == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  const Vec c4 = exact_pair_curvature(testing::cube(4), 4.0);
  for (int i = 0; i < 4; ++i)
    CHECK(c4[i] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("cube at q = 1.5 and 2 against a tensor-product oracle")
{
  for (double q : {1.5, 2.0}) {
    // per pair: (h/n) * 2 facets * integral of |x|^{q-n} over the unit square face
    const double expect = (1.0 / 3.0) * 2.0 * square_integral(0.5 * (q - 3.0));
    const Vec c = exact_pair_curvature(testing::cube(3), q);
    for (int i = 0; i < 3; ++i)
      CHECK(c[i] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("square in the plane")
{
  const Vec c = exact_pair_curvature(testing::cube(2), 1.0);
  CHECK(c[0] == doctest::Approx(2.0 * std::asinh(1.0)).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(2.0 * std::asinh(1.0)).epsilon(1e-12));
}

TEST_CASE("inactive pairs carry nothing")
{
  std::vector<UnitVector> normals{UnitVector::axis(3, 0), UnitVector::axis(3, 1),
                                  UnitVector::axis(3, 2),
                                  UnitVector::normalized(Vec::Ones(3))};
  Vec h(4);
  h << 1, 1, 1, 10;
  const Vec c = exact_pair_curvature(SymmetricPolytope(normals, h), 2.5);
  CHECK(c[3] == 0.0);
  h[3] = 1.6;
  const Vec cut = exact_pair_curvature(SymmetricPolytope(normals, h), 3.0);
  CHECK(cut[3] > 0.0);
  // volume of the cube minus two corners of volume (3 - 1.6 sqrt 3)^3 sqrt 3 / 2 each
  const double corner = std::pow(std::sqrt(3.0) - 1.6, 3) * std::sqrt(3.0) / 2.0;
  CHECK(cut.sum() == doctest::Approx(8.0 - 2.0 * corner).epsilon(1e-12));
}

TEST_CASE("exact curvature agrees with the grid assignment")
{
  const SphericalGrid g = build_grid(3, 512, GridScheme::product_angle);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const SymmetricPolytope K = testing::random_polytope(300 + s);
    for (double q : {1.5, 2.5}) {
      const Vec exact = exact_pair_curvature(K, q);
      const Vec grid = dual_curvature(K, q, g).pair_values;
      CHECK((exact - grid).cwiseAbs().maxCoeff() <= 2e-3 * exact.sum());
      CHECK(testing::rel_diff(exact.sum(), dual_quermass(Body{K}, q, g)) <= 1e-4);
    }
  }
}

TEST_CASE("exact curvature is homogeneous of degree q")
{
  const SymmetricPolytope K = testing::random_polytope(5);
  for (double q : {1.5, 2.5}) {
    const Vec base = exact_pair_curvature(K, q);
    for (double c : {0.5, 2.0, 7.3}) {
      const Vec scaled = exact_pair_curvature(K.scaled(c), q);
      CHECK((scaled - std::pow(c, q) * base).norm() <= 1e-12 * std::pow(c, q) * base.norm());
    }
  }
}

TEST_CASE("volume at q = n in dimension 4 matches the grid")
{
  const SymmetricPolytope K = testing::random_polytope(8, 4, 9);
  const double exact = exact_pair_curvature(K, 4.0).sum();
  const double grid = dual_quermass(Body{K}, 4.0, build_grid(4, 96, GridScheme::product_angle));
  CHECK(testing::rel_diff(exact, grid) <= 2e-3);
}
