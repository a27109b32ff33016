#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dmp/dual_functionals.hpp"
#include "dmp/errors.hpp"
#include "fixtures.hpp"

using namespace dmp;
using std::numbers::pi;

namespace {

Vec v3(double a, double b, double c)
{
  Vec v(3);
  v << a, b, c;
  return v;
}

SymmetricPolytope ball_polytope(int count)
{
  return wulff_shape(testing::spiral_directions(count), Vec::Ones(count));
}

} // namespace

TEST_CASE("dual quermassintegral of the ball")
{
  const SphericalGrid g3 = build_grid(3, 256, GridScheme::product_angle);
  for (double q : {-1.0, 0.5, 2.5, 3.0})
    CHECK(testing::rel_diff(dual_quermass(Body{Ellipsoid::ball(3)}, q, g3), 4.0 * pi / 3.0) <= 1e-6);
  const SphericalGrid g5 = build_grid(5, 100000, GridScheme::monte_carlo, 11);
  CHECK(testing::rel_diff(dual_quermass(Body{Ellipsoid::ball(5)}, 2.0, g5), unit_ball_volume(5)) <= 0.03);
}

TEST_CASE("dual quermassintegral is homogeneous of degree q")
{
  const SphericalGrid g = build_grid(3, 64, GridScheme::product_angle);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const SymmetricPolytope K = testing::random_polytope(s);
    for (double q : {1.5, 2.0, 2.5, 3.0}) {
      const double base = dual_quermass(Body{K}, q, g);
      for (double c : {0.5, 2.0, 7.3})
        CHECK(testing::rel_diff(dual_quermass(Body{K.scaled(c)}, q, g), std::pow(c, q) * base) <= 1e-12);
    }
  }
}

TEST_CASE("cube volume")
{
  const SphericalGrid g = build_grid(3, 256, GridScheme::product_angle);
  CHECK(testing::rel_diff(dual_quermass(Body{testing::cube()}, 3.0, g), 8.0) <= 5e-3);
  CHECK(dual_quermass_exact(testing::cube(), 3.0) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("Grassmannian mean of sections")
{
  CHECK(testing::rel_diff(dual_quermass_grassmann(Body{Ellipsoid::ball(3)}, 2, 10000, 1),
                          4.0 * pi / 3.0) <= 0.01);
  const Body E{Ellipsoid::aligned(v3(1, 2, 3))};
  const double mc = dual_quermass_grassmann(E, 2, 100000, 2);
  const double grid = dual_quermass(E, 2.0, build_grid(3, 256, GridScheme::product_angle));
  CHECK(testing::rel_diff(mc, grid) <= 0.01);
  CHECK(testing::rel_diff(dual_quermass_grassmann(Body{testing::cube()}, 3, 100, 3), 8.0) <= 0.01);
  CHECK_THROWS_AS(dual_quermass_grassmann(E, 0, 10, 1), DomainError);
  CHECK_THROWS_AS(dual_quermass_grassmann(E, 4, 10, 1), DomainError);
}

TEST_CASE("Grassmannian agreement within the sampling bound")
{
  const int samples = 20000;
  const double tol = 3.0 / std::sqrt(static_cast<double>(samples));
  const SphericalGrid g = build_grid(3, 256, GridScheme::product_angle);
  const std::vector<Body> bodies{Body{Ellipsoid::ball(3)}, Body{testing::cube()},
                                 Body{Ellipsoid::aligned(v3(0.5, 1, 2))}};
  std::uint64_t seed = 10;
  for (const Body& K : bodies)
    for (int i : {1, 2})
      CHECK(testing::rel_diff(dual_quermass_grassmann(K, i, samples, seed++), dual_quermass(K, i, g)) <= tol);
}

TEST_CASE("curvature cube cone volumes on a grid")
{
  const CurvatureMeasure c = dual_curvature(testing::cube(), 3.0, build_grid(3, 256, GridScheme::product_angle));
  for (int i = 0; i < 3; ++i)
    CHECK(testing::rel_diff(c.pair_values[i], 8.0 / 3.0) <= 5e-3);
  CHECK(c.method == CurvatureMethod::grid);
  CHECK(c.q == 3.0);
}

TEST_CASE("curvature total equals the quermassintegral on the same grid")
{
  const SphericalGrid g = build_grid(3, 96, GridScheme::product_angle);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const SymmetricPolytope K = testing::random_polytope(100 + s);
    const double q = 1.0 + 0.1 * static_cast<double>(s);
    const CurvatureMeasure c = dual_curvature(K, q, g);
    CHECK(testing::rel_diff(c.total, c.pair_values.sum()) <= 1e-12);
    CHECK(testing::rel_diff(c.total, dual_quermass(Body{K}, q, g)) <= 1e-12);
    CHECK(c.pair_values.minCoeff() >= 0.0);
    for (int i = 0; i < K.pair_count(); ++i)
      if (!K.active()[static_cast<std::size_t>(i)])
        CHECK(c.pair_values[i] == 0.0);
  }
}

TEST_CASE("curvature on the reflected grid is identical")
{
  const SphericalGrid g = build_grid(3, 64, GridScheme::product_angle);
  const SphericalGrid r = g.reflected();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SymmetricPolytope K = testing::random_polytope(200 + s);
    const Vec a = dual_curvature(K, 2.5, g).pair_values;
    const Vec b = dual_curvature(K, 2.5, r).pair_values;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * a.sum());
  }
}

TEST_CASE("curvature of a nearly round polytope is nearly uniform")
{
  const SymmetricPolytope K = ball_polytope(200);
  for (double q : {1.5, 3.0}) {
    const CurvatureMeasure c = dual_curvature(K, q, build_grid(3, 256, GridScheme::product_angle));
    CHECK(testing::rel_diff(c.total, 4.0 * pi / 3.0) <= 0.01 * q);
    const Vec& p = c.pair_values;
    const double mean = p.mean();
    CHECK(p.maxCoeff() <= 1.6 * mean);
    CHECK(p.minCoeff() >= 0.4 * mean);
  }
  // the exact route needs no grid and sees the same thing
  const Vec e = exact_pair_curvature(K, 3.0);
  CHECK(e.maxCoeff() <= 1.6 * e.mean());
  CHECK(e.minCoeff() >= 0.4 * e.mean());
}

TEST_CASE("curvature converts to a measure")
{
  std::vector<UnitVector> normals{UnitVector::axis(3, 0), UnitVector::axis(3, 1),
                                  UnitVector::axis(3, 2), UnitVector::normalized(Vec::Ones(3))};
  Vec h(4);
  h << 1, 1, 1, 5;
  const CurvatureMeasure c = dual_curvature_exact(SymmetricPolytope(normals, h), 2.0);
  const DiscreteEvenMeasure mu = to_measure(c);
  CHECK(mu.size() == 3);
  CHECK(mu.total() == doctest::Approx(c.total).epsilon(1e-14));
  CHECK(c.method == CurvatureMethod::exact);
}

TEST_CASE("variational formula")
{
  const SymmetricPolytope cube = testing::cube();
  const SphericalGrid g = build_grid(3, 256, GridScheme::product_angle);

  const VariationalReport ones = variational_check(cube, Vec::Ones(3), 2.0, 1e-4, g);
  CHECK(ones.rel_error <= 1e-8);
  CHECK(ones.rhs == doctest::Approx(2.0 * dual_quermass(Body{cube}, 2.0, g)).epsilon(1e-12));

  const VariationalReport e1 = variational_check(cube, v3(1, 0, 0), 2.0, 1e-4, g);
  CHECK(e1.rel_error <= 1e-3);
  CHECK(variational_check(cube, v3(1, 0, 0), 2.0, 1e-4).rel_error <= 1e-6);

  for (std::uint64_t s = 0; s < 3; ++s) {
    const SymmetricPolytope K = testing::random_polytope(400 + s);
    const Vec f = testing::random_vector(500 + s, K.pair_count());
    CHECK(variational_check(K, f, 2.5, 1e-4).rel_error <= 5e-3);
  }
  CHECK_THROWS_AS(variational_check(cube, Vec::Ones(3), 0.0, 1e-4), DomainError);
  CHECK_THROWS_AS(variational_check(cube, Vec::Ones(3), 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(variational_check(cube, Vec::Ones(2), 2.0, 1e-4), DomainError);
}

TEST_CASE("dual quermassintegral is monotone under inclusion")
{
  const SphericalGrid g = build_grid(3, 64, GridScheme::product_angle);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SymmetricPolytope K = testing::random_polytope(600 + s);
    Vec bigger = K.support_numbers();
    const Vec bump = testing::random_vector(700 + s, K.pair_count()).cwiseAbs();
    bigger += 0.3 * bump;
    const SymmetricPolytope L(K.normals(), bigger);
    for (double q : {0.5, 1.5, 3.0})
      CHECK(dual_quermass(Body{K}, q, g) <= dual_quermass(Body{L}, q, g));
  }
  const Body small{Ellipsoid::aligned(v3(0.5, 1, 1))};
  CHECK(dual_quermass(small, 2.0, g) <= dual_quermass(Body{Ellipsoid::ball(3)}, 2.0, g));
}
