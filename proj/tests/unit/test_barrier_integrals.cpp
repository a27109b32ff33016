#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dmp/barrier_integrals.hpp"
#include "dmp/errors.hpp"
#include "dmp/facet_integrals.hpp"
#include "fixtures.hpp"

using namespace dmp;

namespace {

Vec vec(std::initializer_list<double> xs)
{
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs)
    v[i++] = x;
  return v;
}

// For k = 1 in R^3 the barrier body is the box [-a1, a1] x [-a2, a2] x [-1, 1].
double box_quermass(double a1, double a2, double q)
{
  std::vector<UnitVector> normals{UnitVector::axis(3, 0), UnitVector::axis(3, 1), UnitVector::axis(3, 2)};
  return exact_pair_curvature(SymmetricPolytope(normals, vec({a1, a2, 1.0})), q).sum();
}

void check_three_ways(const BarrierBody& G, double q, double tol)
{
  const double direct = barrier_quermass_direct(G, q);
  const BarrierQuermass dec = barrier_quermass_decomposed(G, q);
  const BarrierQuermass tr = barrier_quermass_transformed(G, q);
  CHECK(testing::rel_diff(direct, dec.total) <= tol);
  CHECK(testing::rel_diff(direct, tr.total) <= tol);
  CHECK(testing::rel_diff(dec.total, tr.total) <= tol);
  for (const BarrierIntegrals* p : {&dec.parts, &tr.parts}) {
    CHECK(p->I1 >= 0.0);
    CHECK(p->I2 >= 0.0);
    CHECK(p->I3 >= 0.0);
    CHECK(p->I4 >= 0.0);
  }
  const double scale = dec.parts.sum();
  CHECK(std::abs(dec.parts.I1 - tr.parts.I1) <= 5e-3 * scale);
  CHECK(std::abs(dec.parts.I2 - tr.parts.I2) <= 5e-3 * scale);
  CHECK(std::abs(dec.parts.I3 - tr.parts.I3) <= 5e-3 * scale);
  CHECK(std::abs(dec.parts.I4 - tr.parts.I4) <= 5e-3 * scale);
}

} // namespace

TEST_CASE("barrier quermassintegral three ways on the documented instances")
{
  check_three_ways(BarrierBody::aligned(3, 1, vec({0.3, 0.6})), 1.5, 5e-3);
  check_three_ways(BarrierBody::aligned(4, 2, vec({0.2, 0.4, 0.7})), 2.5, 5e-3);
}

TEST_CASE("barrier body in R^3 with k = 1 is a box")
{
  for (auto [a1, a2, q] : {std::tuple{0.3, 0.6, 1.5}, std::tuple{0.05, 0.5, 2.5}, std::tuple{0.7, 0.9, 1.2}}) {
    const double exact = box_quermass(a1, a2, q);
    const BarrierBody G = BarrierBody::aligned(3, 1, vec({a1, a2}));
    CHECK(testing::rel_diff(barrier_quermass_direct(G, q), exact) <= 5e-3);
    CHECK(testing::rel_diff(barrier_quermass_decomposed(G, q).total, exact) <= 5e-3);
    CHECK(testing::rel_diff(barrier_quermass_transformed(G, q).total, exact) <= 5e-3);
  }
  // nearly slack constraints approach the cube
  const BarrierBody G = BarrierBody::aligned(3, 1, vec({0.999999, 0.999999}));
  CHECK(testing::rel_diff(barrier_quermass_direct(G, 2.0), box_quermass(1.0, 1.0, 2.0)) <= 5e-3);
}

TEST_CASE("barrier volume against Monte Carlo")
{
  const BarrierBody G = BarrierBody::aligned(3, 1, vec({0.5, 0.5}));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int samples = 400000;
  int inside = 0;
  for (int i = 0; i < samples; ++i) {
    Vec x(3);
    x << u(rng), u(rng), u(rng);
    if (x.norm() > 0.0 && radial_eval(Body{G}, x / x.norm()) >= x.norm())
      ++inside;
  }
  const double mc = 8.0 * inside / samples;
  CHECK(testing::rel_diff(barrier_quermass_direct(G, 3.0), mc) <= 0.01);
  CHECK(testing::rel_diff(barrier_quermass_direct(G, 3.0), 2.0) <= 5e-3);
}

TEST_CASE("barrier integrals are symmetric when a1 = a2")
{
  for (double a : {0.2, 0.5}) {
    const BarrierBody G = BarrierBody::aligned(3, 1, vec({a, a}));
    for (double q : {1.5, 2.5}) {
      const BarrierIntegrals p = barrier_quermass_decomposed(G, q).parts;
      CHECK(testing::rel_diff(p.I1, p.I3) <= 1e-6);
      CHECK(testing::rel_diff(p.I2, p.I4) <= 1e-6);
      const BarrierIntegrals t = barrier_quermass_transformed(G, q).parts;
      CHECK(testing::rel_diff(t.I1, t.I3) <= 1e-6);
      CHECK(testing::rel_diff(t.I2, t.I4) <= 1e-6);
    }
  }
}

TEST_CASE("unbounded pieces stay finite below q = n")
{
  const BarrierBody G = BarrierBody::aligned(4, 2, vec({0.2, 0.4, 0.7}));
  const BarrierQuermass lo = barrier_quermass_transformed(G, 3.0);
  const BarrierQuermass hi = barrier_quermass_transformed(G, 3.9);
  CHECK(std::isfinite(hi.total));
  CHECK(hi.parts.I2 + hi.parts.I4 > lo.parts.I2 + lo.parts.I4);
  CHECK(testing::rel_diff(hi.total, barrier_quermass_direct(G, 3.9)) <= 0.01);
  CHECK_THROWS_AS(barrier_quermass_transformed(G, 4.0), DomainError);
  CHECK_THROWS_AS(barrier_quermass_transformed(G, 0.0), DomainError);
}

TEST_CASE("barrier quermassintegral grows with every parameter")
{
  const Vec base = vec({0.2, 0.4, 0.6});
  const double w0 = barrier_quermass_direct(BarrierBody::aligned(4, 2, base), 2.5);
  for (int i = 0; i < 3; ++i) {
    Vec p = base;
    p[i] += 0.1;
    CHECK(barrier_quermass_direct(BarrierBody::aligned(4, 2, p), 2.5) >= w0);
  }
}

TEST_CASE("barrier bound ratio")
{
  std::vector<BarrierBody> family;
  for (int l = 1; l <= 8; ++l) {
    const double lambda = std::pow(0.5, l);
    family.push_back(BarrierBody::aligned(4, 2, vec({std::pow(lambda, 1.2), lambda, lambda})));
  }
  const std::vector<double> r = barrier_bound_ratio(family, 2.5);
  REQUIRE(r.size() == 8);
  for (double x : r) {
    CHECK(std::isfinite(x));
    CHECK(x <= 10.0 * r.front());
  }

  const BarrierBody G = BarrierBody::aligned(4, 2, vec({0.2, 0.4, 0.7}));
  const double one = barrier_bound_ratio({G}, 2.5).front();
  CHECK(one == doctest::Approx(barrier_quermass_transformed(G, 2.5).total /
                               (0.2 * 0.4 * std::pow(0.7, 0.5)))
                   .epsilon(1e-12));

  try {
    barrier_bound_ratio({G}, 3.5);
    FAIL("expected a regime error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("k < q < k+1") != std::string::npos);
  }
}

TEST_CASE("cylinder bound ratio")
{
  std::vector<Cylinder> family;
  for (int l = 1; l <= 8; ++l)
    family.push_back(Cylinder::aligned(3, 1, vec({std::pow(0.5, l)})));
  const std::vector<double> r = cylinder_bound_ratio(family, 2.0);
  for (double x : r)
    CHECK(x <= 10.0 * r.front());
  // W = (q/n) * integral over T of |x|^{q-n}, so W / a1 -> (2/3) * 2 * (integral of 1/|y| over the disc)
  CHECK(r.back() == doctest::Approx(8.0 * std::numbers::pi / 3.0).epsilon(0.05));
  CHECK_THROWS_AS(cylinder_bound_ratio(family, 1.0), DomainError);

  const double exact = 2.0 * std::numbers::pi * 0.5;  // volume of the cylinder of radius 1, height 1
  CHECK(testing::rel_diff(cylinder_quermass(Cylinder::aligned(3, 1, vec({0.5})), 3.0), exact) <= 5e-3);
}
