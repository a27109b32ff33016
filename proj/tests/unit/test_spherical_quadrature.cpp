#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "dmp/errors.hpp"
#include "dmp/parallel.hpp"
#include "dmp/spherical_quadrature.hpp"
#include "fixtures.hpp"

using namespace dmp;
using std::numbers::pi;

namespace {

void check_antipodal(const SphericalGrid& g)
{
  const std::size_t half = g.size() / 2;
  REQUIRE(g.size() == 2 * half);
  for (std::size_t i = 0; i < half; ++i) {
    REQUIRE((g.node(i) + g.node(i + half)).norm() == 0.0);
    REQUIRE(g.weight(i) == g.weight(i + half));
  }
}

} // namespace

TEST_CASE("ball volumes and sphere areas")
{
  CHECK(unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
  CHECK(sphere_area(1) == 2.0);
  CHECK(sphere_area(4) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
  CHECK(sphere_area(5) == doctest::Approx(8.0 * pi * pi / 3.0).epsilon(1e-15));
}

TEST_CASE("unit vectors")
{
  Vec v(3);
  v << 3.0, 0.0, 4.0;
  CHECK_THROWS_AS(UnitVector{v}, DomainError);
  const UnitVector u = UnitVector::normalized(v);
  CHECK(u[0] == doctest::Approx(0.6));
  CHECK((-u).coords() == -u.coords());
  CHECK_THROWS_AS(UnitVector::normalized(Vec::Zero(3)), DomainError);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
  const LineRule r = gauss_legendre(6, 0.0, 2.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    acc += r.weights[i] * std::pow(r.nodes[i], 11);
  CHECK(acc == doctest::Approx(std::pow(2.0, 12) / 12.0).epsilon(1e-13));
}

TEST_CASE("total weight of product grids")
{
  CHECK(std::abs(build_grid(2, 256, GridScheme::product_angle).total_weight() - 2.0 * pi) <= 1e-10);
  CHECK(std::abs(build_grid(3, 128, GridScheme::product_angle).total_weight() - 4.0 * pi) <= 1e-8);
  CHECK(testing::rel_diff(build_grid(4, 32, GridScheme::product_angle).total_weight(),
                          sphere_area(4)) <= 1e-12);
}

TEST_CASE("Monte Carlo grid total weight and seeding")
{
  const SphericalGrid g = build_grid(5, 100000, GridScheme::monte_carlo, 42);
  CHECK(testing::rel_diff(g.total_weight(), 8.0 * pi * pi / 3.0) <= 0.03);
  const SphericalGrid same = build_grid(5, 100000, GridScheme::monte_carlo, 42);
  const SphericalGrid other = build_grid(5, 100000, GridScheme::monte_carlo, 43);
  CHECK(g.nodes() == same.nodes());
  CHECK(g.nodes() != other.nodes());
  CHECK(g.seed() == std::optional<std::uint64_t>(42));
}

TEST_CASE("grids are antipodally symmetric")
{
  check_antipodal(build_grid(2, 16, GridScheme::product_angle));
  check_antipodal(build_grid(3, 16, GridScheme::product_angle));
  check_antipodal(build_grid(4, 10, GridScheme::product_angle));
  check_antipodal(build_grid(5, 1001, GridScheme::monte_carlo, 1));
  SplitGridOptions opt;
  opt.nodes_per_panel = 4;
  opt.sub_resolution = 8;
  opt.graded_octaves = 3;
  check_antipodal(build_split_grid(4, 1, 1, Mat::Identity(4, 4), opt));
}

TEST_CASE("integrate examples")
{
  const SphericalGrid g = build_grid(3, 64, GridScheme::product_angle);
  CHECK(integrate(g, [](const DirectionRef&) { return 1.0; }) == doctest::Approx(4.0 * pi));
  CHECK(std::abs(integrate(g, [](const DirectionRef& u) { return u[0]; })) <= 1e-12);
  CHECK(std::abs(integrate(g, [](const DirectionRef& u) { return u[0] * u[1] * u[1] + u[2]; })) <=
        1e-12);
  CHECK(std::abs(integrate(g, [](const DirectionRef& u) { return u[0] * u[0]; }) - 4.0 * pi / 3.0) <=
        1e-6);
}

TEST_CASE("odd integrands vanish on every scheme")
{
  const Vec a = testing::random_vector(5, 5).normalized();
  auto odd = [&](const DirectionRef& u) { return std::pow(u.dot(a), 3) + std::sin(u.dot(a)); };
  CHECK(std::abs(integrate(build_grid(5, 20000, GridScheme::monte_carlo, 3), odd)) <= 1e-12);
  auto odd3 = [&](const DirectionRef& u) { return std::sinh(2.0 * u.head(3).dot(a.head(3))); };
  CHECK(std::abs(integrate(build_grid(3, 33, GridScheme::product_angle), odd3)) <= 1e-12);
}

TEST_CASE("non-finite values raise an evaluation error carrying the node")
{
  const SphericalGrid g = build_grid(3, 8, GridScheme::product_angle);
  try {
    integrate(g, [](const DirectionRef& u) { return u[2] > 0.9 ? std::nan("") : 1.0; });
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    REQUIRE(e.node().size() == 3);
    CHECK(e.node()[2] > 0.9);
  }
}

TEST_CASE("size limits and argument checks")
{
  CHECK_THROWS_AS(build_grid(6, 2000, GridScheme::product_angle), CapabilityError);
  CHECK_THROWS_AS(build_grid(3, 7, GridScheme::product_angle), DomainError);
  CHECK_THROWS_AS(build_grid(1, 16, GridScheme::product_angle), DomainError);
}

TEST_CASE("doubling resolution reduces the error of smooth integrands")
{
  const Vec a = testing::random_vector(11, 3).normalized();
  struct Case
  {
    std::function<double(double)> g;
    double exact;  // integral over S^2 of g(u . a) = 2 pi int_{-1}^{1} g
  };
  const std::vector<Case> cases{
    {[](double t) { return 1.0 / (1.1 - t); }, 2.0 * pi * std::log(21.0)},
    {[](double t) { return std::exp(5.0 * t); }, 2.0 * pi * (std::exp(5.0) - std::exp(-5.0)) / 5.0},
    {[](double t) { return std::pow(std::abs(t), 3); }, pi},
  };
  for (const Case& c : cases) {
    double prev = std::numeric_limits<double>::infinity();
    for (int res : {8, 16, 32}) {
      const double v =
        integrate(build_grid(3, res, GridScheme::product_angle),
                  [&](const DirectionRef& u) { return c.g(u.dot(a)); });
      const double err = std::abs(v - c.exact) / c.exact;
      CHECK((err < prev || err < 1e-13));
      prev = err;
    }
  }
}

TEST_CASE("integrate is safe concurrently and independent of thread count")
{
  const SphericalGrid g = build_grid(3, 96, GridScheme::product_angle);
  auto f = [](const DirectionRef& u) { return std::exp(u[0] - 0.3 * u[2]); };
  parallel::set_thread_count(1);
  const double serial = integrate(g, f);
  parallel::set_thread_count(0);
  std::vector<double> results(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] { results[static_cast<std::size_t>(t)] = integrate(g, f); });
  for (auto& t : pool)
    t.join();
  for (double r : results)
    CHECK(r == serial);
}

TEST_CASE("reflected and rotated grids")
{
  const SphericalGrid g = build_grid(3, 16, GridScheme::product_angle);
  auto f = [](const DirectionRef& u) { return u[0] * u[0] + 2.0 * u[1] * u[2] + 3.0; };
  CHECK(testing::rel_diff(integrate(g, f), integrate(g.reflected(), f)) <= 1e-14);
  const Mat R = testing::random_rotation(2, 3);
  const SphericalGrid r = g.transformed(R);
  auto poly = [](const DirectionRef& u) { return std::pow(u[0], 4) + u[1] * u[1]; };
  CHECK(testing::rel_diff(integrate(g, poly), integrate(r, poly)) <= 1e-12);
}

TEST_CASE("general coordinates Jacobian")
{
  CHECK(general_coords_jacobian(3, 1, 1, 0.0, 0.0) == 1.0);
  CHECK(std::abs(general_coords_jacobian(4, 1, 1, 0.7, pi / 2)) <= 1e-15);
  CHECK_THROWS_AS(general_coords_jacobian(3, 1, 2, 0.1, 0.1), DomainError);
  CHECK_THROWS_AS(general_coords_jacobian(4, 1, 1, -0.1, 0.1), DomainError);

  // sub-sphere areas times the integrated Jacobian recover |S^3| = 2 pi^2
  const LineRule r = composite_gauss_legendre(20, {0.0, pi / 4, pi / 2});
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    for (std::size_t j = 0; j < r.nodes.size(); ++j)
      acc += r.weights[i] * r.weights[j] * general_coords_jacobian(4, 1, 1, r.nodes[i], r.nodes[j]);
  acc *= sphere_area(1) * sphere_area(1) * sphere_area(2);
  CHECK(std::abs(acc - 2.0 * pi * pi) <= 1e-6);
}

TEST_CASE("general coordinates reconstruct unit vectors")
{
  GeneralCoords c;
  c.k = 2;
  c.j = 1;
  c.theta = 0.4;
  c.phi = 1.1;
  c.u1 = Vec::Ones(2).normalized();
  c.u2 = -Vec::Ones(1);
  c.u3 = Vec::Ones(2).normalized();
  const UnitVector u = c.direction();
  CHECK(u.coords().norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u[2] == doctest::Approx(-std::cos(1.1) * std::sin(0.4)));
  const Mat R = testing::random_rotation(9, 5);
  CHECK((c.direction(R).coords() - R * u.coords()).norm() <= 1e-14);
}

TEST_CASE("factorized measure agrees with direct integration on polynomials")
{
  for (int n : {3, 4}) {
    const Mat R = testing::random_rotation(static_cast<std::uint64_t>(n), n);
    const Vec c = testing::random_vector(static_cast<std::uint64_t>(100 + n), 4 * n);
    // degree <= 4 polynomial in rotated coordinates
    auto p = [&](const DirectionRef& u) {
      const Vec y = R.transpose() * u;
      double v = 1.0;
      for (int i = 0; i < n; ++i)
        v += c[i] * y[i] + c[n + i] * y[i] * y[i] + c[2 * n + i] * std::pow(y[i], 3) +
             c[3 * n + i] * std::pow(y[i], 4);
      return v + y[0] * y[1] * y[n - 1] * y[n - 1];
    };
    const double direct = integrate(build_grid(n, 48, GridScheme::product_angle), p);
    for (int k = 1; k + 1 < n; ++k) {
      SplitGridOptions opt;
      opt.nodes_per_panel = 6;
      opt.sub_resolution = 12;
      const double split = integrate(build_split_grid(n, k, 1, Mat::Identity(n, n), opt), p);
      CHECK(testing::rel_diff(split, direct) <= 1e-5);
      const double framed = integrate(build_split_grid(n, k, 1, R, opt), p);
      CHECK(testing::rel_diff(framed, direct) <= 1e-5);
    }
  }
}

TEST_CASE("sub-sphere rules")
{
  const SphericalGrid s0 = sub_sphere_rule(1, 8);
  CHECK(s0.size() == 2);
  CHECK(s0.total_weight() == 2.0);
  CHECK(testing::rel_diff(sub_sphere_rule(3, 8).total_weight(), 4.0 * pi) <= 1e-12);
}
