#include "dmp/barrier_integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dmp/errors.hpp"
#include "dmp/parallel.hpp"

namespace dmp {

namespace {

using std::numbers::pi;
constexpr double half_pi = 0.5 * pi;

// Composite rule on [lo, hi] built from `base` (a rule on [0, 1]). Panels
// are refined geometrically toward lo down to s_lo and toward hi down to
// s_hi; a nonpositive scale means no refinement at that end.
class GradedRule
{
public:
  explicit GradedRule(int nodes) : base_(gauss_legendre(nodes, 0.0, 1.0)) {}

  template <class F>
  double integrate(double lo, double hi, double s_lo, double s_hi, F&& f) const
  {
    if (!(hi > lo))
      return 0.0;
    double edges[256];
    int count = 0;
    const double len = hi - lo;
    edges[count++] = lo;
    if (s_lo > 0.0)
      for (double w = len / 4.0; w > 0.25 * s_lo && count < 100; w *= 0.5)
        edges[count++] = lo + w;
    edges[count++] = lo + 0.5 * len;
    if (s_hi > 0.0)
      for (double w = len / 4.0; w > 0.25 * s_hi && count < 200; w *= 0.5)
        edges[count++] = hi - w;
    edges[count++] = hi;
    std::sort(edges, edges + count);
    double acc = 0.0;
    for (int p = 0; p + 1 < count; ++p) {
      const double a = edges[p], w = edges[p + 1] - edges[p];
      if (!(w > 0.0))
        continue;
      for (std::size_t i = 0; i < base_.nodes.size(); ++i)
        acc += w * base_.weights[i] * f(a + w * base_.nodes[i]);
    }
    return acc;
  }

private:
  LineRule base_;
};

double ipow(double x, double e) { return e == 0.0 ? 1.0 : std::pow(x, e); }

void check_q(const BarrierBody& G, double q)
{
  if (!(q > 0.0) || !std::isfinite(q))
    throw DomainError("barrier integrals: q must be positive");
  if (q >= G.dim())
    throw DomainError("barrier integrals: q >= n makes the unbounded pieces diverge");
}

int nodes_for(int resolution) { return std::clamp(resolution, 4, 64); }

constexpr double kBarrierGridBudget = 8e6;

// Sums per-u1 contributions over the sub-sphere rule in a fixed order.
template <class PerDirection>
BarrierIntegrals over_u1(const BarrierBody& G, double q, int resolution, PerDirection&& per)
{
  const int k = G.k();
  const SphericalGrid s1 = sub_sphere_rule(k, std::max(resolution, 8));
  std::vector<std::array<double, 4>> parts(s1.size());
  parallel::for_each(s1.size(), [&](std::size_t i) {
    parts[i] = per(G.ellipsoid_radial(s1.node(i)));
  });
  BarrierIntegrals out;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    out.I1 += s1.weight(i) * parts[i][0];
    out.I2 += s1.weight(i) * parts[i][1];
    out.I3 += s1.weight(i) * parts[i][2];
    out.I4 += s1.weight(i) * parts[i][3];
  }
  out.n = G.dim();
  out.k = k;
  out.q = q;
  out.params = G.params();
  return out;
}

double prefactor(int n, int k) { return 2.0 / n * sphere_area(n - k - 1); }

} // namespace

SphericalGrid barrier_grid(const BarrierBody& G, int resolution)
{
  const int n = G.dim(), k = G.k();
  SplitGridOptions opt;
  opt.sub_resolution = std::max(resolution, 8);
  // rho_G does not depend on u3
  opt.ball_resolution = 8;
  opt.graded_octaves = std::max(0, static_cast<int>(std::ceil(std::log2(1.0 / G.params()[0]))) + 3);
  const double sub = static_cast<double>(sub_sphere_rule(k, opt.sub_resolution).size()) *
                     sub_sphere_rule(n - k - 1, opt.ball_resolution).size();
  const int phi_panels = opt.phi_panels + 2 * opt.graded_octaves;
  opt.nodes_per_panel = nodes_for(resolution);
  while (opt.nodes_per_panel > 6 &&
         sub * opt.theta_panels * phi_panels * opt.nodes_per_panel * opt.nodes_per_panel >
           kBarrierGridBudget)
    --opt.nodes_per_panel;
  return build_split_grid(n, k, 1, G.axes(), opt);
}

double barrier_quermass_direct(const BarrierBody& G, double q, const SphericalGrid& grid)
{
  if (grid.dim() != G.dim())
    throw DomainError("barrier_quermass_direct: grid dimension mismatch");
  return integrate(grid, [&](const DirectionRef& u) { return std::pow(G.radial(u), q); }) / G.dim();
}

double barrier_quermass_direct(const BarrierBody& G, double q, int resolution)
{
  return barrier_quermass_direct(G, q, barrier_grid(G, resolution));
}

BarrierQuermass barrier_quermass_decomposed(const BarrierBody& G, double q, int resolution)
{
  if (!(q > 0.0) || !std::isfinite(q))
    throw DomainError("barrier integrals: q must be positive");
  const int n = G.dim(), k = G.k();
  const double a = G.params()[k];
  const GradedRule rule(nodes_for(resolution));
  const double e_ball = n - k - q - 2.0;
  const double e_side = n - k - 2.0;

  auto per = [&](double rb) {
    std::array<double, 4> r{};
    const double theta_star = std::atan(a / rb);
    // ellipsoid range of theta
    r[0] = rule.integrate(0.0, theta_star, 0.0, half_pi - theta_star, [&](double th) {
      const double ct = std::cos(th);
      const double p1 = std::atan(ct / rb);
      const double inner = rule.integrate(0.0, p1, 0.0, half_pi - p1, [&](double ph) {
        return ipow(std::cos(ph), k - q) * ipow(std::sin(ph), e_side);
      });
      return std::pow(rb, q) * ipow(ct, k - 1 - q) * inner;
    });
    r[1] = rule.integrate(0.0, theta_star, 0.0, half_pi - theta_star, [&](double th) {
      const double ct = std::cos(th);
      const double p1 = std::atan(ct / rb);
      const double inner = rule.integrate(p1, half_pi, 0.0, 0.0, [&](double ph) {
        return ipow(std::cos(ph), k) * ipow(std::sin(ph), e_ball);
      });
      return ipow(ct, k - 1) * inner;
    });
    // segment range of theta
    r[2] = rule.integrate(theta_star, half_pi, theta_star, 0.0, [&](double th) {
      const double st = std::sin(th);
      const double p3 = std::atan(st / a);
      const double inner = rule.integrate(0.0, p3, 0.0, half_pi - p3, [&](double ph) {
        return ipow(std::cos(ph), k - q) * ipow(std::sin(ph), e_side);
      });
      return std::pow(a, q) * ipow(std::cos(th), k - 1) * std::pow(st, -q) * inner;
    });
    r[3] = rule.integrate(theta_star, half_pi, theta_star, 0.0, [&](double th) {
      const double st = std::sin(th);
      const double p3 = std::atan(st / a);
      const double inner = rule.integrate(p3, half_pi, 0.0, 0.0, [&](double ph) {
        return ipow(std::cos(ph), k) * ipow(std::sin(ph), e_ball);
      });
      return ipow(std::cos(th), k - 1) * inner;
    });
    return r;
  };

  BarrierQuermass out;
  out.parts = over_u1(G, q, resolution, per);
  out.total = prefactor(n, k) * out.parts.sum();
  return out;
}

BarrierQuermass barrier_quermass_transformed(const BarrierBody& G, double q, int resolution)
{
  check_q(G, q);
  const int n = G.dim(), k = G.k();
  const double a = G.params()[k];
  const GradedRule rule(nodes_for(resolution));
  const double ex = 0.5 * (q - n);
  const double e_side = n - k - 2.0;

  auto per = [&](double rb) {
    std::array<double, 4> r{};
    const double rb2 = rb * rb, a2 = a * a;
    const double lead = a * std::pow(rb, k);
    const double t_scale = rb / a;
    r[0] = lead * rule.integrate(0.0, 1.0, t_scale, 0.0, [&](double t) {
      const double base = rb2 + a2 * t * t;
      return rule.integrate(0.0, 1.0, std::sqrt(base), 0.0, [&](double s) {
        return std::pow(base + s * s, ex) * ipow(s, e_side);
      });
    });
    r[1] = lead * rule.integrate(0.0, 1.0, t_scale, 0.0, [&](double t) {
      const double base = rb2 + a2 * t * t;
      return rule.integrate(0.0, 1.0, 0.0, 0.0, [&](double sg) {
        return std::pow(sg * sg * base + 1.0, ex) * ipow(sg, k);
      });
    });
    r[2] = lead * rule.integrate(0.0, 1.0, a / rb, 0.0, [&](double tau) {
      const double base = tau * tau * rb2 + a2;
      return ipow(tau, k - 1) * rule.integrate(0.0, 1.0, std::sqrt(base), 0.0, [&](double s) {
        return std::pow(base + s * s, ex) * ipow(s, e_side);
      });
    });
    r[3] = lead * rule.integrate(0.0, 1.0, 0.0, 0.0, [&](double tau) {
      return ipow(tau, k - 1) * rule.integrate(0.0, 1.0, 0.0, 0.0, [&](double sg) {
        return std::pow(sg * sg * (tau * tau * rb2 + a2) + 1.0, ex) * ipow(sg, k);
      });
    });
    return r;
  };

  BarrierQuermass out;
  out.parts = over_u1(G, q, resolution, per);
  out.total = prefactor(n, k) * out.parts.sum();
  return out;
}

std::vector<double> barrier_bound_ratio(const std::vector<BarrierBody>& family, double q,
                                        int resolution)
{
  std::vector<double> out;
  for (const BarrierBody& G : family) {
    const int k = G.k();
    if (!(q > k && q < k + 1)) {
      std::ostringstream msg;
      msg << "q=" << q << " is outside the barrier regime k < q < k+1 (k=" << k << ")";
      throw DomainError(msg.str());
    }
    double denom = std::pow(G.params()[k], q - k);
    for (int i = 0; i < k; ++i)
      denom *= G.params()[i];
    out.push_back(barrier_quermass_transformed(G, q, resolution).total / denom);
  }
  return out;
}

double cylinder_quermass(const Cylinder& T, double q, int resolution)
{
  if (!(q > 0.0) || !std::isfinite(q))
    throw DomainError("cylinder_quermass: q must be positive");
  const int n = T.dim(), k = T.k();
  const GradedRule rule(nodes_for(resolution));
  const SphericalGrid s1 = sub_sphere_rule(k, std::max(resolution, 8));
  const double e_ball = n - k - 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const double rb = T.ellipsoid_radial(s1.node(i));
    const double ps = std::atan(1.0 / rb);
    const double ell = rule.integrate(0.0, ps, 0.0, half_pi - ps, [&](double ph) {
      return std::pow(rb, q) * ipow(std::cos(ph), k - 1 - q) * ipow(std::sin(ph), e_ball);
    });
    const double ball = rule.integrate(ps, half_pi, 0.0, 0.0, [&](double ph) {
      return ipow(std::cos(ph), k - 1) * ipow(std::sin(ph), e_ball - q);
    });
    acc += s1.weight(i) * (ell + ball);
  }
  return sphere_area(n - k) * acc / n;
}

std::vector<double> cylinder_bound_ratio(const std::vector<Cylinder>& family, double q,
                                         int resolution)
{
  std::vector<double> out;
  for (const Cylinder& T : family) {
    const int k = T.k();
    if (!(q > k && q <= T.dim())) {
      std::ostringstream msg;
      msg << "q=" << q << " is outside the cylinder regime k < q <= n (k=" << k
          << ", n=" << T.dim() << ")";
      throw DomainError(msg.str());
    }
    double denom = 1.0;
    for (int i = 0; i < k; ++i)
      denom *= T.semiaxes()[i];
    out.push_back(cylinder_quermass(T, q, resolution) / denom);
  }
  return out;
}

} // namespace dmp
