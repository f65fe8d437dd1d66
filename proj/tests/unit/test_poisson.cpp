#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stoprule/errors.hpp"
#include "stoprule/mc.hpp"
#include "stoprule/poisson.hpp"

using namespace stoprule;
using namespace stoprule::poisson;

namespace {

using gk = boost::math::quadrature::gauss_kronrod<double, 61>;

double e1_quadrature(double x) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([](double s) { return std::exp(-s) / s; }, x, std::numeric_limits<double>::infinity());
}

// plain 2-D form of the triangular box integral
double tri_box_2d(double z) {
  const double top = std::sqrt(2.0 * z);
  return gk::integrate(
      [](double u) {
        return gk::integrate([u](double v) { return std::exp(0.5 * (u * u - v * v)); }, 0.0, u, 10, 1e-14);
      },
      0.0, top, 10, 1e-14);
}

}  // namespace

TEST_CASE("E1 against quadrature") {
  for (double x : {1e-3, 0.01, 0.3, 0.999, 1.0, 1.5, 4.0, 12.0, 30.0}) {
    CAPTURE(x);
    CHECK(expint_e1(x) == doctest::Approx(e1_quadrature(x)).epsilon(1e-12));
  }
  CHECK(expint_e1(1.0) == doctest::Approx(0.21938393439552029).epsilon(1e-15));
  CHECK_THROWS_AS(expint_e1(0.0), DomainError);
}

TEST_CASE("incomplete gamma identities") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(gamma_incomplete(1.0, 0.0, 2.0) == doctest::Approx(-std::expm1(-2.0)).epsilon(1e-14));
  CHECK(gamma_incomplete(0.5, 0.0, inf) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(gamma_incomplete(0.5, 1.0, inf) == doctest::Approx(std::sqrt(M_PI) * std::erfc(1.0)).epsilon(1e-13));
  CHECK(gamma_incomplete(0.5, 0.0, 0.3) == doctest::Approx(std::sqrt(M_PI) * std::erf(std::sqrt(0.3))).epsilon(1e-13));
  CHECK(gamma_incomplete(0.0, 0.7, inf) == doctest::Approx(expint_e1(0.7)).epsilon(1e-12));
  CHECK(gamma_incomplete(3.0, 0.0, inf) == doctest::Approx(2.0).epsilon(1e-13));
  // Gamma(a+1,b,c) = a Gamma(a,b,c) + b^a e^{-b} - c^a e^{-c}
  for (double a : {0.25, 0.5, 1.5, 2.7}) {
    for (auto [b, c] : {std::pair{0.0, 1.3}, std::pair{0.4, 5.0}, std::pair{2.0, 9.0}}) {
      const double rhs = a * gamma_incomplete(a, b, c) + std::pow(b, a) * std::exp(-b) - std::pow(c, a) * std::exp(-c);
      CHECK(gamma_incomplete(a + 1.0, b, c) == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
  CHECK(gamma_incomplete(0.5, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(gamma_incomplete(-0.5, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(gamma_incomplete(1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("box functions") {
  CHECK(J_rect(0.0) == 1.0);
  CHECK(D_rect(0.0) == 0.0);
  CHECK(J_tri(0.0) == 1.0);
  CHECK(D_tri(0.0) == 0.0);
  for (double z : {0.05, 0.4, 1.0, 2.5, 7.0}) {
    CAPTURE(z);
    for (auto g : {Geometry::Rect, Geometry::Tri}) {
      CHECK((J(g, z) > 0.0 && J(g, z) < 1.0));
      CHECK((D(g, z) > 0.0 && D(g, z) < 1.0));
      // D overtakes J near z = 1.5 (rect) and z = 1.9 (tri)
      if (z < 1.4) CHECK(D(g, z) < J(g, z));
      if (z > 2.0) CHECK(D(g, z) > J(g, z));
    }
    CHECK(box_integral_tri(z) == doctest::Approx(tri_box_2d(z)).epsilon(1e-11));
    CHECK(D_tri(z) == doctest::Approx(std::exp(-z) * tri_box_2d(z)).epsilon(1e-11));
    const double ein = gk::integrate([](double s) { return s == 0.0 ? 1.0 : std::expm1(s) / s; }, 0.0, z, 10, 1e-15);
    CHECK(ein_rect(z) == doctest::Approx(ein).epsilon(1e-13));
  }
  // both sides of the series/asymptotic switch
  CHECK(D_rect(49.999) == doctest::Approx(D_rect(50.001)).epsilon(1e-4));
  // J_tri near its small-z branch
  CHECK(J_tri(0.999e-3) == doctest::Approx(J_tri(1.001e-3)).epsilon(1e-5));
  CHECK_THROWS_AS(J_rect(-1.0), DomainError);
  CHECK_THROWS_AS(D_tri(-0.1), DomainError);
}

TEST_CASE("beta star and boundary values") {
  const auto r = beta_star(Geometry::Rect);
  const auto t = beta_star(Geometry::Tri);
  CHECK(r.root == doctest::Approx(0.804352).epsilon(1e-5 / 0.804352));
  CHECK(t.root == doctest::Approx(0.760660).epsilon(1e-5 / 0.760660));
  CHECK(std::fabs(D_rect(r.root) - std::exp(-r.root)) < 1e-12);
  CHECK(std::fabs(D_tri(t.root) - std::exp(-t.root)) < 1e-12);
  CHECK(std::fabs(success_prob_boundary(Geometry::Rect, r.root) - 0.580164) < 1e-5);
  CHECK(std::fabs(success_prob_boundary(Geometry::Tri, t.root) - 0.703128) < 1e-5);
  CHECK(std::fabs(samuels_value() - 0.580164) < 1e-6);
  // the root maximises the boundary value on a grid
  for (auto g : {Geometry::Rect, Geometry::Tri}) {
    const double best = success_prob_boundary(g, beta_star(g).root);
    for (double beta = 0.01; beta < 5.0; beta += 0.01) CHECK(success_prob_boundary(g, beta) <= best + 1e-12);
  }
  CHECK(success_prob_boundary(Geometry::Rect, 1e-6) < 1e-3);
  CHECK_THROWS_AS(success_prob_boundary(Geometry::Rect, 0.0), DomainError);
}

TEST_CASE("finite horizon limit") {
  const double b = beta_star(Geometry::Rect).root;
  CHECK(gm_limit_finite_T(50.0) == doctest::Approx(samuels_value()).epsilon(1e-9));
  CHECK(gm_limit_finite_T(b) == doctest::Approx(std::exp(-b)).epsilon(1e-14));
  CHECK_THROWS_AS(gm_limit_finite_T(0.5), DomainError);
}

TEST_CASE("theta family identities") {
  const double half = theta_limit(0.5);
  CHECK(std::fabs(half - opt_value()) < 1e-8);
  CHECK(std::fabs(half - success_prob_boundary(Geometry::Tri, beta_star(Geometry::Tri).root)) < 1e-8);
  CHECK(std::fabs(half - th_half_value()) < 1e-10);
  CHECK(std::fabs(theta_limit(1.0) - samuels_value()) < 1e-6);
  CHECK(theta_beta_star(1.0).root == doctest::Approx(beta_star(Geometry::Rect).root).epsilon(1e-10));
  CHECK(theta_beta_star(0.5).root == doctest::Approx(beta_star(Geometry::Tri).root).epsilon(1e-10));
  CHECK_THROWS_AS(theta_limit(0.0), DomainError);
}

TEST_CASE("theta root solves the balance equation") {
  for (double theta : {0.3, 0.5, 1.0, 2.0, 4.0}) {
    const auto r = theta_beta_star(theta);
    CHECK(std::fabs(theta_balance(theta, r.root)) < 1e-12);
    CHECK((r.root > 0.0 && r.root < 3.0));
  }
  // heavier jump factor concentration pushes the box parameter up
  CHECK(theta_beta_star(2.0).root > theta_beta_star(1.0).root);
}

TEST_CASE("theta value against a simulated box chain") {
  // Box of area z at a record; the next arrival inside comes after Exp(1) units
  // of area (none if that exceeds z) and leaves a box of area (z - E) U^{1/theta}.
  const double theta = 2.0;
  const double beta = theta_beta_star(theta).root;
  const Index reps = 200000;
  Index wins = 0;
  for (Index r = 0; r < reps; ++r) {
    mc::CounterRng rng(11, static_cast<std::uint64_t>(r));
    double z = 30.0;
    bool won = false;
    for (;;) {
      const double e = rng.exponential();
      if (e >= z) break;  // nothing left to stop at
      z = (z - e) * std::pow(rng.uniform(), 1.0 / theta);
      if (z <= beta) {
        won = rng.exponential() >= z;
        break;
      }
    }
    wins += won;
  }
  const double p = static_cast<double>(wins) / static_cast<double>(reps);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
  CHECK(std::fabs(p - theta_limit(theta)) < 4.0 * se);
}

TEST_CASE("root ladder") {
  auto ladder = rect_roots(200);
  const std::vector<std::pair<int, double>> printed = {{3, 1.381554}, {4, 1.258476}, {5, 1.195517},
                                                       {10, 1.088218}, {15, 1.056969}, {20, 1.042069}};
  CHECK(ladder.z[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  for (auto [k, z] : printed) CHECK(std::fabs(ladder.z[static_cast<std::size_t>(k - 1)] - z) < 1e-5);
  for (std::size_t k = 2; k < ladder.z.size(); ++k) {
    CHECK(ladder.z[k] < ladder.z[k - 1]);
    CHECK(ladder.z[k] > 1.0);
    CHECK(std::fabs(ladder_residual(static_cast<Index>(k + 1), ladder.z[k])) < 1e-11);
  }
  CHECK(ladder.z.back() < 1.01);
  for (std::size_t k = 1; k < ladder.t.size(); ++k) CHECK(ladder.t[k] >= ladder.t[k - 1]);
  // small lambda clamps the first rungs at e^lambda with cutoff 0
  auto low = rect_roots(50, 0.1);
  CHECK(low.clamped[1]);
  CHECK(low.t[1] == 0.0);
  CHECK(low.z[1] == doctest::Approx(std::exp(0.1)));
}

TEST_CASE("rectangular limit series") {
  auto one = rect_limit(1.0);
  CHECK(std::fabs(one.value.total - 0.761260) < 1e-5);
  CHECK(one.truncation_error < 1e-12);
  CHECK(one.value.jump == doctest::Approx(rect_limit_jump_double_sum(one.terms)).epsilon(1e-12));
  CHECK(one.value.total == doctest::Approx(rect_limit_total_closed_form(one.terms)).epsilon(1e-11));
  CHECK(std::fabs(rect_limit(0.003).value.total - 0.580164) < 5e-3);
  double prev = 0.0;
  const auto unclamped = compute_unclamped_roots(rect_limit_terms(0.01));
  for (int i = 1; i <= 100; ++i) {
    const double v = rect_limit(0.01 * i, 0, unclamped).value.total;
    CHECK(v >= prev - 1e-12);
    CHECK((v >= 0.0 && v <= 1.0));
    prev = v;
  }
  try {
    rect_limit(1.0, 5);
    FAIL("expected PrecisionError");
  } catch (const PrecisionError& e) {
    CHECK(e.required() == rect_limit_terms(1.0));
  }
}

TEST_CASE("general boundary") {
  auto ladder = rect_roots(rect_limit_terms(1.0));
  CHECK(rect_general_boundary(ladder.t).total == doctest::Approx(rect_limit(1.0).value.total).epsilon(1e-8));
  auto best = best_t2();
  CHECK(std::fabs(best.t2 - 0.450694) < 1e-4);
  CHECK(std::fabs(best.value - 0.730694) < 1e-4);
  std::vector<double> zeros(200, 0.0);
  CHECK(rect_general_boundary(zeros).total < rect_limit(1.0).value.total);
  CHECK_THROWS_AS(rect_general_boundary(std::vector<double>{0.5, 0.2}), InvalidPolicy);
}
