#include <cmath>

#include "stoprule/errors.hpp"
#include "stoprule/poisson.hpp"
#include "stoprule/summation.hpp"

namespace stoprule::poisson {

RootReport beta_star(Geometry g) {
  // D(z) = e^{-z} rewritten without the exponential factor
  if (g == Geometry::Rect) return find_root([](double z) { return ein_rect(z) - 1.0; }, 0.0, 3.0);
  return find_root([](double z) { return box_integral_tri(z) - 1.0; }, 0.0, 3.0);
}

Decomposition boundary_decomposition(Geometry g, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("success_prob_boundary needs beta > 0");
  // P(sigma = tau): the running minimum first enters the region by a jump
  const double by_jump = g == Geometry::Rect
                             ? beta * std::exp(beta) * expint_e1(beta)
                             : std::sqrt(M_PI * beta) * std::exp(beta) * std::erfc(std::sqrt(beta));
  return Decomposition::from_parts(J(g, beta) * by_jump, D(g, beta) * (1.0 - by_jump));
}

double success_prob_boundary(Geometry g, double beta) { return boundary_decomposition(g, beta).total; }

double samuels_value() {
  const double b = beta_star(Geometry::Rect).root;
  return std::exp(-b) + (std::expm1(b) - b) * expint_e1(b);
}

double gm_limit_finite_T(double T) {
  const double b = beta_star(Geometry::Rect).root;
  if (std::isnan(T) || T < b) throw DomainError("gm_limit_finite_T needs T >= beta* = 0.804352...");
  const double tail = std::isinf(T) ? 0.0 : expint_e1(T);
  return std::exp(-b) + (std::expm1(b) - b) * (expint_e1(b) - tail);
}

double theta_balance(double theta, double z) {
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  // sum_{k>=0} z^{k+1} / ((k+1) (theta+1)_k) - 1
  double c = z;
  CompensatedSum sum;
  for (int k = 0; k < 5000; ++k) {
    if (k > 0) c *= z / (theta + k);
    const double t = c / (k + 1);
    sum.add(t);
    if (k > z && t < 1e-18 * sum.value()) break;
  }
  return sum.value() - 1.0;
}

RootReport theta_beta_star(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be > 0");
  return find_root([theta](double z) { return theta_balance(theta, z); }, 0.0, 3.0);
}

double theta_limit_at(double theta, double beta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be > 0");
  if (!(beta > 0.0)) throw DomainError("theta_limit needs beta > 0");
  const double upper = gamma_incomplete(1.0 - theta, beta, INFINITY);
  const double lower = gamma_incomplete(theta, 0.0, beta);
  return upper * (-std::pow(beta, theta) + std::exp(beta) * theta * lower) + std::exp(-beta);
}

double theta_limit(double theta) { return theta_limit_at(theta, theta_beta_star(theta).root); }

double th_half_value() {
  const double b = beta_star(Geometry::Tri).root;
  return gamma_incomplete(0.5, b, INFINITY) * (-std::sqrt(b) + 0.5 * std::exp(b) * gamma_incomplete(0.5, 0.0, b)) +
         std::exp(-b);
}

double opt_value() {
  const double b = beta_star(Geometry::Tri).root;
  const double r = std::sqrt(b);
  return std::exp(-b) +
         (std::exp(b) * std::sqrt(M_PI) / (2.0 * r) * std::erf(r) - 1.0) * std::sqrt(M_PI * b) * std::erfc(r);
}

}  // namespace stoprule::poisson
