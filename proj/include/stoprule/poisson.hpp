#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "stoprule/decomposition.hpp"
#include "stoprule/model.hpp"
#include "stoprule/root.hpp"

namespace stoprule::poisson {

// Box shape south-east of a record: rectangle (full-information game) or
// isosceles triangle (triangular model).
enum class Geometry { Rect, Tri };

std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view name);

// ---- special functions ----------------------------------------------------

double erf(double x);
double erfc(double x);
// E1(x) = int_x^inf e^{-s}/s ds, x > 0.
double expint_e1(double x);
// Gamma(a, b, c) = int_b^c e^{-t} t^{a-1} dt, 0 <= b <= c <= inf. For a <= 0
// the lower limit must be positive.
double gamma_incomplete(double a, double b, double c);
// int_0^z (e^s - 1)/s ds
double ein_rect(double z);
// int_0^{sqrt(2z)} int_0^u e^{(u^2-v^2)/2} dv du, as one quadrature with the
// inner integral in erf form
double box_integral_tri(double z);

// ---- box functions --------------------------------------------------------

// Success probability when stopping at a record whose box has area z.
double J_rect(double z);
double J_tri(double z);
// Success probability when stopping at the first arrival inside the box.
double D_rect(double z);
double D_tri(double z);
double J(Geometry g, double z);
double D(Geometry g, double z);

// Root of D(z) = e^{-z} in (0, 3).
RootReport beta_star(Geometry g);

// Success probability of the self-similar boundary with box parameter beta:
// b(t) = beta/(1-t) for Rect, b(t) = t + sqrt(2 beta) for Tri.
double success_prob_boundary(Geometry g, double beta);
// The same value split into J(beta) P(sigma = tau) and D(beta) P(sigma < tau).
Decomposition boundary_decomposition(Geometry g, double beta);

// e^{-b} + (e^b - 1 - b) E1(b) at b = beta*_rect.
double samuels_value();
// Finite horizon T >= beta*: E1(b) replaced by E1(b) - E1(T).
double gm_limit_finite_T(double T);

// ---- theta family -----------------------------------------------------------

// Optimal box parameter for the beta(theta,1) jump chain: root of
// sum_{k>=0} z^{k+1} / ((k+1) (theta+1)_k) = 1.
RootReport theta_beta_star(double theta);
double theta_balance(double theta, double z);
// Gamma(1-theta, b, inf) (-b^theta + e^b theta Gamma(theta, 0, b)) + e^{-b}.
double theta_limit(double theta);
double theta_limit_at(double theta, double beta);
// Theta = 1/2 specialisation in incomplete-gamma form, at beta*_tri.
double th_half_value();
// erf/erfc closed form of the triangular limit, at beta*_tri.
double opt_value();

// ---- rectangular ladder -----------------------------------------------------

struct BoundaryLadder {
  double lambda = 1.0;
  std::vector<double> z;  // z[k-1] = z_k, k = 1..k_max
  std::vector<double> t;  // cutoffs t_k in [0,1]
  std::vector<bool> clamped;
};

// sum_{j=2}^k (z^j - 1)/j - 1; its root is the unclamped z_k.
double ladder_residual(Index k, double z);

// Unclamped roots for k = 2..k_max (index k-2). They do not depend on lambda,
// so sweeps compute them once.
std::vector<double> compute_unclamped_roots(Index k_max);

BoundaryLadder rect_roots(Index k_max, double lambda = 1.0);
BoundaryLadder rect_roots(Index k_max, double lambda, std::span<const double> unclamped);

struct LimitResult {
  Decomposition value;
  double truncation_error = 0.0;
  Index terms = 0;
};

// Smallest series length with e^{-lambda K}(e^lambda - 1) < 1e-13.
Index rect_limit_terms(double lambda);

// Jump/drift series of the lambda-intensity rectangular limit. k_max = 0
// picks rect_limit_terms(lambda); a smaller explicit k_max throws
// PrecisionError carrying the required length. At lambda = 1 the jump uses
// the single-sum form.
LimitResult rect_limit(double lambda, Index k_max = 0);
LimitResult rect_limit(double lambda, Index k_max, std::span<const double> unclamped);

// lambda = 1 alternatives: the double-sum jump series and the closed-form total.
double rect_limit_jump_double_sum(Index k_max);
double rect_limit_total_closed_form(Index k_max);

// Jump and drift terms for arbitrary nondecreasing cutoffs t_1, t_2, ...;
// cutoffs past the input are taken as 1.
Decomposition rect_general_boundary(std::span<const double> t);

struct BestCutoff {
  double t2 = 0.0;
  double value = 0.0;
};
// Best t_2 with t_1 = 0 and t_k = 1 for k >= 3.
BestCutoff best_t2();

}  // namespace stoprule::poisson
