#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ising {

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

// Integral of f over [a, b] with n-point Gauss-Legendre.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

// Integral over [0, pi] with panels graded geometrically towards 0 and subdivided for
// oscillation frequency `freq`.
double graded_integrate_0pi(const std::function<double(double)>& f, double freq, int n = 20, int levels = 45);

// exp(-a D) - exp(-b D) over D, the closed-form eta integral of exp(-eta D); b may be +inf.
double eta_weight_closed(double D, double a, double b);

// The same integral by composite Gauss-Legendre in eta, with panels sized so that the
// exponential varies by at most a fixed factor per panel.
double eta_weight_gl(double D, double a, double b, int n);

}  // namespace ising
