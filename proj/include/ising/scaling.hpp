#pragma once

#include <string>
#include <vector>

#include "ising/common.hpp"
#include "ising/oracle.hpp"

namespace ising {

// (2 / (pi (sqrt2 - 1)))^2, the quoted isotropic amplitude of the rescaled boundary two-point function.
double quoted_isotropic_amplitude();

struct DecayFit {
    std::vector<int> separations;
    std::vector<double> values;
    std::vector<double> weights;
    double exponent = 0;
    double amplitude = 0;
    double r_squared = 0;
    // the same fit against the chord length (L / pi) sin(pi x / L) of the periodic cylinder
    double chord_exponent = 0;
    double chord_amplitude = 0;
    double chord_r_squared = 0;
};

// Weighted least squares of log v against log x.
void fit_power_law(const std::vector<double>& x, const std::vector<double>& v, const std::vector<double>& w,
                   double& exponent, double& amplitude, double& r_squared);

// <sigma_(0,1) sigma_(x,1)> on a critical cylinder for each x, fitted on log-log data with the two
// largest separations weighted double. Throws FitRejected when r^2 < r2_min.
DecayFit two_point_decay(const LatticeSpec& spec, const std::vector<int>& separations, double r2_min = 0.999);

// Lower-boundary two-point values on a large critical cylinder from the translation-invariant
// engine (only the requested displacements are assembled).
std::vector<double> boundary_two_point(const LatticeSpec& spec, const std::vector<int>& separations);

// Writes `csv_path` (comment lines with the fit metadata, then `separation,value,fit_value`) and a
// gnuplot script next to it that reads only the CSV. Returns the script path.
std::string emit_plot_data(const DecayFit& fit, const std::string& csv_path);

struct SizeLadder {
    std::vector<int> L;
    std::vector<int> separation;
    std::vector<double> rescaled;     // separation * <sigma sigma> (a^{-1} with a = 1 / separation)
    std::vector<double> differences;  // |rescaled[i+1] - rescaled[i]|
    bool cauchy = false;              // differences strictly decreasing
};
// L = M for each entry, separation L / divisor.
SizeLadder rescaled_ladder(const std::vector<int>& Ls, int divisor, double t1 = 0);

struct LimitCheck {
    std::vector<double> a;
    std::vector<int> L;
    std::vector<double> value;           // a^{-m/2} <sigma ... sigma>
    std::vector<double> reference;       // Pf(M_s.l.) with the given amplitude
    std::vector<double> residual;        // |value - reference|
    std::vector<double> wick_residual;   // finite-volume |<sigma...sigma> - Pf[<sigma sigma>]|
    std::vector<double> residual_ratio;  // residual[i+1] / residual[i]
};
// Continuum positions ys on the lower boundary; a = 1 / inv_a realized by L = M = size_factor * inv_a.
// The Wick residual is evaluated on L = M = wick_factor * inv_a by independent routes.
LimitCheck pfaffian_limit_check(const std::vector<double>& ys, const std::vector<int>& inv_a, double amplitude,
                                int size_factor = 64, int wick_factor = 8);

struct ProbeRow {
    double lambda = 0;
    double beta = 0;         // beta_c(lambda) at first order
    double value = 0;        // <sigma sigma> at (lambda, beta_c(lambda))
    double ratio = 0;        // value / value at lambda = 0
    double predicted = 0;    // 1 + 2 Zspin1 lambda
};
struct ProbeTable {
    LatticeSpec spec;
    BoundaryTuple tuple;
    std::vector<ProbeRow> rows;
    double first_difference = 0;   // (r(l) - r(-l)) / 2 at the largest symmetric l
    double second_difference = 0;  // r(l) - 2 r(0) + r(-l)
    bool smooth = false;           // |second| <= 0.2 |first|
};
// beta_c(lambda) = beta0 + beta1 lambda; spins use t1 = t2 = tanh(beta_c).
ProbeTable universality_probe(const InteractionSpec& inter, const std::vector<double>& lambdas, int L, int M,
                              double beta1, double zspin1);

}  // namespace ising
