#pragma once

#include <map>
#include <string>
#include <vector>

#include "ising/cylinder_green.hpp"
#include "ising/propagators.hpp"

namespace ising {

// Constants of the nearest-neighbour vertical four-spin interaction at the isotropic critical point.
double alpha0();
double t0();

// Closed forms (evaluated from primitives).
struct ClosedForms {
    double d0, d1;               // d_{1,2} g_{inf,-+}(z, z) and (z, z - e2)
    double two_nu1, eta1;
    double Z1, beta1, tau1;
    double edge_derivative;      // printed value of d_{1,2} g_{E,-+}((0,1),(0,1))
    double questa;               // printed value of the z2 summation, (sqrt2 + 1) / 4
    double Bspin1, Zspin1;
    double row_sum;              // sqrt2 + 1
};
ClosedForms closed_forms();

struct FirstOrderCouplings {
    double two_nu1 = 0, nu1 = 0, zeta1 = 0, eta1 = 0;
    double d0 = 0, d1 = 0;          // from the k1-integrated kernel
    double d0_1d = 0, d1_1d = 0;    // from the reduced one-dimensional integrals
    double d0_2d = 0, d1_2d = 0;    // from the two-dimensional quadrature
    std::map<std::string, double> residuals;
};
FirstOrderCouplings first_order_couplings(const QuadratureGrid& grid = {});

struct DressedParameters {
    double Z1 = 0, beta1 = 0, tau1 = 0;
    double identity_residual = 0;  // 2(sqrt2 - 1) beta1 - tau1 - Z1
    double betac(double lambda) const;
    double t1star(double lambda) const;
};
// Solves the linearized relations between (2nu1, eta1, zeta1) and (Z, beta_c, t1*) around the
// isotropic critical point.
DressedParameters dressed_parameters(double two_nu1, double eta1, double zeta1 = 0);

struct SeriesLimit {
    double value = 0;       // Richardson-extrapolated limit
    double partial = 0;     // partial sum at the largest cutoff
    double tail = 0;        // |value - partial|
    double error = 0;       // spread of the two extrapolations
    double cesaro = 0;      // Cesaro mean of the partial sums at the largest cutoff
    long terms = 0;
};

struct BspinReport {
    double edge_literal = 0;       // d_{1,2} g_{E,-+}((0,1),(0,1)) from the definition
    double edge_reduced = 0;       // the reduced one-dimensional integral quoted for it
    SeriesLimit questa_literal;    // the z2 summation with its terms evaluated literally
    double questa_reduced = 0;     // the one-dimensional integral after the geometric resummation
    double bracket_literal = 0;    // -1/2 + edge + questa, literal inputs
    double bracket_reduced = 0;
    double bspin_raw = 0;          // raw sums with computed row sums, including the boundary row
    double bspin_bracket = 0;      // reduced bracket with literal inputs
    double bspin_reduced = 0;      // reduced bracket with the reduced integrals
    double bspin_unshifted = 0;    // the sum before the counterterm shift, summed z1 first
    double row_sum_max_dev = 0;    // max over computed z2 of |row sum - (sqrt2 + 1)|
    std::map<std::string, double> residuals;
};
// n_terms: z2 cutoff for the boundary-row series (extrapolated from n/4, n/2, n).
BspinReport bspin_first_order(const QuadratureGrid& grid = {}, long n_terms = 1024, double tail_tol = 1e-8);

struct LatticeResponse {
    int X = 0;
    double f = 0;        // <sigma sigma> at separation X
    double d_lambda = 0; // d/dlambda at fixed beta = beta0
    double d_beta = 0;   // d/dbeta at lambda = 0
    double d_t1 = 0;     // derivative along the critical line in t1
    double zspin1 = 0;
};
// Exact first-order response of the lower-boundary two-point function on an N x N cylinder,
// evaluated from entries of the inverse action. With the dressed couplings beta_c(lambda),
// t1*(lambda), Z_spin^(1) = [d_lambda + beta1 d_beta - tau1 d_t1] / (2 f) as X -> inf.
std::vector<LatticeResponse> zspin_lattice_response(int N, const std::vector<int>& separations,
                                                    const DressedParameters& dp);
LatticeResponse zspin_lattice_response(const CylinderGreen& g, int X, const DressedParameters& dp);

struct LatticeEstimate {
    std::vector<LatticeResponse> ladder;
    double extrapolated = 0;  // geometric extrapolation of the last three entries
    double rate = 0;          // ratio of successive differences
};
LatticeEstimate zspin_lattice_estimate(int N, const std::vector<int>& separations, const DressedParameters& dp);

struct RunningCoupling {
    std::string name;
    int scale = 0;
    double value = 0;
};

struct FirstOrderReport {
    double nu1 = 0, two_nu1 = 0, zeta1 = 0, eta1 = 0;
    double Z1 = 0, beta1 = 0, tau1 = 0;
    double Bspin1 = 0, Zspin1 = 0;
    double Zspin1_reduced = 0;  // -Z1/2 plus the reduced-integral B_spin
    FirstOrderCouplings couplings;
    DressedParameters dressed;
    BspinReport bspin;
    ClosedForms closed;
    std::map<std::string, double> residuals;
    bool has_lattice = false;
    LatticeEstimate lattice;
    std::vector<RunningCoupling> ladder;
};
FirstOrderReport zspin_first_order(const QuadratureGrid& grid = {}, long n_terms = 1024, int lattice_N = 0);

// Running Z_spin on scale h, from the lattice response at separation 2^{-h}.
std::vector<RunningCoupling> zspin_running(const LatticeEstimate& est);

}  // namespace ising
