#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ising/common.hpp"

namespace ising {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;  // rows/cols ordered (+, -)

struct Point {
    long x = 0;
    long y = 0;
};

enum class PropKind { Massive, CutoffEta, Scale, ScaleLE, Infinite, Edge, FullCritical };
const char* prop_kind_name(PropKind k);
PropKind parse_prop_kind(const std::string& s);

// n_k: trapezoid points for the 1D massive integral. The 2D integrals use Gauss-Legendre
// squares on dyadic annuli around k = 0: k_order points per axis, k_levels annuli.
struct QuadratureGrid {
    int n_k = 2048;
    int eta_nodes = 32;
    int k_order = 16;
    int k_levels = 40;
    bool self_check = false;
    double tol = 1e-8;

    void validate() const;
    QuadratureGrid refined() const;
};

struct PropagatorSample {
    Point z, zp;
    PropKind kind = PropKind::FullCritical;
    double eta = 0;
    int h = 0;
    Mat2 value = Mat2::Zero();
    double error_estimate = 0;
    double max_imag = 0;
};

// Max norm over the matrix entries.
double max_norm(const Mat2& m);

Mat2 massive_propagator(long dx, double t1s, const QuadratureGrid& grid = {});
Mat2 massive_propagator_series(long dx, double t1s);

// Ranges of the heat-kernel parameter.
struct EtaBand {
    double a = 0;
    double b = 0;  // may be +infinity
};
EtaBand scale_band(int h);     // h = 0: [0,1]; h < 0: [2^{-2h-2}, 2^{-2h}]
EtaBand scale_le_band(int h);  // [2^{-2h-2}, inf)

enum class EtaMethod { GaussLegendre, ClosedForm };

struct Weighting {
    enum Type { Point, Band, Full } type = Full;
    double a = 0, b = 0;  // Point: eta = a
    EtaMethod method = EtaMethod::GaussLegendre;

    static Weighting point(double eta) { return {Point, eta, eta, EtaMethod::GaussLegendre}; }
    static Weighting band(EtaBand r, EtaMethod m = EtaMethod::GaussLegendre) { return {Band, r.a, r.b, m}; }
    static Weighting full() { return {Full, 0, 0, EtaMethod::ClosedForm}; }
};

struct SplitValue {
    Mat2 bulk = Mat2::Zero();
    Mat2 edge = Mat2::Zero();
    Mat2 total() const { return bulk + edge; }
};

// One pass over the momentum nodes, accumulating the bulk and image terms for every weighting.
std::vector<SplitValue> propagator_2d(Point z, Point zp, double t1s, const std::vector<Weighting>& ws,
                                      const QuadratureGrid& grid = {});

Mat2 cutoff_propagator(Point z, Point zp, double eta, double t1s, const QuadratureGrid& grid = {});
Mat2 scale_propagator(Point z, Point zp, int h, double t1s, const QuadratureGrid& grid = {},
                      EtaMethod m = EtaMethod::GaussLegendre);
Mat2 scale_le_propagator(Point z, Point zp, int h, double t1s, const QuadratureGrid& grid = {},
                         EtaMethod m = EtaMethod::GaussLegendre);
std::pair<Mat2, Mat2> bulk_edge_split(Point z, Point zp, int h, double t1s, const QuadratureGrid& grid = {});
Mat2 full_critical_propagator(Point z, Point zp, double t1s, const QuadratureGrid& grid = {});

// Evaluates a sample, with a refined-grid self-convergence estimate when grid.self_check is set.
PropagatorSample evaluate(PropKind kind, Point z, Point zp, double t1s, int h, double eta,
                          const QuadratureGrid& grid = {});

// Isotropic critical kernel after the k1 integration:
// G(x, y) = g_{inf,-+}((x, y), (0, 0)).
double critical_G(long x, long y);
double g_inf_mp(Point z, Point zp);
double g_half_mp(Point z, Point zp);
double g_edge_mp(Point z, Point zp);

// Sum over z1 in [-N, N] of g_{H,-+}((0,1),(z1,z2)); N < 0 sums over all of Z.
double half_plane_row_sum(long z2, long N = -1);

struct BoundFit {
    std::vector<int> h;
    std::vector<double> norm;
    std::vector<double> ratio;  // norm / 2^h
    double C = 0;               // max ratio
    double spread = 0;          // max ratio / min ratio
};
BoundFit coincident_bound_fit(const std::vector<int>& hs, Point z, double t1s, const QuadratureGrid& grid = {},
                              bool bulk_only = false);

struct DecayFit1 {
    int h = 0;
    std::vector<long> distance;
    std::vector<double> norm;
    double slope = 0;  // of log norm against distance
    double c0 = 0;     // -slope / 2^h
    double suppression = 0;  // norm at distance 2^{-h+2} over norm at distance 0
};
// Separations along the first axis from z = (0, y) with y large enough to suppress the edge.
DecayFit1 decay_fit(int h, double t1s, const QuadratureGrid& grid = {}, long y = 0);

}  // namespace ising
