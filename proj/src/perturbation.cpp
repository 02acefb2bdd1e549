#include "ising/perturbation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "ising/quadrature.hpp"

namespace ising {

double alpha0() { return 2 * (sqrt2() - 1) * (sqrt2() - 1) * beta0(); }
double t0() { return sqrt2() - 1; }

ClosedForms closed_forms() {
    const double r2 = sqrt2(), b0 = beta0(), pi = M_PI;
    ClosedForms c;
    c.d0 = -r2 / 2 - 1 / pi;
    c.d1 = -1 - r2 / 2 + (r2 + 1) * (r2 + 1) / pi;
    c.two_nu1 = -(8 / pi) * (2 - r2) * b0;
    c.eta1 = -2 * (r2 - 1 + 2 * (3 - 2 * r2) / pi) * b0;
    c.Z1 = (2 - r2) * (2 - 4 / pi) * b0;
    c.beta1 = -2 * r2 / pi * b0;
    c.tau1 = -2 * r2 * (r2 - 1) * b0;
    c.edge_derivative = (r2 + 1) * (r2 + 1) / 4 * (r2 - 4 / pi);
    c.questa = (r2 + 1) / 4;
    c.Bspin1 = b0 * (5 - r2 - 4 * (r2 + 1) / pi);
    c.Zspin1 = 3 * b0 * (1 - 2 * r2 / pi);
    c.row_sum = r2 + 1;
    return c;
}

namespace {

// (1/2pi) \int_{-pi}^{pi} dk f(u) with u = 1 - cos k, for even integrands
double even_k_integral(const std::function<double(double)>& f) {
    auto g = [&](double k) {
        double h = std::sin(0.5 * k);
        return f(2 * h * h);
    };
    return graded_integrate_0pi(g, 1.0, 20) / M_PI;
}

double root_factor(double u) { return std::sqrt(u * (2 + u)); }

struct GCache {
    std::vector<double> g;  // G(0, n)
    double operator()(long n) {
        n = std::labs(n);
        while (static_cast<long>(g.size()) <= n) g.push_back(critical_G(0, static_cast<long>(g.size())));
        return g[n];
    }
};

SeriesLimit richardson_limit(const std::vector<double>& terms) {
    SeriesLimit s;
    const long n = static_cast<long>(terms.size());
    if (n < 8) throw Error("InvalidArgument", "series needs at least 8 terms");
    std::vector<double> partial(n + 1, 0.0);
    double cs = 0;
    for (long i = 0; i < n; ++i) {
        partial[i + 1] = partial[i] + terms[i];
        cs += partial[i + 1];
    }
    auto rich = [&](long a) { return partial[2 * a] + (partial[2 * a] - partial[a]) / 3; };
    double r_hi = rich(n / 2), r_lo = rich(n / 4);
    s.value = r_hi;
    s.partial = partial[n];
    s.tail = std::abs(r_hi - partial[n]);
    s.error = std::abs(r_hi - r_lo);
    s.cesaro = cs / static_cast<double>(n);
    s.terms = n;
    return s;
}

}  // namespace

FirstOrderCouplings first_order_couplings(const QuadratureGrid& grid) {
    grid.validate();
    const double r2 = sqrt2(), a0 = alpha0();
    const ClosedForms cf = closed_forms();
    FirstOrderCouplings r;

    const double G0 = critical_G(0, 0), G1 = critical_G(0, 1), G2 = critical_G(0, 2);
    r.d0 = G1 - G0;
    r.d1 = G2 - G1;

    r.d0_1d = 0.5 - (r2 + 1) / 2 * even_k_integral([&](double u) {
                  return (r2 * u * u + u * (2 - u)) / root_factor(u);
              });
    r.d1_1d = -0.5 + (r2 + 1) / 2 * even_k_integral([&](double u) {
                  return (r2 * u * u - u * (2 - u)) / root_factor(u);
              });

    const Point z2{0, 2}, z3{0, 3}, z4{0, 4};
    auto full = std::vector<Weighting>{Weighting::full()};
    Mat2 g22 = propagator_2d(z2, z2, t0(), full, grid)[0].bulk;
    Mat2 g32 = propagator_2d(z3, z2, t0(), full, grid)[0].bulk;
    Mat2 g42 = propagator_2d(z4, z2, t0(), full, grid)[0].bulk;
    r.d0_2d = std::real(g32(1, 0) - g22(1, 0));
    r.d1_2d = std::real(g42(1, 0) - g32(1, 0));

    r.two_nu1 = 2 * a0 * (-1 + r.d0 - r.d1);
    r.nu1 = r.two_nu1 / 2;
    r.eta1 = a0 * (-1 + 2 * r.d0);
    // the only first-order contraction feeding W_{--} is g_{++} at vertical separation, whose k1-moment vanishes
    r.zeta1 = 2 * a0 * std::real(g32(0, 0));

    r.residuals["d0"] = std::abs(r.d0 - cf.d0);
    r.residuals["d1"] = std::abs(r.d1 - cf.d1);
    r.residuals["d0_1d"] = std::abs(r.d0_1d - cf.d0);
    r.residuals["d1_1d"] = std::abs(r.d1_1d - cf.d1);
    r.residuals["d0_2d"] = std::abs(r.d0_2d - cf.d0);
    r.residuals["d1_2d"] = std::abs(r.d1_2d - cf.d1);
    r.residuals["two_nu1"] = std::abs(r.two_nu1 - cf.two_nu1);
    r.residuals["eta1"] = std::abs(r.eta1 - cf.eta1);
    r.residuals["zeta1"] = std::abs(r.zeta1);
    for (const auto& [k, v] : r.residuals)
        if (!std::isfinite(v)) throw Error("QuadratureNotConverged", "non-finite value for " + k);
    return r;
}

double DressedParameters::betac(double lambda) const { return beta0() + beta1 * lambda; }
double DressedParameters::t1star(double lambda) const { return t0() + tau1 * lambda; }

DressedParameters dressed_parameters(double two_nu1, double eta1, double zeta1) {
    const double t = t0(), c = 1 - t * t;
    const double s0 = (1 - t) / (1 + t), ds = -2 / ((1 + t) * (1 + t));
    const double f = 2 * t / ((1 + t) * (1 + t)), df = 2 * (1 - t) / std::pow(1 + t, 3);
    // unknowns (Z1, beta1, tau1); t = tanh(beta_c), t2* = (1 - t1*) / (1 + t1*), b_t(0) = t2*(t)
    Eigen::Matrix3d A;
    A << s0 - t, c - ds * c, ds - ds,
         -t, c, -ds,
         -f, df * c, -df;
    Eigen::Vector3d rhs(two_nu1, 2 * eta1, zeta1);
    Eigen::Vector3d x = A.fullPivLu().solve(rhs);
    DressedParameters d;
    d.Z1 = x(0);
    d.beta1 = x(1);
    d.tau1 = x(2);
    d.identity_residual = 2 * (sqrt2() - 1) * d.beta1 - d.tau1 - d.Z1;
    return d;
}

BspinReport bspin_first_order(const QuadratureGrid& grid, long n_terms, double tail_tol) {
    grid.validate();
    if (n_terms < 16) throw Error("InvalidArgument", "n_terms must be at least 16");
    const double r2 = sqrt2(), a0 = alpha0();
    const ClosedForms cf = closed_forms();
    BspinReport r;
    GCache G;

    // d_{1,2} g_E((0,z2),(0,z2)) and d_{1,2} g_E((0,z2),(0,z2-1)), with g_E,-+ (z,z') = -G(dx, z2 + z2')
    auto dE_diag = [&](long z2) { return -G(2 * z2 + 1) + G(2 * z2); };
    auto dE_off = [&](long z2) { return -G(2 * z2) + G(2 * z2 - 1); };

    r.edge_literal = dE_diag(1);
    r.edge_reduced = (r2 + 1) / 2 * even_k_integral([&](double u) {
                         return (r2 * u * (1 - u) + u * (2 - u)) / root_factor(u);
                     });
    r.questa_reduced = (r2 + 1) / 2 * even_k_integral([&](double u) { return std::sqrt(u / (2 + u)); });

    std::vector<double> questa(n_terms), raw(n_terms), unshifted(n_terms);
    std::vector<double> S(n_terms + 1, 0.0);
    const double two_nu1 = 2 * a0 * (-1 + (G(1) - G(0)) - (G(2) - G(1)));
    const double d0 = G(1) - G(0), d1 = G(2) - G(1);
    for (long z2 = 1; z2 <= n_terms; ++z2) {
        S[z2] = half_plane_row_sum(z2);
        r.row_sum_max_dev = std::max(r.row_sum_max_dev, std::abs(S[z2] - cf.row_sum));
        questa[z2 - 1] = -dE_diag(z2) + dE_off(z2);
        raw[z2 - 1] = 2 * a0 * (-S[z2 - 1] * dE_diag(z2) + S[z2] * dE_off(z2));
        unshifted[z2 - 1] = (two_nu1 + 2 * a0) * S[z2] +
                            2 * a0 * (-S[z2 - 1] * (d0 + dE_diag(z2)) + S[z2] * (d1 + dE_off(z2)));
    }
    raw[0] -= a0 * S[1];
    unshifted[0] -= a0 * S[1];

    r.questa_literal = richardson_limit(questa);
    SeriesLimit raw_lim = richardson_limit(raw), un_lim = richardson_limit(unshifted);
    double err = std::max({r.questa_literal.error, raw_lim.error, un_lim.error});
    if (err > tail_tol) {
        std::ostringstream msg;
        msg << "z2 series extrapolation spread " << err << " exceeds " << tail_tol << " at " << n_terms << " terms";
        throw Error("SumNotConverged", msg.str());
    }

    r.bracket_literal = -0.5 + r.edge_literal + r.questa_literal.value;
    r.bracket_reduced = -0.5 + r.edge_reduced + r.questa_reduced;
    r.bspin_raw = raw_lim.value;
    r.bspin_bracket = 2 * a0 * (r2 + 1) * r.bracket_literal;
    r.bspin_reduced = 2 * a0 * (r2 + 1) * r.bracket_reduced;
    r.bspin_unshifted = un_lim.value;

    r.residuals["edge_derivative"] = std::abs(r.edge_literal - cf.edge_derivative);
    r.residuals["edge_reduced_integral"] = std::abs(r.edge_reduced - cf.edge_derivative);
    r.residuals["questa"] = std::abs(r.questa_literal.value - cf.questa);
    r.residuals["questa_reduced_integral"] = std::abs(r.questa_reduced - cf.questa);
    r.residuals["row_sum"] = r.row_sum_max_dev;
    r.residuals["bspin"] = std::abs(r.bspin_raw - cf.Bspin1);
    r.residuals["bspin_routes"] = std::abs(r.bspin_raw - r.bspin_bracket);
    r.residuals["bspin_reduced"] = std::abs(r.bspin_reduced - cf.Bspin1);
    r.residuals["series_extrapolation"] = err;
    for (const auto& [k, v] : r.residuals)
        if (!std::isfinite(v)) throw Error("QuadratureNotConverged", "non-finite value for " + k);
    return r;
}

namespace {

struct Slot {
    int x, y;
    Kind k;
    bool boundary;  // the lower-boundary V variable at row 1
};

struct Contractions {
    const CylinderGreen& g;

    double C(const Slot& i, const Slot& j) const {
        if (i.boundary && j.boundary) return g.column(i.x - j.x, 1, V);
        if (j.boundary) return g.column(i.x - j.x, i.y, i.k);
        if (i.boundary) return -g.column(j.x - i.x, j.y, j.k);
        return g.local(i.x - j.x, i.y, i.k, j.y, j.k);
    }

    // Pf of -C restricted to the ordered slots
    double pf(std::initializer_list<Slot> slots) const {
        std::vector<Slot> I(slots);
        const int n = static_cast<int>(I.size());
        double K[6][6] = {};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) K[a][b] = a == b ? 0 : -C(I[a], I[b]);
        if (n == 2) return K[0][1];
        auto pf4 = [&](int a, int b, int c, int d) { return K[a][b] * K[c][d] - K[a][c] * K[b][d] + K[a][d] * K[b][c]; };
        if (n == 4) return pf4(0, 1, 2, 3);
        return K[0][1] * pf4(2, 3, 4, 5) - K[0][2] * pf4(1, 3, 4, 5) + K[0][3] * pf4(1, 2, 4, 5) -
               K[0][4] * pf4(1, 2, 3, 5) + K[0][5] * pf4(1, 2, 3, 4);
    }
};

}  // namespace

LatticeResponse zspin_lattice_response(const CylinderGreen& g, int X, const DressedParameters& dp) {
    const LatticeSpec& s = g.spec();
    if (X < 1 || X >= s.L) throw Error("InvalidArgument", "separation out of range");
    if (std::abs(s.t1 - t0()) > 1e-12 || std::abs(s.t2 - t0()) > 1e-12)
        throw Error("InvalidSpec", "the first-order response is taken at the isotropic critical point");
    Contractions A{g};
    const Slot p{X, 1, V, true}, q{0, 1, V, true};
    const double t = s.t2, c = 1 - t * t;
    LatticeResponse r;
    r.X = X;
    r.f = A.pf({p, q});
    double Sh = 0, Sv = 0, inter = 0;
    for (int x = 0; x < s.L; ++x)
        for (int y = 1; y <= s.M; ++y) {
            Slot hp{x, y, HB, false}, hq{x + 1, y, H, false};
            Sh += A.pf({p, q, hp, hq}) - r.f * A.pf({hp, hq});
            if (y < s.M) {
                Slot vp{x, y, VB, false}, vq{x, y + 1, V, false};
                Sv += A.pf({p, q, vp, vq}) - r.f * A.pf({vp, vq});
            }
            if (y >= 2 && y < s.M) {
                Slot p1{x, y - 1, VB, false}, q1{x, y, V, false}, p2{x, y, VB, false}, q2{x, y + 1, V, false};
                double c1 = A.pf({p1, q1}), c2 = A.pf({p2, q2}), c12 = A.pf({p1, q1, p2, q2});
                double ca1 = A.pf({p, q, p1, q1}), ca2 = A.pf({p, q, p2, q2}), ca12 = A.pf({p, q, p1, q1, p2, q2});
                inter += t * c * (ca1 + ca2 - r.f * (c1 + c2)) + c * c * (ca12 - r.f * c12);
            }
        }
    r.d_lambda = beta0() * inter;
    r.d_beta = c * (Sh + Sv);
    r.d_t1 = Sh - Sv;
    r.zspin1 = (r.d_lambda + dp.beta1 * r.d_beta - dp.tau1 * r.d_t1) / (2 * r.f);
    return r;
}

std::vector<LatticeResponse> zspin_lattice_response(int N, const std::vector<int>& separations,
                                                    const DressedParameters& dp) {
    if (N < 4) throw Error("InvalidArgument", "lattice size must be at least 4");
    CylinderGreen g(LatticeSpec::isotropic_critical(N, N), grassmann_bc_for(BC::Periodic));
    std::vector<LatticeResponse> out;
    for (int X : separations) out.push_back(zspin_lattice_response(g, X, dp));
    return out;
}

LatticeEstimate zspin_lattice_estimate(int N, const std::vector<int>& separations, const DressedParameters& dp) {
    LatticeEstimate e;
    e.ladder = zspin_lattice_response(N, separations, dp);
    const size_t n = e.ladder.size();
    if (n == 0) throw Error("InvalidArgument", "no separations");
    e.extrapolated = e.ladder.back().zspin1;
    if (n >= 3) {
        double a = e.ladder[n - 2].zspin1 - e.ladder[n - 3].zspin1;
        double b = e.ladder[n - 1].zspin1 - e.ladder[n - 2].zspin1;
        if (a != 0) {
            e.rate = b / a;
            if (std::abs(e.rate) < 1) e.extrapolated += b * e.rate / (1 - e.rate);
        }
    }
    return e;
}

std::vector<RunningCoupling> zspin_running(const LatticeEstimate& est) {
    std::vector<RunningCoupling> out;
    for (const auto& r : est.ladder) {
        int h = -static_cast<int>(std::lround(std::log2(static_cast<double>(r.X))));
        out.push_back({"Zspin", h, r.zspin1});
    }
    return out;
}

FirstOrderReport zspin_first_order(const QuadratureGrid& grid, long n_terms, int lattice_N) {
    FirstOrderReport rep;
    rep.closed = closed_forms();
    rep.couplings = first_order_couplings(grid);
    rep.dressed = dressed_parameters(rep.couplings.two_nu1, rep.couplings.eta1, rep.couplings.zeta1);
    rep.bspin = bspin_first_order(grid, n_terms);

    rep.nu1 = rep.couplings.nu1;
    rep.two_nu1 = rep.couplings.two_nu1;
    rep.zeta1 = rep.couplings.zeta1;
    rep.eta1 = rep.couplings.eta1;
    rep.Z1 = rep.dressed.Z1;
    rep.beta1 = rep.dressed.beta1;
    rep.tau1 = rep.dressed.tau1;
    rep.Bspin1 = rep.bspin.bspin_raw;
    rep.Zspin1 = -rep.Z1 / 2 + rep.Bspin1;
    rep.Zspin1_reduced = -rep.Z1 / 2 + rep.bspin.bspin_reduced;

    rep.residuals = rep.couplings.residuals;
    for (const auto& [k, v] : rep.bspin.residuals) rep.residuals[k] = v;
    const ClosedForms& cf = rep.closed;
    rep.residuals["Z1"] = std::abs(rep.Z1 - cf.Z1);
    rep.residuals["beta1"] = std::abs(rep.beta1 - cf.beta1);
    rep.residuals["tau1"] = std::abs(rep.tau1 - cf.tau1);
    rep.residuals["identity"] = std::abs(rep.dressed.identity_residual);
    rep.residuals["zspin"] = std::abs(rep.Zspin1 - cf.Zspin1);
    rep.residuals["zspin_reduced"] = std::abs(rep.Zspin1_reduced - cf.Zspin1);
    rep.residuals["zspin_closed_structure"] = std::abs(-cf.Z1 / 2 + cf.Bspin1 - cf.Zspin1);

    if (lattice_N > 0) {
        std::vector<int> seps;
        for (int X = 8; 4 * X <= lattice_N; X *= 2) seps.push_back(X);
        if (seps.empty()) throw Error("InvalidArgument", "lattice check needs N >= 32");
        rep.has_lattice = true;
        rep.lattice = zspin_lattice_estimate(lattice_N, seps, rep.dressed);
        rep.ladder = zspin_running(rep.lattice);
        rep.residuals["zspin_lattice"] = std::abs(rep.Zspin1 - rep.lattice.extrapolated);
    }
    return rep;
}

}  // namespace ising
