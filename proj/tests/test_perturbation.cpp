#include <cmath>

#include "doctest.h"
#include "ising/oracle.hpp"
#include "ising/perturbation.hpp"

using namespace ising;

TEST_CASE("closed forms are mutually consistent") {
    ClosedForms c = closed_forms();
    const double r2 = sqrt2(), b0 = beta0();
    CHECK(c.Z1 == doctest::Approx(2 * r2 * (r2 - 1) * (1 - 2 / M_PI) * b0).epsilon(1e-14));
    CHECK(std::abs(-c.Z1 / 2 + c.Bspin1 - c.Zspin1) < 1e-12);
    CHECK(std::abs(2 * (r2 - 1) * c.beta1 - c.tau1 - c.Z1) < 1e-12);
    CHECK(c.two_nu1 == doctest::Approx(2 * alpha0() * (-1 + c.d0 - c.d1)).epsilon(1e-14));
    CHECK(c.eta1 == doctest::Approx(alpha0() * (-1 + 2 * c.d0)).epsilon(1e-14));
}

TEST_CASE("first-order couplings by quadrature") {
    auto r = first_order_couplings();
    ClosedForms c = closed_forms();
    CHECK(std::abs(r.d0 - c.d0) < 1e-8);
    CHECK(std::abs(r.d1 - c.d1) < 1e-8);
    CHECK(std::abs(r.d0_1d - c.d0) < 1e-8);
    CHECK(std::abs(r.d1_1d - c.d1) < 1e-8);
    CHECK(std::abs(r.d0_2d - c.d0) < 1e-8);
    CHECK(std::abs(r.d1_2d - c.d1) < 1e-8);
    CHECK(std::abs(r.two_nu1 - c.two_nu1) < 1e-8);
    CHECK(std::abs(r.eta1 - c.eta1) < 1e-8);
    CHECK(std::abs(r.zeta1) < 1e-9);
    CHECK(r.nu1 == doctest::Approx(r.two_nu1 / 2));
}

TEST_CASE("dressed parameters") {
    ClosedForms c = closed_forms();
    auto d = dressed_parameters(c.two_nu1, c.eta1, 0);
    CHECK(std::abs(d.Z1 - c.Z1) < 1e-12);
    CHECK(std::abs(d.beta1 - c.beta1) < 1e-12);
    CHECK(std::abs(d.tau1 - c.tau1) < 1e-12);
    CHECK(std::abs(d.identity_residual) < 1e-12);
    CHECK(d.beta1 / beta0() == doctest::Approx(-2 * sqrt2() / M_PI));
    CHECK(d.betac(0) == beta0());
    CHECK(d.t1star(0.01) == doctest::Approx((sqrt2() - 1) * (1 - 2 * sqrt2() * beta0() * 0.01)).epsilon(1e-14));
}

TEST_CASE("B_spin: literal sums, reduced integrals, and the two routes") {
    auto b = bspin_first_order({}, 512);
    ClosedForms c = closed_forms();
    const double r2 = sqrt2(), pi = M_PI;
    // the one-dimensional integrals quoted for the edge term and the resummed series
    CHECK(std::abs(b.edge_reduced - c.edge_derivative) < 1e-8);
    CHECK(std::abs(b.questa_reduced - c.questa) < 1e-8);
    CHECK(std::abs(b.bspin_reduced - c.Bspin1) < 1e-8);
    // the quantities themselves, evaluated from their definitions
    const double G2 = -(r2 + 1) * (r2 + 1) / 4 * (r2 - 4 / pi);
    const double G3 = (-18 - 13 * r2 + (56 + 40 * r2) / pi) / 4;
    CHECK(std::abs(b.edge_literal - (G2 - G3)) < 1e-8);
    CHECK(std::abs(b.questa_literal.value - (1 - r2) / 4) < 1e-8);
    CHECK(b.row_sum_max_dev < 1e-10);
    CHECK(std::abs(b.bspin_raw - b.bspin_bracket) < 1e-6);
    CHECK(std::abs(b.bspin_unshifted - (b.bspin_raw + 2 * alpha0() * (r2 + 1) * c.d0)) < 1e-6);
}

TEST_CASE("truncated series that cannot reach the tolerance are rejected") {
    CHECK_THROWS_AS(bspin_first_order({}, 16, 1e-14), Error);
}

TEST_CASE("lattice response matches enumeration on a 6x4 cylinder") {
    LatticeSpec s = LatticeSpec::isotropic_critical(6, 4);
    CylinderGreen g(s, grassmann_bc_for(BC::Periodic));
    DressedParameters dp = dressed_parameters(closed_forms().two_nu1, closed_forms().eta1);
    const int X = 2;
    auto r = zspin_lattice_response(g, X, dp);
    BoundaryTuple tup{{0, Side::Lower}, {X, Side::Lower}};
    const double b0 = beta0();
    CHECK(r.f == doctest::Approx(brute_correlation(s, InteractionSpec::none(), b0, tup)).epsilon(1e-9));
    const double h = 1e-4;
    double dl = (brute_correlation(s, InteractionSpec::appB(h), b0, tup) -
                 brute_correlation(s, InteractionSpec::appB(-h), b0, tup)) / (2 * h);
    CHECK(r.d_lambda == doctest::Approx(dl).epsilon(1e-6));
    LatticeSpec sp = s, sm = s;
    const double hb = 1e-5;
    sp.t1 = sp.t2 = std::tanh(b0 + hb);
    sm.t1 = sm.t2 = std::tanh(b0 - hb);
    double db = (brute_correlation(sp, InteractionSpec::none(), b0, tup) -
                 brute_correlation(sm, InteractionSpec::none(), b0, tup)) / (2 * hb);
    CHECK(r.d_beta == doctest::Approx(db).epsilon(1e-6));
}

TEST_CASE("first-order report and the lattice estimate") {
    auto rep = zspin_first_order({}, 512, 128);
    ClosedForms c = closed_forms();
    CHECK(std::abs(rep.Zspin1 - (-rep.Z1 / 2 + rep.Bspin1)) < 1e-10);
    CHECK(std::abs(rep.zeta1) < 1e-9);
    CHECK(std::abs(rep.Zspin1_reduced - c.Zspin1) < 1e-8);
    REQUIRE(rep.has_lattice);
    CHECK(rep.lattice.ladder.size() == 3);
    CHECK(std::abs(rep.lattice.extrapolated - rep.Zspin1) < 5e-3);
    CHECK(std::abs(rep.lattice.extrapolated - c.Zspin1) > 0.5);
    REQUIRE(rep.ladder.size() == 3);
    CHECK(rep.ladder[0].scale == -3);
    for (size_t i = 2; i < rep.ladder.size(); ++i)
        CHECK(std::abs(rep.ladder[i].value - rep.ladder[i - 1].value) <
              std::abs(rep.ladder[i - 1].value - rep.ladder[i - 2].value));
}
