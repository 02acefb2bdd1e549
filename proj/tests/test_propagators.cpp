#include <cmath>

#include "doctest.h"
#include "ising/perturbation.hpp"
#include "ising/propagators.hpp"
#include "ising/quadrature.hpp"

using namespace ising;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    CHECK(gl_integrate([](double x) { return x * x * x * x; }, 0, 2, 3) == doctest::Approx(32.0 / 5).epsilon(1e-14));
    CHECK(eta_weight_gl(0.7, 0.25, 4.0, 16) == doctest::Approx(eta_weight_closed(0.7, 0.25, 4.0)).epsilon(1e-13));
    CHECK(eta_weight_gl(2.0, 1.0, INFINITY, 16) == doctest::Approx(std::exp(-2.0) / 2).epsilon(1e-13));
}

TEST_CASE("massive propagator: quadrature against the geometric series") {
    for (double t : {0.2, 0.5, 0.8})
        for (long dx : {-5L, -1L, 0L, 1L, 3L, 7L}) {
            Mat2 a = massive_propagator(dx, t), b = massive_propagator_series(dx, t);
            CHECK(max_norm(a - b) < 1e-10);
        }
}

TEST_CASE("kind names round-trip and reject unknown kinds") {
    for (PropKind k : {PropKind::Massive, PropKind::CutoffEta, PropKind::Scale, PropKind::ScaleLE, PropKind::Infinite,
                       PropKind::Edge, PropKind::FullCritical})
        CHECK(parse_prop_kind(prop_kind_name(k)) == k);
    CHECK_THROWS_AS(parse_prop_kind("nope"), Error);
    CHECK_THROWS_AS(full_critical_propagator({0, -1}, {0, 1}, t0()), Error);
}

TEST_CASE("bulk plus edge equals the single-scale propagator") {
    for (int h : {0, -2}) {
        auto [bulk, edge] = bulk_edge_split({1, 2}, {0, 1}, h, t0());
        Mat2 total = scale_propagator({1, 2}, {0, 1}, h, t0());
        CHECK(max_norm(bulk + edge - total) < 1e-12);
    }
}

TEST_CASE("band integrals: Gauss-Legendre against the closed form") {
    Mat2 a = scale_propagator({2, 3}, {0, 1}, -2, t0(), {}, EtaMethod::GaussLegendre);
    Mat2 b = scale_propagator({2, 3}, {0, 1}, -2, t0(), {}, EtaMethod::ClosedForm);
    CHECK(max_norm(a - b) < 1e-10);
}

TEST_CASE("multiscale telescoping reconstructs the full propagator") {
    const int h = -3;
    for (auto [z, zp] : std::vector<std::pair<Point, Point>>{{{2, 2}, {0, 1}}, {{0, 1}, {0, 1}}, {{-3, 4}, {1, 2}}}) {
        std::vector<Weighting> ws{Weighting::band(scale_le_band(h))};
        for (int j = h + 1; j <= 0; ++j) ws.push_back(Weighting::band(scale_band(j)));
        auto parts = propagator_2d(z, zp, t0(), ws);
        Mat2 sum = Mat2::Zero();
        for (const auto& p : parts) sum += p.total();
        QuadratureGrid fine = QuadratureGrid{}.refined();
        Mat2 full = full_critical_propagator(z, zp, t0(), fine);
        CHECK(max_norm(sum - full) < 1e-7);
    }
}

TEST_CASE("cancellation on the fictitious row") {
    for (int h : {0, -1, -3})
        for (long dx : {0L, 2L, -3L})
            for (long y : {1L, 3L}) {
                Mat2 a = scale_propagator({dx, 0}, {0, y}, h, t0());
                CHECK(std::abs(a(0, 0)) < 1e-8);
                CHECK(std::abs(a(0, 1)) < 1e-8);
                Mat2 b = scale_propagator({0, y}, {dx, 0}, h, t0());
                CHECK(std::abs(b(0, 0)) < 1e-8);
                CHECK(std::abs(b(1, 0)) < 1e-8);
            }
}

TEST_CASE("k1-integrated kernel against the two-dimensional quadrature") {
    for (auto [z, zp] : std::vector<std::pair<Point, Point>>{{{0, 2}, {0, 2}}, {{3, 2}, {0, 1}}, {{-1, 5}, {2, 1}}}) {
        Mat2 full = full_critical_propagator(z, zp, t0());
        CHECK(std::real(full(1, 0)) == doctest::Approx(g_half_mp(z, zp)).epsilon(1e-8));
        auto split = propagator_2d(z, zp, t0(), {Weighting::full()})[0];
        CHECK(std::abs(std::real(split.bulk(1, 0)) - g_inf_mp(z, zp)) < 1e-8);
        CHECK(std::abs(std::real(split.edge(1, 0)) - g_edge_mp(z, zp)) < 1e-8);
    }
}

TEST_CASE("row sum of the half-plane propagator") {
    for (long z2 : {1L, 2L, 5L, 12L}) CHECK(half_plane_row_sum(z2) == doctest::Approx(sqrt2() + 1).epsilon(1e-10));
}

TEST_CASE("dimensional bound: coincident-point norm over 2^h stays bounded") {
    for (bool bulk_only : {true, false}) {
        auto fit = coincident_bound_fit({0, -1, -2, -3, -4, -5}, {0, 1}, t0(), {}, bulk_only);
        CHECK(fit.C < 1.0);
        CHECK(fit.ratio.back() < fit.ratio.front());
    }
}

TEST_CASE("single-scale decay along the boundary direction") {
    auto f = decay_fit(-2, t0());
    CHECK(f.slope < 0);
    CHECK(f.suppression < 0.05);
}
