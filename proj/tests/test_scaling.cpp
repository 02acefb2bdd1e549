#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "ising/correlations.hpp"
#include "ising/perturbation.hpp"
#include "ising/scaling.hpp"

using namespace ising;

TEST_CASE("power-law fit recovers synthetic data") {
    std::vector<double> x{2, 4, 8, 16}, v, w{1, 1, 2, 2};
    for (double xi : x) v.push_back(3 * std::pow(xi, -1.5));
    double e, a, r2;
    fit_power_law(x, v, w, e, a, r2);
    CHECK(e == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(a == doctest::Approx(3).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(1).epsilon(1e-12));
    CHECK_THROWS_AS(fit_power_law({1}, {1}, {1}, e, a, r2), Error);
    CHECK_THROWS_AS(fit_power_law({1, 2}, {1, -1}, {1, 1}, e, a, r2), Error);
}

TEST_CASE("Fourier-route two-point functions match the sparse engine") {
    LatticeSpec s = LatticeSpec::critical_t1(24, 10, 0.5);
    CorrelationEngine eng(s);
    std::vector<int> seps{1, 3, 6};
    auto v = boundary_two_point(s, seps);
    for (size_t i = 0; i < seps.size(); ++i)
        CHECK(v[i] == doctest::Approx(eng.correlate({{0, Side::Lower}, {seps[i], Side::Lower}}).value).epsilon(1e-11));
    CHECK_THROWS_AS(boundary_two_point(s.with_tau(BC::Antiperiodic), seps), Error);
}

TEST_CASE("two-point decay on a critical cylinder") {
    auto f = two_point_decay(LatticeSpec::isotropic_critical(64, 64), {4, 6, 8, 12, 16}, 0.99);
    CHECK(f.weights == std::vector<double>{1, 1, 1, 2, 2});
    CHECK(f.exponent < -0.85);
    CHECK(f.exponent > -1.0);
    CHECK(f.chord_exponent == doctest::Approx(-1).epsilon(0.03));
    CHECK_THROWS_AS(two_point_decay(LatticeSpec::isotropic_critical(32, 32), {4, 9}), Error);
    CHECK_THROWS_AS(two_point_decay(LatticeSpec{32, 32, 0.3, 0.3}, {4}), Error);
}

TEST_CASE("plot data") {
    auto f = two_point_decay(LatticeSpec::isotropic_critical(40, 40), {2, 4, 6, 8, 10}, 0.9);
    auto dir = std::filesystem::temp_directory_path() / "ising_plot_test";
    std::filesystem::create_directories(dir);
    std::string csv = (dir / "decay.csv").string();
    std::string gp = emit_plot_data(f, csv);
    std::ifstream in(csv);
    std::string line;
    int rows = 0;
    bool header = false, comment = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) comment = comment || line.find("r_squared=") != std::string::npos;
        else if (line == "separation,value,fit_value") header = true;
        else ++rows;
    }
    CHECK(comment);
    CHECK(header);
    CHECK(rows == 5);
    CHECK(std::filesystem::exists(gp));
    DecayFit empty;
    CHECK_THROWS_AS(emit_plot_data(empty, csv), Error);
    CHECK_THROWS_AS(emit_plot_data(f, "/nonexistent-dir/x.csv"), Error);
}

TEST_CASE("rescaled ladder is Cauchy") {
    auto l = rescaled_ladder({16, 32, 64}, 8);
    CHECK(l.separation == std::vector<int>{2, 4, 8});
    CHECK(l.cauchy);
}

TEST_CASE("limit check: Wick structure and degenerate tuples") {
    auto c = pfaffian_limit_check({0, 0.5, 1.25, 2}, {8}, quoted_isotropic_amplitude(), 16, 8);
    REQUIRE(c.wick_residual.size() == 1);
    CHECK(c.wick_residual[0] <= 1e-9);
    CHECK_THROWS_AS(pfaffian_limit_check({0, 0}, {8}, 1.0), Error);
    CHECK_THROWS_AS(pfaffian_limit_check({0, 0.01}, {8}, 1.0), Error);
    CHECK_THROWS_AS(pfaffian_limit_check({0, 1, 2}, {8}, 1.0), Error);
}

TEST_CASE("universality probe") {
    ClosedForms cf = closed_forms();
    auto t = universality_probe(InteractionSpec::appB(0), {-0.05, 0.05}, 4, 5, cf.beta1, -0.58);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[1].lambda == 0);
    CHECK(t.rows[1].ratio == 1.0);
    CHECK(t.rows[1].beta == beta0());
    CHECK(t.smooth);
    CHECK_THROWS_AS(universality_probe(InteractionSpec::appB(0), {0.01}, 5, 5, cf.beta1, 0), Error);
}
