#include "doctest.h"
#include "ising/kasteleyn.hpp"
#include "ising/oracle.hpp"

using namespace ising;

TEST_CASE("infinite temperature") {
    LatticeSpec s{3, 3, 1e-12, 1e-12, BC::Periodic};
    CHECK(brute_partition(s, InteractionSpec::appB(0.3), 0).log_abs == doctest::Approx(9 * std::log(2.0)));
    CHECK(transfer_matrix_partition(s, {}, 0).log_abs == doctest::Approx(9 * std::log(2.0)));
}

TEST_CASE("odd correlations vanish and coincident pairs are rejected") {
    LatticeSpec s{3, 2, 0.4, 0.3, BC::Periodic};
    CHECK(brute_correlation(s, InteractionSpec::appB(0.1), 0.5, {{1, Side::Lower}}) == 0);
    CHECK(brute_correlation(s, {}, 0, {{0, Side::Lower}, {1, Side::Lower}, {2, Side::Upper}}) == 0);
    CHECK_THROWS_AS(brute_correlation(s, {}, 0, {{1, Side::Lower}, {1, Side::Lower}}), Error);
    CHECK_THROWS_AS(brute_partition({5, 5, 0.3, 0.3, BC::Periodic}, {}, 0), Error);
}

TEST_CASE("interaction instances") {
    LatticeSpec s{3, 4, 0.4, 0.3, BC::Periodic};
    auto terms = spin_terms(s, InteractionSpec::appB(0.1), 2.0);
    int inter = 0;
    for (const auto& t : terms)
        if (std::abs(t.coeff - 0.2) < 1e-15) ++inter;
    // anchors on rows 2..M-1
    CHECK(inter == 3 * 2);
    InteractionSpec odd;
    odd.terms.push_back({{{0, 1}}, 1});
    CHECK_THROWS_AS(odd.validate(), Error);
}

TEST_CASE("lambda interaction is positive and seam-even for even L") {
    LatticeSpec s{4, 3, 0.4, 0.4, BC::Periodic};
    auto zp = brute_partition(s, InteractionSpec::appB(0.1), 0.9);
    auto za = brute_partition(s.with_tau(BC::Antiperiodic), InteractionSpec::appB(0.1), 0.9);
    CHECK(std::isfinite(zp.log_abs));
    CHECK(zp.sign == 1);
    CHECK(za.log_abs < zp.log_abs);
    LatticeSpec s3{3, 3, 0.4, 0.4, BC::Periodic};
    CHECK(std::isfinite(brute_partition(s3, InteractionSpec::appB(0.1), 0.9).log_abs));
}

TEST_CASE("correlations are smooth in lambda") {
    LatticeSpec s{3, 4, 0.4, 0.4, BC::Periodic};
    BoundaryTuple t{{0, Side::Lower}, {1, Side::Lower}};
    double cm = brute_correlation(s, InteractionSpec::appB(-0.05), 0.44, t);
    double c0 = brute_correlation(s, InteractionSpec::appB(0.0), 0.44, t);
    double cp = brute_correlation(s, InteractionSpec::appB(0.05), 0.44, t);
    double d1 = (cp - cm) / 0.1, d2 = (cp - 2 * c0 + cm) / 0.0025;
    CHECK(std::isfinite(d1));
    CHECK(std::abs(d2 * 0.05) < std::abs(d1));
}

TEST_CASE("transfer matrix matches enumeration") {
    for (BC tau : {BC::Periodic, BC::Antiperiodic}) {
        LatticeSpec s{2, 2, 0.3, 0.6, tau};
        CHECK(transfer_matrix_partition(s, {}, 0).log_abs == doctest::Approx(brute_partition(s, {}, 0).log_abs).epsilon(1e-12));
        LatticeSpec s2{4, 5, 0.35, 0.45, tau};
        auto in = InteractionSpec::appB(0.07);
        CHECK(transfer_matrix_partition(s2, in, 0.8).log_abs ==
              doctest::Approx(brute_partition(s2, in, 0.8).log_abs).epsilon(1e-12));
        LatticeSpec s1{5, 1, 0.35, 0.45, tau};
        CHECK(transfer_matrix_partition(s1, {}, 0).log_abs == doctest::Approx(brute_partition(s1, {}, 0).log_abs).epsilon(1e-12));
    }
}

TEST_CASE("transfer matrix on a long cylinder matches the Pfaffian") {
    LatticeSpec s{3, 8, 0.3, 0.55, BC::Periodic};
    CHECK(transfer_matrix_partition(s, {}, 0).log_abs == doctest::Approx(partition_function(s).log_abs).epsilon(1e-12));
    CHECK_THROWS_AS(transfer_matrix_partition({13, 2, 0.3, 0.3, BC::Periodic}, {}, 0), Error);
}
