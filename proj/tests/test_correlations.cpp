#include <random>

#include "doctest.h"
#include "ising/correlations.hpp"
#include "ising/oracle.hpp"

using namespace ising;

namespace {

BoundaryTuple random_tuple(int L, int m, bool mixed, std::mt19937& rng) {
    std::vector<BoundarySite> pool;
    for (int x = 0; x < L; ++x) {
        pool.push_back({x, Side::Lower});
        if (mixed) pool.push_back({x, Side::Upper});
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    return BoundaryTuple(pool.begin(), pool.begin() + m);
}

}  // namespace

TEST_CASE("odd and empty tuples") {
    LatticeSpec s{4, 3, 0.3, 0.5, BC::Periodic};
    CHECK(boundary_correlation(s, {{1, Side::Lower}}).value == 0);
    CHECK(boundary_correlation(s, {}).value == 1);
}

TEST_CASE("two-point lower boundary on 4x3") {
    LatticeSpec s{4, 3, 0.33, 0.61, BC::Periodic};
    BoundaryTuple t{{0, Side::Lower}, {2, Side::Lower}};
    CHECK(boundary_correlation(s, t).value == doctest::Approx(brute_correlation(s, {}, 0, t)).epsilon(1e-10));
}

TEST_CASE("mixed boundary with the partition ratio") {
    for (BC tau : {BC::Periodic, BC::Antiperiodic}) {
        LatticeSpec s = LatticeSpec::isotropic_critical(2, 2, tau);
        BoundaryTuple t{{0, Side::Lower}, {1, Side::Upper}};
        CHECK(boundary_correlation(s, t).value == doctest::Approx(brute_correlation(s, {}, 0, t)).epsilon(1e-10));
    }
}

TEST_CASE("random tuples against enumeration") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int L : {2, 3, 4})
        for (int M : {1, 2, 3})
            for (int k = 0; k < 20; ++k) {
                BC tau = k % 2 ? BC::Antiperiodic : BC::Periodic;
                LatticeSpec s{L, M, u(rng), u(rng), tau};
                int maxm = std::min(2 * L, 6);
                int m = 2 * (1 + k % (maxm / 2));
                if (M == 1) m = std::min(m, L);
                if (m % 2) --m;
                BoundaryTuple t = random_tuple(L, m, M > 1, rng);
                CorrelationEngine e(s);
                double v = e.correlate(t).value;
                double o = brute_correlation(s, {}, 0, t);
                CAPTURE(format_tuple(t));
                CAPTURE(L);
                CAPTURE(M);
                CHECK(std::abs(v - o) <= 1e-10 * std::max(1.0, std::abs(o)));
                CHECK(std::abs(v) <= 1 + 1e-12);
            }
}

TEST_CASE("order of the tuple does not matter") {
    LatticeSpec s{6, 3, 0.4, 0.45, BC::Periodic};
    BoundaryTuple t{{5, Side::Lower}, {3, Side::Lower}, {1, Side::Upper}, {4, Side::Upper}};
    BoundaryTuple p{{1, Side::Upper}, {3, Side::Lower}, {4, Side::Upper}, {5, Side::Lower}};
    CHECK(boundary_correlation(s, t).value == doctest::Approx(boundary_correlation(s, p).value).epsilon(1e-13));
}

TEST_CASE("translation and reflection invariance") {
    LatticeSpec s{8, 4, 0.4, 0.45, BC::Periodic};
    BoundaryTuple t{{6, Side::Lower}, {3, Side::Lower}, {2, Side::Lower}, {0, Side::Lower}};
    double v = boundary_correlation(s, t).value;
    for (int shift = 1; shift < 3; ++shift) {
        BoundaryTuple sh = t;
        for (auto& x : sh) x.column = (x.column + shift) % s.L;
        CHECK(boundary_correlation(s, sh).value == doctest::Approx(v).epsilon(1e-12));
    }
    BoundaryTuple r = t;
    for (auto& x : r) x.column = s.L - 1 - x.column;
    CHECK(boundary_correlation(s, r).value == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("factorization residual") {
    CHECK(pfaffian_factorization_residual({8, 4, 0.4, 0.4, BC::Periodic}, {{7, Side::Lower}, {5, Side::Lower}}) == 0);
    LatticeSpec s = LatticeSpec::isotropic_critical(8, 4);
    BoundaryTuple t{{7, Side::Lower}, {5, Side::Lower}, {3, Side::Lower}, {1, Side::Lower}};
    CHECK(pfaffian_factorization_residual(s, t) <= 1e-10);
    CHECK(lower_moment_by_complement(s, t) == doctest::Approx(boundary_correlation(s, t).value).epsilon(1e-10));
    LatticeSpec s12 = LatticeSpec::isotropic_critical(12, 4);
    BoundaryTuple t6{{11, Side::Lower}, {9, Side::Lower}, {6, Side::Lower}, {4, Side::Lower}, {2, Side::Lower}, {1, Side::Lower}};
    CHECK(pfaffian_factorization_residual(s12, t6) <= 1e-9);
    // the complement route against enumeration
    LatticeSpec small{4, 3, 0.3, 0.5, BC::Antiperiodic};
    BoundaryTuple t4{{0, Side::Lower}, {1, Side::Lower}, {2, Side::Lower}, {3, Side::Lower}};
    CHECK(lower_moment_by_complement(small, t4) == doctest::Approx(brute_correlation(small, {}, 0, t4)).epsilon(1e-10));
}

TEST_CASE("fermionic truncation") {
    SubsetMap s2{{{0, 1}, 0.37}};
    CHECK(truncated_correlations(s2, 2).at({0, 1}) == 0.37);

    double g = 0.3;
    SubsetMap w;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) w[{i, j}] = g;
    w[{0, 1, 2, 3}] = g * g * (1 - 1 + 1);
    CHECK(truncated_correlations(w, 4).at({0, 1, 2, 3}) == doctest::Approx(0).scale(1));

    SubsetMap in;
    in[{0, 1}] = 0.5;
    in[{0, 2}] = 0.4;
    in[{0, 3}] = 0.3;
    in[{1, 2}] = 0.6;
    in[{1, 3}] = 0.45;
    in[{2, 3}] = 0.55;
    in[{0, 1, 2, 3}] = 0.2;
    double expect = 0.2 - 0.5 * 0.55 + 0.4 * 0.45 - 0.3 * 0.6;
    auto T = truncated_correlations(in, 4);
    CHECK(T.at({0, 1, 2, 3}) == doctest::Approx(expect).epsilon(1e-15));
    auto back = simple_from_truncated(T, 4);
    for (const auto& [k, v] : in) CHECK(back.at(k) == doctest::Approx(v).epsilon(1e-14));
    SubsetMap missing{{{0, 1}, 0.2}};
    CHECK_THROWS_AS(truncated_correlations(missing, 4), Error);
}

TEST_CASE("truncation of oracle values at nonzero lambda") {
    LatticeSpec s{4, 2, 0.35, 0.35, BC::Periodic};
    auto in = InteractionSpec::appB(0.1);
    BoundaryTuple sites{{3, Side::Lower}, {2, Side::Lower}, {1, Side::Lower}, {0, Side::Lower}};
    std::vector<BoundaryTuple> tuples;
    std::vector<std::vector<int>> keys;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            tuples.push_back({sites[i], sites[j]});
            keys.push_back({i, j});
        }
    tuples.push_back(sites);
    keys.push_back({0, 1, 2, 3});
    auto r = brute_force(s, in, 0.5, tuples);
    SubsetMap simple;
    for (size_t k = 0; k < keys.size(); ++k) simple[keys[k]] = r.correlations[k];
    double direct = simple[{0, 1, 2, 3}] - simple[{0, 1}] * simple[{2, 3}] + simple[{0, 2}] * simple[{1, 3}] -
                    simple[{0, 3}] * simple[{1, 2}];
    CHECK(truncated_correlations(simple, 4).at({0, 1, 2, 3}) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("ill-conditioned low-temperature sector") {
    LatticeSpec s{2, 3, 0.894408715037133, 0.903411227831186, BC::Antiperiodic};
    CorrelationEngine e(s);
    CHECK(e.ratio() > 1000);
    for (BoundaryTuple t : {BoundaryTuple{{1, Side::Lower}, {0, Side::Lower}},
                            BoundaryTuple{{0, Side::Lower}, {1, Side::Upper}, {1, Side::Lower}, {0, Side::Upper}}}) {
        double o = brute_correlation(s, {}, 0, t);
        CHECK(std::abs(e.correlate(t).value - o) <= 1e-12);
    }
}
