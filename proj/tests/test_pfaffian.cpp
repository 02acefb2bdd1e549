#include <random>

#include "doctest.h"
#include "ising/pfaffian.hpp"

using namespace ising;

namespace {

Dense random_antisym(int n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    Dense A = Dense::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            A(i, j) = d(rng);
            A(j, i) = -A(i, j);
        }
    return A;
}

}  // namespace

TEST_CASE("2x2 and 4x4 closed forms") {
    Dense A(2, 2);
    A << 0, 3.5, -3.5, 0;
    CHECK(pfaffian(A).value() == doctest::Approx(3.5));

    double a12 = 1.3, a13 = -0.7, a14 = 2.1, a23 = 0.4, a24 = -1.9, a34 = 0.8;
    Dense B(4, 4);
    B << 0, a12, a13, a14, -a12, 0, a23, a24, -a13, -a23, 0, a34, -a14, -a24, -a34, 0;
    CHECK(pfaffian(B).value() == doctest::Approx(a12 * a34 - a13 * a24 + a14 * a23).epsilon(1e-14));
}

TEST_CASE("odd dimension and zero matrix") {
    CHECK(pfaffian(Dense::Zero(3, 3)).sign == 0);
    CHECK(pfaffian(Dense::Zero(4, 4)).sign == 0);
    RationalMatrix Z(4, std::vector<Rational>(4, 0));
    CHECK(pfaffian_exact(Z) == 0);
}

TEST_CASE("not antisymmetric is rejected") {
    Dense A = Dense::Zero(2, 2);
    A(0, 1) = 1;
    A(1, 0) = 1;
    CHECK_THROWS_AS(pfaffian(A), Error);
}

TEST_CASE("Pf^2 = det, permutation and scaling") {
    std::mt19937 rng(7);
    for (int n : {2, 6, 10, 40, 128}) {
        Dense A = random_antisym(n, rng);
        SignedLogValue p = pfaffian(A);
        double det = A.determinant();
        CHECK(std::abs(std::exp(2 * p.log_abs) - std::abs(det)) <= 1e-8 * std::abs(det));

        Eigen::PermutationMatrix<Eigen::Dynamic> P(n);
        P.setIdentity();
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int i = 0; i < n; ++i) P.indices()[i] = idx[i];
        Dense PA = P * A * P.transpose();
        double detP = Dense(P).determinant();
        SignedLogValue q = pfaffian(PA);
        CHECK(q.sign == p.sign * (detP > 0 ? 1 : -1));
        CHECK(q.log_abs == doctest::Approx(p.log_abs).epsilon(1e-10));

        SignedLogValue s = pfaffian(Dense(2.5 * A));
        CHECK(s.sign == p.sign);
        CHECK(s.log_abs == doctest::Approx(p.log_abs + n / 2 * std::log(2.5)).epsilon(1e-12));
    }
}

TEST_CASE("exact rational Pfaffian agrees with the float path") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    for (int n : {2, 4, 6, 8, 10, 12}) {
        RationalMatrix R(n, std::vector<Rational>(n, 0));
        Dense A = Dense::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Rational q(num(rng), den(rng));
                R[i][j] = q;
                R[j][i] = -q;
                A(i, j) = q.convert_to<double>();
                A(j, i) = -A(i, j);
            }
        double exact = pfaffian_exact(R).convert_to<double>();
        double fl = pfaffian(A).value();
        CHECK(std::abs(fl - exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
    }
    RationalMatrix blocks(4, std::vector<Rational>(4, 0));
    blocks[0][1] = Rational(3, 2);
    blocks[1][0] = -blocks[0][1];
    blocks[2][3] = Rational(-5, 3);
    blocks[3][2] = -blocks[2][3];
    CHECK(pfaffian_exact(blocks) == Rational(-5, 2));
    CHECK_THROWS_AS(pfaffian_exact(RationalMatrix(14, std::vector<Rational>(14, 0))), Error);
}

TEST_CASE("selected inverse entries") {
    Sparse A(2, 2);
    A.insert(0, 1) = 2.0;
    A.insert(1, 0) = -2.0;
    A.makeCompressed();
    auto v = inverse_entries(A, {{0, 1}, {1, 0}});
    CHECK(v[0] == doctest::Approx(-0.5));
    CHECK(v[1] == doctest::Approx(0.5));

    std::mt19937 rng(3);
    Dense D = random_antisym(20, rng);
    Sparse S = D.sparseView();
    Dense inv = D.inverse();
    InverseEntries ie(S);
    for (int i = 0; i < 20; i += 3)
        for (int j = 1; j < 20; j += 4) CHECK(ie(i, j) == doctest::Approx(inv(i, j)).epsilon(1e-10));
    CHECK(ie(2, 5) == doctest::Approx(-ie(5, 2)));
}

TEST_CASE("sparse log path matches the dense Pfaffian magnitude") {
    std::mt19937 rng(5);
    Dense D = random_antisym(30, rng);
    CHECK(log_abs_pfaffian_sparse(D.sparseView()) == doctest::Approx(pfaffian(D).log_abs).epsilon(1e-10));
}
