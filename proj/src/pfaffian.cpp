#include "ising/pfaffian.hpp"

#include <cmath>
#include <functional>

namespace ising {

void check_antisymmetric(const Dense& A, double tol) {
    if (A.rows() != A.cols()) throw Error("NotAntisymmetric", "matrix is not square");
    double scale = A.cwiseAbs().maxCoeff();
    if (scale == 0) return;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        if (std::abs(A(j, j)) > tol * scale) throw Error("NotAntisymmetric", "nonzero diagonal");
        for (Eigen::Index i = j + 1; i < A.rows(); ++i)
            if (std::abs(A(i, j) + A(j, i)) > tol * scale)
                throw Error("NotAntisymmetric", "A + A^T exceeds tolerance at (" + std::to_string(i) + "," +
                                                    std::to_string(j) + ")");
    }
}

SignedLogValue pfaffian(Dense A, const PfaffianOptions& opt) {
    check_antisymmetric(A, opt.antisym_tol);
    const Eigen::Index n = A.rows();
    if (n % 2) return {0, 0};
    if (n == 0) return {1, 0};
    const double scale = A.cwiseAbs().maxCoeff();
    if (scale == 0) return {0, 0};

    int sign = 1;
    double log_abs = 0;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index p;
        double best = A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&p);
        p += k + 1;
        if (best <= opt.zero_pivot_rel * scale) return {0, 0};
        if (p != k + 1) {
            A.row(k + 1).swap(A.row(p));
            A.col(k + 1).swap(A.col(p));
            sign = -sign;
        }
        double piv = A(k, k + 1);
        if (piv < 0) sign = -sign;
        log_abs += std::log(std::abs(piv));
        if (log_abs < std::log(1e-300) && k + 2 < n) {
            // underflow: treat as zero per the documented convention
            return {0, 0};
        }
        Eigen::Index r = n - k - 2;
        if (r > 0) {
            Eigen::VectorXd tau = A.row(k).tail(r).transpose() / piv;
            Eigen::VectorXd c = A.col(k + 1).tail(r);
            A.bottomRightCorner(r, r).noalias() += tau * c.transpose() - c * tau.transpose();
        }
    }
    return {sign, log_abs};
}

SignedLogValue pfaffian(const Sparse& A, const PfaffianOptions& opt) {
    if (A.rows() > 8192) throw Error("TooLarge", "dense Pfaffian limited to n <= 8192; use log_abs_pfaffian_sparse");
    return pfaffian(Dense(A), opt);
}

double log_abs_pfaffian_sparse(const Sparse& A) {
    Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw Error("Singular", "sparse LU failed");
    return 0.5 * lu.logAbsDeterminant();
}

Rational pfaffian_exact(const RationalMatrix& A) {
    const int n = static_cast<int>(A.size());
    if (n > 12) throw Error("DimensionTooLarge", "exact Pfaffian limited to n <= 12");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(A[i].size()) != n) throw Error("NotAntisymmetric", "matrix is not square");
        for (int j = 0; j < n; ++j)
            if (A[i][j] != -A[j][i]) throw Error("NotAntisymmetric", "entries are not antisymmetric");
    }
    if (n % 2) return 0;
    // expansion along the first remaining index over perfect matchings
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::function<Rational(std::vector<int>&)> rec = [&](std::vector<int>& rest) -> Rational {
        if (rest.empty()) return 1;
        Rational total = 0;
        int a = rest[0];
        for (size_t j = 1; j < rest.size(); ++j) {
            if (A[a][rest[j]] == 0) continue;
            std::vector<int> sub;
            for (size_t k = 1; k < rest.size(); ++k)
                if (k != j) sub.push_back(rest[k]);
            Rational term = A[a][rest[j]] * rec(sub);
            if (j % 2 == 0) term = -term;
            total += term;
        }
        return total;
    };
    return rec(idx);
}

InverseEntries::InverseEntries(const Sparse& A) : n_(static_cast<int>(A.rows())), A_(A) {
    lu_.compute(A);
    if (lu_.info() != Eigen::Success) throw Error("Singular", "action matrix is singular");
}

const Eigen::VectorXd& InverseEntries::column(int j) {
    auto it = cols_.find(j);
    if (it != cols_.end()) return it->second;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
    e[j] = 1;
    Eigen::VectorXd x = lu_.solve(e);
    if (lu_.info() != Eigen::Success || !x.allFinite()) throw Error("Singular", "solve failed");
    // refinement with the residual accumulated in extended precision
    for (int it = 0; it < 3; ++it) {
        Eigen::Matrix<long double, Eigen::Dynamic, 1> r = Eigen::Matrix<long double, Eigen::Dynamic, 1>::Zero(n_);
        r[j] = 1;
        for (int k = 0; k < A_.outerSize(); ++k)
            for (Sparse::InnerIterator a(A_, k); a; ++a)
                r[a.row()] -= static_cast<long double>(a.value()) * static_cast<long double>(x[k]);
        Eigen::VectorXd d = lu_.solve(r.cast<double>());
        x += d;
        if (d.lpNorm<Eigen::Infinity>() <= 1e-17 * x.lpNorm<Eigen::Infinity>()) break;
    }
    return cols_.emplace(j, std::move(x)).first->second;
}

double InverseEntries::operator()(int i, int j) {
    if (cols_.count(i) && !cols_.count(j)) return -cols_.at(i)[j];
    return column(j)[i];
}

std::vector<double> inverse_entries(const Sparse& A, const std::vector<std::pair<int, int>>& pairs) {
    InverseEntries inv(A);
    std::vector<double> out;
    out.reserve(pairs.size());
    for (auto [i, j] : pairs) out.push_back(inv(i, j));
    return out;
}

}  // namespace ising
