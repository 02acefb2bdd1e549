#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "ising/common.hpp"

namespace ising {

using Dense = Eigen::MatrixXd;
using Sparse = Eigen::SparseMatrix<double>;
using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

struct PfaffianOptions {
    double antisym_tol = 1e-12;
    double zero_pivot_rel = 1e-14;
};

// Parlett-Reid reduction with partial pivoting; odd dimension returns an exact zero.
SignedLogValue pfaffian(Dense A, const PfaffianOptions& opt = {});
SignedLogValue pfaffian(const Sparse& A, const PfaffianOptions& opt = {});

// log|Pf| from a sparse LU determinant; the sign is not recoverable on this path.
double log_abs_pfaffian_sparse(const Sparse& A);

void check_antisymmetric(const Dense& A, double tol);

Rational pfaffian_exact(const RationalMatrix& A);

class InverseEntries {
public:
    explicit InverseEntries(const Sparse& A);
    double operator()(int i, int j);
    const Eigen::VectorXd& column(int j);
    int dim() const { return n_; }

private:
    int n_;
    Sparse A_;
    Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>> lu_;
    std::map<int, Eigen::VectorXd> cols_;
};

std::vector<double> inverse_entries(const Sparse& A, const std::vector<std::pair<int, int>>& pairs);

}  // namespace ising
