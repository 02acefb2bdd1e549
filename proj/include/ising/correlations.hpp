#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ising/kasteleyn.hpp"

namespace ising {

enum class CorrelationMethod { PfaffianMinor, WickPairing, Oracle };
const char* method_name(CorrelationMethod m);

struct CorrelationResult {
    BoundaryTuple tuple;
    double value = 0;
    CorrelationMethod method = CorrelationMethod::PfaffianMinor;
};

// Caches one sparse factorization per Grassmann boundary condition and the partition ratio,
// so that many tuples on the same cylinder share the work.
class CorrelationEngine {
public:
    explicit CorrelationEngine(const LatticeSpec& spec);

    CorrelationResult correlate(const BoundaryTuple& tuple);
    // -(A^{-1}) restricted to the Grassmann indices of the cyclically ordered tuple
    Dense minor_matrix(const BoundaryTuple& ordered, BC gbc);
    int grassmann_index(const BoundarySite& s) const;
    double ratio();
    const LatticeSpec& spec() const { return spec_; }

private:
    InverseEntries& inverse(BC gbc);
    const Dense& dense_action(BC gbc);
    SignedLogValue action_pf(BC gbc);
    LatticeSpec spec_;
    std::unique_ptr<InverseEntries> inv_[2];
    std::unique_ptr<Dense> dense_[2];
    std::optional<SignedLogValue> pf_[2];
    std::optional<double> ratio_;
};

CorrelationResult boundary_correlation(const LatticeSpec& spec, const BoundaryTuple& tuple);

constexpr int kDenseComplementMax = 1024;

// Pf of -(A^{-1}) on the given indices (in that order) times Pf(A), from the complementary minor.
SignedLogValue complement_pfaffian(const Dense& A, const std::vector<int>& ordered_idx);

// Lower-boundary Grassmann moment from the complementary Pfaffian ratio of the action matrix,
// independent of the inverse entries.
double lower_moment_by_complement(const LatticeSpec& spec, const BoundaryTuple& tuple);

// |<sigma...sigma> - Pf[<sigma_i sigma_j>]| for lower-boundary tuples
double pfaffian_factorization_residual(const LatticeSpec& spec, const BoundaryTuple& tuple);

// Keys are increasing index subsets of {0..m-1}. Only even subsets are read and produced.
using SubsetMap = std::map<std::vector<int>, double>;
SubsetMap truncated_correlations(const SubsetMap& simple, int m);
SubsetMap simple_from_truncated(const SubsetMap& truncated, int m);

}  // namespace ising
