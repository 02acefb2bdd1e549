#pragma once

#include <utility>
#include <vector>

#include "ising/lattice.hpp"

namespace ising {

struct InteractionTerm {
    std::vector<std::pair<int, int>> offsets;  // X relative to the anchor site z
    double coeff = 1;
};

struct InteractionSpec {
    double lambda = 0;
    std::vector<InteractionTerm> terms;
    int r_max = 2;

    void validate() const;
    static InteractionSpec none() { return {}; }
    // V(X) = 1 for X = {z - e2, z + e2}
    static InteractionSpec appB(double lambda);
};

// One concrete lattice instance of an interaction (or nearest-neighbour) term: coeff * prod sigma.
struct SpinTerm {
    std::vector<int> sites;
    double coeff;
};

int oracle_site(const LatticeSpec& spec, int x, int y);
int oracle_site(const LatticeSpec& spec, const BoundarySite& s);

// -beta H as a list of spin monomials; seam couplings and wrapped interaction sites carry tau.
std::vector<SpinTerm> spin_terms(const LatticeSpec& spec, const InteractionSpec& inter, double beta,
                                 const std::vector<AuxPair>& aux = {});

struct OracleResult {
    SignedLogValue Z;
    std::vector<double> correlations;
};

constexpr int kMaxEnumSites = 24;

// Exhaustive Gray-code enumeration, L*M <= 24.
OracleResult brute_force(const LatticeSpec& spec, const InteractionSpec& inter, double beta,
                         const std::vector<BoundaryTuple>& tuples = {}, const std::vector<AuxPair>& aux = {});

SignedLogValue brute_partition(const LatticeSpec& spec, const InteractionSpec& inter, double beta);
double brute_correlation(const LatticeSpec& spec, const InteractionSpec& inter, double beta, const BoundaryTuple& t);

// Site-by-site transfer matrix over a sliding window of spins, L <= 12.
SignedLogValue transfer_matrix_partition(const LatticeSpec& spec, const InteractionSpec& inter, double beta);

}  // namespace ising
