#pragma once

#include <array>
#include <vector>

#include "ising/lattice.hpp"
#include "ising/pfaffian.hpp"

namespace ising {

// Reduced action: four Grassmann variables per site, kinds HB, H, VB, V.
inline int action_index(const LatticeSpec& s, int x, int y, Kind k) { return ((x * s.M) + (y - 1)) * 4 + k; }

struct ActionMatrix {
    Sparse matrix;
    LatticeSpec spec;
    BC grassmann_bc = BC::Antiperiodic;
    std::vector<AuxPair> aux;
    int alpha_prime = 1;

    int index(int x, int y, Kind k) const { return action_index(spec, x, y, k); }
    int dim() const { return static_cast<int>(matrix.rows()); }
};

// A monomial c * Phi_a Phi_b contributes A(a,b) += c, A(b,a) -= c.
// Seam monomials of the horizontal long edges carry the Grassmann boundary sign.
// A lower-upper pair enters as alpha' * w * VB_up V_low.
ActionMatrix assemble_action(const LatticeSpec& spec, BC grassmann_bc, const std::vector<AuxPair>& aux = {},
                             int alpha_prime = 1);

inline BC grassmann_bc_for(BC spin_tau) { return opposite(spin_tau); }

// Kasteleyn matrix of the decorated graph (6LM), with the same seam and crossing conventions.
Sparse decorated_kasteleyn(const DecoratedGraph& g, BC grassmann_bc, int alpha_prime = 1);

struct PrefactorLog {
    double log_value = 0;
    int parity_sign = 1;
};

// (-1)^{LM} (2 cosh K1)^{LM} (cosh K2)^{L(M-1)} prod cosh K~
PrefactorLog prefactor(const LatticeSpec& spec, const std::vector<AuxPair>& aux = {});

// Pfaffian of an action matrix: dense Parlett-Reid up to dimension 4096, otherwise log|Pf| from a
// sparse LU with a positive sign assumed.
SignedLogValue action_pfaffian(const Sparse& A);

// Spin partition function of the cylinder, optionally with same-boundary auxiliary couplings.
SignedLogValue partition_function(const LatticeSpec& spec, const std::vector<AuxPair>& aux = {});

struct TorusPfaffians {
    // pf[a][b]: a = 0 for alpha = +, 1 for alpha = -; b likewise for alpha'
    std::array<std::array<SignedLogValue, 2>, 2> pf{};
    PrefactorLog pre;
    static double coefficient(int a, int b) { return (a == 0 && b == 0) ? -1.0 : 1.0; }
    // prefactor * sum c_{alpha alpha'} / 2 * Pf
    SignedLogValue combined() const;
};

TorusPfaffians torus_partition_pfaffians(const LatticeSpec& spec, const std::vector<AuxPair>& aux);

// Z^{-tau} / Z^{tau}
double partition_ratio(const LatticeSpec& spec);

}  // namespace ising
