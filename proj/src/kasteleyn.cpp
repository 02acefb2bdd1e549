#include "ising/kasteleyn.hpp"

#include <cmath>

namespace ising {

namespace {

void add_monomial(std::vector<Eigen::Triplet<double>>& trip, int a, int b, double c) {
    trip.emplace_back(a, b, c);
    trip.emplace_back(b, a, -c);
}

double coupling_of(double w) { return std::atanh(w); }

}  // namespace

ActionMatrix assemble_action(const LatticeSpec& spec, BC grassmann_bc, const std::vector<AuxPair>& aux,
                             int alpha_prime) {
    spec.validate();
    validate_aux(spec, aux);
    ActionMatrix out;
    out.spec = spec;
    out.grassmann_bc = grassmann_bc;
    out.aux = aux;
    out.alpha_prime = alpha_prime;
    const int L = spec.L, M = spec.M, n = 4 * L * M;
    const double gbc = bc_sign(grassmann_bc);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(16 * L * M + 4 * aux.size());
    auto id = [&](int x, int y, Kind k) { return action_index(spec, x, y, k); };
    for (int x = 0; x < L; ++x)
        for (int y = 1; y <= M; ++y) {
            int xn = (x + 1) % L;
            add_monomial(trip, id(x, y, HB), id(xn, y, H), x + 1 < L ? spec.t1 : gbc * spec.t1);
            if (y < M) add_monomial(trip, id(x, y, VB), id(x, y + 1, V), spec.t2);
            add_monomial(trip, id(x, y, HB), id(x, y, H), 1);
            add_monomial(trip, id(x, y, VB), id(x, y, V), 1);
            add_monomial(trip, id(x, y, VB), id(x, y, HB), 1);
            add_monomial(trip, id(x, y, V), id(x, y, HB), 1);
            add_monomial(trip, id(x, y, H), id(x, y, VB), 1);
            add_monomial(trip, id(x, y, V), id(x, y, H), 1);
        }
    for (const auto& p : aux) {
        if (p.a.side == Side::Lower && p.b.side == Side::Lower) {
            int r = std::max(p.a.column, p.b.column), l = std::min(p.a.column, p.b.column);
            add_monomial(trip, id(r, 1, V), id(l, 1, V), p.weight);
        } else if (p.a.side == Side::Upper && p.b.side == Side::Upper) {
            int r = std::max(p.a.column, p.b.column), l = std::min(p.a.column, p.b.column);
            add_monomial(trip, id(l, M, VB), id(r, M, VB), p.weight);
        } else {
            const BoundarySite& lo = p.a.side == Side::Lower ? p.a : p.b;
            const BoundarySite& up = p.a.side == Side::Lower ? p.b : p.a;
            add_monomial(trip, id(up.column, M, VB), id(lo.column, 1, V), alpha_prime * p.weight);
        }
    }
    out.matrix.resize(n, n);
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    out.matrix.prune(0.0);
    return out;
}

Sparse decorated_kasteleyn(const DecoratedGraph& g, BC grassmann_bc, int alpha_prime) {
    const int n = static_cast<int>(g.vertices.size());
    const double gbc = bc_sign(grassmann_bc);
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& e : g.edges) {
        double w = e.sign * e.w;
        if (e.seam) w *= -gbc;  // reversed seam edge
        if (e.type == EdgeType::Crossing) w *= -alpha_prime;
        add_monomial(trip, e.u, e.v, w);
    }
    Sparse K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

PrefactorLog prefactor(const LatticeSpec& spec, const std::vector<AuxPair>& aux) {
    PrefactorLog p;
    const double LM = double(spec.L) * spec.M;
    p.log_value = LM * std::log(2 * std::cosh(spec.K1())) + double(spec.L) * (spec.M - 1) * std::log(std::cosh(spec.K2()));
    for (const auto& a : aux) p.log_value += std::log(std::cosh(coupling_of(a.weight)));
    p.parity_sign = ((spec.L * spec.M) % 2) ? -1 : 1;
    return p;
}

SignedLogValue action_pfaffian(const Sparse& A) {
    if (A.rows() <= 4096) return pfaffian(A);
    return {1, log_abs_pfaffian_sparse(A)};
}

SignedLogValue partition_function(const LatticeSpec& spec, const std::vector<AuxPair>& aux) {
    for (const auto& p : aux)
        if (p.a.side != p.b.side) throw Error("InvalidPair", "use torus_partition_pfaffians for lower-upper pairs");
    ActionMatrix A = assemble_action(spec, grassmann_bc_for(spec.tau), aux);
    SignedLogValue pf = action_pfaffian(A.matrix);
    if (pf.sign == 0) throw Error("Singular", "Pfaffian vanished");
    PrefactorLog pre = prefactor(spec, aux);
    return {pf.sign * pre.parity_sign, pf.log_abs + pre.log_value};
}

SignedLogValue TorusPfaffians::combined() const {
    double mx = -INFINITY;
    for (const auto& row : pf)
        for (const auto& v : row)
            if (v.sign != 0) mx = std::max(mx, v.log_abs);
    if (!std::isfinite(mx)) return {0, 0};
    double s = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (pf[a][b].sign != 0) s += coefficient(a, b) / 2 * pf[a][b].sign * std::exp(pf[a][b].log_abs - mx);
    SignedLogValue r = SignedLogValue::from(s);
    if (r.sign == 0) return r;
    return {r.sign * pre.parity_sign, r.log_abs + mx + pre.log_value};
}

TorusPfaffians torus_partition_pfaffians(const LatticeSpec& spec, const std::vector<AuxPair>& aux) {
    validate_aux(spec, aux);
    TorusPfaffians out;
    out.pre = prefactor(spec, aux);
    const BC tau = spec.tau;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            BC gbc = a == 0 ? tau : opposite(tau);
            ActionMatrix A = assemble_action(spec, gbc, aux, b == 0 ? 1 : -1);
            out.pf[a][b] = pfaffian(A.matrix);
        }
    return out;
}

double partition_ratio(const LatticeSpec& spec) {
    SignedLogValue z = partition_function(spec);
    SignedLogValue zo = partition_function(spec.with_tau(opposite(spec.tau)));
    if (z.sign == 0 || zo.sign == 0) throw Error("Singular", "partition function vanished");
    return zo.sign * z.sign * std::exp(zo.log_abs - z.log_abs);
}

}  // namespace ising
