#include "ising/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <tuple>

namespace ising {

void InteractionSpec::validate() const {
    for (const auto& t : terms) {
        if (t.offsets.size() % 2) throw Error("InvalidInteraction", "interaction sets must have even cardinality");
        for (auto [dx, dy] : t.offsets)
            if (std::abs(dx) > r_max || std::abs(dy) > r_max)
                throw Error("RangeTooLarge", "interaction offset exceeds r_max");
    }
}

InteractionSpec InteractionSpec::appB(double lambda) {
    InteractionSpec s;
    s.lambda = lambda;
    s.terms.push_back({{{0, -1}, {0, 1}}, 1.0});
    return s;
}

int oracle_site(const LatticeSpec& spec, int x, int y) { return (y - 1) * spec.L + x; }

int oracle_site(const LatticeSpec& spec, const BoundarySite& s) {
    return oracle_site(spec, s.column, s.side == Side::Lower ? 1 : spec.M);
}

std::vector<SpinTerm> spin_terms(const LatticeSpec& spec, const InteractionSpec& inter, double beta,
                                 const std::vector<AuxPair>& aux) {
    spec.validate();
    inter.validate();
    const int L = spec.L, M = spec.M;
    const double tau = bc_sign(spec.tau);
    std::vector<SpinTerm> out;
    for (int y = 1; y <= M; ++y)
        for (int x = 0; x < L; ++x) {
            double k1 = spec.K1() * (x + 1 < L ? 1.0 : tau);
            out.push_back({{oracle_site(spec, x, y), oracle_site(spec, (x + 1) % L, y)}, k1});
            if (y < M) out.push_back({{oracle_site(spec, x, y), oracle_site(spec, x, y + 1)}, spec.K2()});
        }
    if (inter.lambda != 0 && beta != 0)
        for (const auto& t : inter.terms)
            for (int y = 1; y <= M; ++y)
                for (int x = 0; x < L; ++x) {
                    SpinTerm st{{}, beta * inter.lambda * t.coeff};
                    bool inside = true;
                    for (auto [dx, dy] : t.offsets) {
                        int yy = y + dy, xx = x + dx;
                        if (yy < 1 || yy > M) {
                            inside = false;
                            break;
                        }
                        int wraps = (xx >= 0 ? xx / L : -((-xx + L - 1) / L));
                        if (wraps % 2) st.coeff *= tau;
                        st.sites.push_back(oracle_site(spec, ((xx % L) + L) % L, yy));
                    }
                    if (!inside) continue;
                    // repeated sites square to one
                    std::sort(st.sites.begin(), st.sites.end());
                    std::vector<int> red;
                    for (size_t i = 0; i < st.sites.size(); ++i) {
                        if (i + 1 < st.sites.size() && st.sites[i] == st.sites[i + 1]) {
                            ++i;
                            continue;
                        }
                        red.push_back(st.sites[i]);
                    }
                    st.sites = red;
                    out.push_back(st);
                }
    for (const auto& p : aux) out.push_back({{oracle_site(spec, p.a), oracle_site(spec, p.b)}, std::atanh(p.weight)});
    return out;
}

OracleResult brute_force(const LatticeSpec& spec, const InteractionSpec& inter, double beta,
                         const std::vector<BoundaryTuple>& tuples, const std::vector<AuxPair>& aux) {
    const int N = spec.L * spec.M;
    if (N > kMaxEnumSites) throw Error("TooLarge", "exhaustive enumeration limited to L*M <= 24");
    std::vector<SpinTerm> terms = spin_terms(spec, inter, beta, aux);

    std::vector<std::vector<int>> site_terms(N);
    std::vector<double> value(terms.size());
    double E = 0, bound = 0;
    for (size_t i = 0; i < terms.size(); ++i) {
        for (int s : terms[i].sites) site_terms[s].push_back(static_cast<int>(i));
        value[i] = terms[i].coeff;  // all spins +1
        E += value[i];
        bound += std::abs(terms[i].coeff);
    }
    std::vector<std::uint32_t> masks;
    for (const auto& t : tuples) {
        validate_tuple(t, spec.L);
        std::uint32_t m = 0;
        for (const auto& s : t) m ^= 1u << oracle_site(spec, s);
        masks.push_back(m);
    }

    long double z = 0;
    std::vector<long double> acc(masks.size(), 0);
    std::uint32_t state = 0;  // bit set = spin -1
    const std::uint64_t count = std::uint64_t(1) << N;
    for (std::uint64_t i = 0; i < count; ++i) {
        if (i) {
            int s = std::countr_zero(i);
            state ^= 1u << s;
            for (int k : site_terms[s]) {
                E -= 2 * value[k];
                value[k] = -value[k];
            }
        }
        long double w = std::exp(static_cast<long double>(E - bound));
        z += w;
        for (size_t k = 0; k < masks.size(); ++k) acc[k] += (std::popcount(state & masks[k]) & 1) ? -w : w;
    }
    OracleResult r;
    r.Z = {1, static_cast<double>(std::log(z)) + bound};
    for (size_t k = 0; k < masks.size(); ++k) {
        double c = static_cast<double>(acc[k] / z);
        if (tuples[k].size() % 2 && aux.empty()) {
            if (std::abs(c) > 1e-12) throw Error("OracleInconsistent", "odd correlation not zero");
            c = 0;
        }
        r.correlations.push_back(c);
    }
    return r;
}

SignedLogValue brute_partition(const LatticeSpec& spec, const InteractionSpec& inter, double beta) {
    return brute_force(spec, inter, beta).Z;
}

double brute_correlation(const LatticeSpec& spec, const InteractionSpec& inter, double beta, const BoundaryTuple& t) {
    return brute_force(spec, inter, beta, {t}).correlations.at(0);
}

SignedLogValue transfer_matrix_partition(const LatticeSpec& spec, const InteractionSpec& inter, double beta) {
    if (spec.L > 12) throw Error("RangeTooLarge", "transfer matrix limited to L <= 12");
    for (const auto& t : inter.terms)
        for (auto [dx, dy] : t.offsets)
            if (std::abs(dy) > 1) throw Error("RangeTooLarge", "interaction vertical range exceeds 2 rows");
    std::vector<SpinTerm> terms = spin_terms(spec, inter, beta);
    const int N = spec.L * spec.M;
    // terms are attached to their highest site; all other sites must sit in the window behind it
    int W = 1;
    for (const auto& t : terms) {
        if (t.sites.empty()) continue;
        int hi = *std::max_element(t.sites.begin(), t.sites.end());
        int lo = *std::min_element(t.sites.begin(), t.sites.end());
        W = std::max(W, hi - lo);
    }
    if (W > 2 * spec.L) throw Error("RangeTooLarge", "window exceeds two rows");
    std::vector<std::vector<std::tuple<std::uint32_t, bool, double>>> attach(N);
    double constant = 0;
    for (const auto& t : terms) {
        if (t.sites.empty()) {
            constant += t.coeff;
            continue;
        }
        int hi = *std::max_element(t.sites.begin(), t.sites.end());
        std::uint32_t mask = 0;
        bool self = false;
        for (int s : t.sites) {
            if (s == hi)
                self = !self;
            else
                mask ^= 1u << (hi - 1 - s);  // bit j of the window = site hi-1-j
        }
        attach[hi].emplace_back(mask, self, t.coeff);
    }

    const std::size_t S = std::size_t(1) << W;
    const std::uint32_t wmask = static_cast<std::uint32_t>(S - 1);
    std::vector<double> v(S, 0.0), nv(S);
    v[0] = 1;
    double log_scale = constant;
    for (int s = 0; s < N; ++s) {
        std::fill(nv.begin(), nv.end(), 0.0);
        for (std::size_t old = 0; old < S; ++old) {
            double a = v[old];
            if (a == 0) continue;
            for (std::uint32_t sig = 0; sig < 2; ++sig) {
                double e = 0;
                for (const auto& [mask, self, c] : attach[s]) {
                    int par = std::popcount(static_cast<std::uint32_t>(old) & mask) + (self ? sig : 0);
                    e += (par & 1) ? -c : c;
                }
                std::uint32_t ns = ((static_cast<std::uint32_t>(old) << 1) | sig) & wmask;
                nv[ns] += a * std::exp(e);
            }
        }
        double mx = *std::max_element(nv.begin(), nv.end());
        for (auto& x : nv) x /= mx;
        log_scale += std::log(mx);
        std::swap(v, nv);
    }
    long double z = 0;
    for (double x : v) z += x;
    return {1, static_cast<double>(std::log(z)) + log_scale};
}

}  // namespace ising
