#include "ising/correlations.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace ising {

const char* method_name(CorrelationMethod m) {
    switch (m) {
        case CorrelationMethod::PfaffianMinor: return "PfaffianMinor";
        case CorrelationMethod::WickPairing: return "WickPairing";
        case CorrelationMethod::Oracle: return "Oracle";
    }
    return "?";
}

CorrelationEngine::CorrelationEngine(const LatticeSpec& spec) : spec_(spec) { spec_.validate(); }

InverseEntries& CorrelationEngine::inverse(BC gbc) {
    auto& slot = inv_[gbc == BC::Periodic ? 0 : 1];
    if (!slot) slot = std::make_unique<InverseEntries>(assemble_action(spec_, gbc).matrix);
    return *slot;
}

const Dense& CorrelationEngine::dense_action(BC gbc) {
    auto& slot = dense_[gbc == BC::Periodic ? 0 : 1];
    if (!slot) slot = std::make_unique<Dense>(assemble_action(spec_, gbc).matrix);
    return *slot;
}

SignedLogValue CorrelationEngine::action_pf(BC gbc) {
    auto& slot = pf_[gbc == BC::Periodic ? 0 : 1];
    if (!slot) slot = pfaffian(dense_action(gbc));
    return *slot;
}

double CorrelationEngine::ratio() {
    if (!ratio_) ratio_ = partition_ratio(spec_);
    return *ratio_;
}

int CorrelationEngine::grassmann_index(const BoundarySite& s) const {
    return s.side == Side::Lower ? action_index(spec_, s.column, 1, V) : action_index(spec_, s.column, spec_.M, VB);
}

Dense CorrelationEngine::minor_matrix(const BoundaryTuple& ordered, BC gbc) {
    const int m = static_cast<int>(ordered.size());
    InverseEntries& inv = inverse(gbc);
    Dense Mm = Dense::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double v = -inv(grassmann_index(ordered[i]), grassmann_index(ordered[j]));
            Mm(i, j) = v;
            Mm(j, i) = -v;
        }
    return Mm;
}

CorrelationResult CorrelationEngine::correlate(const BoundaryTuple& tuple) {
    CorrelationResult r{tuple, 0, CorrelationMethod::PfaffianMinor};
    BoundaryTuple t = tuple;
    cyclic_order(t, spec_.L);
    if (t.size() % 2) return r;
    if (t.empty()) {
        r.value = 1;
        return r;
    }
    const int n_lower = static_cast<int>(std::count_if(t.begin(), t.end(), [](auto& s) { return s.side == Side::Lower; }));
    BC gbc = n_lower % 2 == 0 ? opposite(spec_.tau) : spec_.tau;
    if (4 * spec_.L * spec_.M <= kDenseComplementMax) {
        // ratio * Pf(M_tau) = +-Pf(A_tau without the tuple rows) / Pf(A_{-tau}); for an even number of
        // lower sites the denominator is Pf(A_gbc) itself
        std::vector<int> idx;
        for (const auto& s : t) idx.push_back(grassmann_index(s));
        SignedLogValue pc = complement_pfaffian(dense_action(gbc), idx);
        SignedLogValue pm = action_pf(n_lower % 2 ? opposite(gbc) : gbc);
        if (pm.sign == 0) throw Error("Singular", "action Pfaffian vanished");
        r.value = pc.sign * pm.sign * std::exp(pc.log_abs - pm.log_abs);
        return r;
    }
    double factor = n_lower % 2 == 0 ? 1.0 : ratio();
    SignedLogValue pf = pfaffian(minor_matrix(t, gbc), {1e-12, 0});
    r.value = factor * pf.value();
    return r;
}

CorrelationResult boundary_correlation(const LatticeSpec& spec, const BoundaryTuple& tuple) {
    CorrelationEngine e(spec);
    return e.correlate(tuple);
}

SignedLogValue complement_pfaffian(const Dense& A, const std::vector<int>& ordered_idx) {
    std::vector<int> idx = ordered_idx;
    const int m = static_cast<int>(idx.size());
    const int n = static_cast<int>(A.rows());
    int sign = 1;
    for (int i = 1; i < m; ++i)
        for (int j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
        }
    std::vector<char> removed(n, 0);
    long parity = 0;
    for (int i : idx) {
        removed[i] = 1;
        parity += i;
    }
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (!removed[i]) keep.push_back(i);
    Dense C(keep.size(), keep.size());
    for (size_t a = 0; a < keep.size(); ++a)
        for (size_t b = 0; b < keep.size(); ++b) C(a, b) = A(keep[a], keep[b]);
    SignedLogValue pc = pfaffian(C);
    if (parity % 2) sign = -sign;
    if ((m / 2) % 2) sign = -sign;
    return {pc.sign * sign, pc.log_abs};
}

double lower_moment_by_complement(const LatticeSpec& spec, const BoundaryTuple& tuple) {
    BoundaryTuple t = tuple;
    cyclic_order(t, spec.L);
    for (const auto& s : t)
        if (s.side != Side::Lower) throw Error("InvalidTuple", "lower-boundary tuple expected");
    if (t.size() % 2) return 0;
    Dense A(assemble_action(spec, opposite(spec.tau)).matrix);
    std::vector<int> idx;
    for (const auto& s : t) idx.push_back(action_index(spec, s.column, 1, V));
    SignedLogValue pc = complement_pfaffian(A, idx), pa = pfaffian(A);
    if (pa.sign == 0) throw Error("Singular", "action Pfaffian vanished");
    return pc.sign * pa.sign * std::exp(pc.log_abs - pa.log_abs);
}

double pfaffian_factorization_residual(const LatticeSpec& spec, const BoundaryTuple& tuple) {
    BoundaryTuple t = tuple;
    cyclic_order(t, spec.L);
    for (const auto& s : t)
        if (s.side != Side::Lower) throw Error("InvalidTuple", "factorization residual is defined for lower-boundary tuples");
    const int m = static_cast<int>(t.size());
    if (m == 2) return 0;
    CorrelationEngine eng(spec);
    Dense P = Dense::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            P(i, j) = eng.correlate({t[i], t[j]}).value;
            P(j, i) = -P(i, j);
        }
    double wick = pfaffian(P, {1e-12, 0}).value();
    double direct = lower_moment_by_complement(spec, t);
    return std::abs(direct - wick);
}

namespace {

// All partitions of `set` into even blocks; each block sorted, blocks ordered by first element.
void even_partitions(const std::vector<int>& set, std::vector<std::vector<int>>& cur,
                     const std::function<void(const std::vector<std::vector<int>>&)>& f) {
    if (set.empty()) {
        f(cur);
        return;
    }
    int first = set[0];
    std::vector<int> rest(set.begin() + 1, set.end());
    const int r = static_cast<int>(rest.size());
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        if (__builtin_popcount(mask) % 2 == 0) continue;
        std::vector<int> block{first}, remaining;
        for (int i = 0; i < r; ++i) (mask >> i & 1 ? block : remaining).push_back(rest[i]);
        cur.push_back(block);
        even_partitions(remaining, cur, f);
        cur.pop_back();
    }
}

int partition_sign(const std::vector<std::vector<int>>& blocks) {
    std::vector<int> seq;
    for (const auto& b : blocks) seq.insert(seq.end(), b.begin(), b.end());
    int sign = 1;
    for (size_t i = 0; i < seq.size(); ++i)
        for (size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) sign = -sign;
    return sign;
}

std::vector<std::vector<int>> even_subsets(int m) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) % 2) continue;
        std::vector<int> s;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) s.push_back(i);
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
    return out;
}

}  // namespace

SubsetMap truncated_correlations(const SubsetMap& simple, int m) {
    if (m < 0 || m > 16) throw Error("InvalidTuple", "truncation supported for m <= 16");
    SubsetMap T;
    for (const auto& S : even_subsets(m)) {
        auto it = simple.find(S);
        if (it == simple.end()) throw Error("MissingInput", "simple correlation missing for a subset");
        double v = it->second;
        std::vector<std::vector<int>> cur;
        even_partitions(S, cur, [&](const std::vector<std::vector<int>>& blocks) {
            if (blocks.size() < 2) return;
            double prod = partition_sign(blocks);
            for (const auto& b : blocks) prod *= T.at(b);
            v -= prod;
        });
        T[S] = v;
    }
    return T;
}

SubsetMap simple_from_truncated(const SubsetMap& truncated, int m) {
    SubsetMap out;
    for (const auto& S : even_subsets(m)) {
        double v = 0;
        std::vector<std::vector<int>> cur;
        even_partitions(S, cur, [&](const std::vector<std::vector<int>>& blocks) {
            double prod = partition_sign(blocks);
            for (const auto& b : blocks) {
                auto it = truncated.find(b);
                if (it == truncated.end()) throw Error("MissingInput", "truncated correlation missing for a subset");
                prod *= it->second;
            }
            v += prod;
        });
        out[S] = v;
    }
    return out;
}

}  // namespace ising
