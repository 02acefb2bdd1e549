#include "ising/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ising {

const char* kind_name(Kind k) {
    static const char* names[] = {"Hbar", "H", "Vbar", "V", "T", "Tbar"};
    return names[k];
}

const char* edge_type_name(EdgeType t) {
    switch (t) {
        case EdgeType::Short: return "short";
        case EdgeType::LongH: return "long_h";
        case EdgeType::LongV: return "long_v";
        case EdgeType::AuxLower: return "aux_lower";
        case EdgeType::AuxUpper: return "aux_upper";
        case EdgeType::Crossing: return "crossing";
    }
    return "?";
}

namespace {

constexpr std::array<std::array<double, 2>, 6> kOffset = {{
    {0.4, 0.0},     // HB
    {-0.4, 0.0},    // H
    {0.0, 0.4},     // VB
    {0.0, -0.4},    // V
    {0.15, 0.15},   // T
    {-0.15, -0.15}, // TB
}};

bool same_boundary(const AuxPair& p) { return p.a.side == p.b.side; }

}  // namespace

void validate_aux(const LatticeSpec& spec, const std::vector<AuxPair>& aux) {
    BoundaryTuple all;
    for (const auto& p : aux) {
        if (p.a == p.b) throw Error("InvalidPair", "auxiliary pair repeats site " + format_tuple({p.a}));
        all.push_back(p.a);
        all.push_back(p.b);
    }
    validate_tuple(all, spec.L);
    int crossings = 0;
    for (const auto& p : aux) crossings += !same_boundary(p);
    if (crossings > 1) throw Error("MultipleCrossings", "at most one lower-upper auxiliary edge is allowed");

    for (size_t i = 0; i < aux.size(); ++i) {
        const auto& p = aux[i];
        if (!same_boundary(p)) continue;
        int lo = std::min(p.a.column, p.b.column), hi = std::max(p.a.column, p.b.column);
        for (size_t j = 0; j < aux.size(); ++j) {
            if (j == i) continue;
            const auto& q = aux[j];
            if (same_boundary(q)) {
                if (q.a.side != p.a.side) continue;
                int lo2 = std::min(q.a.column, q.b.column), hi2 = std::max(q.a.column, q.b.column);
                if ((lo < lo2 && lo2 < hi && hi < hi2) || (lo2 < lo && lo < hi2 && hi2 < hi))
                    throw Error("CrossingAuxEdges", "auxiliary arcs intersect");
            } else {
                const BoundarySite& s = q.a.side == p.a.side ? q.a : q.b;
                if (lo < s.column && s.column < hi)
                    throw Error("CrossingAuxEdges", "lower-upper edge leaves from inside an arc");
            }
        }
    }
}

int DecoratedGraph::clockwise_count(const Face& f) const {
    int cw = 0;
    for (int he : f.half_edges) {
        const GEdge& e = edges[he / 2];
        bool along = (he % 2 == 0);
        if (along != (e.sign > 0)) ++cw;
    }
    return cw;
}

DecoratedGraph build_decorated_graph(const LatticeSpec& spec, const std::vector<AuxPair>& aux) {
    spec.validate();
    validate_aux(spec, aux);
    DecoratedGraph g;
    g.spec = spec;
    g.aux = aux;
    const int L = spec.L, M = spec.M;
    g.vertices.resize(6 * L * M);
    for (int x = 0; x < L; ++x)
        for (int y = 1; y <= M; ++y)
            for (int k = 0; k < 6; ++k) g.vertices[g.index(x, y, Kind(k))] = {x, y, Kind(k)};

    auto add = [&](int u, int v, double w, EdgeType t, bool seam = false) {
        g.edges.push_back({u, v, w, +1, t, seam});
    };
    for (int x = 0; x < L; ++x)
        for (int y = 1; y <= M; ++y) {
            auto i = [&](Kind k) { return g.index(x, y, k); };
            add(i(VB), i(HB), 1, EdgeType::Short);
            add(i(HB), i(T), 1, EdgeType::Short);
            add(i(V), i(H), 1, EdgeType::Short);
            add(i(H), i(TB), 1, EdgeType::Short);
            add(i(T), i(VB), 1, EdgeType::Short);
            add(i(TB), i(V), 1, EdgeType::Short);
            add(i(TB), i(T), 1, EdgeType::Short);
        }
    for (int y = 1; y <= M; ++y)
        for (int x = 0; x < L; ++x) {
            if (x + 1 < L)
                add(g.index(x, y, HB), g.index(x + 1, y, H), spec.t1, EdgeType::LongH);
            else
                add(g.index(0, y, H), g.index(L - 1, y, HB), spec.t1, EdgeType::LongH, true);
        }
    for (int x = 0; x < L; ++x)
        for (int y = 1; y < M; ++y) add(g.index(x, y, VB), g.index(x, y + 1, V), spec.t2, EdgeType::LongV);
    for (const auto& p : aux) {
        if (p.a.side == Side::Lower && p.b.side == Side::Lower) {
            int r = std::max(p.a.column, p.b.column), l = std::min(p.a.column, p.b.column);
            add(g.index(r, 1, V), g.index(l, 1, V), p.weight, EdgeType::AuxLower);
        } else if (p.a.side == Side::Upper && p.b.side == Side::Upper) {
            int r = std::max(p.a.column, p.b.column), l = std::min(p.a.column, p.b.column);
            add(g.index(l, M, VB), g.index(r, M, VB), p.weight, EdgeType::AuxUpper);
        } else {
            const BoundarySite& lo = p.a.side == Side::Lower ? p.a : p.b;
            const BoundarySite& up = p.a.side == Side::Lower ? p.b : p.a;
            add(g.index(lo.column, 1, V), g.index(up.column, M, VB), p.weight, EdgeType::Crossing);
        }
    }

    // rotation system in the local frame of the strip
    const int nv = static_cast<int>(g.vertices.size());
    std::vector<std::vector<std::pair<double, int>>> rot(nv);
    auto angle_at = [&](int e, bool at_u) -> double {
        const GEdge& ed = g.edges[e];
        int a = at_u ? ed.u : ed.v, b = at_u ? ed.v : ed.u;
        Kind ka = g.vertices[a].kind, kb = g.vertices[b].kind;
        switch (ed.type) {
            case EdgeType::Short:
                return std::atan2(kOffset[kb][1] - kOffset[ka][1], kOffset[kb][0] - kOffset[ka][0]);
            case EdgeType::LongH: return ka == HB ? 0.0 : M_PI;
            case EdgeType::LongV: return ka == VB ? M_PI / 2 : -M_PI / 2;
            case EdgeType::AuxLower: return -M_PI / 2;
            case EdgeType::AuxUpper: return M_PI / 2;
            case EdgeType::Crossing: break;
        }
        return 0;
    };
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        if (g.edges[e].type == EdgeType::Crossing) continue;
        rot[g.edges[e].u].push_back({angle_at(e, true), 2 * e});
        rot[g.edges[e].v].push_back({angle_at(e, false), 2 * e + 1});
    }
    std::vector<int> pos_in_rot(2 * g.edges.size(), -1);
    for (int v = 0; v < nv; ++v) {
        std::sort(rot[v].begin(), rot[v].end());
        for (int k = 0; k < static_cast<int>(rot[v].size()); ++k) pos_in_rot[rot[v][k].second] = k;
    }
    auto head = [&](int he) { const GEdge& e = g.edges[he / 2]; return he % 2 ? e.u : e.v; };
    auto column_step = [&](int he) -> int {
        const GEdge& e = g.edges[he / 2];
        int d;
        if (e.seam)
            d = -1;  // H at column 0 to Hbar at column -1
        else
            d = g.vertices[e.v].x - g.vertices[e.u].x;
        return he % 2 ? -d : d;
    };

    std::vector<char> used(2 * g.edges.size(), 0);
    for (int start = 0; start < static_cast<int>(2 * g.edges.size()); ++start) {
        if (used[start] || pos_in_rot[start] < 0) continue;
        Face f;
        int he = start;
        do {
            used[he] = 1;
            f.half_edges.push_back(he);
            f.net_dx += column_step(he);
            int w = head(he);
            int back = he ^ 1;
            int deg = static_cast<int>(rot[w].size());
            int p = pos_in_rot[back];
            he = rot[w][(p - 1 + deg) % deg].second;
        } while (he != start);
        // lower boundary is the inner hole of the planar embedding; the upper circle is unbounded
        f.bounded = f.net_dx <= 0;
        g.faces.push_back(std::move(f));
    }
    return g;
}

std::vector<int> verify_clockwise_odd(const DecoratedGraph& g) {
    std::vector<int> bad;
    for (int i = 0; i < static_cast<int>(g.faces.size()); ++i)
        if (g.faces[i].bounded && g.clockwise_count(g.faces[i]) % 2 == 0) bad.push_back(i);
    return bad;
}

std::vector<int> crossing_intersections(const DecoratedGraph& g) {
    std::vector<int> out;
    bool has_crossing = false;
    for (const auto& e : g.edges) has_crossing |= e.type == EdgeType::Crossing;
    if (!has_crossing) return out;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (g.edges[e].seam) out.push_back(e);
    return out;
}

nlohmann::json to_json(const DecoratedGraph& g) {
    nlohmann::json j;
    j["L"] = g.spec.L;
    j["M"] = g.spec.M;
    auto& vs = j["vertices"] = nlohmann::json::array();
    for (const auto& v : g.vertices) vs.push_back({{"x", v.x}, {"y", v.y}, {"kind", kind_name(v.kind)}});
    auto& es = j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        es.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}, {"sign", e.sign}, {"type", edge_type_name(e.type)},
                      {"seam", e.seam}});
    auto& fs = j["faces"] = nlohmann::json::array();
    for (const auto& f : g.faces) {
        nlohmann::json verts = nlohmann::json::array();
        for (int he : f.half_edges) {
            const GEdge& e = g.edges[he / 2];
            verts.push_back(he % 2 ? e.v : e.u);
        }
        fs.push_back({{"vertices", verts}, {"bounded", f.bounded}, {"clockwise", g.clockwise_count(f)}});
    }
    return j;
}

}  // namespace ising
