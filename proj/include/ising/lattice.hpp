#pragma once

#include "json.hpp"
#include <string>
#include <vector>

#include "ising/common.hpp"

namespace ising {

enum Kind { HB = 0, H = 1, VB = 2, V = 3, T = 4, TB = 5 };
const char* kind_name(Kind k);

enum class EdgeType { Short, LongH, LongV, AuxLower, AuxUpper, Crossing };
const char* edge_type_name(EdgeType t);

struct GVertex {
    int x, y;
    Kind kind;
};

// sign = +1: directed u -> v
struct GEdge {
    int u, v;
    double w;
    int sign;
    EdgeType type;
    bool seam = false;
};

struct Face {
    std::vector<int> half_edges;  // edge index, encoded as 2*e (along u->v) or 2*e+1 (against)
    bool bounded = true;
    int net_dx = 0;  // +-L for the two boundary circles
};

struct AuxPair {
    BoundarySite a, b;
    double weight = 0;
};

struct DecoratedGraph {
    LatticeSpec spec;
    std::vector<AuxPair> aux;
    std::vector<GVertex> vertices;
    std::vector<GEdge> edges;
    std::vector<Face> faces;

    int index(int x, int y, Kind k) const { return ((x * spec.M) + (y - 1)) * 6 + k; }
    int clockwise_count(const Face& f) const;
};

DecoratedGraph build_decorated_graph(const LatticeSpec& spec, const std::vector<AuxPair>& aux = {});

// Bounded faces whose number of clockwise edges is even.
std::vector<int> verify_clockwise_odd(const DecoratedGraph& g);

// Seam edges crossed by the lower-upper auxiliary edge when it is routed across the seam.
std::vector<int> crossing_intersections(const DecoratedGraph& g);

nlohmann::json to_json(const DecoratedGraph& g);

void validate_aux(const LatticeSpec& spec, const std::vector<AuxPair>& aux);

}  // namespace ising
