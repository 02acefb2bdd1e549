#include "ising/common.hpp"

#include <algorithm>
#include <sstream>

namespace ising {

void LatticeSpec::validate() const {
    if (L < 2) throw Error("InvalidSpec", "L must be >= 2");
    if (M < 1) throw Error("InvalidSpec", "M must be >= 1");
    if (!(t1 > 0 && t1 < 1)) throw Error("InvalidSpec", "t1 must lie in (0,1)");
    if (!(t2 > 0 && t2 < 1)) throw Error("InvalidSpec", "t2 must lie in (0,1)");
}

BoundaryTuple parse_tuple(const std::string& text) {
    BoundaryTuple out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("InvalidTuple", "expected side:column in '" + item + "'");
        std::string side = item.substr(0, colon);
        BoundarySite s;
        if (side == "l" || side == "L" || side == "lower")
            s.side = Side::Lower;
        else if (side == "u" || side == "U" || side == "upper")
            s.side = Side::Upper;
        else
            throw Error("InvalidTuple", "unknown side '" + side + "'");
        try {
            s.column = std::stoi(item.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error("InvalidTuple", "bad column in '" + item + "'");
        }
        out.push_back(s);
    }
    return out;
}

std::string format_tuple(const BoundaryTuple& t) {
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        s += (t[i].side == Side::Lower ? "l:" : "u:") + std::to_string(t[i].column);
    }
    return s;
}

void validate_tuple(const BoundaryTuple& t, int L) {
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i].column < 0 || t[i].column >= L)
            throw Error("InvalidTuple", "column " + std::to_string(t[i].column) + " outside [0,L)");
        for (size_t j = 0; j < i; ++j)
            if (t[i] == t[j]) throw Error("InvalidPair", "repeated site " + format_tuple({t[i]}));
    }
}

int cyclic_order(BoundaryTuple& t, int L) {
    validate_tuple(t, L);
    auto key = [](const BoundarySite& s) {
        return s.side == Side::Lower ? -s.column - 1 : s.column + (1 << 20);
    };
    int sign = 1;
    // insertion sort keeps track of the transposition count
    for (size_t i = 1; i < t.size(); ++i)
        for (size_t j = i; j > 0 && key(t[j]) < key(t[j - 1]); --j) {
            std::swap(t[j], t[j - 1]);
            sign = -sign;
        }
    return sign;
}

}  // namespace ising
