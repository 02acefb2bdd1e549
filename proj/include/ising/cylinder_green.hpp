#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ising/kasteleyn.hpp"

namespace ising {

// Entries of C = A^{-1} for the reduced action of a cylinder without auxiliary edges, using the
// horizontal translation symmetry: for each twisted momentum the action is block tridiagonal in
// the row index. Available entries are the "local" ones (|dx| <= 1, |y - y'| <= 2) and the full
// column of the lower-boundary variable V at row 1.
class CylinderGreen {
public:
    // column_dx restricts the stored column to the listed displacements (mod L); empty keeps all.
    CylinderGreen(const LatticeSpec& spec, BC grassmann_bc, const std::vector<int>& column_dx = {});

    const LatticeSpec& spec() const { return spec_; }
    int sign() const { return sign_; }

    // C((x, y, a), (x', y', b)) with dx = x - x'; requires |dx| <= 1 and |y - y'| <= 2.
    double local(int dx, int y, Kind a, int yp, Kind b) const;
    // C((x, y, a), (x', 1, V)) with dx = x - x', any integer dx (twisted periodicity).
    double column(int dx, int y, Kind a) const;
    // C((x', 1, V), (x, y, a)) = -column(...)
    double row(int dx, int y, Kind a) const { return -column(-dx, y, a); }

private:
    LatticeSpec spec_;
    int sign_ = 1;
    // local_[dx + 1][(y - 1) * 3 + j] is the 4x4 block C(y, y - j) at displacement dx
    std::vector<std::vector<Eigen::Matrix4d>> local_;
    // column_[(slot_[dx] * M + (y - 1)) * 4 + a] for dx in [0, L); slot_[dx] < 0 if not stored
    std::vector<int> slot_;
    std::vector<double> column_;
};

}  // namespace ising
