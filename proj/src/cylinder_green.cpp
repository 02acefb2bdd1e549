#include "ising/cylinder_green.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace ising {

namespace {

using C4 = Eigen::Matrix4cd;
using R4 = Eigen::Matrix4d;

}  // namespace

CylinderGreen::CylinderGreen(const LatticeSpec& spec, BC grassmann_bc, const std::vector<int>& column_dx)
    : spec_(spec) {
    spec.validate();
    const int L = spec.L, M = spec.M;
    if (L < 3) throw Error("InvalidSpec", "the Fourier engine needs L >= 3");
    sign_ = grassmann_bc == BC::Periodic ? 1 : -1;

    // translation-invariant couplings read off a three-column periodic copy of the action
    LatticeSpec s3 = spec;
    s3.L = 3;
    const Sparse A3 = assemble_action(s3, BC::Periodic).matrix;
    auto blk = [&](int d, int y, int yp) {
        R4 b;
        for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c)
                b(a, c) = A3.coeff(action_index(s3, 1, y, Kind(a)), action_index(s3, (1 + d + 3) % 3, yp, Kind(c)));
        return b;
    };
    std::vector<std::array<R4, 3>> dd(M + 1), pp(M + 1), qq(M + 1);  // [y][d + 1]
    for (int y = 1; y <= M; ++y)
        for (int d = -1; d <= 1; ++d) {
            dd[y][d + 1] = blk(d, y, y);
            if (y < M) {
                pp[y][d + 1] = blk(d, y, y + 1);
                qq[y][d + 1] = blk(d, y + 1, y);
            }
        }

    local_.assign(3, std::vector<R4>(3 * M, R4::Zero()));
    std::vector<int> stored;
    slot_.assign(L, -1);
    if (column_dx.empty()) {
        for (int dx = 0; dx < L; ++dx) stored.push_back(dx);
    } else {
        for (int d : column_dx) {
            int dx = ((d % L) + L) % L;
            if (slot_[dx] < 0) {
                slot_[dx] = 0;
                stored.push_back(dx);
            }
        }
    }
    for (size_t i = 0; i < stored.size(); ++i) slot_[stored[i]] = static_cast<int>(i);
    column_.assign(stored.size() * M * 4, 0.0);
    std::vector<std::complex<double>> colk(static_cast<size_t>(M) * 4);
    std::vector<C4> D(M + 1), P(M + 1), Q(M + 1), gl(M + 2), gr(M + 2), G0(M + 1), G1(M + 1), G2(M + 1);
    const double theta = sign_ > 0 ? 0.0 : M_PI;
    for (int n = 0; n < L; ++n) {
        const double k = (2 * M_PI * n + theta) / L;
        std::complex<double> ph[3] = {std::polar(1.0, -k), 1.0, std::polar(1.0, k)};
        for (int y = 1; y <= M; ++y) {
            D[y] = ph[0] * dd[y][0] + ph[1] * dd[y][1] + ph[2] * dd[y][2];
            if (y < M) {
                P[y] = ph[0] * pp[y][0] + ph[1] * pp[y][1] + ph[2] * pp[y][2];
                Q[y] = ph[0] * qq[y][0] + ph[1] * qq[y][1] + ph[2] * qq[y][2];
            }
        }
        // Schur recursions from below (gl) and from above (gr)
        gl[1] = D[1].inverse();
        for (int y = 2; y <= M; ++y) gl[y] = (D[y] - Q[y - 1] * gl[y - 1] * P[y - 1]).inverse();
        gr[M] = D[M].inverse();
        for (int y = M - 1; y >= 1; --y) gr[y] = (D[y] - P[y] * gr[y + 1] * Q[y]).inverse();
        for (int y = 1; y <= M; ++y) {
            C4 S = D[y];
            if (y > 1) S -= Q[y - 1] * gl[y - 1] * P[y - 1];
            if (y < M) S -= P[y] * gr[y + 1] * Q[y];
            G0[y] = S.inverse();
        }
        // G(y, y-1) and G(y, y-2) from the downward chain
        for (int y = 2; y <= M; ++y) G1[y] = -gr[y] * Q[y - 1] * G0[y - 1];
        for (int y = 3; y <= M; ++y) G2[y] = -gr[y] * Q[y - 1] * G1[y - 1];
        // column of (row 1, V)
        C4 Gy1 = G0[1];
        for (int y = 1; y <= M; ++y) {
            if (y > 1) Gy1 = -gr[y] * Q[y - 1] * Gy1;
            for (int a = 0; a < 4; ++a) colk[(y - 1) * 4 + a] = Gy1(a, V);
        }
        for (int dx = -1; dx <= 1; ++dx) {
            std::complex<double> e = std::polar(1.0 / L, k * dx);
            for (int y = 1; y <= M; ++y) {
                local_[dx + 1][(y - 1) * 3 + 0] += (e * G0[y]).real();
                if (y >= 2) local_[dx + 1][(y - 1) * 3 + 1] += (e * G1[y]).real();
                if (y >= 3) local_[dx + 1][(y - 1) * 3 + 2] += (e * G2[y]).real();
            }
        }
        for (size_t i = 0; i < stored.size(); ++i) {
            std::complex<double> e = std::polar(1.0 / L, k * stored[i]);
            double* out = &column_[i * M * 4];
            for (int i = 0; i < M * 4; ++i) out[i] += (e * colk[i]).real();
        }
    }
}

double CylinderGreen::local(int dx, int y, Kind a, int yp, Kind b) const {
    if (dx < -1 || dx > 1 || std::abs(y - yp) > 2) throw Error("OutOfRange", "entry is not local");
    if (yp > y) return -local(-dx, yp, b, y, a);
    return local_[dx + 1][(y - 1) * 3 + (y - yp)](a, b);
}

double CylinderGreen::column(int dx, int y, Kind a) const {
    const int L = spec_.L, M = spec_.M;
    int s = 1;
    while (dx < 0) {
        dx += L;
        s *= sign_;
    }
    while (dx >= L) {
        dx -= L;
        s *= sign_;
    }
    if (slot_[dx] < 0) throw Error("OutOfRange", "column displacement was not stored");
    return s * column_[(static_cast<size_t>(slot_[dx]) * M + (y - 1)) * 4 + a];
}

}  // namespace ising
