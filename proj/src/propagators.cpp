#include "ising/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ising/quadrature.hpp"

namespace ising {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double critical_t2(double t1s) { return (1 - t1s) / (1 + t1s); }

struct Node {
    double k1, k2, w;
};

void add_square(std::vector<Node>& out, double a1, double b1, double a2, double b2, int n1, int n2) {
    const auto& [x1, w1] = gauss_legendre(n1);
    const auto& [x2, w2] = gauss_legendre(n2);
    double h1 = 0.5 * (b1 - a1), c1 = 0.5 * (b1 + a1), h2 = 0.5 * (b2 - a2), c2 = 0.5 * (b2 + a2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) out.push_back({c1 + h1 * x1[i], c2 + h2 * x2[j], w1[i] * w2[j] * h1 * h2});
}

int order_for(int base, double width, double freq) {
    return std::clamp(base + static_cast<int>(std::ceil(0.6 * width * freq)), base, 160);
}

// Nodes on [-pi,pi]^2: 12 squares of side s/2 on each annulus [-s,s]^2 \ [-s/2,s/2]^2, s = pi 2^-j.
// Squares touching the k1 axis away from the origin are graded towards k2 = 0, where the image
// term has a near-singularity at distance ~ k1^2 off the real k2 axis.
std::vector<Node> momentum_nodes(double t1s, double f1, double f2, const QuadratureGrid& g, double eta_min) {
    std::vector<Node> nodes;
    const double t2 = critical_t2(t1s);
    const double cB = t1s / ((1 + t1s) * (1 + t1s));
    auto Dmin = [&](double a1, double b1, double a2, double b2) {
        double k1 = (a1 <= 0 && b1 >= 0) ? 0 : std::min(std::abs(a1), std::abs(b1));
        double k2 = (a2 <= 0 && b2 >= 0) ? 0 : std::min(std::abs(a2), std::abs(b2));
        double h1 = std::sin(0.5 * k1), h2 = std::sin(0.5 * k2);
        return 4 * (1 - t2) * (1 - t2) * h1 * h1 + 4 * (1 - t1s) * (1 - t1s) * h2 * h2;
    };
    double s = M_PI;
    for (int lev = 0; lev < g.k_levels; ++lev, s *= 0.5) {
        const double q = s / 2;
        const double edges[5] = {-s, -q, 0, q, s};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                bool inner1 = i == 1 || i == 2, inner2 = k == 1 || k == 2;
                if (inner1 && inner2) continue;
                double a1 = edges[i], b1 = edges[i + 1], a2 = edges[k], b2 = edges[k + 1];
                if (eta_min > 0 && eta_min * Dmin(a1, b1, a2, b2) > 60) continue;
                int n1 = order_for(g.k_order, q, f1);
                if (!inner1 && inner2) {
                    // graded in k2 towards 0, ratio 4
                    double eps = std::max(0.25 * cB * q * q, 1e-300);
                    std::vector<double> cuts{0.0};
                    for (double c = eps; c < q; c *= 4) cuts.push_back(c);
                    cuts.push_back(q);
                    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
                        double lo = cuts[p], hi = cuts[p + 1];
                        int n2 = order_for(g.k_order, hi - lo, f2);
                        if (k == 2)
                            add_square(nodes, a1, b1, lo, hi, n1, n2);
                        else
                            add_square(nodes, a1, b1, -hi, -lo, n1, n2);
                    }
                } else {
                    add_square(nodes, a1, b1, a2, b2, n1, order_for(g.k_order, q, f2));
                }
            }
    }
    return nodes;
}

double weight_for(const Weighting& w, double D, int eta_nodes) {
    switch (w.type) {
        case Weighting::Point: return std::exp(-w.a * D);
        case Weighting::Full: return 1.0 / D;
        case Weighting::Band:
            return w.method == EtaMethod::ClosedForm ? eta_weight_closed(D, w.a, w.b)
                                                      : eta_weight_gl(D, w.a, w.b, eta_nodes);
    }
    return 0;
}

}  // namespace

const char* prop_kind_name(PropKind k) {
    switch (k) {
        case PropKind::Massive: return "massive";
        case PropKind::CutoffEta: return "cutoff";
        case PropKind::Scale: return "scale";
        case PropKind::ScaleLE: return "le";
        case PropKind::Infinite: return "bulk";
        case PropKind::Edge: return "edge";
        case PropKind::FullCritical: return "full";
    }
    return "?";
}

PropKind parse_prop_kind(const std::string& s) {
    for (PropKind k : {PropKind::Massive, PropKind::CutoffEta, PropKind::Scale, PropKind::ScaleLE,
                       PropKind::Infinite, PropKind::Edge, PropKind::FullCritical})
        if (s == prop_kind_name(k)) return k;
    throw Error("InvalidKind", "unknown propagator kind '" + s + "'");
}

void QuadratureGrid::validate() const {
    if (n_k < 2 || n_k % 2) throw Error("InvalidGrid", "n_k must be even and >= 2");
    if (eta_nodes < 2) throw Error("InvalidGrid", "eta_nodes must be >= 2");
    if (k_order < 4) throw Error("InvalidGrid", "k_order must be >= 4");
    if (k_levels < 1 || k_levels > 60) throw Error("InvalidGrid", "k_levels must lie in [1,60]");
}

QuadratureGrid QuadratureGrid::refined() const {
    QuadratureGrid r = *this;
    r.n_k *= 2;
    r.eta_nodes += 8;
    r.k_order += 8;
    r.k_levels += 4;
    r.self_check = false;
    return r;
}

double max_norm(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

Mat2 massive_propagator(long dx, double t1s, const QuadratureGrid& grid) {
    grid.validate();
    const int n = grid.n_k;
    cplx pm = 0, mp = 0;
    for (int j = 0; j < n; ++j) {
        double k = -M_PI + 2 * M_PI * j / n;
        cplx ph = std::polar(1.0, -k * static_cast<double>(dx));
        pm += ph / (1.0 + t1s * std::polar(1.0, k));
        mp -= ph / (1.0 + t1s * std::polar(1.0, -k));
    }
    Mat2 m = Mat2::Zero();
    m(0, 1) = pm / double(n);
    m(1, 0) = mp / double(n);
    return m;
}

Mat2 massive_propagator_series(long dx, double t1s) {
    Mat2 m = Mat2::Zero();
    if (dx >= 0) m(0, 1) = std::pow(-t1s, static_cast<double>(dx));
    if (dx <= 0) m(1, 0) = -std::pow(-t1s, static_cast<double>(-dx));
    return m;
}

EtaBand scale_band(int h) {
    if (h > 0) throw Error("InvalidScale", "h must be <= 0");
    if (h == 0) return {0, 1};
    return {std::ldexp(1.0, -2 * h - 2), std::ldexp(1.0, -2 * h)};
}

EtaBand scale_le_band(int h) {
    if (h > 0) throw Error("InvalidScale", "h must be <= 0");
    return {std::ldexp(1.0, -2 * h - 2), kInf};
}

std::vector<SplitValue> propagator_2d(Point z, Point zp, double t1s, const std::vector<Weighting>& ws,
                                      const QuadratureGrid& grid) {
    grid.validate();
    if (!(t1s > 0 && t1s < 1)) throw Error("InvalidSpec", "t1s must lie in (0,1)");
    if (z.y < 0 || zp.y < 0) throw Error("InvalidPoint", "rows must be >= 0");
    const double t2 = critical_t2(t1s);
    const double x = static_cast<double>(z.x - zp.x);
    const double yb = static_cast<double>(z.y - zp.y), yi = static_cast<double>(z.y + zp.y);
    double eta_min = kInf;
    for (const auto& w : ws) eta_min = std::min(eta_min, w.type == Weighting::Full ? 0.0 : w.a);
    auto nodes = momentum_nodes(t1s, std::abs(x), std::max(std::abs(yb), yi), grid, eta_min);

    const double a2 = 2 * (1 - t2) * (1 - t2), b2 = 2 * (1 - t1s) * (1 - t1s);
    const double om = 1 - t1s * t1s, norm = 1.0 / (4 * M_PI * M_PI);
    const cplx I(0, 1);
    std::vector<SplitValue> acc(ws.size());
    std::vector<double> wt(ws.size());
    for (const Node& nd : nodes) {
        double s1 = std::sin(nd.k1);
        double h1 = std::sin(0.5 * nd.k1), h2 = std::sin(0.5 * nd.k2);
        double u1 = 2 * h1 * h1, u2 = 2 * h2 * h2;  // 1 - cos k, accurate near 0
        double D = a2 * u1 + b2 * u2;
        bool any = false;
        for (size_t r = 0; r < ws.size(); ++r) {
            wt[r] = weight_for(ws[r], D, grid.eta_nodes) * nd.w * norm;
            any |= wt[r] != 0;
        }
        if (!any) continue;
        double oneB = 2 * t1s * u1 / ((1 + t1s) * (1 + t1s));
        cplx e2 = std::polar(1.0, nd.k2);
        cplx one_e2 = cplx(0, -2 * h2) * std::polar(1.0, 0.5 * nd.k2);  // 1 - e^{ik2}
        cplx P1 = std::polar(1.0, -nd.k1 * x);
        cplx Pb = P1 * std::polar(1.0, -nd.k2 * yb), Pi = P1 * std::polar(1.0, -nd.k2 * yi);
        cplx sin_t = 2.0 * I * t1s * s1;
        cplx up = one_e2 + oneB * e2, um = std::conj(one_e2) + oneB * std::conj(e2);
        Mat2 bulk, img;
        bulk << -sin_t, -om * um, om * up, sin_t;
        img << -sin_t, -om * up, om * up, (um / up) * sin_t;
        bulk *= Pb;
        img *= Pi;
        for (size_t r = 0; r < ws.size(); ++r) {
            acc[r].bulk += wt[r] * bulk;
            acc[r].edge -= wt[r] * img;
        }
    }
    return acc;
}

Mat2 cutoff_propagator(Point z, Point zp, double eta, double t1s, const QuadratureGrid& grid) {
    if (eta < 0) throw Error("InvalidEta", "eta must be >= 0");
    return propagator_2d(z, zp, t1s, {Weighting::point(eta)}, grid)[0].total();
}

Mat2 scale_propagator(Point z, Point zp, int h, double t1s, const QuadratureGrid& grid, EtaMethod m) {
    return propagator_2d(z, zp, t1s, {Weighting::band(scale_band(h), m)}, grid)[0].total();
}

Mat2 scale_le_propagator(Point z, Point zp, int h, double t1s, const QuadratureGrid& grid, EtaMethod m) {
    return propagator_2d(z, zp, t1s, {Weighting::band(scale_le_band(h), m)}, grid)[0].total();
}

std::pair<Mat2, Mat2> bulk_edge_split(Point z, Point zp, int h, double t1s, const QuadratureGrid& grid) {
    auto v = propagator_2d(z, zp, t1s, {Weighting::band(scale_band(h))}, grid)[0];
    return {v.bulk, v.edge};
}

Mat2 full_critical_propagator(Point z, Point zp, double t1s, const QuadratureGrid& grid) {
    return propagator_2d(z, zp, t1s, {Weighting::full()}, grid)[0].total();
}

PropagatorSample evaluate(PropKind kind, Point z, Point zp, double t1s, int h, double eta,
                          const QuadratureGrid& grid) {
    PropagatorSample s;
    s.z = z;
    s.zp = zp;
    s.kind = kind;
    s.h = h;
    s.eta = eta;
    auto run = [&](const QuadratureGrid& g) -> Mat2 {
        switch (kind) {
            case PropKind::Massive: {
                if (std::labs(z.x - zp.x) > 1000000) throw Error("InvalidPoint", "|dx| must be <= 1e6");
                if (z.y != zp.y) return Mat2::Zero();
                return massive_propagator(z.x - zp.x, t1s, g);
            }
            case PropKind::CutoffEta: return cutoff_propagator(z, zp, eta, t1s, g);
            case PropKind::Scale: return scale_propagator(z, zp, h, t1s, g);
            case PropKind::ScaleLE: return scale_le_propagator(z, zp, h, t1s, g);
            case PropKind::Infinite: return bulk_edge_split(z, zp, h, t1s, g).first;
            case PropKind::Edge: return bulk_edge_split(z, zp, h, t1s, g).second;
            case PropKind::FullCritical: return full_critical_propagator(z, zp, t1s, g);
        }
        return Mat2::Zero();
    };
    s.value = run(grid);
    s.max_imag = s.value.imag().cwiseAbs().maxCoeff();
    if (grid.self_check) {
        Mat2 fine = run(grid.refined());
        s.error_estimate = max_norm(fine - s.value);
        if (s.error_estimate > grid.tol)
            throw Error("QuadratureNotConverged", "refined grid changes the value by " +
                                                      std::to_string(s.error_estimate));
    }
    return s;
}

double critical_G(long x, long y) {
    const double r2 = sqrt2();
    const long ax = std::labs(x);
    auto f = [&](double k) {
        double hk = std::sin(0.5 * k), u = 2 * hk * hk;
        double c = 1 + u;
        double s = std::sqrt(u * (2 + u));
        double r = c - s;
        double rp = std::pow(r, static_cast<double>(ax));
        cplx e = std::polar(1.0, k);
        cplx F = (1.0 - (2 - r2) * e) * rp / s - (r2 - 1) * e * (c * rp / s - (ax == 0 ? 1.0 : 0.0));
        return std::real(std::polar(1.0, -k * static_cast<double>(y)) * F);
    };
    return (r2 + 1) / (2 * M_PI) * graded_integrate_0pi(f, static_cast<double>(std::labs(y)) + 1.0, 20);
}

double g_inf_mp(Point z, Point zp) { return critical_G(z.x - zp.x, z.y - zp.y); }
double g_edge_mp(Point z, Point zp) { return -critical_G(z.x - zp.x, z.y + zp.y); }
double g_half_mp(Point z, Point zp) { return g_inf_mp(z, zp) + g_edge_mp(z, zp); }

double half_plane_row_sum(long z2, long N) {
    const double r2 = sqrt2();
    auto f = [&](double k) {
        double hk = std::sin(0.5 * k), u = 2 * hk * hk;
        double c = 1 + u;
        double s = std::sqrt(u * (2 + u));
        double r = c - s;
        double P = N < 0 ? (1 + r) / (1 - r) : (1 + r - 2 * std::pow(r, static_cast<double>(N + 1))) / (1 - r);
        cplx e = std::polar(1.0, k);
        cplx F = (1.0 - (2 - r2) * e) * P / s - (r2 - 1) * e * (c * P / s - 1.0);
        // e^{-ik(1-z2)} - e^{-ik(1+z2)}
        cplx phase = std::conj(e) * cplx(0, 2 * std::sin(k * static_cast<double>(z2)));
        return std::real(phase * F);
    };
    double freq = static_cast<double>(z2) + 1.0;
    return (r2 + 1) / (2 * M_PI) * graded_integrate_0pi(f, freq, 20);
}

BoundFit coincident_bound_fit(const std::vector<int>& hs, Point z, double t1s, const QuadratureGrid& grid,
                              bool bulk_only) {
    BoundFit f;
    double lo = kInf;
    for (int h : hs) {
        auto v = propagator_2d(z, z, t1s, {Weighting::band(scale_band(h))}, grid)[0];
        double n = max_norm(bulk_only ? v.bulk : v.total());
        f.h.push_back(h);
        f.norm.push_back(n);
        f.ratio.push_back(n / std::ldexp(1.0, h));
        f.C = std::max(f.C, f.ratio.back());
        lo = std::min(lo, f.ratio.back());
    }
    f.spread = lo > 0 ? f.C / lo : kInf;
    return f;
}

DecayFit1 decay_fit(int h, double t1s, const QuadratureGrid& grid, long y) {
    DecayFit1 f;
    f.h = h;
    const long scale = 1L << (-h);
    if (y <= 0) y = 4 * scale;
    // distances 0, scale/2, ..., 4 scale in steps of scale/2 (at least 1)
    long step = std::max(1L, scale / 2);
    for (long d = 0; d <= 4 * scale; d += step) {
        Mat2 v = scale_propagator({d, y}, {0, y}, h, t1s, grid);
        f.distance.push_back(d);
        f.norm.push_back(max_norm(v));
    }
    size_t n = f.distance.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double xv = static_cast<double>(f.distance[i]), yv = std::log(f.norm[i]);
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
    }
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.c0 = -f.slope / std::ldexp(1.0, h);
    f.suppression = f.norm.back() / f.norm.front();
    return f;
}

}  // namespace ising
