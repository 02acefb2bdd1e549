#include "ising/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "ising/correlations.hpp"
#include "ising/cylinder_green.hpp"
#include "ising/pfaffian.hpp"

namespace ising {

double quoted_isotropic_amplitude() {
    double c = 2 / (M_PI * (sqrt2() - 1));
    return c * c;
}

void fit_power_law(const std::vector<double>& x, const std::vector<double>& v, const std::vector<double>& w,
                   double& exponent, double& amplitude, double& r_squared) {
    const size_t n = x.size();
    if (n < 2 || v.size() != n || w.size() != n) throw Error("FitRejected", "need at least two weighted points");
    double sw = 0, sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0 && v[i] > 0)) throw Error("FitRejected", "log-log fit needs positive data");
        sw += w[i];
        sx += w[i] * std::log(x[i]);
        sy += w[i] * std::log(v[i]);
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = std::log(x[i]) - mx, dy = std::log(v[i]) - my;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    if (sxx == 0) throw Error("FitRejected", "separations must not all coincide");
    exponent = sxy / sxx;
    amplitude = std::exp(my - exponent * mx);
    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = std::log(v[i]) - (my + exponent * (std::log(x[i]) - mx));
        ss_res += w[i] * r * r;
    }
    r_squared = syy > 0 ? 1 - ss_res / syy : 1;
}

namespace {

void check_separations(const LatticeSpec& spec, const std::vector<int>& seps) {
    if (seps.empty()) throw Error("InvalidArgument", "no separations");
    if (!spec.critical()) throw Error("InvalidSpec", "the decay fit needs a critical spec");
    for (int x : seps) {
        if (x < 1) throw Error("InvalidArgument", "separations must be positive");
        if (4 * x > spec.L || x > spec.M) throw Error("InvalidArgument", "separation exceeds L/4 or M");
    }
}

std::vector<double> fit_weights(const std::vector<int>& seps) {
    std::vector<double> w(seps.size(), 1.0);
    std::vector<size_t> order(seps.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return seps[a] > seps[b]; });
    for (size_t i = 0; i < std::min<size_t>(2, order.size()); ++i) w[order[i]] = 2.0;
    return w;
}

}  // namespace

DecayFit two_point_decay(const LatticeSpec& spec, const std::vector<int>& separations, double r2_min) {
    check_separations(spec, separations);
    DecayFit f;
    f.separations = separations;
    CorrelationEngine eng(spec);
    for (int x : separations) f.values.push_back(eng.correlate({{0, Side::Lower}, {x, Side::Lower}}).value);
    f.weights = fit_weights(separations);
    std::vector<double> xs, chord;
    for (int x : separations) {
        xs.push_back(x);
        chord.push_back(spec.L / M_PI * std::sin(M_PI * x / spec.L));
    }
    fit_power_law(xs, f.values, f.weights, f.exponent, f.amplitude, f.r_squared);
    fit_power_law(chord, f.values, f.weights, f.chord_exponent, f.chord_amplitude, f.chord_r_squared);
    if (f.r_squared < r2_min)
        throw Error("FitRejected", "r^2 = " + std::to_string(f.r_squared) + " below " + std::to_string(r2_min));
    return f;
}

std::vector<double> boundary_two_point(const LatticeSpec& spec, const std::vector<int>& separations) {
    if (spec.tau != BC::Periodic) throw Error("InvalidSpec", "the translation-invariant engine covers periodic spins");
    CylinderGreen g(spec, grassmann_bc_for(spec.tau), separations);
    std::vector<double> out;
    for (int x : separations) out.push_back(-g.column(x, 1, V));
    return out;
}

std::string emit_plot_data(const DecayFit& fit, const std::string& csv_path) {
    if (fit.separations.empty() || fit.values.size() != fit.separations.size())
        throw Error("InvalidArgument", "fit has no data points");
    std::ofstream csv(csv_path);
    if (!csv) throw Error("IOError", "cannot write " + csv_path);
    csv << std::setprecision(12);
    csv << "# exponent=" << fit.exponent << " amplitude=" << fit.amplitude << " r_squared=" << fit.r_squared << "\n";
    csv << "separation,value,fit_value\n";
    for (size_t i = 0; i < fit.separations.size(); ++i) {
        double x = fit.separations[i];
        csv << fit.separations[i] << "," << fit.values[i] << "," << fit.amplitude * std::pow(x, fit.exponent) << "\n";
    }
    if (!csv) throw Error("IOError", "write failed for " + csv_path);
    std::filesystem::path gp(csv_path);
    gp.replace_extension(".gp");
    std::ofstream script(gp);
    if (!script) throw Error("IOError", "cannot write " + gp.string());
    std::string name = std::filesystem::path(csv_path).filename().string();
    script << "set datafile separator ','\n"
           << "set logscale xy\n"
           << "set xlabel 'separation'\n"
           << "set ylabel '<sigma sigma>'\n"
           << "set key autotitle columnhead\n"
           << "plot '" << name << "' using 1:2 with points pt 7, '' using 1:3 with lines\n";
    if (!script) throw Error("IOError", "write failed for " + gp.string());
    return gp.string();
}

SizeLadder rescaled_ladder(const std::vector<int>& Ls, int divisor, double t1) {
    SizeLadder s;
    if (t1 == 0) t1 = sqrt2() - 1;
    for (int L : Ls) {
        if (L % divisor != 0 || L / divisor < 1) throw Error("InvalidArgument", "L must be a multiple of the divisor");
        int x = L / divisor;
        double v = boundary_two_point(LatticeSpec::critical_t1(L, L, t1), {x})[0];
        s.L.push_back(L);
        s.separation.push_back(x);
        s.rescaled.push_back(x * v);
    }
    for (size_t i = 1; i < s.rescaled.size(); ++i) s.differences.push_back(std::abs(s.rescaled[i] - s.rescaled[i - 1]));
    s.cauchy = s.differences.size() >= 2;
    for (size_t i = 1; i < s.differences.size(); ++i)
        if (!(s.differences[i] < s.differences[i - 1])) s.cauchy = false;
    return s;
}

namespace {

double pf_small(const Dense& M) { return pfaffian(M).value(); }

}  // namespace

LimitCheck pfaffian_limit_check(const std::vector<double>& ys, const std::vector<int>& inv_a, double amplitude,
                                int size_factor, int wick_factor) {
    const int m = static_cast<int>(ys.size());
    if (m < 2 || m % 2) throw Error("InvalidTuple", "an even number of at least two positions is required");
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (ys[i] == ys[j]) throw Error("InvalidTuple", "continuum positions must be distinct");
    // right-to-left order on the lower boundary
    std::vector<double> y(ys);
    std::sort(y.begin(), y.end(), std::greater<double>());
    const double ymin = y.back();
    for (double& v : y) v -= ymin;

    Dense ref = Dense::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            ref(i, j) = amplitude / std::abs(y[i] - y[j]);
            ref(j, i) = -ref(i, j);
        }
    const double ref_pf = pf_small(ref);

    LimitCheck out;
    for (int n : inv_a) {
        std::vector<int> x(m);
        for (int i = 0; i < m; ++i) x[i] = static_cast<int>(std::floor(y[i] * n + 1e-9));
        for (int i = 0; i + 1 < m; ++i)
            if (x[i] == x[i + 1]) throw Error("InvalidTuple", "positions coincide on the lattice");
        const int L = size_factor * n;
        if (4 * x[0] > L) throw Error("InvalidArgument", "positions exceed L/4");
        std::vector<int> seps;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) seps.push_back(x[i] - x[j]);
        std::vector<double> two = boundary_two_point(LatticeSpec::isotropic_critical(L, L), seps);
        Dense M = Dense::Zero(m, m);
        int k = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                M(i, j) = two[k++];
                M(j, i) = -M(i, j);
            }
        const double val = std::pow(static_cast<double>(n), 0.5 * m) * pf_small(M);
        out.a.push_back(1.0 / n);
        out.L.push_back(L);
        out.value.push_back(val);
        out.reference.push_back(ref_pf);
        out.residual.push_back(std::abs(val - ref_pf));

        // m-point value from the sparse factorization against the Pfaffian of Fourier-route two-points
        const int Lw = wick_factor * n;
        if (m >= 4 && 4 * x[0] <= Lw) {
            LatticeSpec sw = LatticeSpec::isotropic_critical(Lw, Lw);
            BoundaryTuple t;
            for (int i = 0; i < m; ++i) t.push_back({x[i], Side::Lower});
            CorrelationEngine eng(sw);
            double direct = eng.correlate(t).value;
            std::vector<double> tw = boundary_two_point(sw, seps);
            Dense W = Dense::Zero(m, m);
            int q = 0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    W(i, j) = tw[q++];
                    W(j, i) = -W(i, j);
                }
            out.wick_residual.push_back(std::abs(direct - pf_small(W)));
        }
    }
    for (size_t i = 1; i < out.residual.size(); ++i) out.residual_ratio.push_back(out.residual[i] / out.residual[i - 1]);
    return out;
}

ProbeTable universality_probe(const InteractionSpec& inter, const std::vector<double>& lambdas, int L, int M,
                              double beta1, double zspin1) {
    if (static_cast<long>(L) * M > 20) throw Error("InvalidSpec", "the probe enumerates at most 20 spins");
    ProbeTable tab;
    tab.spec = LatticeSpec::isotropic_critical(L, M);
    tab.tuple = {{L / 2, Side::Lower}, {0, Side::Lower}};
    auto eval = [&](double lam) {
        ProbeRow r;
        r.lambda = lam;
        r.beta = beta0() + beta1 * lam;
        LatticeSpec s = tab.spec;
        s.t1 = s.t2 = std::tanh(r.beta);
        InteractionSpec in = inter;
        in.lambda = lam;
        r.value = brute_correlation(s, in, r.beta, tab.tuple);
        r.predicted = 1 + 2 * zspin1 * lam;
        return r;
    };
    const double v0 = eval(0).value;
    std::vector<double> ls(lambdas);
    if (std::find(ls.begin(), ls.end(), 0.0) == ls.end()) ls.push_back(0.0);
    std::sort(ls.begin(), ls.end());
    for (double lam : ls) {
        ProbeRow r = eval(lam);
        r.ratio = r.value / v0;
        tab.rows.push_back(r);
    }
    double lmax = 0;
    for (double lam : ls)
        if (lam > 0 && std::find(ls.begin(), ls.end(), -lam) != ls.end()) lmax = std::max(lmax, lam);
    if (lmax > 0) {
        auto ratio_at = [&](double lam) {
            for (const auto& r : tab.rows)
                if (r.lambda == lam) return r.ratio;
            return 0.0;
        };
        double rp = ratio_at(lmax), rm = ratio_at(-lmax);
        tab.first_difference = (rp - rm) / 2;
        tab.second_difference = rp - 2 + rm;
        tab.smooth = std::abs(tab.second_difference) <= 0.2 * std::abs(tab.first_difference);
    }
    return tab;
}

}  // namespace ising
