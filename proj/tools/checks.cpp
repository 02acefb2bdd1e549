#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "ising/correlations.hpp"
#include "ising/kasteleyn.hpp"
#include "ising/lattice.hpp"
#include "ising/oracle.hpp"
#include "ising/perturbation.hpp"
#include "ising/propagators.hpp"
#include "ising/scaling.hpp"

namespace ising::checks {

using nlohmann::json;

namespace {

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

BoundaryTuple random_tuple(int L, int m, bool mixed, std::mt19937_64& rng) {
    std::vector<BoundarySite> pool;
    for (int x = 0; x < L; ++x) {
        pool.push_back({x, Side::Lower});
        if (mixed) pool.push_back({x, Side::Upper});
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    if (mixed) {
        // make sure both boundaries appear
        auto lo = std::find_if(pool.begin(), pool.end(), [](const BoundarySite& s) { return s.side == Side::Lower; });
        std::iter_swap(pool.begin(), lo);
        auto up = std::find_if(pool.begin() + 1, pool.end(), [](const BoundarySite& s) { return s.side == Side::Upper; });
        std::iter_swap(pool.begin() + 1, up);
    }
    return BoundaryTuple(pool.begin(), pool.begin() + m);
}

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

}  // namespace

CheckResult partition_oracle(const CheckOptions& o) {
    CheckResult r{1, "partition oracle"};
    std::mt19937_64 rng(o.seed);
    double worst = 0;
    int n = 0;
    bool signs = true;
    json cases = json::array();
    for (int L : {2, 3, 4})
        for (int M : {2, 3})
            for (BC tau : {BC::Periodic, BC::Antiperiodic})
                for (int k = 0; k < o.draws; ++k) {
                    LatticeSpec s{L, M, uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95), tau};
                    SignedLogValue z = partition_function(s);
                    SignedLogValue e = brute_partition(s, InteractionSpec::none(), 0);
                    double rel = std::abs(std::expm1(z.log_abs - e.log_abs));
                    signs = signs && z.sign == e.sign;
                    worst = std::max(worst, rel);
                    ++n;
                    if (k == 0)
                        cases.push_back({{"L", L}, {"M", M}, {"tau", bc_name(tau)}, {"t1", s.t1}, {"t2", s.t2},
                                         {"log_Z", z.log_abs}, {"log_Z_enum", e.log_abs}});
                }
    r.pass = signs && worst <= 1e-10;
    r.summary = std::to_string(n) + " draws, max relative deviation " + fmt(worst, 3) + " (tol 1e-10)";
    r.detail = {{"draws", n}, {"max_relative_deviation", worst}, {"signs_agree", signs}, {"samples", cases}};
    return r;
}

CheckResult correlation_oracle(const CheckOptions& o) {
    CheckResult r{2, "correlation oracle"};
    std::mt19937_64 rng(o.seed + 1);
    double worst = 0;
    int n = 0, n_mixed = 0;
    for (int L : {2, 3, 4})
        for (int M : {2, 3})
            for (BC tau : {BC::Periodic, BC::Antiperiodic})
                for (int k = 0; k < o.draws; ++k) {
                    LatticeSpec s{L, M, uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95), tau};
                    CorrelationEngine eng(s);
                    for (int m : {2, 4})
                        for (bool mixed : {false, true}) {
                            if (!mixed && m > L) continue;
                            BoundaryTuple t = random_tuple(L, m, mixed, rng);
                            double v = eng.correlate(t).value;
                            double e = brute_correlation(s, InteractionSpec::none(), 0, t);
                            worst = std::max(worst, std::abs(v - e) / std::max(1.0, std::abs(e)));
                            ++n;
                            n_mixed += mixed;
                        }
                }
    r.pass = worst <= 1e-10;
    r.summary = std::to_string(n) + " tuples (" + std::to_string(n_mixed) + " mixed), max deviation " + fmt(worst, 3) +
                " (tol 1e-10)";
    r.detail = {{"tuples", n}, {"mixed_tuples", n_mixed}, {"max_deviation", worst}};
    return r;
}

CheckResult pfaffian_factorization(const CheckOptions& o) {
    CheckResult r{3, "pfaffian factorization"};
    std::mt19937_64 rng(o.seed + 2);
    double worst = 0;
    int n = 0;
    json rows = json::array();
    std::vector<LatticeSpec> specs{LatticeSpec::isotropic_critical(12, 6), LatticeSpec::isotropic_critical(12, 6, BC::Antiperiodic),
                                   LatticeSpec{12, 6, 0.3, 0.6, BC::Periodic}};
    for (const auto& s : specs)
        for (int m : {4, 6})
            for (int k = 0; k < 3; ++k) {
                BoundaryTuple t = random_tuple(12, m, false, rng);
                double res = pfaffian_factorization_residual(s, t);
                worst = std::max(worst, res);
                ++n;
                rows.push_back({{"t1", s.t1}, {"t2", s.t2}, {"tau", bc_name(s.tau)}, {"tuple", format_tuple(t)}, {"residual", res}});
            }
    r.pass = worst <= 1e-9;
    r.summary = std::to_string(n) + " tuples with m in {4,6} on 12x6, max residual " + fmt(worst, 3) + " (tol 1e-9)";
    r.detail = {{"max_residual", worst}, {"rows", rows}};
    return r;
}

CheckResult cancellation(const CheckOptions& o) {
    CheckResult r{4, "cancellation"};
    std::mt19937_64 rng(o.seed + 3);
    std::uniform_int_distribution<int> dxd(-6, 6), yd(1, 6), hd(-4, 0);
    double worst = 0;
    json rows = json::array();
    for (int k = 0; k < 20; ++k) {
        long dx = dxd(rng), y = yd(rng);
        int h = hd(rng);
        Mat2 a = scale_propagator({dx, 0}, {0, y}, h, t0());
        Mat2 b = scale_propagator({0, y}, {dx, 0}, h, t0());
        double v = std::max({std::abs(a(0, 0)), std::abs(a(0, 1)), std::abs(b(0, 0)), std::abs(b(1, 0))});
        worst = std::max(worst, v);
        rows.push_back({{"dx", dx}, {"zp2", y}, {"h", h}, {"max_component", v}});
    }
    r.pass = worst <= 1e-8;
    r.summary = "20 samples, max |component| " + fmt(worst, 3) + " (tol 1e-8)";
    r.detail = {{"max_component", worst}, {"rows", rows}};
    return r;
}

CheckResult appendix_constants(const CheckOptions&) {
    CheckResult r{5, "first-order constants"};
    FirstOrderReport rep = zspin_first_order({}, 1024, 128);
    const ClosedForms& c = rep.closed;
    struct Item {
        std::string name;
        double computed, closed, tol;
    };
    std::vector<Item> items{
        {"two_nu1", rep.two_nu1, c.two_nu1, 1e-8},
        {"eta1", rep.eta1, c.eta1, 1e-8},
        {"d0 (k1-integrated)", rep.couplings.d0, c.d0, 1e-8},
        {"d0 (2D quadrature)", rep.couplings.d0_2d, c.d0, 1e-6},
        {"row sum", c.row_sum + rep.bspin.row_sum_max_dev, c.row_sum, 1e-8},
        {"edge derivative", rep.bspin.edge_literal, c.edge_derivative, 1e-6},
        {"Bspin1", rep.Bspin1, c.Bspin1, 1e-6},
        {"Zspin1", rep.Zspin1, c.Zspin1, 1e-6},
    };
    r.pass = true;
    json rows = json::array();
    std::vector<std::string> failed;
    for (const auto& it : items) {
        double dev = std::abs(it.computed - it.closed);
        bool ok = dev <= it.tol;
        r.pass = r.pass && ok;
        if (!ok) failed.push_back(it.name);
        rows.push_back({{"name", it.name}, {"computed", it.computed}, {"closed_form", it.closed}, {"deviation", dev},
                        {"tol", it.tol}, {"pass", ok}});
    }
    if (failed.empty()) {
        r.summary = "all " + std::to_string(items.size()) + " constants within tolerance";
    } else {
        r.summary = "mismatch:";
        for (const auto& f : failed) r.summary += " " + f;
        r.summary += "; Zspin1 computed " + fmt(rep.Zspin1) + ", lattice " + fmt(rep.lattice.extrapolated) +
                     ", quoted " + fmt(c.Zspin1);
    }
    r.detail = {{"items", rows},
                {"diagnostics",
                 {{"edge_reduced_integral", rep.bspin.edge_reduced},
                  {"questa_literal", rep.bspin.questa_literal.value},
                  {"questa_reduced_integral", rep.bspin.questa_reduced},
                  {"Bspin1_reduced_integrals", rep.bspin.bspin_reduced},
                  {"Zspin1_reduced_integrals", rep.Zspin1_reduced},
                  {"Zspin1_lattice_extrapolated", rep.lattice.extrapolated},
                  {"lattice_rate", rep.lattice.rate}}}};
    return r;
}

CheckResult telescoping(const CheckOptions& o) {
    CheckResult r{6, "multiscale telescoping"};
    std::mt19937_64 rng(o.seed + 5);
    std::uniform_int_distribution<int> xd(-4, 4), yd(1, 5);
    const int h = -3;
    std::vector<Weighting> ws{Weighting::band(scale_le_band(h))};
    for (int j = h + 1; j <= 0; ++j) ws.push_back(Weighting::band(scale_band(j)));
    const QuadratureGrid fine = QuadratureGrid{}.refined();
    double worst = 0;
    json rows = json::array();
    for (int k = 0; k < 10; ++k) {
        Point z{xd(rng), yd(rng)}, zp{xd(rng), yd(rng)};
        Mat2 sum = Mat2::Zero();
        for (const auto& p : propagator_2d(z, zp, t0(), ws)) sum += p.total();
        double dev = max_norm(sum - full_critical_propagator(z, zp, t0(), fine));
        worst = std::max(worst, dev);
        rows.push_back({{"z", {z.x, z.y}}, {"zp", {zp.x, zp.y}}, {"deviation", dev}});
    }
    r.pass = worst <= 1e-7;
    r.summary = "10 points at h = -3, max deviation " + fmt(worst, 3) + " (tol 1e-7)";
    r.detail = {{"h", h}, {"max_deviation", worst}, {"rows", rows}};
    return r;
}

CheckResult scaling_fit(const CheckOptions&) {
    CheckResult r{7, "scaling fit"};
    std::vector<int> seps;
    for (int x = 8; x <= 32; ++x) seps.push_back(x);
    const double quoted = quoted_isotropic_amplitude();
    try {
        DecayFit f = two_point_decay(LatticeSpec::isotropic_critical(128, 128), seps);
        bool exp_ok = std::abs(f.exponent + 1) <= 0.02;
        bool amp_ok = std::abs(f.amplitude / quoted - 1) <= 0.02;
        r.pass = exp_ok && amp_ok;
        r.summary = "exponent " + fmt(f.exponent) + (exp_ok ? " ok" : " outside -1 +- 0.02") + ", amplitude " +
                    fmt(f.amplitude) + (amp_ok ? " ok" : " vs " + fmt(quoted) + " +- 2%") + ", r^2 " + fmt(f.r_squared);
        r.detail = {{"exponent", f.exponent}, {"amplitude", f.amplitude}, {"r_squared", f.r_squared},
                    {"quoted_amplitude", quoted}, {"chord_exponent", f.chord_exponent},
                    {"chord_amplitude", f.chord_amplitude}, {"chord_r_squared", f.chord_r_squared},
                    {"half_plane_amplitude", (sqrt2() + 1) / M_PI}};
    } catch (const Error& e) {
        r.pass = false;
        r.summary = e.what();
        r.detail = {{"error", e.code()}};
    }
    return r;
}

CheckResult universality(const CheckOptions&) {
    CheckResult r{8, "universality probe and size ladder"};
    FirstOrderReport rep = zspin_first_order();
    ProbeTable tab = universality_probe(InteractionSpec::appB(0), {-0.05, -0.02, 0.02, 0.05}, 4, 5, rep.beta1, rep.Zspin1);
    SizeLadder lad = rescaled_ladder({16, 32, 64, 128}, 8);
    r.pass = tab.smooth && lad.cauchy;
    r.summary = "second/first difference " + fmt(std::abs(tab.second_difference / tab.first_difference), 3) +
                " (<= 0.2), ladder differences " + (lad.cauchy ? "strictly decreasing" : "not decreasing");
    json rows = json::array();
    for (const auto& row : tab.rows) rows.push_back({{"lambda", row.lambda}, {"beta", row.beta}, {"ratio", row.ratio}});
    r.detail = {{"probe", {{"rows", rows}, {"first_difference", tab.first_difference},
                           {"second_difference", tab.second_difference}, {"smooth", tab.smooth}}},
                {"ladder", {{"L", lad.L}, {"rescaled", lad.rescaled}, {"differences", lad.differences}, {"cauchy", lad.cauchy}}}};
    return r;
}

CheckResult orientation_suite(const CheckOptions&) {
    CheckResult r{0, "orientation"};
    int n = 0;
    json bad = json::array();
    for (int L = 2; L <= 5; ++L)
        for (int M = 1; M <= 5; ++M) {
            auto g = build_decorated_graph({L, M, 0.5, 0.5, BC::Periodic});
            auto faces = verify_clockwise_odd(g);
            ++n;
            if (!faces.empty()) bad.push_back({{"L", L}, {"M", M}, {"even_faces", faces}});
        }
    r.pass = bad.empty();
    r.summary = std::to_string(n) + " cylinders, " + std::to_string(bad.size()) + " with even faces";
    r.detail = {{"cylinders", n}, {"violations", bad}};
    return r;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"partition", "correlations", "factorization", "cancellation",
                                                "constants", "telescoping", "scaling", "universality", "orientation"};
    return names;
}

CheckResult run_check(const std::string& name, const CheckOptions& o) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    if (name == "partition") r = partition_oracle(o);
    else if (name == "correlations") r = correlation_oracle(o);
    else if (name == "factorization") r = pfaffian_factorization(o);
    else if (name == "cancellation") r = cancellation(o);
    else if (name == "constants") r = appendix_constants(o);
    else if (name == "telescoping") r = telescoping(o);
    else if (name == "scaling") r = scaling_fit(o);
    else if (name == "universality") r = universality(o);
    else if (name == "orientation") r = orientation_suite(o);
    else throw Error("InvalidArgument", "unknown check '" + name + "'");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

json to_json(const CheckResult& r, bool with_time) {
    json j{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"detail", r.detail}};
    if (with_time) j["seconds"] = r.seconds;
    return j;
}

}  // namespace ising::checks
