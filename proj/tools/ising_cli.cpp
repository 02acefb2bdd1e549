#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "checks.hpp"
#include "ising/correlations.hpp"
#include "ising/kasteleyn.hpp"
#include "ising/lattice.hpp"
#include "ising/oracle.hpp"
#include "ising/perturbation.hpp"
#include "ising/propagators.hpp"
#include "ising/scaling.hpp"
#include "json.hpp"

#ifndef ISING_VERSION
#define ISING_VERSION "dev"
#endif

using nlohmann::json;
using namespace ising;

namespace {

struct ArgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LatticeOpts {
    int L = 4, M = 3;
    double t1 = std::sqrt(2.0) - 1, t2 = std::sqrt(2.0) - 1;
    std::string tau = "p";
};

struct Opts {
    std::string config, output;
    int threads = 1;
    std::uint64_t seed = 20240611;

    LatticeOpts lat;
    std::string sites, sites_file;
    bool verify = false;

    double beta = 0, lambda = 0;
    std::string interaction = "appB", mode = "enum";

    std::string kind = "full", z = "0,1", zp = "0,1", batch;
    int h = 0;
    double eta = 0, t1s = std::sqrt(2.0) - 1;
    bool self_check = false;

    int grid_n = 2048;
    long n_terms = 1024;
    bool lattice_check = false;
    int lattice_N = 256;

    int Lmax = 128;
    std::string seps = "8:32", csv = "scaling_fit.csv";
    double r2_min = 0.999, fit_t1 = 0;

    double probe_lambda = 0.05;
    int probe_L = 4, probe_M = 5;

    std::string target = "all";
    int draws = 10;
    int check_L = 0, check_M = 0;
};

struct Subs {
    CLI::App *partition, *correlate, *oracle, *propagator, *zspin, *scaling, *universality, *check;
};

void add_lattice(CLI::App* s, LatticeOpts& l) {
    s->add_option("--L", l.L, "columns")->check(CLI::Range(2, 1 << 16));
    s->add_option("--M", l.M, "rows")->check(CLI::Range(1, 1 << 16));
    s->add_option("--t1", l.t1, "tanh K1")->check(CLI::Range(0.0, 1.0));
    s->add_option("--t2", l.t2, "tanh K2")->check(CLI::Range(0.0, 1.0));
    s->add_option("--tau", l.tau, "spin boundary condition")->check(CLI::IsMember({"p", "a", "periodic", "antiperiodic"}));
}

Subs build(CLI::App& app, Opts& o) {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", o.config, "JSON config file");
    app.add_option("--output", o.output, "write the result here instead of stdout");
    app.add_option("--threads", o.threads, "worker budget")->envname("ISING_THREADS")->check(CLI::Range(1, 256));
    app.add_option("--seed", o.seed, "seed for randomized draws");

    Subs s{};
    s.partition = app.add_subcommand("partition", "partition function of a cylinder");
    add_lattice(s.partition, o.lat);

    s.correlate = app.add_subcommand("correlate", "boundary spin correlations");
    add_lattice(s.correlate, o.lat);
    s.correlate->add_option("--sites", o.sites, "tuple such as l:7,l:5,u:2");
    s.correlate->add_option("--sites-file", o.sites_file, "batch CSV, one tuple per line")->check(CLI::ExistingFile);
    s.correlate->add_flag("--verify", o.verify, "compare with exhaustive enumeration (L*M <= 24)");

    s.oracle = app.add_subcommand("oracle", "exhaustive enumeration or transfer matrix");
    add_lattice(s.oracle, o.lat);
    s.oracle->add_option("--beta", o.beta, "inverse temperature (sets t1 = t2 = tanh beta unless given)")
        ->check(CLI::Range(0.0, 10.0));
    s.oracle->add_option("--lambda", o.lambda, "interaction strength")->check(CLI::Range(-1.0, 1.0));
    s.oracle->add_option("--interaction", o.interaction)->check(CLI::IsMember({"none", "appB"}));
    s.oracle->add_option("--sites", o.sites, "tuples separated by ';'");
    s.oracle->add_option("--mode", o.mode)->check(CLI::IsMember({"enum", "transfer"}));

    s.propagator = app.add_subcommand("propagator", "propagator components");
    s.propagator->set_help_flag("--help", "Print this help message and exit");
    s.propagator->add_option("--kind", o.kind)->check(CLI::IsMember({"massive", "cutoff", "scale", "le", "bulk", "edge", "full"}));
    s.propagator->add_option("--h", o.h, "scale index")->check(CLI::Range(-20, 0));
    s.propagator->add_option("--eta", o.eta, "heat-kernel cutoff")->check(CLI::Range(0.0, 1e12));
    s.propagator->add_option("--z", o.z, "x,y");
    s.propagator->add_option("--zp", o.zp, "x,y");
    s.propagator->add_option("--t1s", o.t1s, "horizontal activity")->check(CLI::Range(0.0, 1.0));
    s.propagator->add_option("--batch", o.batch, "CSV with columns kind,h,eta,z1,z2,zp1,zp2")->check(CLI::ExistingFile);
    s.propagator->add_flag("--self-check", o.self_check, "estimate the error on a refined grid");

    s.zspin = app.add_subcommand("zspin", "first-order renormalization of the boundary spin");
    s.zspin->add_option("--grid-n", o.grid_n, "trapezoid points of the one-dimensional integrals")->check(CLI::Range(16, 1 << 20));
    s.zspin->add_option("--n-terms", o.n_terms, "cutoff of the boundary-row series")->check(CLI::Range(16L, 1L << 20));
    s.zspin->add_flag("--lattice-check", o.lattice_check, "add the finite-lattice response");
    s.zspin->add_option("--lattice-N", o.lattice_N, "cylinder size of the lattice check")->check(CLI::Range(32, 4096));

    s.scaling = app.add_subcommand("scaling-fit", "power-law fit of the boundary two-point function");
    s.scaling->add_option("--Lmax", o.Lmax, "L = M of the critical cylinder")->check(CLI::Range(8, 4096));
    s.scaling->add_option("--seps", o.seps, "a:b, a:b:step or a comma list");
    s.scaling->add_option("--csv", o.csv, "CSV path; the gnuplot script goes next to it");
    s.scaling->add_option("--r2-min", o.r2_min)->check(CLI::Range(0.0, 1.0));
    s.scaling->add_option("--t1", o.fit_t1, "t1 on the critical line (default isotropic)")->check(CLI::Range(0.0, 1.0));

    s.universality = app.add_subcommand("universality", "lambda probe on an enumerable lattice");
    s.universality->add_option("--lambda", o.probe_lambda)->check(CLI::Range(1e-6, 0.5));
    s.universality->add_option("--L", o.probe_L)->check(CLI::Range(2, 10));
    s.universality->add_option("--M", o.probe_M)->check(CLI::Range(1, 10));

    s.check = app.add_subcommand("check", "verification suite");
    std::vector<std::string> targets{"all"};
    for (const auto& n : checks::check_names()) targets.push_back(n);
    s.check->add_option("target,--target", o.target)->check(CLI::IsMember(targets));
    s.check->add_option("--draws", o.draws, "random draws per grid point")->check(CLI::Range(1, 1000));
    s.check->add_option("--L", o.check_L, "dump the decorated graph of this cylinder (orientation)")->check(CLI::Range(2, 64));
    s.check->add_option("--M", o.check_M)->check(CLI::Range(1, 64));
    return s;
}

// Turns `--config` entries into command-line tokens for options not given explicitly.
std::vector<std::string> config_tokens(const json& cfg, CLI::App& app, const std::string& sub_name, bool global) {
    std::vector<std::string> out;
    CLI::App* scope = global ? &app : app.get_subcommand(sub_name);
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (global && it.value().is_object()) {
            bool known = false;
            for (const auto* sc : app.get_subcommands({})) known = known || sc->get_name() == it.key();
            if (!known) throw ArgError("config: unknown section '" + it.key() + "'");
            continue;
        }
        if (global && it.key() == "config") throw ArgError("config: nested config is not allowed");
        CLI::Option* op = scope->get_option_no_throw("--" + it.key());
        if (op == nullptr) throw ArgError("config: unknown key '" + it.key() + "'" + (global ? "" : " in '" + sub_name + "'"));
        if (op->count() > 0) continue;
        const json& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) out.push_back("--" + it.key());
            continue;
        }
        out.push_back("--" + it.key());
        auto scalar = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
        if (v.is_array())
            for (const auto& e : v) out.push_back(scalar(e));
        else if (v.is_object() || v.is_null())
            throw ArgError("config: '" + it.key() + "' must be a scalar or a list");
        else
            out.push_back(scalar(v));
    }
    return out;
}

BC parse_tau(const std::string& s) { return (s == "a" || s == "antiperiodic") ? BC::Antiperiodic : BC::Periodic; }

LatticeSpec lattice(const LatticeOpts& l) { return {l.L, l.M, l.t1, l.t2, parse_tau(l.tau)}; }

json lattice_json(const LatticeSpec& s) {
    return {{"L", s.L}, {"M", s.M}, {"t1", s.t1}, {"t2", s.t2}, {"tau", bc_name(s.tau)}};
}

BoundaryTuple tuple_arg(const std::string& text) {
    try {
        return parse_tuple(text);
    } catch (const Error& e) {
        throw ArgError(e.what());
    }
}

Point point_arg(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, rest;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || std::getline(ss, rest, ','))
        throw ArgError("expected x,y but got '" + text + "'");
    try {
        size_t ia = 0, ib = 0;
        long x = std::stol(a, &ia), y = std::stol(b, &ib);
        if (ia != a.size() || ib != b.size()) throw std::invalid_argument("trailing");
        return {x, y};
    } catch (const std::exception&) {
        throw ArgError("expected integer coordinates x,y but got '" + text + "'");
    }
}

std::vector<int> separations_arg(const std::string& text) {
    std::vector<int> out;
    try {
        if (text.find(':') != std::string::npos) {
            std::vector<int> p;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ':')) p.push_back(std::stoi(item));
            if (p.size() < 2 || p.size() > 3) throw std::invalid_argument("range");
            int step = p.size() == 3 ? p[2] : 1;
            if (step < 1 || p[0] > p[1]) throw std::invalid_argument("range");
            for (int x = p[0]; x <= p[1]; x += step) out.push_back(x);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
        }
    } catch (const std::exception&) {
        throw ArgError("bad separations '" + text + "'");
    }
    if (out.empty()) throw ArgError("no separations in '" + text + "'");
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IOError", "cannot read " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

json mat_json(const Mat2& m) {
    json re = json::array(), im = json::array();
    for (int i = 0; i < 2; ++i) {
        re.push_back({m(i, 0).real(), m(i, 1).real()});
        im.push_back({m(i, 0).imag(), m(i, 1).imag()});
    }
    return {{"real", re}, {"imag", im}};
}

json grid_json(const QuadratureGrid& g) {
    return {{"n_k", g.n_k}, {"eta_nodes", g.eta_nodes}, {"k_order", g.k_order}, {"k_levels", g.k_levels}, {"tol", g.tol}};
}

json cmd_partition(const Opts& o, json& prov) {
    LatticeSpec s = lattice(o.lat);
    s.validate();
    SignedLogValue z = partition_function(s);
    PrefactorLog pre = prefactor(s);
    prov["parameters"] = lattice_json(s);
    return {{"log_Z", z.log_abs}, {"sign", z.sign}, {"prefactor_log", pre.log_value}, {"prefactor_sign", pre.parity_sign}};
}

json cmd_correlate(const Opts& o, json& prov) {
    LatticeSpec s = lattice(o.lat);
    s.validate();
    if (o.sites.empty() == o.sites_file.empty()) throw ArgError("give exactly one of --sites and --sites-file");
    if (o.verify && static_cast<long>(s.L) * s.M > kMaxEnumSites)
        throw ArgError("--verify needs L*M <= " + std::to_string(kMaxEnumSites));
    std::vector<BoundaryTuple> tuples;
    if (!o.sites.empty()) tuples.push_back(tuple_arg(o.sites));
    else
        for (const auto& line : read_lines(o.sites_file)) tuples.push_back(tuple_arg(line));
    CorrelationEngine eng(s);
    json rows = json::array();
    for (const auto& t : tuples) {
        CorrelationResult r = eng.correlate(t);
        json row{{"sites", format_tuple(t)}, {"value", r.value}, {"method", method_name(r.method)}};
        if (o.verify) row["residual"] = std::abs(r.value - brute_correlation(s, InteractionSpec::none(), 0, t));
        rows.push_back(row);
    }
    prov["parameters"] = lattice_json(s);
    if (!o.sites.empty()) return rows[0];
    return {{"results", rows}};
}

json cmd_oracle(const Opts& o, const CLI::App& sub, json& prov) {
    LatticeSpec s = lattice(o.lat);
    double beta = o.beta;
    if (sub.count("--beta") == 0) beta = beta0();
    if (sub.count("--beta") > 0 && sub.count("--t1") == 0) s.t1 = std::tanh(beta);
    if (sub.count("--beta") > 0 && sub.count("--t2") == 0) s.t2 = std::tanh(beta);
    s.validate();
    InteractionSpec inter = o.interaction == "appB" ? InteractionSpec::appB(o.lambda) : InteractionSpec::none();
    if (o.interaction == "none" && o.lambda != 0) throw ArgError("--lambda needs --interaction appB");
    std::vector<BoundaryTuple> tuples;
    if (!o.sites.empty()) {
        std::stringstream ss(o.sites);
        std::string item;
        while (std::getline(ss, item, ';')) tuples.push_back(tuple_arg(item));
    }
    json out{{"mode", o.mode}};
    if (o.mode == "transfer") {
        if (!tuples.empty()) throw ArgError("--mode transfer computes the partition function only");
        SignedLogValue z = transfer_matrix_partition(s, inter, beta);
        out["log_Z"] = z.log_abs;
        out["sign"] = z.sign;
    } else {
        OracleResult r = brute_force(s, inter, beta, tuples);
        out["log_Z"] = r.Z.log_abs;
        out["sign"] = r.Z.sign;
        json rows = json::array();
        for (size_t i = 0; i < tuples.size(); ++i)
            rows.push_back({{"sites", format_tuple(tuples[i])}, {"value", r.correlations[i]}});
        out["correlations"] = rows;
    }
    json p = lattice_json(s);
    p["beta"] = beta;
    p["lambda"] = o.lambda;
    p["interaction"] = o.interaction;
    prov["parameters"] = p;
    return out;
}

json propagator_row(PropKind kind, Point z, Point zp, double t1s, int h, double eta, const QuadratureGrid& grid) {
    PropagatorSample p = evaluate(kind, z, zp, t1s, h, eta, grid);
    return {{"kind", prop_kind_name(kind)}, {"z", {z.x, z.y}}, {"zp", {zp.x, zp.y}}, {"h", h}, {"eta", eta},
            {"value", mat_json(p.value)}, {"error_estimate", p.error_estimate}, {"max_imag", p.max_imag}};
}

json cmd_propagator(const Opts& o, json& prov) {
    QuadratureGrid grid;
    grid.self_check = o.self_check;
    prov["parameters"] = {{"t1s", o.t1s}, {"self_check", o.self_check}};
    prov["quadrature"] = grid_json(grid);
    if (o.batch.empty()) return propagator_row(parse_prop_kind(o.kind), point_arg(o.z), point_arg(o.zp), o.t1s, o.h, o.eta, grid);
    json rows = json::array();
    auto lines = read_lines(o.batch);
    if (!lines.empty() && lines[0].rfind("kind", 0) == 0) lines.erase(lines.begin());
    for (const auto& line : lines) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f.size() != 7) throw ArgError("batch line needs kind,h,eta,z1,z2,zp1,zp2: '" + line + "'");
        PropKind kind;
        int h;
        double eta;
        Point z, zp;
        try {
            kind = parse_prop_kind(f[0]);
            h = std::stoi(f[1]);
            eta = std::stod(f[2]);
            z = point_arg(f[3] + "," + f[4]);
            zp = point_arg(f[5] + "," + f[6]);
        } catch (const std::exception& e) {
            throw ArgError("bad batch line '" + line + "': " + e.what());
        }
        rows.push_back(propagator_row(kind, z, zp, o.t1s, h, eta, grid));
    }
    return {{"results", rows}};
}

json report_json(const FirstOrderReport& r) {
    json j{{"nu1", r.nu1}, {"two_nu1", r.two_nu1}, {"zeta1", r.zeta1}, {"eta1", r.eta1},
           {"Z1", r.Z1}, {"beta1", r.beta1}, {"tau1", r.tau1}, {"Bspin1", r.Bspin1}, {"Zspin1", r.Zspin1},
           {"Zspin1_reduced", r.Zspin1_reduced}, {"residuals", r.residuals}};
    const auto& c = r.couplings;
    j["couplings"] = {{"d0", c.d0}, {"d1", c.d1}, {"d0_1d", c.d0_1d}, {"d1_1d", c.d1_1d},
                      {"d0_2d", c.d0_2d}, {"d1_2d", c.d1_2d}, {"residuals", c.residuals}};
    j["dressed"] = {{"Z1", r.dressed.Z1}, {"beta1", r.dressed.beta1}, {"tau1", r.dressed.tau1},
                    {"identity_residual", r.dressed.identity_residual}};
    const auto& b = r.bspin;
    j["bspin"] = {{"edge_literal", b.edge_literal},
                  {"edge_reduced", b.edge_reduced},
                  {"questa_literal",
                   {{"value", b.questa_literal.value}, {"partial", b.questa_literal.partial}, {"tail", b.questa_literal.tail},
                    {"error", b.questa_literal.error}, {"cesaro", b.questa_literal.cesaro}, {"terms", b.questa_literal.terms}}},
                  {"questa_reduced", b.questa_reduced},
                  {"bracket_literal", b.bracket_literal},
                  {"bracket_reduced", b.bracket_reduced},
                  {"bspin_raw", b.bspin_raw},
                  {"bspin_bracket", b.bspin_bracket},
                  {"bspin_reduced", b.bspin_reduced},
                  {"bspin_unshifted", b.bspin_unshifted},
                  {"row_sum_max_dev", b.row_sum_max_dev},
                  {"residuals", b.residuals}};
    const auto& k = r.closed;
    j["closed_forms"] = {{"d0", k.d0}, {"d1", k.d1}, {"two_nu1", k.two_nu1}, {"eta1", k.eta1}, {"Z1", k.Z1},
                         {"beta1", k.beta1}, {"tau1", k.tau1}, {"edge_derivative", k.edge_derivative},
                         {"questa", k.questa}, {"Bspin1", k.Bspin1}, {"Zspin1", k.Zspin1}, {"row_sum", k.row_sum}};
    if (r.has_lattice) {
        json ladder = json::array();
        for (const auto& e : r.lattice.ladder)
            ladder.push_back({{"X", e.X}, {"f", e.f}, {"d_lambda", e.d_lambda}, {"d_beta", e.d_beta}, {"d_t1", e.d_t1},
                              {"zspin1", e.zspin1}});
        j["lattice"] = {{"ladder", ladder}, {"extrapolated", r.lattice.extrapolated}, {"rate", r.lattice.rate}};
        json run = json::array();
        for (const auto& c2 : r.ladder) run.push_back({{"name", c2.name}, {"scale", c2.scale}, {"value", c2.value}});
        j["running"] = run;
    }
    return j;
}

void print_zspin_table(const FirstOrderReport& r) {
    auto row = [](const std::string& name, double v, double closed) {
        std::cerr << std::left << std::setw(22) << name << std::right << std::setw(16) << std::setprecision(9) << v;
        if (std::isfinite(closed)) std::cerr << std::setw(16) << closed << std::setw(12) << std::setprecision(2) << std::abs(v - closed);
        std::cerr << "\n";
    };
    const double none = NAN;
    std::cerr << std::left << std::setw(22) << "quantity" << std::right << std::setw(16) << "computed" << std::setw(16)
              << "closed form" << std::setw(12) << "|diff|" << "\n";
    const auto& c = r.closed;
    row("2 nu1", r.two_nu1, c.two_nu1);
    row("eta1", r.eta1, c.eta1);
    row("zeta1", r.zeta1, 0);
    row("Z1", r.Z1, c.Z1);
    row("beta1", r.beta1, c.beta1);
    row("tau1", r.tau1, c.tau1);
    row("d0", r.couplings.d0, c.d0);
    row("d1", r.couplings.d1, c.d1);
    row("edge (literal)", r.bspin.edge_literal, c.edge_derivative);
    row("edge (reduced)", r.bspin.edge_reduced, c.edge_derivative);
    row("z2 sum (literal)", r.bspin.questa_literal.value, c.questa);
    row("z2 sum (reduced)", r.bspin.questa_reduced, c.questa);
    row("Bspin1", r.Bspin1, c.Bspin1);
    row("Bspin1 (reduced)", r.bspin.bspin_reduced, c.Bspin1);
    row("Zspin1", r.Zspin1, c.Zspin1);
    row("Zspin1 (reduced)", r.Zspin1_reduced, c.Zspin1);
    if (r.has_lattice) {
        for (const auto& e : r.lattice.ladder) row("lattice X=" + std::to_string(e.X), e.zspin1, none);
        row("lattice extrapolated", r.lattice.extrapolated, none);
    }
}

json cmd_zspin(const Opts& o, json& prov) {
    QuadratureGrid grid;
    grid.n_k = o.grid_n;
    grid.validate();
    FirstOrderReport r = zspin_first_order(grid, o.n_terms, o.lattice_check ? o.lattice_N : 0);
    print_zspin_table(r);
    json p{{"grid_n", o.grid_n}, {"n_terms", o.n_terms}, {"lattice_check", o.lattice_check}};
    if (o.lattice_check) p["lattice_N"] = o.lattice_N;
    prov["parameters"] = p;
    prov["quadrature"] = grid_json(grid);
    return report_json(r);
}

json cmd_scaling(const Opts& o, json& prov) {
    std::vector<int> seps = separations_arg(o.seps);
    for (int x : seps)
        if (x < 1 || 4 * x > o.Lmax) throw ArgError("separations must lie in [1, Lmax/4]");
    LatticeSpec s = o.fit_t1 > 0 ? LatticeSpec::critical_t1(o.Lmax, o.Lmax, o.fit_t1) : LatticeSpec::isotropic_critical(o.Lmax, o.Lmax);
    DecayFit f = two_point_decay(s, seps, o.r2_min);
    std::string script = emit_plot_data(f, o.csv);
    prov["parameters"] = {{"lattice", lattice_json(s)}, {"separations", seps}, {"r2_min", o.r2_min}};
    return {{"csv", o.csv}, {"script", script}, {"separations", f.separations}, {"values", f.values},
            {"weights", f.weights}, {"exponent", f.exponent}, {"amplitude", f.amplitude}, {"r_squared", f.r_squared},
            {"chord_exponent", f.chord_exponent}, {"chord_amplitude", f.chord_amplitude},
            {"chord_r_squared", f.chord_r_squared}, {"quoted_amplitude", quoted_isotropic_amplitude()}};
}

json cmd_universality(const Opts& o, json& prov) {
    FirstOrderReport r = zspin_first_order();
    const double l = o.probe_lambda;
    ProbeTable t = universality_probe(InteractionSpec::appB(0), {-l, -l / 2, l / 2, l}, o.probe_L, o.probe_M, r.beta1, r.Zspin1);
    json rows = json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"lambda", row.lambda}, {"beta", row.beta}, {"value", row.value}, {"ratio", row.ratio},
                        {"predicted", row.predicted}});
    prov["parameters"] = {{"lambda", l}, {"L", o.probe_L}, {"M", o.probe_M}};
    return {{"lattice", lattice_json(t.spec)}, {"sites", format_tuple(t.tuple)}, {"rows", rows},
            {"first_difference", t.first_difference}, {"second_difference", t.second_difference}, {"smooth", t.smooth},
            {"beta1", r.beta1}, {"Zspin1", r.Zspin1}};
}

json cmd_check(const Opts& o, const CLI::App& sub, json& prov, bool& all_pass) {
    checks::CheckOptions co;
    co.seed = o.seed;
    co.draws = o.draws;
    prov["parameters"] = {{"target", o.target}, {"draws", o.draws}};
    if (o.target == "orientation" && (sub.count("--L") > 0 || sub.count("--M") > 0)) {
        if (sub.count("--L") == 0 || sub.count("--M") == 0) throw ArgError("--L and --M go together");
        LatticeSpec s{o.check_L, o.check_M, 0.5, 0.5, BC::Periodic};
        DecoratedGraph g = build_decorated_graph(s);
        auto bad = verify_clockwise_odd(g);
        all_pass = bad.empty();
        prov["parameters"]["L"] = o.check_L;
        prov["parameters"]["M"] = o.check_M;
        return {{"graph", to_json(g)}, {"even_faces", bad}, {"pass", all_pass}};
    } else if (sub.count("--L") > 0 || sub.count("--M") > 0) {
        throw ArgError("--L/--M apply to 'check orientation' only");
    }
    std::vector<std::string> names;
    if (o.target == "all") names = checks::check_names();
    else names.push_back(o.target);
    json results = json::array();
    all_pass = true;
    for (const auto& n : names) {
        checks::CheckResult r = checks::run_check(n, co);
        all_pass = all_pass && r.pass;
        std::cerr << std::left << std::setw(16) << n << (r.pass ? "PASS  " : "FAIL  ") << std::right << std::setw(7)
                  << std::fixed << std::setprecision(1) << r.seconds << "s  " << r.summary << "\n";
        std::cerr.unsetf(std::ios::fixed);
        results.push_back(checks::to_json(r, false));
    }
    return {{"checks", results}, {"all_pass", all_pass}};
}

void emit(const json& j, const std::string& path) {
    std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text)) throw Error("IOError", "cannot write " + path);
}

int run_parsed(const Opts& o, const Subs& s) {
    json prov{{"tool", "ising"}, {"version", ISING_VERSION}, {"seed", o.seed}};
    bool all_pass = true;
    bool is_check = false;
    try {
        json result;
        if (s.partition->parsed()) prov["subcommand"] = "partition", result = cmd_partition(o, prov);
        else if (s.correlate->parsed()) prov["subcommand"] = "correlate", result = cmd_correlate(o, prov);
        else if (s.oracle->parsed()) prov["subcommand"] = "oracle", result = cmd_oracle(o, *s.oracle, prov);
        else if (s.propagator->parsed()) prov["subcommand"] = "propagator", result = cmd_propagator(o, prov);
        else if (s.zspin->parsed()) prov["subcommand"] = "zspin", result = cmd_zspin(o, prov);
        else if (s.scaling->parsed()) prov["subcommand"] = "scaling-fit", result = cmd_scaling(o, prov);
        else if (s.universality->parsed()) prov["subcommand"] = "universality", result = cmd_universality(o, prov);
        else {
            prov["subcommand"] = "check";
            is_check = true;
            result = cmd_check(o, *s.check, prov, all_pass);
        }
        result["provenance"] = prov;
        emit(result, o.output);
    } catch (const ArgError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        std::cout << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        std::cout << json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}}.dump(2) << "\n";
        return 1;
    }
    return is_check && !all_pass ? 3 : 0;
}

int run(int argc, char** argv) {
    Opts o;
    CLI::App app{"Exact boundary-spin computations for the planar Ising model on cylinders"};
    Subs subs = build(app, o);
    try {
        app.parse(argc, argv);
        if (!o.config.empty()) {
            std::ifstream in(o.config);
            if (!in) throw ArgError("cannot read config " + o.config);
            json cfg;
            try {
                cfg = json::parse(in);
            } catch (const json::exception& e) {
                throw ArgError(std::string("config: ") + e.what());
            }
            if (!cfg.is_object()) throw ArgError("config must be a JSON object");
            std::string sub_name = app.get_subcommands().at(0)->get_name();
            std::vector<std::string> pre = config_tokens(cfg, app, sub_name, true);
            std::vector<std::string> post;
            if (cfg.contains(sub_name)) post = config_tokens(cfg.at(sub_name), app, sub_name, false);
            for (auto it = cfg.begin(); it != cfg.end(); ++it)
                if (it.value().is_object() && it.key() != sub_name)
                    throw ArgError("config section '" + it.key() + "' does not match the subcommand");
            std::vector<std::string> args{argv[0]};
            args.insert(args.end(), pre.begin(), pre.end());
            for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
            args.insert(args.end(), post.begin(), post.end());
            o = Opts{};
            CLI::App again{app.get_description()};
            subs = build(again, o);
            std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
            try {
                again.parse(rev);
            } catch (const CLI::ParseError& e) {
                int code = again.exit(e);
                return code == 0 ? 0 : 2;
            }
            return run_parsed(o, subs);
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ArgError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    }
    return run_parsed(o, subs);
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
