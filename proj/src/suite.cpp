#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hypflow/harness.hpp"
#include "hypflow/snapshot.hpp"

namespace hypflow {

using nlohmann::json;
namespace pt = boost::property_tree;

std::vector<std::string> suite_check_names() {
    return {"constants", "barrier", "exact", "pressure", "transport", "solve", "audits", "stokes"};
}

SuiteConfig parse_suite_config(const std::string& text) {
    SuiteConfig cfg;
    cfg.solver = parse_solver_config(text);
    pt::ptree tree;
    std::istringstream in(text);
    pt::read_ini(in, tree);
    auto sec = tree.get_child_optional("suite");
    if (!sec) return cfg;
    for (const auto& [key, child] : *sec) {
        const std::string& v = child.data();
        try {
            if (key == "checks") {
                std::string s = v;
                std::replace(s.begin(), s.end(), ',', ' ');
                std::istringstream names(s);
                std::string name;
                const auto known = suite_check_names();
                while (names >> name) {
                    if (std::find(known.begin(), known.end(), name) == known.end())
                        throw ConfigError("suite config: unknown check '" + name + "'");
                    cfg.checks.push_back(name);
                }
            } else if (key == "seed") {
                cfg.seed = std::stoull(v);
            } else if (key == "audit_samples") {
                cfg.audit_samples = std::stoi(v);
            } else if (key == "exact_grid") {
                auto x = v.find('x');
                if (x == std::string::npos) throw ConfigError("suite config: exact_grid must look like 128x128");
                cfg.exact_n_r = std::stoi(v.substr(0, x));
                cfg.exact_n_theta = std::stoi(v.substr(x + 1));
            } else if (key == "out_dir") {
                cfg.out_dir = v;
            } else {
                throw ConfigError("suite config: unknown key suite." + key);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("suite config: bad value for suite." + key);
        }
    }
    if (cfg.audit_samples < 1) throw ConfigError("suite config: audit_samples must be positive");
    return cfg;
}

SuiteConfig load_suite_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("suite config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_suite_config(buf.str());
}

namespace {

struct Collector {
    json checks = json::array();
    bool failed = false;
    std::string out_dir;

    void add(const std::string& name, CheckStatus status, json details) {
        if (status == CheckStatus::fail) failed = true;
        checks.push_back({{"name", name}, {"status", to_string(status)}, {"details", std::move(details)}});
    }
    void csv(const std::string& file, const DecayReport& rep) const {
        if (out_dir.empty()) return;
        std::ofstream(std::filesystem::path(out_dir) / file) << rep.to_csv();
    }
};

CheckStatus status_of(bool ok) { return ok ? CheckStatus::pass : CheckStatus::fail; }

void run_constants(Collector& c) {
    const Curvature one(1.0);
    double r1 = r_of_a(one), r1b = r_of_a_atanh(one);
    TrigIdentityReport trig = trig_identity_suite();
    bool ok = std::fabs(r1 - 0.47061491973408121) < 1e-12 && std::fabs(r1 - r1b) < 1e-12 &&
              std::fabs(delta_rate(one, 1.0) - std::sqrt(0.5)) < 1e-12 && std::fabs(delta_rate(one, 0.0) - 1.0) < 1e-12 &&
              poincare_constant(one, 1.0, 2.0) == 580.0 && trig.pass;
    c.add("constants", status_of(ok),
          {{"r_of_1", r1},
           {"r_of_1_atanh", r1b},
           {"delta_1_1", delta_rate(one, 1.0)},
           {"delta_1_0", delta_rate(one, 0.0)},
           {"poincare_1_1_2", poincare_constant(one, 1.0, 2.0)},
           {"trig_identity_error", trig.max_identity_error},
           {"trig_min_slack", trig.min_relative_slack}});
}

void run_barrier(Collector& c) {
    json rows = json::array();
    bool ok = true;
    double worst = INFINITY;
    for (const BarrierReport& b : barrier_sweep()) {
        rows.push_back(b.to_json());
        ok = ok && b.pass;
        worst = std::min(worst, b.analytic_margin);
    }
    c.add("barrier", status_of(ok), {{"min_margin", worst}, {"sweep", rows}});
}

void run_exact(Collector& c, const SuiteConfig& cfg) {
    const double a = cfg.solver.a;
    const BoundaryTrace phi = BoundaryTrace::from_fourier({0.0, 1.0}, {0.0});
    std::vector<double> sups;
    std::vector<int> sizes;
    json levels = json::array();
    for (int level = 0; level < 3; ++level) {
        int nr = cfg.exact_n_r >> (2 - level), nt = cfg.exact_n_theta >> (2 - level);
        nr = std::max(nr, 16);
        nt = std::max(nt, 16);
        GridPtr g = PolarGrid::geodesic(a, cfg.solver.R0, cfg.solver.R_out, nr, nt);
        FlowState st = potential_flow(phi, g);
        NSResidual res = ns_residual(st);
        sups.push_back(res.momentum_sup);
        sizes.push_back(nr);
        levels.push_back({{"n_r", nr}, {"n_theta", nt}, {"momentum_sup", res.momentum_sup}, {"mass_sup", res.mass_sup}});
        if (level == 2) {
            DecayReport vd = check_velocity_decay(st);
            c.csv("velocity_exact.csv", vd);
            c.add("exact_velocity_decay", vd.status, vd.to_json());
            InequalityReport pc = check_poincare(st.v, a, cfg.solver.R0, cfg.solver.R1);
            c.add("exact_poincare", pc.status, pc.to_json());
            double energy = integrate(pointwise_square(hyperbolic_norm_tensor(covariant_gradient(st.v))));
            double vort = 0.0;
            for (double w : vorticity(st.v).values) vort = std::max(vort, std::fabs(w));
            levels.back()["energy"] = energy;
            levels.back()["max_abs_vorticity"] = vort;
        }
    }
    double order = std::log2(sups[1] / sups[2]);
    c.add("exact_residual", status_of(order >= 1.8 && sups[2] < 1e-3 * std::max(1.0, a * a)),
          {{"levels", levels}, {"order", order}});
}

void run_pressure(Collector& c, const SuiteConfig& cfg) {
    const double a = cfg.solver.a;
    GridPtr g = PolarGrid::geodesic(a, cfg.solver.R0, cfg.solver.R_out, cfg.exact_n_r, cfg.exact_n_theta);
    PressureReport p = check_pressure_nonconvergence(BoundaryTrace::from_fourier({0.0, 1.0}, {0.0}), a, g);
    c.add("pressure_cos", p.status, p.to_json());
    PressureReport q = check_pressure_nonconvergence(BoundaryTrace::from_fourier({5.0}, {0.0}), a, g);
    c.add("pressure_constant", q.status, q.to_json());
}

void run_transport(Collector& c, const SuiteConfig& cfg) {
    const SolverConfig& s = cfg.solver;
    GridPtr g = PolarGrid::geodesic(s.a, s.R0, s.R_out, cfg.exact_n_r, 16);
    TransportVelocity vel{std::vector<double>(g->size(), 0.0), std::vector<double>(g->size(), 0.0)};
    TransportOptions opt;
    opt.method = LinearMethod::fft;
    ScalarField w = vorticity_transport_solve(vel, std::vector<double>(16, 1.0), g, opt);
    std::vector<double> rhos;
    for (int i = 0; i < g->n_r(); ++i) rhos.push_back(g->rho(i));
    std::vector<double> oracle = radial_vorticity_oracle(s.a, s.R0, s.R_out, rhos);
    double worst = 0.0;
    for (int i = 0; i + 1 < g->n_r(); ++i) worst = std::max(worst, std::fabs(w(i, 0) - oracle[i]) / std::fabs(oracle[i]));
    FlowState st;
    st.a = s.a;
    st.omega = w;
    st.v = OneFormField(g);
    DecayReport d = check_vorticity_decay(st, s.R1);
    c.csv("vorticity_transport.csv", d);
    c.add("transport_oracle", status_of(worst < 1e-3 && d.fitted_rate > delta_rate(Curvature(s.a), 0.0)),
          {{"worst_relative_error", worst}, {"n_r", g->n_r()}, {"decay", d.to_json()}});
}

void run_solve(Collector& c, const SuiteConfig& cfg) {
    const SolverConfig& s = cfg.solver;
    SolveResult res = picard_solve(s);
    json rep = json::parse(res.report.to_json());
    rep.erase("history");
    c.add("solve_converged", status_of(res.report.converged), rep);
    if (!cfg.out_dir.empty()) {
        Snapshot snap;
        snap.grid = res.state.v.grid;
        snap.add("v1", res.state.v.v1);
        snap.add("v2", res.state.v.v2);
        snap.add("P", res.state.P);
        snap.add("omega", res.state.omega);
        write_snapshot((std::filesystem::path(cfg.out_dir) / "flow.csv").string(), snap);
    }
    DecayReport vd = check_velocity_decay(res.state);
    c.csv("velocity_solve.csv", vd);
    c.add("solve_velocity_decay", vd.status, vd.to_json());
    DecayReport wd = check_vorticity_decay(res.state, s.R1);
    c.csv("vorticity_solve.csv", wd);
    c.add("solve_vorticity_decay", wd.status, wd.to_json());
    InequalityReport pc = check_poincare(res.state.v, s.a, s.R0, s.R1);
    c.add("solve_poincare", pc.status, pc.to_json());
    InequalityReport h1 = check_h1_vorticity(res.state, s.R0, s.R1, CutoffSpec{s.R0, s.R1});
    c.add("solve_h1_vorticity", h1.status, h1.to_json());
}

void run_audits(Collector& c, const SuiteConfig& cfg) {
    const int n = cfg.audit_samples;
    const double a = cfg.solver.a;
    std::vector<AuditReport> reps = {audit_chart_gradient(a, n, cfg.seed + 1), audit_poincare(a, n, cfg.seed + 2),
                                     audit_h1_vorticity({0.5, 1.0, 2.0}, n, cfg.seed + 3),
                                     audit_pointwise_curl(a, n, cfg.seed + 4), audit_ladyzhenskaya(a, n, cfg.seed + 5)};
    for (const AuditReport& r : reps) c.add("audit_" + r.name, status_of(r.pass()), r.to_json());
}

void run_stokes(Collector& c, const SuiteConfig& cfg) {
    std::vector<StokesInstance> inst;
    for (int q = 0; q < 10; ++q) inst.push_back(StokesInstance::random(cfg.seed + 100 + q));
    StokesReport r = check_stokes_supnorm_ratio(inst);
    c.add("stokes_ratio", r.status, r.to_json());
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& cfg) {
    Collector c;
    c.out_dir = cfg.out_dir;
    if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::string> selected = cfg.checks.empty() ? suite_check_names() : cfg.checks;
    auto wants = [&](const std::string& n) { return std::find(selected.begin(), selected.end(), n) != selected.end(); };
    SuiteResult out;
    try {
        if (wants("constants")) run_constants(c);
        if (wants("barrier")) run_barrier(c);
        if (wants("exact")) run_exact(c, cfg);
        if (wants("pressure")) run_pressure(c, cfg);
        if (wants("transport")) run_transport(c, cfg);
        if (wants("solve")) run_solve(c, cfg);
        if (wants("audits")) run_audits(c, cfg);
        if (wants("stokes")) run_stokes(c, cfg);
    } catch (const std::exception& e) {
        c.add("runtime_error", CheckStatus::fail, {{"message", e.what()}});
    }
    const SolverConfig& s = cfg.solver;
    out.report = {{"provenance",
                   {{"a", s.a},
                    {"R0", s.R0},
                    {"R_out", s.R_out},
                    {"R1", s.R1},
                    {"grid", {s.n_r, s.n_theta}},
                    {"exact_grid", {cfg.exact_n_r, cfg.exact_n_theta}},
                    {"seed", cfg.seed},
                    {"audit_samples", cfg.audit_samples},
                    {"selected", selected}}},
                  {"checks", c.checks},
                  {"pass", !c.failed}};
    out.exit_code = c.failed ? 1 : 0;
    if (!cfg.out_dir.empty()) std::ofstream(std::filesystem::path(cfg.out_dir) / "report.json") << out.report.dump(2) << '\n';
    return out;
}

}  // namespace hypflow
