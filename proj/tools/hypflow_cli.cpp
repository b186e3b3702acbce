// Command line front end: constants table, exact potential flows, the
// Picard solver, checks on solved flows and the full suite.
//
// Exit codes: 0 when every non-vacuous check passes, 1 on a check failure or
// runtime error, 2 on usage or configuration errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>

#include "hypflow/harness.hpp"
#include "hypflow/snapshot.hpp"

using namespace hypflow;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::optional<double> a;
    std::string grid;
    std::uint64_t seed = 12345;
    std::string out;
    bool json_out = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_grid(const std::string& text) {
    static const std::regex re(R"((\d+)x(\d+))");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw UsageError("--grid must look like NRxNT, got '" + text + "'");
    return {std::stoi(m[1]), std::stoi(m[2])};
}

SolverConfig solver_config(const Common& c) {
    SolverConfig cfg = c.config.empty() ? SolverConfig{} : load_solver_config(c.config);
    if (c.config.empty()) cfg.wall_data = {0.5};
    if (c.a) cfg.a = *c.a;
    if (!c.grid.empty()) std::tie(cfg.n_r, cfg.n_theta) = parse_grid(c.grid);
    cfg.validate();
    return cfg;
}

void emit(const Common& c, const json& report, const std::string& text) {
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        std::ofstream(std::filesystem::path(c.out) / "report.json") << report.dump(2) << '\n';
    }
    if (c.json_out)
        std::cout << report.dump(2) << '\n';
    else
        std::cout << text;
}

void write_csv(const Common& c, const std::string& name, const DecayReport& rep) {
    if (c.out.empty()) return;
    std::filesystem::create_directories(c.out);
    std::ofstream(std::filesystem::path(c.out) / name) << rep.to_csv();
}

void write_flow(const Common& c, const FlowState& st) {
    if (c.out.empty()) return;
    std::filesystem::create_directories(c.out);
    Snapshot snap;
    snap.grid = st.v.grid;
    snap.add("v1", st.v.v1);
    snap.add("v2", st.v.v2);
    snap.add("P", st.P);
    snap.add("omega", st.omega);
    write_snapshot((std::filesystem::path(c.out) / "flow.csv").string(), snap);
}

int cmd_constants(const Common& c, double v_inf, double R0, double R1) {
    const Curvature a(c.a.value_or(1.0));
    const double delta = delta_rate(a, v_inf);
    EstimateConstants k = estimate_constants(a);
    json j = {{"a", double(a)},
              {"r_a", r_of_a(a)},
              {"v_inf", v_inf},
              {"delta", delta},
              {"tau2", tau2_root(a, v_inf)},
              {"A1", k.A1},
              {"A2", k.A2},
              {"A3", k.A3},
              {"poincare_C", poincare_constant(a, R0, R1)},
              {"R0", R0},
              {"R1", R1}};
    std::ostringstream t;
    for (auto& [key, val] : j.items()) t << key << " = " << val.dump() << '\n';
    emit(c, j, t.str());
    return 0;
}

int cmd_exact(const Common& c, const std::string& phi_path) {
    const double a = c.a.value_or(1.0);
    int nr = 128, nt = 128;
    if (!c.grid.empty()) std::tie(nr, nt) = parse_grid(c.grid);
    BoundaryTrace phi = phi_path.empty() ? BoundaryTrace::from_fourier({0.0, 1.0}, {0.0}) : BoundaryTrace::load(phi_path);
    GridPtr g = PolarGrid::geodesic(a, 1.0, 8.0, nr, nt);
    FlowState st = potential_flow(phi, g);
    NSResidual res = ns_residual(st);
    DecayReport vd = check_velocity_decay(st);
    PressureReport pr = check_pressure_nonconvergence(phi, a, g);
    write_csv(c, "velocity_decay.csv", vd);
    write_flow(c, st);
    json j = {{"a", a},
              {"grid", {nr, nt}},
              {"momentum_sup", res.momentum_sup},
              {"mass_sup", res.mass_sup},
              {"velocity_decay", vd.to_json()},
              {"pressure", pr.to_json()}};
    bool ok = vd.pass() && pr.status != CheckStatus::fail;
    std::ostringstream t;
    t << "momentum residual " << res.momentum_sup << "\nvelocity decay " << to_string(vd.status) << "\npressure gap "
      << pr.gap << " (expected " << pr.expected_gap << ") " << to_string(pr.status) << '\n';
    emit(c, j, t.str());
    return ok ? 0 : 1;
}

int cmd_solve(const Common& c) {
    SolverConfig cfg = solver_config(c);
    SolveResult res = picard_solve(cfg);
    write_flow(c, res.state);
    json j = json::parse(res.report.to_json());
    std::ostringstream t;
    t << "iterations " << res.report.iterations << (res.report.converged ? " converged" : " not converged")
      << "\ncirculation " << res.report.circulation << "\nmass residual " << res.report.mass_residual
      << "\nmomentum residual " << res.report.momentum_residual << " (relative " << res.report.momentum_relative
      << ")\nenergy " << res.report.energy << "\nsup |v| on Omega(R1) " << res.report.sup_v_R1 << '\n';
    emit(c, j, t.str());
    return res.report.converged ? 0 : 1;
}

int cmd_verify(const Common& c) {
    SolverConfig cfg = solver_config(c);
    SolveResult res = picard_solve(cfg);
    write_flow(c, res.state);
    DecayReport vd = check_velocity_decay(res.state);
    DecayReport wd = check_vorticity_decay(res.state, cfg.R1);
    InequalityReport pc = check_poincare(res.state.v, cfg.a, cfg.R0, cfg.R1);
    InequalityReport h1 = check_h1_vorticity(res.state, cfg.R0, cfg.R1, CutoffSpec{cfg.R0, cfg.R1});
    write_csv(c, "velocity_decay.csv", vd);
    write_csv(c, "vorticity_decay.csv", wd);
    bool ok = res.report.converged && vd.pass() && wd.pass() && pc.status != CheckStatus::fail &&
              h1.status != CheckStatus::fail;
    json solve = json::parse(res.report.to_json());
    solve.erase("history");
    json j = {{"solve", solve},
              {"velocity_decay", vd.to_json()},
              {"vorticity_decay", wd.to_json()},
              {"poincare", pc.to_json()},
              {"h1_vorticity", h1.to_json()},
              {"pass", ok}};
    std::ostringstream t;
    t << "solve " << (res.report.converged ? "converged" : "not converged") << " in " << res.report.iterations
      << " iterations\nvelocity decay " << to_string(vd.status) << "\nvorticity decay " << to_string(wd.status)
      << " fitted " << wd.fitted_rate << " vs delta " << wd.theoretical_rate << "\npoincare "
      << to_string(pc.status) << " ratio " << pc.ratio << "\nh1 vorticity " << to_string(h1.status) << " ratio "
      << h1.ratio << '\n';
    emit(c, j, t.str());
    return ok ? 0 : 1;
}

int cmd_suite(const Common& c, const std::vector<std::string>& checks, bool seed_given) {
    SuiteConfig cfg = c.config.empty() ? SuiteConfig{} : load_suite_config(c.config);
    if (c.config.empty()) cfg.solver.wall_data = {0.5};
    if (c.a) cfg.solver.a = *c.a;
    if (!c.grid.empty()) std::tie(cfg.solver.n_r, cfg.solver.n_theta) = parse_grid(c.grid);
    if (seed_given) cfg.seed = c.seed;
    if (!c.out.empty()) cfg.out_dir = c.out;
    if (!checks.empty()) {
        const auto known = suite_check_names();
        for (const auto& n : checks)
            if (std::find(known.begin(), known.end(), n) == known.end()) throw UsageError("unknown check '" + n + "'");
        cfg.checks = checks;
    }
    cfg.solver.validate();
    SuiteResult res = run_suite(cfg);
    std::ostringstream t;
    for (const auto& chk : res.report["checks"])
        t << chk["status"].get<std::string>() << "  " << chk["name"].get<std::string>() << '\n';
    t << (res.exit_code == 0 ? "suite passed" : "suite FAILED") << '\n';
    if (c.json_out)
        std::cout << res.report.dump(2) << '\n';
    else
        std::cout << t.str();
    return res.exit_code;
}

void add_common(CLI::App* sub, Common& c, bool with_config) {
    if (with_config) sub->add_option("--config", c.config, "Configuration file")->check(CLI::ExistingFile);
    sub->add_option("--a", c.a, "Curvature parameter a > 0")->check(CLI::PositiveNumber);
    sub->add_option("--grid", c.grid, "Grid size NRxNT");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_flag("--json", c.json_out, "Print the JSON report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary Navier-Stokes flows on the exterior of a hyperbolic disk"};
    app.require_subcommand(1);
    Common c;
    double v_inf = 0.0, R0 = 1.0, R1 = 2.0;
    std::string phi_path;
    std::vector<std::string> checks;

    auto* constants = app.add_subcommand("constants", "Print the closed-form constants");
    add_common(constants, c, false);
    constants->add_option("--v-inf", v_inf, "sup |v|_a used for delta")->check(CLI::NonNegativeNumber);
    constants->add_option("--R0", R0, "Obstacle radius for the Poincare constant");
    constants->add_option("--R1", R1, "Inner radius of the measured region");

    auto* exact = app.add_subcommand("exact", "Build and check the harmonic potential flow");
    add_common(exact, c, false);
    exact->add_option("--phi", phi_path, "Boundary trace JSON")->check(CLI::ExistingFile);

    auto* solve = app.add_subcommand("solve", "Run the Picard solver");
    add_common(solve, c, true);

    auto* verify = app.add_subcommand("verify", "Solve and run the checks on the result");
    add_common(verify, c, true);

    auto* suite = app.add_subcommand("suite", "Run the full verification suite");
    add_common(suite, c, true);
    auto* seed_opt = suite->add_option("--seed", c.seed, "Seed for randomized audits");
    suite->add_option("--checks", checks, "Subset of checks to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*constants) return cmd_constants(c, v_inf, R0, R1);
        if (*exact) return cmd_exact(c, phi_path);
        if (*solve) return cmd_solve(c);
        if (*verify) return cmd_verify(c);
        if (*suite) return cmd_suite(c, checks, seed_opt->count() > 0);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
