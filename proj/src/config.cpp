#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "hypflow/solver.hpp"

namespace hypflow {

namespace pt = boost::property_tree;

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::string s = text;
    for (char& c : s)
        if (c == ',' || c == ';') c = ' ';
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("solver config: bad number '" + tok + "' in " + key);
        }
    }
    if (out.empty()) throw ConfigError("solver config: empty list for " + key);
    return out;
}

template <class T>
T get(const pt::ptree& sec, const std::string& section, const std::string& key, T fallback) {
    auto node = sec.get_child_optional(key);
    if (!node) return fallback;
    try {
        return node->get_value<T>();
    } catch (const pt::ptree_error&) {
        throw ConfigError("solver config: bad value for " + section + "." + key);
    }
}

bool get_bool(const pt::ptree& sec, const std::string& key, bool fallback) {
    auto node = sec.get_child_optional(key);
    if (!node) return fallback;
    std::string v = node->data();
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("solver config: bad boolean for " + key);
}

void check_keys(const pt::ptree& sec, const std::string& section, const std::set<std::string>& allowed) {
    for (const auto& [key, child] : sec)
        if (!allowed.count(key)) throw ConfigError("solver config: unknown key " + section + "." + key);
}

LinearMethod method_of(const std::string& key, const std::string& name) {
    try {
        return parse_linear_method(name);
    } catch (const std::invalid_argument&) {
        throw ConfigError("solver config: unknown solver '" + name + "' for " + key);
    }
}

}  // namespace

SolverConfig parse_solver_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("solver config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    for (const auto& [name, child] : tree)
        if (name != "geometry" && name != "boundary" && name != "iteration" && name != "suite")
            throw ConfigError("solver config: unknown section [" + name + "]");

    SolverConfig cfg;
    const pt::ptree empty;
    const pt::ptree& geo = tree.get_child("geometry", empty);
    const pt::ptree& bnd = tree.get_child("boundary", empty);
    const pt::ptree& itr = tree.get_child("iteration", empty);
    check_keys(geo, "geometry", {"a", "R0", "R_out", "n_r", "n_theta", "R1"});
    check_keys(bnd, "boundary", {"wall_speed", "wall_profile", "wall_cos", "wall_sin", "circulation", "circulation_mode"});
    check_keys(itr, "iteration", {"relaxation", "tol", "max_iters", "transport_solver", "stream_solver", "sor_omega",
                                  "max_linear_iters", "parallel", "dump_dir"});

    cfg.a = get(geo, "geometry", "a", cfg.a);
    cfg.R0 = get(geo, "geometry", "R0", cfg.R0);
    cfg.R_out = get(geo, "geometry", "R_out", cfg.R_out);
    cfg.n_r = get(geo, "geometry", "n_r", cfg.n_r);
    cfg.n_theta = get(geo, "geometry", "n_theta", cfg.n_theta);
    cfg.R1 = get(geo, "geometry", "R1", cfg.R1);

    int wall_sources = static_cast<int>(bnd.count("wall_speed")) + static_cast<int>(bnd.count("wall_profile")) +
                       static_cast<int>(bnd.count("wall_cos") || bnd.count("wall_sin"));
    if (wall_sources > 1) throw ConfigError("solver config: give only one of wall_speed, wall_profile, wall_cos/wall_sin");
    if (bnd.count("wall_speed")) {
        cfg.wall_data = {get(bnd, "boundary", "wall_speed", 0.0)};
    } else if (bnd.count("wall_profile")) {
        cfg.wall_data = parse_list("boundary.wall_profile", bnd.get<std::string>("wall_profile"));
    } else if (bnd.count("wall_cos") || bnd.count("wall_sin")) {
        std::vector<double> c = bnd.count("wall_cos") ? parse_list("boundary.wall_cos", bnd.get<std::string>("wall_cos"))
                                                      : std::vector<double>{0.0};
        std::vector<double> s = bnd.count("wall_sin") ? parse_list("boundary.wall_sin", bnd.get<std::string>("wall_sin"))
                                                      : std::vector<double>{0.0};
        cfg.wall_data.assign(std::max(cfg.n_theta, 1), 0.0);
        for (int j = 0; j < cfg.n_theta; ++j) {
            double t = 2.0 * std::numbers::pi * j / cfg.n_theta;
            double v = c[0];
            for (std::size_t n = 1; n < c.size(); ++n) v += c[n] * std::cos(static_cast<double>(n) * t);
            for (std::size_t n = 1; n < s.size(); ++n) v += s[n] * std::sin(static_cast<double>(n) * t);
            cfg.wall_data[j] = v;
        }
    }
    cfg.circulation = get(bnd, "boundary", "circulation", cfg.circulation);
    std::string mode = get<std::string>(bnd, "boundary", "circulation_mode", "solve");
    if (mode == "solve")
        cfg.circulation_mode = CirculationMode::solve;
    else if (mode == "prescribed")
        cfg.circulation_mode = CirculationMode::prescribed;
    else
        throw ConfigError("solver config: circulation_mode must be solve or prescribed");

    cfg.relaxation = get(itr, "iteration", "relaxation", cfg.relaxation);
    cfg.tol = get(itr, "iteration", "tol", cfg.tol);
    cfg.max_iters = get(itr, "iteration", "max_iters", cfg.max_iters);
    if (itr.count("transport_solver"))
        cfg.transport_method = method_of("transport_solver", itr.get<std::string>("transport_solver"));
    if (itr.count("stream_solver")) cfg.stream_method = method_of("stream_solver", itr.get<std::string>("stream_solver"));
    cfg.sor_omega = get(itr, "iteration", "sor_omega", cfg.sor_omega);
    cfg.max_linear_iters = get(itr, "iteration", "max_linear_iters", cfg.max_linear_iters);
    cfg.parallel = get_bool(itr, "parallel", cfg.parallel);
    cfg.dump_dir = get<std::string>(itr, "iteration", "dump_dir", "");

    cfg.validate();
    return cfg;
}

SolverConfig load_solver_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("solver config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_solver_config(buf.str());
}

}  // namespace hypflow
