#include "hypflow/snapshot.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace hypflow {

void Snapshot::add(const std::string& name, const std::vector<double>& values) {
    if (!grid || values.size() != grid->size()) throw DomainError("Snapshot: column size does not match grid");
    names.push_back(name);
    columns.push_back(values);
}

const std::vector<double>& Snapshot::column(const std::string& name) const {
    for (std::size_t c = 0; c < names.size(); ++c)
        if (names[c] == name) return columns[c];
    throw DomainError("Snapshot: no column named " + name);
}

std::string sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".json");
    return p.string();
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {
double parse_double(const std::string& tok) {
    double x = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw std::runtime_error("snapshot: cannot parse number '" + tok + "'");
    return x;
}
}  // namespace

void write_snapshot(const std::string& csv_path, const Snapshot& snap) {
    const PolarGrid& g = *snap.grid;
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("snapshot: cannot open " + csv_path);
    out << "r,theta";
    for (const auto& n : snap.names) out << ',' << n;
    out << '\n';
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            out << format_double(g.r(i)) << ',' << format_double(g.theta(j));
            for (const auto& col : snap.columns) out << ',' << format_double(col[g.idx(i, j)]);
            out << '\n';
        }

    nlohmann::json meta = {{"a", g.a()},           {"r_in", g.r_in()},       {"r_out", g.r_out()},
                           {"rho_in", g.rho_in()}, {"rho_out", g.rho_out()}, {"n_r", g.n_r()},
                           {"n_theta", g.n_theta()}};
    std::ofstream side(sidecar_path(csv_path));
    if (!side) throw std::runtime_error("snapshot: cannot write sidecar");
    side << meta.dump(2) << '\n';
}

Snapshot read_snapshot(const std::string& csv_path) {
    std::ifstream side(sidecar_path(csv_path));
    if (!side) throw std::runtime_error("snapshot: missing sidecar for " + csv_path);
    nlohmann::json meta = nlohmann::json::parse(side);
    Snapshot snap;
    double a = meta.at("a").get<double>();
    int n_r = meta.at("n_r").get<int>(), n_theta = meta.at("n_theta").get<int>();
    if (meta.contains("rho_in"))
        snap.grid = PolarGrid::geodesic(a, meta["rho_in"].get<double>(), meta["rho_out"].get<double>(), n_r, n_theta);
    else
        snap.grid = PolarGrid::chart(a, meta.at("r_in").get<double>(), meta.at("r_out").get<double>(), n_r, n_theta);

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("snapshot: cannot open " + csv_path);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) header.push_back(tok);
    }
    if (header.size() < 2 || header[0] != "r" || header[1] != "theta")
        throw std::runtime_error("snapshot: header must start with r,theta");
    snap.names.assign(header.begin() + 2, header.end());
    snap.columns.assign(snap.names.size(), std::vector<double>(snap.grid->size()));
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= snap.grid->size()) throw std::runtime_error("snapshot: too many rows");
        std::stringstream ss(line);
        std::string tok;
        std::size_t c = 0;
        while (std::getline(ss, tok, ',')) {
            if (c >= 2) {
                if (c - 2 >= snap.names.size()) throw std::runtime_error("snapshot: too many columns");
                snap.columns[c - 2][row] = parse_double(tok);
            }
            ++c;
        }
        if (c != header.size()) throw std::runtime_error("snapshot: ragged row");
        ++row;
    }
    if (row != snap.grid->size()) throw std::runtime_error("snapshot: row count does not match grid");
    return snap;
}

}  // namespace hypflow
