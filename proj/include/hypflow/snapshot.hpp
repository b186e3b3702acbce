#pragma once
/// Field snapshots: a CSV of node values plus a JSON sidecar with the grid.
///
/// CSV columns are "r,theta,<names...>" in chart coordinates, one row per
/// node in ring-major order. Doubles are printed in shortest round-trip form so
/// reading a snapshot back reproduces every value bit for bit.

#include <string>
#include <vector>

#include "hypflow/fields.hpp"

namespace hypflow {

struct Snapshot {
    GridPtr grid;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    void add(const std::string& name, const std::vector<double>& values);
    void add(const std::string& name, const ScalarField& f) { add(name, f.values); }
    const std::vector<double>& column(const std::string& name) const;
};

/// Sidecar path for a CSV path: the extension is replaced by ".json".
std::string sidecar_path(const std::string& csv_path);

void write_snapshot(const std::string& csv_path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& csv_path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

}  // namespace hypflow
