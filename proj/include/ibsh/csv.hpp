// CSV emission and parsing, trajectory persistence, and the key=value config
// format.  Floats are serialized with 17 significant digits so parsing a
// written file reproduces every double bit-exactly; data files carry no
// timestamps (provenance goes to sidecar .meta files).
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ibsh/grid.hpp"
#include "ibsh/params.hpp"

namespace ibsh {

std::string format_double(double v);  // %.17g, round-trip exact
double parse_double(const std::string& s);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

void write_csv(const Csv& table, const std::filesystem::path& path);
Csv read_csv(const std::filesystem::path& path);

// key = value lines, '#' comments; used for sweep configs and .meta sidecars.
std::map<std::string, std::string> read_kv(const std::filesystem::path& path);
void write_kv(const std::map<std::string, std::string>& kv, const std::filesystem::path& path);

// Trajectory persistence: <path> is a CSV (t, u0..u{n-1}) and <path>.meta a
// key=value sidecar with the grid, parameters, and schema version.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);

// x,u profile of a single field.
void save_profile(const Field& u, const std::filesystem::path& path);

}  // namespace ibsh
