#include "ibsh/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ibsh {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("parse_double: trailing characters in '" + s + "'");
    return v;
}

int Csv::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

void write_csv(const Csv& table, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << table.header[i] << (i + 1 < table.header.size() ? "," : "");
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("write_csv: row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Csv read_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    Csv table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
    table.header = split_commas(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split_commas(line));
        if (table.rows.back().size() != table.header.size())
            throw std::runtime_error("ragged CSV row in " + path.string());
    }
    return table;
}

std::map<std::string, std::string> read_kv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void write_kv(const std::map<std::string, std::string>& kv, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    if (traj.states.empty()) throw std::invalid_argument("save_trajectory: empty trajectory");
    const Grid1D& g = traj.grid();

    Csv table;
    table.header.push_back("t");
    for (int i = 0; i < g.n; ++i) table.header.push_back("u" + std::to_string(i));
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        std::vector<std::string> row;
        row.reserve(static_cast<std::size_t>(g.n) + 1);
        row.push_back(format_double(traj.times[j]));
        for (int i = 0; i < g.n; ++i) row.push_back(format_double(traj.states[j][i]));
        table.rows.push_back(std::move(row));
    }
    write_csv(table, path);

    std::map<std::string, std::string> meta;
    meta["schema"] = "ibsh-trajectory";
    meta["schema_version"] = "1";
    meta["x_min"] = format_double(g.x_min);
    meta["x_max"] = format_double(g.x_max);
    meta["n"] = std::to_string(g.n);
    meta["steps"] = std::to_string(traj.steps);
    meta["support_reached_boundary"] = traj.support_reached_boundary ? "1" : "0";
    if (traj.params) {
        meta["eps"] = format_double(traj.params->eps);
        meta["beta"] = format_double(traj.params->beta);
        meta["regime"] = regime_name(traj.params->regime);
        meta["alpha"] = format_double(traj.params->alpha);
        meta["c_regime"] = format_double(traj.params->c_regime);
    }
    write_kv(meta, path.string() + ".meta");
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    const Csv table = read_csv(path);
    const auto meta = read_kv(path.string() + ".meta");
    if (meta.count("schema") == 0 || meta.at("schema") != "ibsh-trajectory")
        throw std::runtime_error("load_trajectory: not a trajectory file: " + path.string());

    const Grid1D g = make_grid(parse_double(meta.at("x_min")), parse_double(meta.at("x_max")),
                               std::stoi(meta.at("n")));
    if (table.header.size() != static_cast<std::size_t>(g.n) + 1)
        throw std::runtime_error("load_trajectory: column count disagrees with metadata");

    Trajectory traj;
    if (meta.count("eps") && meta.count("beta")) {
        const std::string regime = meta.count("regime") ? meta.at("regime") : "free";
        const double eps = parse_double(meta.at("eps"));
        if (regime == "eps2")
            traj.params = RegParams::eps_squared(eps, parse_double(meta.at("c_regime")));
        else if (regime == "eps_power")
            traj.params = RegParams::eps_power(eps, parse_double(meta.at("alpha")),
                                               parse_double(meta.at("c_regime")));
        else
            traj.params = RegParams::free_params(eps, parse_double(meta.at("beta")));
    }
    if (meta.count("steps")) traj.steps = std::stoll(meta.at("steps"));
    if (meta.count("support_reached_boundary"))
        traj.support_reached_boundary = meta.at("support_reached_boundary") == "1";

    for (const auto& row : table.rows) {
        traj.times.push_back(parse_double(row[0]));
        Field u(g);
        for (int i = 0; i < g.n; ++i) u[i] = parse_double(row[static_cast<std::size_t>(i) + 1]);
        traj.states.push_back(std::move(u));
    }
    return traj;
}

void save_profile(const Field& u, const std::filesystem::path& path) {
    Csv table;
    table.header = {"x", "u"};
    for (int i = 0; i < u.size(); ++i)
        table.rows.push_back({format_double(u.grid().center(i)), format_double(u[i])});
    write_csv(table, path);
}

}  // namespace ibsh
