#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ibsh/csv.hpp"
#include "ibsh/svg.hpp"
#include "ibsh/sweep.hpp"
#include "test_support.hpp"

using namespace ibsh;
using namespace ibsh::test;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ibsh_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepConfig small_sweep_config() {
    SweepConfig cfg;
    cfg.datum = DatumKind::Gaussian;
    cfg.x_min = -10.0;
    cfg.x_max = 10.0;
    cfg.n = 128;
    cfg.t_end = 0.2;
    cfg.eps_list = {0.25, 0.125};
    cfg.regime = Regime::EpsSquared;
    cfg.p_list = {1.0, 2.0};
    cfg.scheme = Scheme::IMEX;
    cfg.n_outputs = 65;
    cfg.entropy_suite = "none";  // phi geometry targets the canonical window
    cfg.phi_suite = "none";
    return cfg;
}

}  // namespace

TEST_CASE("format_double round-trips every double") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mag(-300.0, 300.0);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double v = mant(rng) * std::pow(10.0, mag(rng) / 10.0);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(parse_double(format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK(parse_double(format_double(-0.0)) == 0.0);
}

TEST_CASE("csv write/read round trip") {
    TempDir tmp;
    Csv table;
    table.header = {"a", "b"};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 50; ++i)
        table.rows.push_back({format_double(d(rng)), format_double(d(rng))});
    const auto path = tmp.path / "t.csv";
    write_csv(table, path);
    const Csv back = read_csv(path);
    REQUIRE(back.header == table.header);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t c = 0; c < 2; ++c)
            CHECK(parse_double(back.rows[r][c]) == parse_double(table.rows[r][c]));

    // Header-only file.
    Csv empty;
    empty.header = {"x", "y", "z"};
    write_csv(empty, tmp.path / "empty.csv");
    CHECK(slurp(tmp.path / "empty.csv") == "x,y,z\n");
    CHECK(read_csv(tmp.path / "empty.csv").rows.empty());
}

TEST_CASE("kv config parsing") {
    TempDir tmp;
    {
        std::ofstream out(tmp.path / "c.cfg");
        out << "# comment\n"
            << "datum = riemann\n"
            << "eps_list = 0.125, 0.0625\n"
            << "n = 256\n"
            << "t_end = 0.5\n";
    }
    const auto kv = read_kv(tmp.path / "c.cfg");
    CHECK(kv.at("datum") == "riemann");
    CHECK(kv.at("n") == "256");

    SweepConfig cfg = small_sweep_config();
    write_kv(cfg.to_kv(), tmp.path / "full.cfg");
    const SweepConfig back = SweepConfig::from_file(tmp.path / "full.cfg");
    CHECK(back.n == cfg.n);
    CHECK(back.eps_list == cfg.eps_list);
    CHECK(back.regime == cfg.regime);
    CHECK(back.p_list == cfg.p_list);
}

TEST_CASE("trajectory save/load round trip") {
    TempDir tmp;
    const Grid1D g = make_grid(-2.0, 2.0, 32);
    Trajectory traj;
    traj.params = RegParams::eps_squared(0.25);
    traj.times = {0.0, 0.1, 0.2};
    std::mt19937 rng(3);
    for (int j = 0; j < 3; ++j) traj.states.push_back(random_smooth_field(g, rng));
    traj.steps = 17;
    const auto path = tmp.path / "traj.csv";
    save_trajectory(traj, path);
    const Trajectory back = load_trajectory(path);
    REQUIRE(back.times == traj.times);
    REQUIRE(back.params.has_value());
    CHECK(back.params->eps == 0.25);
    CHECK(back.params->beta == 0.0625);
    CHECK(back.steps == 17);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < g.n; ++i) CHECK(back.states[j][i] == traj.states[j][i]);
}

TEST_CASE("svg smoke test") {
    TempDir tmp;
    Series s1{"one", {1.0, 2.0, 4.0}, {1.0, 0.5, 0.25}};
    Series s2{"two", {1.0, 2.0, 4.0}, {2.0, 1.0, 0.5}};
    PlotOptions opts;
    opts.title = "decay";
    opts.log_x = opts.log_y = true;
    write_svg_lines(tmp.path / "p.svg", {s1, s2}, opts);
    const std::string body = slurp(tmp.path / "p.svg");
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("</svg>") != std::string::npos);
    std::size_t polylines = 0, pos = 0;
    while ((pos = body.find("<polyline", pos)) != std::string::npos) { ++polylines; ++pos; }
    CHECK(polylines == 2);
}

TEST_CASE("mollify_initial: mass, constants, width guard, gradient bound") {
    const Grid1D g = make_grid(-5.0, 5.0, 512);
    const RegParams p = RegParams::eps_squared(0.125);

    const Field c(g, 0.7);
    CHECK(max_abs_diff(mollify_initial(c, p), c) <= 1e-13);

    // Step datum: mass preserved, gradient bound satisfied for the whole sweep.
    Field step(g, 0.0);
    for (int i = 0; i < g.n; ++i) step[i] = g.center(i) > 0.0 && g.center(i) < 4.4 ? 1.0 : 0.0;
    double prev_l1 = std::numeric_limits<double>::infinity();
    for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
        const RegParams pe = RegParams::eps_squared(eps);
        const Field m = mollify_initial(step, pe);
        CHECK(integral(m) == doctest::Approx(integral(step)).epsilon(1e-12));
        const double bound = (pe.beta + pe.eps * pe.eps) * l2_norm_sq(diff1(m));
        CHECK(bound <= 4.0 * l2_norm_sq(step));
        // L1 convergence of the mollified data to the datum.
        const double l1 = lp_local_error(m, step, 1.0, -5.0, 5.0);
        CHECK(l1 < prev_l1);
        prev_l1 = l1;
    }

    const Grid1D tiny = make_grid(0.0, 1.0, 64);
    CHECK_THROWS_AS((void)mollify_initial(Field(tiny, 1.0), RegParams::free_params(0.9, 0.9)),
                    std::invalid_argument);
}

TEST_CASE("lp_local_error: arithmetic and brute-force oracle") {
    const Grid1D g = make_grid(-5.0, 5.0, 500);
    const Field z(g, 0.0);
    CHECK(lp_local_error(z, z, 2.0, -1.0, 1.0) == 0.0);

    const Field one(g, 1.0);
    CHECK(lp_local_error(one, z, 1.0, -1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937 rng(11);
    const Field a = random_smooth_field(g, rng);
    const Field b = random_smooth_field(g, rng);
    double brute = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.center(i);
        if (x < -2.5 || x > 2.5) continue;
        brute += (a[i] - b[i]) * (a[i] - b[i]);
    }
    brute = std::sqrt(brute * g.dx);
    CHECK(std::abs(lp_local_error(a, b, 2.0, -2.5, 2.5) - brute) <= 1e-14);

    CHECK_THROWS_AS((void)lp_local_error(a, b, 0.5, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)lp_local_error(a, b, 2.0, 8.0, 9.0), std::invalid_argument);
}

TEST_CASE("run_sweep on a constant datum gives zero errors") {
    TempDir tmp;
    {
        Csv profile;
        profile.header = {"x", "u"};
        const Grid1D g = make_grid(-5.0, 5.0, 64);
        for (int i = 0; i < g.n; ++i)
            profile.rows.push_back({format_double(g.center(i)), format_double(0.4)});
        write_csv(profile, tmp.path / "const.csv");
    }
    SweepConfig cfg = small_sweep_config();
    cfg.datum = DatumKind::FromFile;
    cfg.datum_file = (tmp.path / "const.csv").string();
    cfg.x_min = -5.0;
    cfg.x_max = 5.0;
    cfg.n = 64;
    cfg.eps_list = {0.2};
    const ConvergenceReport rep = run_sweep(cfg);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.assertions_ok);
    for (double err : rep.rows[0].lp_errors) CHECK(err <= 1e-12);
    CHECK(rep.rows[0].weak_residual_max <= 1e-9);
}

TEST_CASE("run_sweep is deterministic and rows are independent") {
    TempDir tmp;
    const SweepConfig cfg = small_sweep_config();

    const ConvergenceReport r1 = run_sweep(cfg);
    const ConvergenceReport r2 = run_sweep(cfg);
    write_sweep_outputs(r1, tmp.path / "a");
    write_sweep_outputs(r2, tmp.path / "b");
    CHECK(slurp(tmp.path / "a" / "report.csv") == slurp(tmp.path / "b" / "report.csv"));

    // Dropping the second row leaves the first row's bytes unchanged.
    SweepConfig first_only = cfg;
    first_only.eps_list = {cfg.eps_list[0]};
    const ConvergenceReport r3 = run_sweep(first_only);
    write_sweep_outputs(r3, tmp.path / "c");
    const std::string full = slurp(tmp.path / "a" / "report.csv");
    const std::string head = slurp(tmp.path / "c" / "report.csv");
    CHECK(full.substr(0, head.size()) == head);

    // Energy CSVs exist per run.
    CHECK(fs::exists(tmp.path / "a" / ("energy_" + r1.rows[0].run_id + ".csv")));
}

TEST_CASE("sweep config validation") {
    SweepConfig cfg = small_sweep_config();
    cfg.eps_list = {0.1, 0.2};  // not decreasing
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_sweep_config();
    cfg.p_list = {11.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_sweep_config();
    cfg.regime = Regime::Free;  // missing beta_list
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("riemann-smoothed datum keeps quiet boundary cells") {
    SweepConfig cfg = small_sweep_config();
    cfg.datum = DatumKind::RiemannSmoothed;
    cfg.datum_ul = 0.0;
    cfg.datum_ur = 1.0;
    cfg.datum_width = 0.05;
    const Grid1D g = make_grid(-5.0, 5.0, 1024);
    const Field u = make_datum(cfg, g);
    CHECK(std::abs(u[0]) < 1e-12);
    CHECK(std::abs(u[g.n - 1]) < 1e-12);
    CHECK(u[g.n / 2] == doctest::Approx(1.0).epsilon(1e-10));
}
