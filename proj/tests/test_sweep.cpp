#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qilab/sweep.hpp"

using namespace qilab;

TEST_CASE("grid_points") {
    GridSpec lin{"x", 0.0, 1.0, 5, false};
    auto p = grid_points(lin);
    REQUIRE(p.size() == 5);
    CHECK(p.front() == 0.0);
    CHECK(p.back() == 1.0);
    CHECK(p[2] == doctest::Approx(0.5));

    GridSpec lg{"x", 0.01, 10.0, 4, true};
    auto q = grid_points(lg);
    CHECK(q.front() == doctest::Approx(0.01));
    CHECK(q.back() == doctest::Approx(10.0));
    CHECK(q[1] / q[0] == doctest::Approx(q[2] / q[1]).epsilon(1e-12));

    CHECK_THROWS_AS(grid_points(GridSpec{"x", -1.0, 1.0, 3, true}), ConfigError);
    CHECK_THROWS_AS(grid_points(GridSpec{"x", 0.0, 1.0, 0, false}), ConfigError);

    GridSpec single{"x", 2.0, 9.0, 1, false};
    CHECK(grid_points(single) == std::vector<double>{2.0});
}

TEST_CASE("gain-qfi sweep row values") {
    SweepConfig cfg;
    cfg.subcommand = "gain-qfi";
    cfg.params = {{"n", 6.0}, {"m", 9.0}};
    cfg.grids = {{"g", 2.0, 2.0, 1, false}};
    Dataset ds = run(cfg);
    REQUIRE(ds.rows.size() == 1);
    CHECK(ds.errors[0].empty());
    CHECK(ds.rows[0][1] == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(ds.rows[0][2] == doctest::Approx(5.5).epsilon(1e-12));
}

TEST_CASE("row errors are captured, not fatal") {
    SweepConfig cfg;
    cfg.subcommand = "covert-bound";
    cfg.params = {{"n_b", 0.2}, {"eps", 1e-3}, {"eta", 0.45}};  // eta too large
    cfg.grids = {{"m", 100.0, 100.0, 1, false}};
    Dataset ds = run(cfg);
    REQUIRE(ds.rows.size() == 1);
    CHECK(!ds.errors[0].empty());
    CHECK(ds.rows[0][0] == doctest::Approx(100.0));  // grid coordinate survives
}

TEST_CASE("missing parameters raise ConfigError rows") {
    SweepConfig cfg;
    cfg.subcommand = "gain-qfi";
    cfg.grids = {{"g", 2.0, 3.0, 2, false}};
    Dataset ds = run(cfg);
    CHECK(ds.errors[0].find("missing parameter") != std::string::npos);
    SweepConfig bad;
    bad.subcommand = "no-such";
    CHECK_THROWS_AS(run(bad), ConfigError);
}

TEST_CASE("threaded sweeps emit byte-identical output") {
    SweepConfig cfg;
    cfg.subcommand = "gain-mse";
    cfg.params = {{"n", 20.0}, {"m", 20.0}, {"eta_d", 0.7}};
    cfg.grids = {{"g", 1.1, 3.0, 37, false}};
    cfg.threads = 1;
    std::string one = emit(run(cfg), "csv");
    cfg.threads = 8;
    std::string eight = emit(run(cfg), "csv");
    CHECK(one == eight);

    std::string j1 = emit(run(cfg), "json");
    cfg.threads = 1;
    std::string j8 = emit(run(cfg), "json");
    CHECK(j1 == j8);
}

TEST_CASE("two-grid cartesian order is row-major over declared grids") {
    SweepConfig cfg;
    cfg.subcommand = "ecb";
    cfg.params = {{"n", 6.0}, {"m", 9.0}};
    cfg.grids = {{"g", 1.5, 2.0, 2, false}, {"g_prime", 3.0, 4.0, 2, false}};
    Dataset ds = run(cfg);
    REQUIRE(ds.rows.size() == 4);
    CHECK(ds.rows[0][0] == doctest::Approx(1.5));
    CHECK(ds.rows[0][1] == doctest::Approx(3.0));
    CHECK(ds.rows[1][0] == doctest::Approx(1.5));
    CHECK(ds.rows[1][1] == doctest::Approx(4.0));
    CHECK(ds.rows[2][0] == doctest::Approx(2.0));
}

TEST_CASE("csv format details") {
    SweepConfig cfg;
    cfg.subcommand = "gain-qfi";
    cfg.params = {{"n", 6.0}, {"m", 9.0}};
    cfg.grids = {{"g", 2.0, 2.0, 1, false}};
    Dataset ds = run(cfg);
    std::string text = emit(ds, "csv");
    CHECK(text.substr(0, text.find('\n')) == "g,k_nds,k_coh,j_hom,j_het,error");
    CHECK(text.find("\r") == std::string::npos);
    // one header plus one row, LF-terminated
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);

    Dataset nonfinite;
    nonfinite.columns = {"a"};
    nonfinite.rows = {{std::numeric_limits<double>::infinity()},
                      {std::numeric_limits<double>::quiet_NaN()}};
    nonfinite.errors = {"", ""};
    std::string t = emit(nonfinite, "csv");
    CHECK(t.find("inf") != std::string::npos);
    CHECK(t.find("nan") != std::string::npos);

    Dataset empty;
    empty.columns = {"a"};
    CHECK_THROWS_AS(emit(empty, "csv"), IoError);
}

TEST_CASE("csv values round-trip losslessly") {
    SweepConfig cfg;
    cfg.subcommand = "gain-mse";
    cfg.params = {{"n", 6.0}, {"m", 9.0}, {"eta_d", 0.7}};
    cfg.grids = {{"g", 1.234567890123, 2.987654321098, 7, false}};
    Dataset ds = run(cfg);
    std::istringstream text(emit(ds, "csv"));
    std::string line;
    std::getline(text, line);  // header
    for (const auto& row : ds.rows) {
        REQUIRE(std::getline(text, line));
        size_t pos = 0;
        for (double want : row) {
            size_t comma = line.find(',', pos);
            double got = std::strtod(line.substr(pos, comma - pos).c_str(), nullptr);
            CHECK(got == want);  // bitwise round trip at 17 significant digits
            pos = comma + 1;
        }
    }
}

TEST_CASE("column schemas are exactly as documented") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> want = {
        {"perfect-covert",
         {"n_b", "chi_tmsv_qc", "chi_tmsv_qb", "chi_tmsv_analytic", "chi_gcs_qc",
          "chi_gcs_qb", "chi_gcs_analytic", "ratio_qc"}},
        {"covert-energy", {"m", "ns_min", "ns_max"}},
        {"covert-bound", {"m", "pe_floor", "pe_tmsv", "pe_gcs", "ns_covert"}},
        {"gain-qfi", {"g", "k_nds", "k_coh", "j_hom", "j_het"}},
        {"gain-mse", {"g", "qcrb_num", "qcrb_coh", "mse_num", "mse_coh"}},
        {"gain-threshold", {"eta_d", "g_star"}},
        {"ecb", {"g", "g_prime", "b_quantum", "b_classical", "ratio"}},
        {"spes", {"n_s", "chi_spes", "chi_tmsv", "chi_coh", "chi_mmpc", "chi_mmpdc"}},
        {"distinguish", {"fidelity", "c_half", "chernoff", "s_star", "pe_lower", "pe_upper"}},
    };
    for (const auto& [name, cols] : want) {
        SweepConfig cfg;
        cfg.subcommand = name;  // no params: rows error out, columns stay fixed
        if (name != "distinguish") cfg.grids = {{cols[0], 1.0, 1.0, 1, false}};
        Dataset ds = run(cfg);
        CHECK(ds.columns == cols);
    }
    auto names = subcommand_names();
    CHECK(names.size() == want.size());
}

TEST_CASE("distinguish subcommand on state files") {
    const char* file_a = "state_a_test.json";
    const char* file_b = "state_b_test.json";
    {
        std::ofstream a(file_a);
        a << R"({"modes":1,"ordering":"xxpp","mean":[0,0],"cov":[[0.5,0],[0,0.5]]})";
        std::ofstream b(file_b);
        b << R"({"modes":1,"ordering":"xxpp","mean":[0,0],"cov":[[1.5,0],[0,1.5]]})";
    }
    SweepConfig cfg;
    cfg.subcommand = "distinguish";
    cfg.state_a = file_a;
    cfg.state_b = file_b;
    Dataset ds = run(cfg);
    REQUIRE(ds.rows.size() == 1);
    REQUIRE(ds.errors[0].empty());
    CHECK(ds.rows[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));  // fidelity
    CHECK(ds.rows[0][2] == doctest::Approx(0.5).epsilon(1e-5));                   // chernoff = F^2
    std::remove(file_a);
    std::remove(file_b);
}
