#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = APPELL_CLI_PATH;
const fs::path tmp_root = APPELL_TEST_TMPDIR;

struct RunResult {
    int exit_code;
};

RunResult run(const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return {WEXITSTATUS(status)};
}

fs::path write_config(const std::string& name, const std::string& content) {
    fs::create_directories(tmp_root);
    const fs::path p = tmp_root / name;
    std::ofstream out(p);
    out << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("gen exports kernel tables", "[cli]") {
    const fs::path out = tmp_root / "gen_gauss";
    const auto cfg = write_config("gen_gauss.json", R"({
        "N": 4,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]}
    })");
    REQUIRE(run("gen --config " + cfg.string() + " --out " + out.string()).exit_code == 0);

    const json j = json::parse(slurp(out / "appell_system.json"));
    CHECK(j.at("N") == 4);
    bool found_p2 = false;
    for (const auto& kj : j.at("p_kernels")) {
        if (kj.at("n") != 2) continue;
        const auto& row = kj.at("rows")[0];
        REQUIRE(row.at("gamma") == json::array({2}));
        // P_2 = x^2 - 1
        REQUIRE(row.at("entries").size() == 2);
        CHECK(row.at("entries")[0].at("alpha") == json::array({0}));
        CHECK(row.at("entries")[0].at("value") == -1.0);
        CHECK(row.at("entries")[1].at("alpha") == json::array({2}));
        CHECK(row.at("entries")[1].at("value") == 1.0);
        found_p2 = true;
    }
    CHECK(found_p2);
}

TEST_CASE("gen rejects degenerate measures with exit code 2", "[cli]") {
    const auto cfg = write_config("gen_twopoint.json", R"({
        "N": 3,
        "measure": {"components": [{"kind": "two_point", "x1": 1, "x2": -1, "p1": 0.5}]}
    })");
    CHECK(run("gen --config " + cfg.string() + " --out " + (tmp_root / "gen_tp").string()).exit_code == 2);
    // one degree lower the same measure is admissible
    const auto ok = write_config("gen_twopoint_ok.json", R"({
        "N": 1,
        "measure": {"components": [{"kind": "two_point", "x1": 1, "x2": -1, "p1": 0.5}]}
    })");
    CHECK(run("gen --config " + ok.string() + " --out " + (tmp_root / "gen_tp_ok").string()).exit_code == 0);
}

TEST_CASE("gen at N = 0 emits only the constant kernel", "[cli]") {
    const fs::path out = tmp_root / "gen_n0";
    const auto cfg = write_config("gen_n0.json", R"({
        "N": 0,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]}
    })");
    REQUIRE(run("gen --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
    const json j = json::parse(slurp(out / "appell_system.json"));
    REQUIRE(j.at("p_kernels").size() == 1);
    CHECK(j.at("p_kernels")[0].at("n") == 0);
    CHECK(j.at("p_kernels")[0].at("rows")[0].at("entries")[0].at("value") == 1.0);
}

TEST_CASE("verify passes on the default Gaussian configuration", "[cli]") {
    const fs::path out = tmp_root / "verify_gauss";
    const auto cfg = write_config("verify_gauss.json", R"({
        "N": 8,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]}
    })");
    REQUIRE(run("verify --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
    const json rep = json::parse(slurp(out / "verify_report.json"));
    CHECK(rep.at("all_pass") == true);
    bool bio_found = false;
    for (const auto& c : rep.at("views")[0].at("checks"))
        if (c.at("name") == "biorthogonality_exact") {
            bio_found = true;
            CHECK(c.at("status") == "pass");
            CHECK(c.at("max_deviation").get<double>() <= 1e-10);
        }
    CHECK(bio_found);
}

TEST_CASE("verify marks the norm check as skipped outside U_{p,q}", "[cli]") {
    const fs::path out = tmp_root / "verify_badq";
    const auto cfg = write_config("verify_badq.json", R"({
        "N": 8, "q": 6, "eta": [0.6],
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]}
    })");
    REQUIRE(run("verify --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
    const json rep = json::parse(slurp(out / "verify_report.json"));
    bool found = false;
    for (const auto& c : rep.at("views")[0].at("checks"))
        if (c.at("name") == "e_nu_norm_geometric") {
            found = true;
            CHECK(c.at("status") == "skipped");
            CHECK(c.at("note").get<std::string>().find("outside U_{p,q}") != std::string::npos);
        }
    CHECK(found);
}

TEST_CASE("symbol grid of the measure-change operator matches the exponential", "[cli]") {
    const fs::path out = tmp_root / "symbol_mc";
    const auto cfg = write_config("symbol_mc.json", R"({
        "N": 12,
        "measure": {"components": [{"kind": "poisson", "rate": 1}]},
        "measure_out": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]},
        "symbol": {
            "operator": "measure_change",
            "xi_range": {"min": -1, "max": 1, "count": 9},
            "eta_range": {"min": -1, "max": 1, "count": 9},
            "reconstruct": true,
            "max_degree": 4
        }
    })");
    REQUIRE(run("symbol --config " + cfg.string() + " --out " + out.string()).exit_code == 0);

    std::ifstream csv(out / "symbol_grid.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "xi_t,eta_t,re,im");
    double worst = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        std::stringstream ss(line);
        std::string tok;
        double vals[4];
        for (double& v : vals) {
            std::getline(ss, tok, ',');
            v = std::stod(tok);
        }
        worst = std::max(worst, std::abs(vals[2] - std::exp(vals[0] * vals[1])));
        worst = std::max(worst, std::abs(vals[3]));
        ++rows;
    }
    CHECK(rows == 81);
    CHECK(worst <= 1e-8);

    const json rec = json::parse(slurp(out / "reconstructed_kernel.json"));
    CHECK(rec.at("round_trip_max_rel_dev").get<double>() <= 1e-6);
    CHECK(rec.at("kernel").at("d") == 1);
}

TEST_CASE("symbol grid of the zero operator is identically zero", "[cli]") {
    const fs::path out = tmp_root / "symbol_zero";
    const auto cfg = write_config("symbol_zero.json", R"({
        "N": 6,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]},
        "symbol": {"operator": "zero", "xi_range": {"min": -2, "max": 2, "count": 5},
                   "eta_range": {"min": -2, "max": 2, "count": 5}}
    })");
    REQUIRE(run("symbol --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
    std::ifstream csv(out / "symbol_grid.csv");
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', line.find(',') + 1);
        CHECK(line.substr(c2 + 1) == "0,0");
        (void)c1;
    }
}

TEST_CASE("symbol command loads kernels from files", "[cli]") {
    // export a d_operator kernel, then reload it through the file path
    const fs::path out1 = tmp_root / "symbol_d";
    const auto cfg1 = write_config("symbol_d.json", R"({
        "N": 6,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]},
        "symbol": {
            "operator": {"d_operator": {"degree": 1, "coeffs": [{"alpha": [1], "value": 1.0}]}},
            "reconstruct": true, "max_degree": 3
        }
    })");
    REQUIRE(run("symbol --config " + cfg1.string() + " --out " + out1.string()).exit_code == 0);

    const json rec = json::parse(slurp(out1 / "reconstructed_kernel.json"));
    std::ofstream kout(tmp_root / "d_kernel.json");
    kout << rec.at("kernel").dump();
    kout.close();

    const fs::path out2 = tmp_root / "symbol_file";
    const auto cfg2 = write_config("symbol_file.json", std::string(R"({
        "N": 6,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]},
        "symbol": {"operator": {"file": ")") + (tmp_root / "d_kernel.json").string() + R"("}}
    })");
    CHECK(run("symbol --config " + cfg2.string() + " --out " + out2.string()).exit_code == 0);

    // malformed operator file
    std::ofstream bad(tmp_root / "bad_kernel.json");
    bad << "{\"d\": 1, \"N\": 3, \"measures\": oops";
    bad.close();
    const auto cfg3 = write_config("symbol_bad.json", std::string(R"({
        "N": 6,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]},
        "symbol": {"operator": {"file": ")") + (tmp_root / "bad_kernel.json").string() + R"("}}
    })");
    CHECK(run("symbol --config " + cfg3.string() + " --out " + (tmp_root / "symbol_bad").string()).exit_code == 2);
}

TEST_CASE("bad invocations exit with code 2", "[cli]") {
    CHECK(run("gen --config /nonexistent/cfg.json").exit_code == 2);
    const auto empty = write_config("empty.json", "{}");
    CHECK(run("gen --config " + empty.string()).exit_code == 2); // no measure
    const auto badw = write_config("badw.json", R"({
        "N": 4, "weights": [0.5],
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]}
    })");
    CHECK(run("gen --config " + badw.string()).exit_code == 2); // weights < 1
    CHECK(run("bogus --config " + empty.string()).exit_code == 2);
}

TEST_CASE("identical configurations produce byte-identical outputs", "[cli]") {
    const auto cfg = write_config("det.json", R"({
        "N": 6,
        "measure": {"components": [{"kind": "gamma", "shape": 2, "scale": 1}]},
        "symbol": {"operator": "identity", "reconstruct": true, "max_degree": 3}
    })");
    const fs::path o1 = tmp_root / "det1", o2 = tmp_root / "det2";
    REQUIRE(run("gen --config " + cfg.string() + " --out " + o1.string()).exit_code == 0);
    REQUIRE(run("gen --config " + cfg.string() + " --out " + o2.string()).exit_code == 0);
    CHECK(slurp(o1 / "appell_system.json") == slurp(o2 / "appell_system.json"));

    REQUIRE(run("verify --config " + cfg.string() + " --out " + o1.string()).exit_code == 0);
    REQUIRE(run("verify --config " + cfg.string() + " --out " + o2.string()).exit_code == 0);
    CHECK(slurp(o1 / "verify_report.json") == slurp(o2 / "verify_report.json"));

    REQUIRE(run("symbol --config " + cfg.string() + " --out " + o1.string()).exit_code == 0);
    REQUIRE(run("symbol --config " + cfg.string() + " --out " + o2.string()).exit_code == 0);
    CHECK(slurp(o1 / "symbol_grid.csv") == slurp(o2 / "symbol_grid.csv"));
    CHECK(slurp(o1 / "reconstructed_kernel.json") == slurp(o2 / "reconstructed_kernel.json"));
}

TEST_CASE("APPELL_THREADS parallelizes multi-view verification", "[cli]") {
    const auto cfg = write_config("views.json", R"({
        "N": 6,
        "measure": {"components": [{"kind": "gaussian", "mean": 0, "variance": 1}]},
        "views": [{"p": 0, "q": 0}, {"p": 1, "q": 1}, {"p": 2, "q": 2}]
    })");
    const fs::path o1 = tmp_root / "thr1", o2 = tmp_root / "thr2";
    const std::string serial = "APPELL_THREADS=1 " + cli + " verify --config " + cfg.string() + " --out " +
                               o1.string() + " > /dev/null 2>&1";
    const std::string parallel = "APPELL_THREADS=3 " + cli + " verify --config " + cfg.string() + " --out " +
                                 o2.string() + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(serial.c_str())) == 0);
    REQUIRE(WEXITSTATUS(std::system(parallel.c_str())) == 0);
    CHECK(slurp(o1 / "verify_report.json") == slurp(o2 / "verify_report.json"));

    const std::string bad = "APPELL_THREADS=zero " + cli + " verify --config " + cfg.string() + " --out " +
                            (tmp_root / "thr3").string() + " > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
}
