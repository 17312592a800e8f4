#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CK_CLI_PATH) + " " + args + " 2> cli_stderr.log";
    const int status = std::system(cmd.c_str());
#ifdef _WIN32
    return status;
#else
    return WEXITSTATUS(status);
#endif
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json run_json(const std::string& args, const std::string& out, int expect_exit = 0) {
    REQUIRE(run_cli(args + " --output " + out) == expect_exit);
    return json::parse(slurp(out));
}

}  // namespace

TEST_CASE("solve writes equilibrium results as JSON") {
    SECTION("symmetric threshold for the contamination band") {
        const auto j = run_json("solve --concept symmetric-ckne --family contamination --param 0.75",
                                "out_sym.json");
        REQUIRE(j.at("profiles").size() == 2);
        CHECK(j.at("profiles")[1][0].get<double>() == Catch::Approx(0.6457513110645906).margin(1e-9));
        CHECK(j.at("method").get<std::string>() == "bisection");
        CHECK(j.at("trivial_included").get<bool>());
        for (const auto& r : j.at("residuals")) CHECK(r.get<double>() < 1e-9);
    }
    SECTION("partially cursed thresholds") {
        const auto j = run_json("solve --concept partial --chi1 0.6 --chi2 0.9", "out_partial.json");
        CHECK(j.at("profiles")[1][0].get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-12));
        CHECK(j.at("profiles")[1][1].get<double>() == Catch::Approx(4.0 / 9.0).margin(1e-12));
    }
    SECTION("rational play never trades") {
        const auto j = run_json("solve --concept bne", "out_bne.json");
        REQUIRE(j.at("profiles").size() == 1);
        CHECK(j.at("profiles")[0][0].get<double>() == 0.0);
        CHECK(j.at("profiles")[0][1].get<double>() == 0.0);
    }
    SECTION("band files work") {
        json spec;
        spec["family"] = "epsilon";
        spec["param"] = 0.2;
        std::ofstream("band_eps.json") << spec.dump();
        const auto j = run_json("solve --concept cursed-uncursed --band-file band_eps.json",
                                "out_cu.json");
        CHECK(j.at("profiles")[1][0].get<double>() == Catch::Approx(0.7).margin(1e-9));
        CHECK(j.at("profiles")[1][1].get<double>() == Catch::Approx(0.25).margin(1e-9));
    }
}

TEST_CASE("solve rejects bad configurations with exit code 1") {
    CHECK(run_cli("solve --concept nope --output out_err.json") == 1);
    CHECK(run_cli("solve --concept symmetric-ckne --family contamination --param 1.5 "
                  "--output out_err.json") == 1);
    CHECK(run_cli("solve") == 1);            // missing required flag
    CHECK(run_cli("solve --concept bne --no-such-flag 1") == 1);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("sweep emits locale-independent CSV") {
    SECTION("symmetric thresholds rise toward 2/3 in the contamination parameter") {
        REQUIRE(run_cli("sweep --concept symmetric-ckne --family contamination --start 0 "
                        "--stop 0.99 --steps 25 --output sweep_k.csv") == 0);
        const std::string csv = slurp("sweep_k.csv");
        CHECK(csv.rfind("param,threshold\n", 0) == 0);
        CHECK(csv.find(',') != std::string::npos);
        CHECK(csv.find(';') == std::string::npos);
        CHECK(csv.find("\r") == std::string::npos);
        // 12 significant digits on non-trivial values
        CHECK(csv.find("0.576833106366") != std::string::npos);

        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        double prev = 0.0, last = 0.0;
        int rows = 0;
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            REQUIRE(comma != std::string::npos);
            const double value = std::stod(line.substr(comma + 1));
            REQUIRE(value >= prev - 1e-12);  // monotone increasing column
            prev = last = value;
            ++rows;
        }
        CHECK(rows == 25);
        CHECK(last > 0.66);
        CHECK(last < 2.0 / 3.0 + 1e-6);
    }
    SECTION("ambiguous thresholds over the epsilon family peak at 9/16 near 3/16") {
        REQUIRE(run_cli("sweep --concept ambiguous-ckne --family epsilon --start 0 --stop 0.49 "
                        "--steps 49 --output sweep_e.csv") == 0);
        std::istringstream in(slurp("sweep_e.csv"));
        std::string line;
        std::getline(in, line);
        double best_param = -1.0, best = -1.0, first = -1.0, final = -1.0;
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            const double p = std::stod(line.substr(0, comma));
            const double v = std::stod(line.substr(comma + 1));
            if (first < 0.0) first = v;
            final = v;
            if (v > best) {
                best = v;
                best_param = p;
            }
        }
        CHECK(best == Catch::Approx(9.0 / 16.0).margin(1e-3));
        CHECK(best_param == Catch::Approx(3.0 / 16.0).margin(0.02));
        CHECK(best > first);
        CHECK(best > final);
        CHECK(final == Catch::Approx(0.5).margin(5e-3));
    }
    SECTION("welfare sweeps: actual falls and perceived rises in own cursedness") {
        REQUIRE(run_cli("sweep --concept welfare --chi-other 1 --start 0 --stop 1 --steps 21 "
                        "--output sweep_w.csv") == 0);
        std::istringstream in(slurp("sweep_w.csv"));
        std::string line;
        std::getline(in, line);
        CHECK(line == "chi,U,V");
        double prev_u = 2.0, prev_v = -1.0;
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string chi_s, u_s, v_s;
            std::getline(row, chi_s, ',');
            std::getline(row, u_s, ',');
            std::getline(row, v_s, ',');
            const double u = std::stod(u_s), v = std::stod(v_s);
            REQUIRE(u <= prev_u + 1e-12);
            REQUIRE(v >= prev_v - 1e-12);
            prev_u = u;
            prev_v = v;
        }
    }
    SECTION("steps below 2 are a configuration error") {
        CHECK(run_cli("sweep --concept symmetric-ckne --family contamination --start 0 --stop 0.9 "
                      "--steps 1 --output sweep_bad.csv") == 1);
    }
}

TEST_CASE("identical configurations produce byte-identical outputs") {
    REQUIRE(run_cli("sweep --concept symmetric-ckne --family triangle --start 1 --stop 30 "
                    "--steps 40 --output rep_a.csv") == 0);
    REQUIRE(run_cli("sweep --concept symmetric-ckne --family triangle --start 1 --stop 30 "
                    "--steps 40 --output rep_b.csv") == 0);
    CHECK(slurp("rep_a.csv") == slurp("rep_b.csv"));

    REQUIRE(run_cli("verify --concept symmetric-ckne --family contamination --param 0.75 "
                    "--n 200000 --seed 9 --grid-n 2000 --output rep_v1.json") == 0);
    REQUIRE(run_cli("verify --concept symmetric-ckne --family contamination --param 0.75 "
                    "--n 200000 --seed 9 --grid-n 2000 --output rep_v2.json") == 0);
    CHECK(slurp("rep_v1.json") == slurp("rep_v2.json"));
}

TEST_CASE("verify passes honest solutions and flags perturbed ones") {
    SECTION("symmetric equilibrium verifies") {
        const auto j = run_json("verify --concept symmetric-ckne --family contamination "
                                "--param 0.75 --n 400000 --seed 5 --grid-n 4000",
                                "verify_ok.json");
        CHECK(j.at("pass").get<bool>());
    }
    SECTION("welfare verifies against Monte Carlo") {
        const auto j = run_json("verify --concept welfare --chi1 0.6 --chi2 0.9 --n 400000 "
                                "--seed 6 --grid-n 4000",
                                "verify_w.json");
        CHECK(j.at("pass").get<bool>());
    }
    SECTION("a perturbed profile fails with exit code 3") {
        const auto j = run_json("verify --concept symmetric-ckne --family contamination "
                                "--param 0.75 --n 200000 --seed 7 --grid-n 4000 --perturb 0.05",
                                "verify_bad.json", 3);
        CHECK_FALSE(j.at("pass").get<bool>());
        bool certificate_failed = false;
        for (const auto& c : j.at("checks"))
            if (c.at("name").get<std::string>() == "equilibrium certificate")
                certificate_failed = !c.at("pass").get<bool>() && c.at("measured").get<double>() > 0.0;
        CHECK(certificate_failed);
    }
}
