#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    json out; // null when stdout was empty or not JSON
};

std::string data_file(const std::string& name) {
    return std::string(HARDCORE_DATA_DIR) + "/" + name;
}

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    std::ostringstream s;
    s << "/tmp/hardcore_cli_test_" << ::getpid() << "_" << counter++ << "_" << tag;
    return s.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = temp_path("stdout.json");
    const std::string cmd =
        std::string(HARDCORE_CLI_PATH) + " " + args + " >" + out_path + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    const std::string text = read_file(out_path);
    std::remove(out_path.c_str());
    if (!text.empty()) r.out = json::parse(text, nullptr, /*allow_exceptions=*/false);
    return r;
}

const double kLogPhi = std::log((1.0 + std::sqrt(5.0)) / 2.0);

} // namespace

TEST_CASE("partition of a small graph is exact") {
    const RunResult r = run_cli("partition " + data_file("c4.json"));
    REQUIRE(r.code == 0);
    REQUIRE(r.out.contains("exact"));
    CHECK(r.out["exact"].get<double>() == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("free energy of the chain is certified around log phi") {
    const RunResult r =
        run_cli("free-energy --epsilon 1e-6 " + data_file("golden_chain.json"));
    REQUIRE(r.code == 0);
    CHECK(r.out["certified"].get<bool>());
    CHECK(r.out["normalization"].get<std::string>() == "per_vertex");
    const double lo = r.out["lower"].get<double>();
    const double hi = r.out["upper"].get<double>();
    CHECK(lo <= kLogPhi);
    CHECK(hi >= kLogPhi);
    CHECK(hi - lo <= 1e-6);
    CHECK(r.out["regime"].get<std::string>() == "subcritical");
    CHECK(r.out.contains("factors"));
}

TEST_CASE("output files are bit-identical across thread counts") {
    const std::string f1 = temp_path("t1.json");
    const std::string f4 = temp_path("t4.json");
    const RunResult r1 = run_cli("free-energy --epsilon 1e-5 --threads 1 --output " + f1 + " " +
                                 data_file("free_plus_chain.json"));
    const RunResult r4 = run_cli("free-energy --epsilon 1e-5 --threads 4 --output " + f4 + " " +
                                 data_file("free_plus_chain.json"));
    REQUIRE(r1.code == 0);
    REQUIRE(r4.code == 0);
    CHECK(r1.out.is_null()); // --output suppresses stdout
    const std::string b1 = read_file(f1);
    const std::string b4 = read_file(f4);
    CHECK(!b1.empty());
    CHECK(b1 == b4);
    std::remove(f1.c_str());
    std::remove(f4.c_str());
}

TEST_CASE("per-group-element normalization sums the domain") {
    const RunResult r = run_cli("free-energy --epsilon 1e-5 --normalization per_group_element " +
                                data_file("free_plus_chain.json"));
    REQUIRE(r.code == 0);
    CHECK(r.out["normalization"].get<std::string>() == "per_group_element");
    const double truth = std::log(2.0) + kLogPhi;
    CHECK(r.out["lower"].get<double>() <= truth);
    CHECK(r.out["upper"].get<double>() >= truth);
}

TEST_CASE("missed accuracy targets exit 2 with the best bracket") {
    const RunResult r =
        run_cli("free-energy --depth-cap 12 " + data_file("grid2d_lambda3.json"));
    REQUIRE(r.code == 2);
    CHECK(!r.out["certified"].get<bool>());
    CHECK(r.out["lower"].get<double>() < r.out["upper"].get<double>());
    CHECK(r.out["regime"].get<std::string>() == "supercritical");
}

TEST_CASE("entropy of the full shift is exact") {
    const RunResult r = run_cli("entropy " + data_file("fullshift3.json"));
    REQUIRE(r.code == 0);
    CHECK(r.out["certified"].get<bool>());
    CHECK(r.out["lower"].get<double>() == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(r.out["upper"].get<double>() == r.out["lower"].get<double>());
}

TEST_CASE("entropy without a safe symbol reports NotReducible") {
    const RunResult r = run_cli("entropy " + data_file("colorings3_z2.json"));
    REQUIRE(r.code == 1);
    CHECK(r.out["error"]["kind"].get<std::string>() == "NotReducible");
}

TEST_CASE("matching free energy of the chain") {
    const RunResult r = run_cli("matching --epsilon 1e-6 " + data_file("golden_chain.json"));
    REQUIRE(r.code == 0);
    CHECK(r.out["lower"].get<double>() <= kLogPhi);
    CHECK(r.out["upper"].get<double>() >= kLogPhi);
}

TEST_CASE("spectral radius of the golden-mean matrix") {
    const RunResult r =
        run_cli("spectral-radius --epsilon 1e-6 " + data_file("spectral_golden.json"));
    REQUIRE(r.code == 0);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(r.out["lower"].get<double>() <= phi);
    CHECK(r.out["upper"].get<double>() >= phi);
    CHECK(r.out["upper"].get<double>() - r.out["lower"].get<double>() <= 1e-6);
}

TEST_CASE("regime report on finite and periodic inputs") {
    const RunResult fin = run_cli("regime " + data_file("c4.json"));
    REQUIRE(fin.code == 0);
    CHECK(fin.out["regime"].get<std::string>() == "subcritical");

    const RunResult super = run_cli("regime " + data_file("grid2d_lambda3.json"));
    REQUIRE(super.code == 0);
    CHECK(super.out["regime"].get<std::string>() == "supercritical");
}

TEST_CASE("walk counts from a named vertex") {
    const RunResult r = run_cli("saw-count --vertex a --depth 5 " + data_file("c4.json"));
    REQUIRE(r.code == 0);
    CHECK(r.out["origin"].get<std::string>() == "a");
    const auto counts = r.out["counts"].get<std::vector<std::uint64_t>>();
    CHECK(counts == std::vector<std::uint64_t>{2, 2, 2, 0, 0});
    CHECK(r.out["mu_hat"].get<double>() == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));

    const RunResult bad = run_cli("saw-count --vertex nosuch " + data_file("c4.json"));
    REQUIRE(bad.code == 1);
    CHECK(bad.out["error"]["kind"].get<std::string>() == "InvalidInput");
}

TEST_CASE("walk counts on a periodic graph use the infinite cover") {
    const RunResult r =
        run_cli("saw-count --vertex v --depth 5 " + data_file("golden_chain.json"));
    REQUIRE(r.code == 0);
    CHECK(r.out["origin"].get<std::string>() == "v@(0)");
    // One walk per direction at every length on the two-sided chain.
    CHECK(r.out["counts"].get<std::vector<std::uint64_t>>()
          == std::vector<std::uint64_t>{2, 2, 2, 2, 2});
    CHECK(r.out["mu_hat"].get<double>()
          == doctest::Approx(std::pow(2.0, 1.0 / 5.0)).epsilon(1e-12));
}

TEST_CASE("reference oracles are exposed as subcommands") {
    const RunResult brute = run_cli("oracle brute " + data_file("c4.json"));
    REQUIRE(brute.code == 0);
    CHECK(brute.out["value"].get<double>() == doctest::Approx(7.0).epsilon(1e-12));

    const RunResult transfer = run_cli("oracle transfer1d " + data_file("golden_chain.json"));
    REQUIRE(transfer.code == 0);
    CHECK(transfer.out["value"].get<double>() == doctest::Approx(kLogPhi).epsilon(1e-9));

    const RunResult power = run_cli("oracle power " + data_file("spectral_golden.json"));
    REQUIRE(power.code == 0);
    CHECK(power.out["value"].get<double>()
          == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-10));

    const RunResult strip = run_cli("oracle strip2d --width 4 " + data_file("grid2d.json"));
    REQUIRE(strip.code == 0);
    CHECK(strip.out["lower"].get<double>() <= strip.out["upper"].get<double>());
    CHECK(strip.out["width_cells"].get<int>() == 4);
}

TEST_CASE("bad inputs and bad flags fail cleanly") {
    const RunResult missing = run_cli("partition /nonexistent/file.json");
    REQUIRE(missing.code == 1);
    CHECK(missing.out["error"]["kind"].get<std::string>() == "InvalidInput");
    CHECK(missing.out["error"].contains("message"));

    const RunResult flag = run_cli("free-energy --no-such-flag " + data_file("golden_chain.json"));
    CHECK(flag.code != 0);
    CHECK(flag.code != 2);

    const RunResult none = run_cli("");
    CHECK(none.code != 0);

    const RunResult badnorm =
        run_cli("free-energy --normalization bogus " + data_file("golden_chain.json"));
    CHECK(badnorm.code != 0);
}
