#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "weyl/csv.hpp"
#include "weyl/sums.hpp"

using json = nlohmann::json;
using namespace weyl;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string &args, std::string *out = nullptr) {
    std::string cmd = std::string(WEYL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string buf;
    char chunk[4096];
    size_t got;
    while ((got = fread(chunk, 1, sizeof chunk, p)) > 0) buf.append(chunk, got);
    int status = pclose(p);
    if (out) *out = buf;
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("weyl-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("eval and gauss spec examples") {
    TempDir tmp;
    std::string out;
    int rc = run_cli("--cache-dir " + tmp.path.string() + " eval --N 5 --k 3 --x 0 --t 0", &out);
    CHECK(rc == 0);
    json doc = json::parse(out);
    CHECK(doc["schema"] == "weyl/1");
    CHECK(doc["outputs"]["re"].get<double>() == doctest::Approx(5.0));
    CHECK(doc["outputs"]["im"].get<double>() == doctest::Approx(0.0));

    rc = run_cli("--cache-dir " + tmp.path.string() + " gauss --k 2 --a 1 --b 1 --q 4", &out);
    CHECK(rc == 0);
    doc = json::parse(out);
    CHECK(doc["outputs"]["magnitude"].get<double>() < 1e-10);
}

TEST_CASE("exponent-fit reports the predicted exponents") {
    TempDir tmp;
    std::string out;
    int rc = run_cli("--cache-dir " + tmp.path.string() +
                         " exponent-fit --k 3 --p 2 --N 8,16,32",
                     &out);
    CHECK(rc == 0);
    json doc = json::parse(out);
    CHECK(doc["outputs"]["predicted_upper"].get<double>() == doctest::Approx(0.75));
    CHECK(doc["outputs"]["predicted_lower"].get<double>() == doctest::Approx(0.75));
    CHECK(doc["outputs"]["norm_values"].size() == 3);
}

TEST_CASE("determinism: identical runs produce byte-identical documents") {
    TempDir tmpa, tmpb;
    const std::string cmd = " conjecture-scan --k 3 --N 16 --samples 200 --seed 7";
    std::string a, b;
    CHECK(run_cli("--cache-dir " + tmpa.path.string() + cmd, &a) == 0);
    CHECK(run_cli("--cache-dir " + tmpb.path.string() + cmd, &b) == 0);
    CHECK(a == b);
}

TEST_CASE("cache replay matches recompute") {
    TempDir tmp;
    const std::string cmd = " sup --N 12 --k 3 --x 0.375";
    std::string cold, warm, fresh;
    CHECK(run_cli("--cache-dir " + tmp.path.string() + cmd, &cold) == 0);
    // second run hits the RunRecord
    CHECK(run_cli("--cache-dir " + tmp.path.string() + cmd, &warm) == 0);
    CHECK(warm == cold);
    // --no-cache recomputes to the same bytes
    CHECK(run_cli("--cache-dir " + tmp.path.string() + " --no-cache" + cmd, &fresh) == 0);
    CHECK(fresh == cold);
    // exactly one record was written, with the bookkeeping fields
    int records = 0;
    for (auto &e : fs::directory_iterator(tmp.path)) {
        ++records;
        std::ifstream in(e.path());
        json rec = json::parse(in);
        CHECK(rec["schema"] == "weyl/1");
        CHECK(rec.contains("timestamp"));
        CHECK(rec.contains("wall_time_s"));
        CHECK(rec.contains("outputs"));
    }
    CHECK(records == 1);
}

TEST_CASE("WEYL_CACHE_DIR environment variable is honored") {
    TempDir tmp;
    setenv("WEYL_CACHE_DIR", tmp.path.c_str(), 1);
    std::string out;
    CHECK(run_cli("dirichlet --alpha 0.14159265358979312 --M 100", &out) == 0);
    unsetenv("WEYL_CACHE_DIR");
    json doc = json::parse(out);
    CHECK(doc["outputs"]["num"] == 1);
    CHECK(doc["outputs"]["den"] == 7);
    CHECK(doc["outputs"]["bound_ok"] == true);
    int records = 0;
    for ([[maybe_unused]] auto &e : fs::directory_iterator(tmp.path)) ++records;
    CHECK(records == 1);
}

TEST_CASE("exit codes: bad flags 2, invalid input 2, budget 3, io 4") {
    TempDir tmp;
    const std::string base = "--cache-dir " + tmp.path.string();
    CHECK(run_cli(base + " eval --no-such-flag") == 2);
    CHECK(run_cli(base + " eval --N 0 --k 3 --x 0 --t 0") == 2);
    CHECK(run_cli(base + " census --k 3 --q 9") == 2);
    CHECK(run_cli(base + " sup --N 64 --k 3 --x 0.1 --budget 65536") == 3);
    CHECK(run_cli(base + " eval --N 4 --k 3 --grid-x 8 --csv /nonexistent-dir/out.csv") == 4);
}

TEST_CASE("grid CSV round-trips exactly") {
    TempDir tmp;
    // random grids through the emit/parse pair
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-10.0, 10.0);
    for (int it = 0; it < 20; ++it) {
        csv::Grid g;
        g.coord_name = it % 2 ? "x" : "t";
        size_t n = 1 + rng() % 64;
        for (size_t i = 0; i < n; ++i) {
            g.coord.push_back(uni(rng));
            g.value.emplace_back(uni(rng), uni(rng));
        }
        auto path = (tmp.path / ("g" + std::to_string(it) + ".csv")).string();
        csv::emit_grid(g, path);
        CHECK(csv::parse_grid(path) == g);
    }
    // empty grid: header-only file
    csv::Grid empty;
    empty.coord_name = "x";
    auto epath = (tmp.path / "empty.csv").string();
    csv::emit_grid(empty, epath);
    CHECK(csv::parse_grid(epath) == empty);

    // the CLI-emitted grid equals the library evaluation bit-for-bit
    auto cpath = (tmp.path / "cli.csv").string();
    CHECK(run_cli("--cache-dir " + tmp.path.string() +
                  " eval --N 24 --k 3 --t 0.125 --grid-x 64 --csv " + cpath) == 0);
    auto parsed = csv::parse_grid(cpath);
    auto want = sums::eval_weyl_grid_x({24, 3}, 0.125, 64);
    REQUIRE(parsed.value.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) {
        CHECK(parsed.value[i].real() == want[i].real());
        CHECK(parsed.value[i].imag() == want[i].imag());
        CHECK(parsed.coord[i] == double(i) / 64.0);
    }
}
