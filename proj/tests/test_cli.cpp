#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "fairpic_test_cli";

int run(const std::string& args) {
    const std::string cmd = std::string(FAIRPIC_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(work);
    const auto p = work / name;
    std::ofstream(p) << text;
    return p;
}

const std::string small = R"([model]
beta = 0.2, 0, 0; 0, 0.2, 0; 0, 0, 0.3
gamma = 0.1, 0.1, 0.1
delta = 0.03, 0.03, 0.05
sigma_v = 0.01, 0.01, 0.01
sigma_l = 0.01, 0.01, 0.01
initial_state = 0.99, 0.01, 0, 0; 0.99, 0.01, 0, 0; 0.99, 0.01, 0, 0
single_beta = 0.23
[cost]
weights = 2, 1, 2/3
[solver]
samples = 16
horizon = 10
dt = 1
[experiment]
replications = 3
seed = 7
)";

}  // namespace

TEST_CASE("validate-config") {
    CHECK(run("validate-config --config " + std::string(FAIRPIC_CONFIG_DIR) + "/table1.ini") == 0);
    CHECK(run("validate-config --config " + write_config("bad.ini", small + "bogus = 1\n").string()) == 2);
    CHECK(run("validate-config --config /nonexistent.ini") == 2);
}

TEST_CASE("usage errors") {
    CHECK(run("") != 0);
    CHECK(run("frobnicate") != 0);
    CHECK(run("simulate") != 0);
    const auto cfg = write_config("small.ini", small).string();
    CHECK(run("simulate --config " + cfg + " --policy greedy --out " + (work / "x").string()) == 2);
    CHECK(run("sweep --config " + cfg + " --etas 0,zz --out " + (work / "x").string()) == 2);
}

TEST_CASE("numeric failure exit code") {
    const std::string text = R"([model]
beta = 0.23
gamma = 0.1
delta = 0.03
sigma_v = 0.01
sigma_l = 0.01
initial_state = 0.99, 0.01, 0, 0
[cost]
weights = 1e308
[solver]
samples = 4
horizon = 180
dt = 1
)";
    CHECK(run("simulate --config " + write_config("overflow.ini", text).string() + " --out " + (work / "o").string()) ==
          3);
}

TEST_CASE("simulate output is independent of thread count") {
    const auto cfg = write_config("small.ini", small).string();
    REQUIRE(run("simulate --config " + cfg + " --threads 1 --out " + (work / "serial").string()) == 0);
    REQUIRE(run("simulate --config " + cfg + " --threads 4 --out " + (work / "parallel").string()) == 0);
    for (const char* f : {"states.csv", "controls.csv", "summary.csv", "metrics.csv"}) {
        const auto a = slurp(work / "serial" / f);
        CHECK(!a.empty());
        CHECK(a == slurp(work / "parallel" / f));
    }
    REQUIRE(run("simulate --config " + cfg + " --seed 8 --out " + (work / "other").string()) == 0);
    CHECK(slurp(work / "serial/states.csv") != slurp(work / "other/states.csv"));
}

TEST_CASE("sweep and bench write their tables") {
    const auto cfg = write_config("small.ini", small).string();
    REQUIRE(run("sweep --config " + cfg + " --etas 0,0.08 --reps 2 --out " + (work / "sweep").string()) == 0);
    const auto pareto = slurp(work / "sweep/pareto.csv");
    CHECK(pareto.rfind("eta,mean_cost,mean_unfairness,stderr_cost,stderr_unfairness\n0,", 0) == 0);
    CHECK(pareto.find("\n0.08,") != std::string::npos);
    CHECK(pareto.find("\nhomogeneous,") != std::string::npos);
    CHECK(fs::exists(work / "sweep/eta_0.08/summary.csv"));
    CHECK(fs::exists(work / "sweep/homogeneous/metrics.csv"));

    REQUIRE(run("bench --config " + cfg + " --samples 8,16 --repeats 2 --sims 2 --out " + (work / "bench").string()) ==
            0);
    const auto bench = slurp(work / "bench/bench.csv");
    CHECK(bench.rfind("samples,mean_runtime_s,mean_objective\n8,", 0) == 0);
    CHECK(bench.find("\n16,") != std::string::npos);
    fs::remove_all(work);
}
