#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "test_util.hpp"
#include "tfacpp/instance.hpp"

namespace fs = std::filesystem;
using namespace tfacpp;

namespace {

const char* kCli = TFACPP_CLI_PATH;

int run(const std::string& args) {
    std::string cmd = std::string(kCli) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("tfacpp_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

// Tiny LP-integral instance with free crew, so every solve mode agrees.
fs::path write_zero_crew_instance(const fs::path& dir) {
    Instance inst = testutil::two_loop_instance();
    inst.crew_cost.pay_rate = 0;
    inst.crew_cost.min_guarantee = 0;
    inst.validate();
    fs::path p = dir / "tiny.json";
    save_instance(inst, p.string());
    return p;
}

}  // namespace

TEST_CASE("generate is byte-identical per seed and usage errors exit 2") {
    TempDir tmp;
    std::string base = "generate --seed 7 --stations 4 --families 2 --fleet-types 3 "
                       "--legs 6 --months 2 --out ";
    CHECK(run(base + (tmp.path / "a.json").string()) == 0);
    CHECK(run(base + (tmp.path / "b.json").string()) == 0);
    CHECK(slurp(tmp.path / "a.json") == slurp(tmp.path / "b.json"));

    CHECK(run("generate --seed 7") == 2);  // missing --out
    CHECK(run("nonsense") == 2);
}

TEST_CASE("generate then solve round-trips cleanly") {
    TempDir tmp;
    fs::path inst = tmp.path / "a.json";
    REQUIRE(run("generate --seed 3 --stations 4 --families 2 --fleet-types 3 --legs 6 "
                "--months 2 --out " + inst.string()) == 0);
    fs::path out = tmp.path / "run";
    CHECK(run("solve --instance " + inst.string() + " --mode colgen --demand mid --out " +
              out.string()) == 0);
    CHECK(fs::exists(out / "solution.json"));
    CHECK(fs::exists(out / "convergence.csv"));
    CHECK(fs::exists(out / "colgen_summary.csv"));
    CHECK(fs::exists(out / "finishing.csv"));
    CHECK(fs::exists(out / "allocation.csv"));

    // Determinism at one thread: identical artifacts on a rerun.
    fs::path out2 = tmp.path / "run2";
    CHECK(run("solve --instance " + inst.string() + " --mode colgen --demand mid --out " +
              out2.string()) == 0);
    CHECK(slurp(out / "solution.json") == slurp(out2 / "solution.json"));
}

TEST_CASE("solve modes agree on a tiny zero-crew-cost instance") {
    TempDir tmp;
    fs::path inst = write_zero_crew_instance(tmp.path);
    fs::path mono = tmp.path / "mono";
    fs::path cg = tmp.path / "cg";
    fs::path bex = tmp.path / "bex";
    REQUIRE(run("solve --instance " + inst.string() + " --mode monolithic --out " +
                mono.string()) == 0);
    REQUIRE(run("solve --instance " + inst.string() + " --mode colgen --out " + cg.string()) ==
            0);
    REQUIRE(run("solve --instance " + inst.string() + " --mode benders-exact --out " +
                bex.string()) == 0);
    auto obj = [&](const fs::path& p) {
        auto j = nlohmann::ordered_json::parse(slurp(p / "solution.json"));
        return j.at("objective").get<double>();
    };
    double m = obj(mono), c = obj(cg), b = obj(bex);
    CHECK(c == doctest::Approx(m).epsilon(1e-6));
    CHECK(b == doctest::Approx(m).epsilon(1e-6));
}

TEST_CASE("invalid mode and invalid demand are usage errors") {
    TempDir tmp;
    fs::path inst = write_zero_crew_instance(tmp.path);
    CHECK(run("solve --instance " + inst.string() + " --mode nope --out " +
              (tmp.path / "x").string()) == 2);
    CHECK(run("solve --instance " + inst.string() + " --demand sideways --out " +
              (tmp.path / "x").string()) == 2);
}

TEST_CASE("infeasible and malformed instances exit 4") {
    TempDir tmp;
    Instance inst = testutil::loop_instance();
    {
        Instance starved = inst;
        for (auto& fam : starved.families) fam.crew_count = 0;
        starved.validate();
        save_instance(starved, (tmp.path / "starved.json").string());
    }
    CHECK(run("solve --instance " + (tmp.path / "starved.json").string() +
              " --mode monolithic --out " + (tmp.path / "x").string()) == 4);

    std::ofstream(tmp.path / "broken.json") << "{ not json";
    CHECK(run("solve --instance " + (tmp.path / "broken.json").string() + " --out " +
              (tmp.path / "y").string()) == 4);
}

TEST_CASE("analyze needs an LP-mode solve and honors thresholds") {
    TempDir tmp;
    fs::path inst = tmp.path / "a.json";
    REQUIRE(run("generate --seed 5 --stations 4 --families 2 --fleet-types 3 --legs 6 "
                "--months 2 --out " + inst.string()) == 0);

    fs::path mono = tmp.path / "mono";
    REQUIRE(run("solve --instance " + inst.string() + " --mode monolithic --out " +
                mono.string()) == 0);
    CHECK(run("analyze --instance " + inst.string() + " --solve-dir " + mono.string() +
              " --out " + (tmp.path / "an0").string()) == 1);  // no duals in a MIP solve

    fs::path cg = tmp.path / "cg";
    REQUIRE(run("solve --instance " + inst.string() + " --mode colgen --out " + cg.string()) ==
            0);
    fs::path an = tmp.path / "an";
    REQUIRE(run("analyze --instance " + inst.string() + " --solve-dir " + cg.string() +
                " --gamma0 100 --beta0 100 --out " + an.string()) == 0);
    CHECK(fs::exists(an / "marginal.csv"));
    CHECK(fs::exists(an / "eam_comparison.csv"));

    // Quadrant assignments recomputed from the CSV respect the thresholds.
    std::ifstream q(an / "quadrant.csv");
    std::string line;
    std::getline(q, line);  // header
    int rows = 0;
    while (std::getline(q, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string fleet, gamma_s, family, beta_s, quad;
        std::getline(ss, fleet, ',');
        std::getline(ss, gamma_s, ',');
        std::getline(ss, family, ',');
        std::getline(ss, beta_s, ',');
        std::getline(ss, quad, ',');
        double gamma = std::stod(gamma_s), beta = std::stod(beta_s);
        std::string expect = gamma >= 100 ? (beta >= 100 ? "I" : "IV")
                                          : (beta >= 100 ? "II" : "III");
        CHECK(quad == expect);
        ++rows;
    }
    CHECK(rows >= 3);
}

TEST_CASE("eam and benders-trace commands write their artifacts") {
    TempDir tmp;
    fs::path inst = write_zero_crew_instance(tmp.path);
    CHECK(run("eam --instance " + inst.string() + " --out " + (tmp.path / "eam").string()) ==
          0);
    CHECK(fs::exists(tmp.path / "eam" / "eam.csv"));

    CHECK(run("benders-trace --instance " + inst.string() + " --out " +
              (tmp.path / "tr").string()) == 0);
    std::string trace = slurp(tmp.path / "tr" / "benders_trace.csv");
    CHECK(trace.find("iteration,upper_bound,lower_bound") != std::string::npos);
}

TEST_CASE("pairing pools export and replay through empirical cuts") {
    TempDir tmp;
    fs::path inst = write_zero_crew_instance(tmp.path);
    fs::path pool = tmp.path / "pool.json";
    REQUIRE(run("solve --instance " + inst.string() + " --mode colgen --export-pool " +
                pool.string() + " --out " + (tmp.path / "r1").string()) == 0);
    CHECK(fs::exists(pool));
    CHECK(run("solve --instance " + inst.string() + " --mode benders-empirical --pool " +
              pool.string() + " --markup 1.0 --out " + (tmp.path / "r2").string()) == 0);
    CHECK(fs::exists(tmp.path / "r2" / "benders_trace.csv"));
}

TEST_CASE("pricing threads do not change the artifacts") {
    TempDir tmp;
    fs::path inst = tmp.path / "a.json";
    REQUIRE(run("generate --seed 9 --stations 4 --families 2 --fleet-types 3 --legs 8 "
                "--months 2 --out " + inst.string()) == 0);
    fs::path one = tmp.path / "t1", two = tmp.path / "t2";
    REQUIRE(run("solve --instance " + inst.string() + " --mode colgen --threads 1 --out " +
                one.string()) == 0);
    REQUIRE(run("solve --instance " + inst.string() + " --mode colgen --threads 4 --out " +
                two.string()) == 0);
    // Wall-time columns differ run to run; the solution must not.
    CHECK(slurp(one / "solution.json") == slurp(two / "solution.json"));
}

TEST_CASE("network dumps appear on request") {
    TempDir tmp;
    fs::path inst = write_zero_crew_instance(tmp.path);
    fs::path out = tmp.path / "run";
    REQUIRE(run("solve --instance " + inst.string() + " --mode colgen --dump-network --out " +
                out.string()) == 0);
    CHECK(fs::exists(out / "networks" / "M01_FAMA-1.dot"));
}
