// End-to-end checks of the command-line tool: exit codes, artifact layout,
// and byte-level determinism of reruns.
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;
namespace fs = std::filesystem;

int run_cmd(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

} // namespace

TEST_CASE("cli: profile table runs and reruns byte-identically") {
    const fs::path dir = fs::temp_directory_path() / "shocksim_cli_profile";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file(dir / "run.cfg", R"(
[run]
mode = profile-table
[grid]
n1 = 17
n2 = 5
n3 = 5
extent1 = 4
extent2 = 2
extent3 = 2
)");
    const std::string base =
        "run " + (dir / "run.cfg").string() + " --quiet --out " + (dir / "out1").string();
    CHECK(run_cmd(base) == 0);
    CHECK(run_cmd("run " + (dir / "run.cfg").string() + " --quiet --out " +
                  (dir / "out2").string()) == 0);
    const std::string t1 = slurp(dir / "out1" / "profile_table.csv");
    const std::string t2 = slurp(dir / "out2" / "profile_table.csv");
    CHECK(!t1.empty());
    CHECK(t1 == t2);
    CHECK(t1.find("y1,y2,y3,W,dW1,dW2,dW3") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: config errors exit 2 and name the offender") {
    const fs::path dir = fs::temp_directory_path() / "shocksim_cli_err";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file(dir / "bad.cfg", "[run]\nmode = profile-table\nwidget = 3\n");
    CHECK(run_cmd("run " + (dir / "bad.cfg").string()) == 2);
    write_file(dir / "worse.cfg", "[run]\nmode = time-machine\n");
    CHECK(run_cmd("run " + (dir / "worse.cfg").string()) == 2);
    CHECK(run_cmd("run " + (dir / "missing.cfg").string()) == 2);
    // numerical failure (kappa0 below the admissible threshold) exits 3
    write_file(dir / "num.cfg", R"(
[run]
mode = burgers-1d
kappa0 = 2
[grid]
n1 = 129
extent1 = 10
[time]
ds = 0.001
s_max = 4.7
)");
    CHECK(run_cmd("run " + (dir / "num.cfg").string() + " --quiet --out " +
                  (dir / "numout").string()) == 3);
    fs::remove_all(dir);
}

TEST_CASE("cli: burgers-1d run emits the artifact set deterministically") {
    const fs::path dir = fs::temp_directory_path() / "shocksim_cli_b1";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file(dir / "run.cfg", R"(
[run]
mode = burgers-1d
epsilon = 0.01
kappa0 = 20
[grid]
n1 = 513
extent1 = 20
[time]
ds = 0.002
s_max = 5.2
[output]
snapshot_every = 0.25
monitor_every = 0.3
snapshot_format = binary
)");
    const std::string cfgp = (dir / "run.cfg").string();
    CHECK(run_cmd("run " + cfgp + " --quiet --out " + (dir / "o1").string()) == 0);
    CHECK(run_cmd("run " + cfgp + " --quiet --out " + (dir / "o2").string()) == 0);
    for (const char* f : {"modulation.csv", "monitor.csv", "blowup.json-like.txt"}) {
        CHECK(fs::exists(dir / "o1" / f));
        CHECK(slurp(dir / "o1" / f) == slurp(dir / "o2" / f));
    }
    CHECK(fs::exists(dir / "o1" / "plots" / "constraint_drift.dat"));
    CHECK(fs::exists(dir / "o1" / "plots" / "w_final_slice.dat"));
    // snapshots exist and are byte-identical across reruns
    bool any_snap = false;
    for (const auto& e : fs::directory_iterator(dir / "o1" / "snapshots")) {
        any_snap = true;
        CHECK(slurp(e.path()) == slurp(dir / "o2" / "snapshots" / e.path().filename()));
    }
    CHECK(any_snap);
    // --set override changes the config hash in the artifacts
    CHECK(run_cmd("run " + cfgp + " --quiet --set time.ds=0.004 --out " +
                  (dir / "o3").string()) == 0);
    const std::string h1 = slurp(dir / "o1" / "modulation.csv");
    const std::string h3 = slurp(dir / "o3" / "modulation.csv");
    CHECK(h1.substr(0, h1.find('\n')) != h3.substr(0, h3.find('\n')));
    fs::remove_all(dir);
}

int main(int argc, char** argv) {
    if (argc > 1) g_binary = argv[argc - 1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv);
    return ctx.run();
}
