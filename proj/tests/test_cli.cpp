#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("ltah_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const TempDir& dir, const std::string& args) {
    const auto out = dir.path / "stdout.txt", err = dir.path / "stderr.txt";
    const std::string cmd = std::string("\"") + LTAH_CLI_PATH + "\" " + args + " >\"" + out.string() +
                            "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

constexpr const char* kToy =
    "time,status,arm\n1,1,0\n2,1,0\n3,1,0\n4,1,0\n1.5,1,1\n2.5,0,1\n3.5,1,1\n4.5,1,1\n";

}  // namespace

TEST_CASE("analyze") {
    TempDir dir;
    const auto data = dir.write("toy.csv", kToy).string();

    auto r = run(dir, "analyze --data " + data + " --tau1 1 --tau2 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("LT-AH | [1, 3] |") != std::string::npos);
    CHECK(r.out.find("0.400 (") != std::string::npos);

    r = run(dir, "analyze --data " + data + " --tau1 1 --tau2 3 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.starts_with("measure,tau1,tau2,"));

    // Window beyond the data support and a window without events: estimability.
    CHECK(run(dir, "analyze --data " + data + " --tau1 1 --tau2 9").code == 3);
    CHECK(run(dir, "analyze --data " + data + " --tau1 3 --tau2 1").code == 3);
    CHECK(run(dir, "analyze --data " + dir.write("late.csv", "time,status,arm\n1,1,0\n2,1,0\n3,0,0\n4,0,0\n"
                                                              "1,1,1\n2,1,1\n3,0,1\n4,0,1\n").string() +
                   " --tau1 2.5 --tau2 4")
              .code == 3);

    // Input errors.
    CHECK(run(dir, "analyze --data " + (dir.path / "missing.csv").string() + " --tau1 1 --tau2 3").code == 2);
    r = run(dir, "analyze --data " + dir.write("bad.csv", "time,status,arm\n1,1,0\n2,x,1\n").string() +
                     " --tau1 1 --tau2 3");
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(run(dir, "analyze --data " + data + " --tau1 1 --tau2 3 --alpha 2").code == 2);
    CHECK(run(dir, "analyze --data " + data + " --tau1 1").code == 2);
    CHECK(run(dir, "").code == 2);
}

TEST_CASE("km-export") {
    TempDir dir;
    const auto data = dir.write("toy.csv", kToy).string();
    const auto out = (dir.path / "km.csv").string();
    CHECK(run(dir, "km-export --data " + data + " --out " + out).code == 0);
    const auto text = slurp(out);
    CHECK(text.starts_with("arm,kind,time,value\n1,survival,1.5,0.75\n"));
    CHECK(text.find("0,survival,4,0\n") != std::string::npos);
    CHECK(text.find("0,max_time,4,NA\n") != std::string::npos);

    const auto r = run(dir, "km-export --data " +
                                dir.write("one_arm.csv", "time,status,arm\n1,1,0\n2,1,0\n").string() +
                                " --out " + (dir.path / "x.csv").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("arm 1") != std::string::npos);
    CHECK(!fs::exists(dir.path / "x.csv"));
}

TEST_CASE("simulate") {
    TempDir dir;
    const auto cfg = dir.write("s.yaml",
                               "scenarios:\n"
                               "  - {name: tiny-ph, event_dist: ph, censor_dist: light, n_per_arm: 25, "
                               "replicates: 20, seed: 3}\n"
                               "  - {name: tiny-null, event_dist: no-diff, n_per_arm: 25, replicates: 20}\n");
    const auto out = dir.path / "out";
    CHECK(run(dir, "simulate --config " + cfg.string() + " --out " + out.string() + " --threads 2").code == 0);
    CHECK(fs::exists(out / "tiny-ph.csv"));
    CHECK(fs::exists(out / "tiny-ph.txt"));
    CHECK(fs::exists(out / "tiny-null.csv"));
    const auto first = slurp(out / "tiny-ph.csv");
    CHECK(first.find("tiny-ph,lt_ah_difference,") != std::string::npos);

    const auto out1 = dir.path / "out1";
    CHECK(run(dir, "simulate --config " + cfg.string() + " --out " + out1.string() + " --threads 1").code == 0);
    CHECK(slurp(out1 / "tiny-ph.csv") == first);
    CHECK(slurp(out1 / "tiny-ph.txt") == slurp(out / "tiny-ph.txt"));

    const auto zero = dir.write("z.yaml", "name: z\nevent_dist: ph\nreplicates: 0\n");
    CHECK(run(dir, "simulate --config " + zero.string() + " --out " + out.string()).code == 2);
    CHECK(run(dir, "simulate --config " + (dir.path / "none.yaml").string() + " --out " + out.string()).code == 2);
}
