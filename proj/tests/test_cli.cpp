#include "test_util.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

using namespace awig;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run(const std::string& args) {
    const std::string cmd = std::string(AWIG_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class CliTest : public ::testing::Test {
protected:
    fs::path dir;
    // Small grids so every command finishes quickly.
    const std::string grid = "--grid -12,8,1024 --ugrid 16,512";

    void SetUp() override {
        dir = fs::temp_directory_path() / ("awig_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string p(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_F(CliTest, HelpAndUsageErrors) {
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("check no-such-suite").code, 1);
}

TEST_F(CliTest, SynthesizesNormalizedMorseState) {
    const CliResult r = run(grid + " synth morse --s 1 --out " + p("m.csv"));
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["norm2"].get<double>(), 1.0, 1e-5);
    const HalfLineSignal f = io::read_signal(p("m.csv"));
    EXPECT_EQ(f.grid, LogGrid::from_range(-12.0, 8.0, 1024));
    EXPECT_EQ(io::read_json(p("m.json"))["params"]["s"], 1.0);
}

TEST_F(CliTest, SynthesizesBumpWithCompactSupport) {
    ASSERT_EQ(run(grid + " synth bump --support 1,2.718281828459045 --out " + p("b.csv")).code, 0);
    const HalfLineSignal f = io::read_signal(p("b.csv"));
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f.grid.t(j) < 0.0 || f.grid.t(j) > 1.0) EXPECT_EQ(f[j], cplx{});
}

TEST_F(CliTest, RejectsInvalidParameters) {
    EXPECT_EQ(run(grid + " synth morse --s -1 --out " + p("x.csv")).code, 1);
    EXPECT_EQ(run(grid + " synth laguerre --n 2 --alpha -2 --out " + p("x.csv")).code, 1);
    EXPECT_EQ(run(grid + " synth klauder --C 1,0 --beta 1,0 --gamma 0,1 --out " + p("x.csv")).code, 1);
    EXPECT_EQ(run("--grid -12,8,1000 synth morse --s 1 --out " + p("x.csv")).code, 1);
    EXPECT_EQ(run("--ugrid 16,1000 synth morse --s 1 --out " + p("x.csv")).code, 1);
    EXPECT_EQ(run(grid + " transform wigner " + p("missing.csv")).code, 1);
}

TEST_F(CliTest, TransformIsDeterministic) {
    ASSERT_EQ(run(grid + " synth morse --s 2 --out " + p("m.csv")).code, 0);
    ASSERT_EQ(run(grid + " --threads 1 transform wigner " + p("m.csv") + " --out " + p("w1.csv")).code, 0);
    ASSERT_EQ(run(grid + " --threads 2 transform wigner " + p("m.csv") + " --out " + p("w2.csv")).code, 0);
    EXPECT_EQ(io::read_text(p("w1.csv")), io::read_text(p("w2.csv")));
    const AffineMap W = io::read_map(p("w1.csv"));
    EXPECT_EQ(W.max_imag(), 0.0);
}

TEST_F(CliTest, AmbiguityPeaksAtIdentity) {
    ASSERT_EQ(run(grid + " synth laguerre --n 1 --alpha 1 --out " + p("l.csv")).code, 0);
    ASSERT_EQ(run(grid + " transform ambiguity " + p("l.csv") + " --out " + p("a.csv")).code, 0);
    const AffineMap A = io::read_map(p("a.csv"));
    std::size_t best = 0;
    for (std::size_t q = 0; q < A.values.size(); ++q)
        if (std::abs(A.values[q]) > std::abs(A.values[best])) best = q;
    EXPECT_NEAR(A.agrid.x(best / A.nt()), 0.0, 1e-12);
    EXPECT_NEAR(A.agrid.log_axis.t(best % A.nt()), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(A.values[best]), 1.0, 1e-6);
}

TEST_F(CliTest, ApproximationOfSyntheticSymbols) {
    ASSERT_EQ(run(grid + " synth laguerre --n 0 --alpha 1 --out " + p("l0.csv")).code, 0);
    ASSERT_EQ(run(grid + " synth laguerre --n 1 --alpha 1 --out " + p("l1.csv")).code, 0);
    ASSERT_EQ(run(grid + " transform wigner " + p("l0.csv") + " --out " + p("w0.csv")).code, 0);
    ASSERT_EQ(run(grid + " transform wigner " + p("l1.csv") + " --out " + p("w1.csv")).code, 0);
    const AffineMap W0 = io::read_map(p("w0.csv")), W1 = io::read_map(p("w1.csv"));
    io::write_map(p("mix.csv"), 0.6 * W0 + 0.4 * W1, "symbol");
    io::write_map(p("neg.csv"), -1.0 * W0, "symbol");
    io::write_map(p("cplx.csv"), cplx(0.0, 1.0) * W0, "symbol");

    CliResult r = run(grid + " --basis 4,1 approx " + p("mix.csv") + " --out " + p("mix.json"));
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["distance"].get<double>(), 0.4, 1e-3);
    EXPECT_EQ(j["multiplicity"], 1);
    EXPECT_TRUE(fs::exists(p("mix_minimizer0.csv")));

    r = run(grid + " --basis 4,1 approx " + p("neg.csv") + " --out " + p("neg.json"));
    ASSERT_EQ(r.code, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["distance"].get<double>(), 1.0, 1e-3);
    EXPECT_TRUE(j["zero_minimizer"].get<bool>());

    EXPECT_EQ(run(grid + " --basis 4,1 approx " + p("cplx.csv") + " --out " + p("c.json")).code, 1);

    r = run(grid + " --basis 3,1 quantize " + p("w0.csv") + " --out " + p("op.json"));
    ASSERT_EQ(r.code, 0);
    const OperatorMatrix M = io::operator_from_json(io::read_json(p("op.json")));
    EXPECT_NEAR(std::abs(M.entries(0, 0) - 1.0), 0.0, 1e-5);
    EXPECT_NEAR(M.hs_norm(), 1.0, 1e-5);
}

TEST_F(CliTest, CheckReportsJsonAndExitCodes) {
    CliResult r = run(grid + " check ambiguity --out " + p("amb.json"));
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["suite"], "ambiguity");
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(io::read_json(p("amb.json")), j);
    // An impossible tolerance must turn the suite red.
    r = run(grid + " --tol ambiguity=0 check ambiguity");
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(nlohmann::json::parse(r.out)["pass"].get<bool>());
    EXPECT_EQ(run(grid + " --tol ambiguity check ambiguity").code, 1);
}

TEST_F(CliTest, CacheWarmAndClear) {
    const std::string c = " --cache " + p("cache");
    CliResult r = run("--grid -8,6,256 --ugrid 8,128 --basis 3,1" + c + " cache warm");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["computed"], 6);
    r = run("--grid -8,6,256 --ugrid 8,128 --basis 3,1" + c + " cache warm");
    EXPECT_EQ(nlohmann::json::parse(r.out)["computed"], 0);
    r = run(c + " cache clear");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["removed"], 6);
    EXPECT_EQ(run("cache clear").code == 1 || std::getenv("AWIG_CACHE") != nullptr, true);
}
