#include "test_util.hpp"

#include <filesystem>

using namespace awig;
namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("awig_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                                  "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST(SignalFileTest, RoundTripIsBitExact) {
    TempDir d;
    const HalfLineSignal f = klauder_state(cplx(0.3, -1.0), cplx(0.2, 1.1), cplx(0.7, 0.4), LogGrid::from_range(-5.0, 3.0, 64));
    io::write_signal(d.path / "k.csv", f, "klauder");
    const HalfLineSignal g = io::read_signal(d.path / "k.csv");
    EXPECT_EQ(g.grid, f.grid);
    EXPECT_EQ(g.values, f.values);
    const auto side = io::read_json(d.path / "k.json");
    EXPECT_EQ(side["kind"], "klauder");
    EXPECT_EQ(side["norm_convention"], "right-haar");
    EXPECT_EQ(side["nt"], 64);
}

TEST(SignalFileTest, GridInferredWithoutSidecar) {
    TempDir d;
    io::write_text(d.path / "s.csv", "t,re,im\n-1,1,0\n0,2,0.5\n1,3,-1\n");
    const HalfLineSignal f = io::read_signal(d.path / "s.csv");
    EXPECT_DOUBLE_EQ(f.grid.dt, 1.0);
    EXPECT_EQ(f[1], cplx(2.0, 0.5));
}

TEST(SignalFileTest, MalformedInputIsRejected) {
    TempDir d;
    io::write_text(d.path / "a.csv", "x,re,im\n0,1,0\n1,1,0\n");
    EXPECT_THROW(io::read_signal(d.path / "a.csv"), validation_error);
    io::write_text(d.path / "b.csv", "t,re,im\n0,1\n1,1,0\n");
    EXPECT_THROW(io::read_signal(d.path / "b.csv"), validation_error);
    io::write_text(d.path / "c.csv", "t,re,im\n0,1,0\n1,abc,0\n");
    EXPECT_THROW(io::read_signal(d.path / "c.csv"), validation_error);
    io::write_text(d.path / "e.csv", "t,re,im\n0,1,0\n1,nan,0\n");
    EXPECT_THROW(io::read_signal(d.path / "e.csv"), validation_error);
    io::write_text(d.path / "f.csv", "t,re,im\n0,1,0\n0.5,1,0\n");
    io::write_json(d.path / "f.json", {{"t_min", 0.0}, {"dt", 1.0}, {"nt", 2}});
    EXPECT_THROW(io::read_signal(d.path / "f.csv"), validation_error);
    io::write_json(d.path / "f.json", {{"t_min", 0.0}, {"dt", 0.5}, {"nt", 3}});
    EXPECT_THROW(io::read_signal(d.path / "f.csv"), validation_error);
    EXPECT_THROW(io::read_signal(d.path / "missing.csv"), validation_error);
}

TEST(MapFileTest, RoundTripAndSidecar) {
    TempDir d;
    const LogGrid g = LogGrid::from_range(-6.0, 4.0, 32);
    const AffineMap W = affine_wigner(morse_state(1.0, g), UGrid(8.0, 16));
    io::write_map(d.path / "w.csv", W, "wigner");
    EXPECT_TRUE(io::is_map_file(d.path / "w.csv"));
    EXPECT_EQ(io::file_kind(d.path / "w.csv"), "wigner");
    const AffineMap R = io::read_map(d.path / "w.csv");
    EXPECT_EQ(R.agrid, W.agrid);
    EXPECT_EQ(R.values, W.values);
    fs::remove(d.path / "w.json");
    EXPECT_THROW(io::read_map(d.path / "w.csv"), validation_error);
}

TEST(SpectrumFileTest, WritesDualAxis) {
    TempDir d;
    const LogGrid g(-4.0, 0.125, 64);
    io::write_spectrum(d.path / "m.csv", mellin_forward(morse_state(1.0, g)));
    const auto side = io::read_json(d.path / "m.json");
    EXPECT_EQ(side["kind"], "mellin");
    EXPECT_DOUBLE_EQ(side["dx"].get<double>(), 0.125);
    EXPECT_TRUE(side["periodization_warning"].get<bool>());
}

TEST(OperatorFileTest, JsonRoundTrip) {
    OperatorMatrix M(3, 0.5);
    M.entries(0, 1) = cplx(1.0, -2.0);
    M.entries(2, 2) = 0.25;
    const OperatorMatrix R = io::operator_from_json(nlohmann::json::parse(io::operator_json(M).dump()));
    EXPECT_EQ(R.k, 3);
    EXPECT_EQ(R.alpha, 0.5);
    EXPECT_EQ(R.entries, M.entries);
    EXPECT_THROW(io::operator_from_json({{"k", 2}}), validation_error);
    EXPECT_THROW(io::operator_from_json({{"k", 2}, {"alpha", 1.0}, {"entries", {{{0, 0}}}}}), validation_error);
}
