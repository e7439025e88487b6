#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fractalmarch/engine.hpp"
#include "oracles.hpp"

namespace fm = fractalmarch;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result runCli(std::vector<std::string> args) {
    args.insert(args.begin(), "fractalmarch");
    std::ostringstream out, err;
    const int code = fm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path tmpDir(const std::string& name) {
    const fs::path dir = fs::path(FRACTALMARCH_TEST_TMP) / ("cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string readFile(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

constexpr const char* kSmallScene = R"({
  "schema": 1,
  "camera": {"position": [0, 0, -3], "width": 24, "height": 16},
  "instances": [{"kind": "julia", "c": [-0.45, 0.45, 0.3, 0.0], "iterations": 50}]
})";

}  // namespace

TEST(Cli, RenderPresetWritesPpm) {
    const fs::path dir = tmpDir("render");
    const auto r = runCli({"render", "--preset", "julia-c0", "--width", "16", "--height", "12",
                           "--threads", "2", "--out", (dir / "x.ppm").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    const std::string bytes = readFile(dir / "x.ppm");
    EXPECT_EQ(bytes.substr(0, 10), "P6\n16 12\n2");
    EXPECT_EQ(bytes.size(), std::string("P6\n16 12\n255\n").size() + 16 * 12 * 3);
}

TEST(Cli, UnknownFlagIsUsageError) {
    const auto r = runCli({"render", "--preset", "julia-c0", "--out", "x.ppm", "--bogus"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--bogus"), std::string::npos);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(runCli({}).code, 1);
    EXPECT_EQ(runCli({"render", "--out", "x.ppm"}).code, 1);
    EXPECT_EQ(runCli({"render", "--preset", "nope", "--out", "x.ppm"}).code, 1);
    EXPECT_EQ(runCli({"render", "--preset", "julia-c0", "--out", "x.bmp"}).code, 1);
    EXPECT_EQ(runCli({"render", "--preset", "julia-c0", "--width", "0", "--out", "x.ppm"}).code, 1);
    EXPECT_EQ(runCli({"render", "--preset", "julia-c0", "--width", "abc", "--out", "x.ppm"}).code, 1);
}

TEST(Cli, InvalidSceneNamesField) {
    const fs::path dir = tmpDir("bad");
    std::ofstream(dir / "bad.scene")
        << R"({"schema": 1, "camera": {}, "instances": [{"kind": "julia", "degree": 5}]})";
    const auto r =
        runCli({"render", "--scene", (dir / "bad.scene").string(), "--out", (dir / "x.ppm").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("degree"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "x.ppm"));

    std::ofstream(dir / "broken.scene") << "{\"schema\": 1,";
    EXPECT_EQ(runCli({"render", "--scene", (dir / "broken.scene").string(), "--out",
                      (dir / "x.ppm").string()})
                  .code,
              2);
}

TEST(Cli, IoErrors) {
    const fs::path dir = tmpDir("io");
    EXPECT_EQ(runCli({"render", "--scene", (dir / "missing.scene").string(), "--out",
                      (dir / "x.ppm").string()})
                  .code,
              3);
    EXPECT_EQ(runCli({"render", "--preset", "julia-c0", "--width", "4", "--height", "4", "--out",
                      (dir / "no" / "such" / "x.ppm").string()})
                  .code,
              3);
}

TEST(Cli, FlagsOverrideSceneFile) {
    const fs::path dir = tmpDir("override");
    std::ofstream(dir / "s.scene") << kSmallScene;
    const auto r = runCli({"render", "--scene", (dir / "s.scene").string(), "--width", "20",
                           "--iterations", "3", "--threads", "1", "--out",
                           (dir / "x.ppm").string()});
    ASSERT_EQ(r.code, 0) << r.err;

    fm::SceneConfig expected = fm::loadScene(kSmallScene);
    expected.camera.width = 20;
    expected.instances[0].setMaxIterations(3);
    const auto bytes = oracle::ppmBytes(fm::renderFrame(expected));
    EXPECT_EQ(readFile(dir / "x.ppm"), std::string(bytes.begin(), bytes.end()));

    // Without overrides the file's own values apply.
    ASSERT_EQ(runCli({"render", "--scene", (dir / "s.scene").string(), "--out",
                      (dir / "y.ppm").string()})
                  .code,
              0);
    const auto plain = oracle::ppmBytes(fm::renderFrame(fm::loadScene(kSmallScene)));
    EXPECT_EQ(readFile(dir / "y.ppm"), std::string(plain.begin(), plain.end()));
}

TEST(Cli, ThreadsDefaultFromEnvironment) {
    const fs::path dir = tmpDir("env");
    ::setenv("FRACTALMARCH_THREADS", "3", 1);
    const auto r = runCli({"render", "--preset", "julia-c0", "--width", "8", "--height", "8",
                           "--out", (dir / "x.png").string()});
    ::unsetenv("FRACTALMARCH_THREADS");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("3 threads"), std::string::npos) << r.out;

    ::setenv("FRACTALMARCH_THREADS", "3", 1);
    const auto explicitFlag = runCli({"render", "--preset", "julia-c0", "--width", "8", "--height",
                                      "8", "--threads", "2", "--out", (dir / "y.png").string()});
    ::unsetenv("FRACTALMARCH_THREADS");
    EXPECT_NE(explicitFlag.out.find("2 threads"), std::string::npos) << explicitFlag.out;
}

TEST(Cli, AnimateWritesFrames) {
    const fs::path dir = tmpDir("animate");
    const auto r = runCli({"animate", "--preset", "julia-cut", "--width", "12", "--height", "12",
                           "--frames", "3", "--out", (dir / "f.ppm").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    for (const char* name : {"f_0000.ppm", "f_0001.ppm", "f_0002.ppm"}) {
        EXPECT_TRUE(fs::is_regular_file(dir / name)) << name;
    }
    EXPECT_FALSE(fs::exists(dir / "f_0003.ppm"));
    // Without --frames the preset has no animation block.
    EXPECT_EQ(runCli({"animate", "--preset", "julia-cut", "--out", (dir / "g.ppm").string()}).code,
              2);
}

TEST(Cli, BenchPrintsTableAndHistogram) {
    const auto r = runCli({"bench", "--preset", "julia-c0", "--width", "16", "--height", "16",
                           "--runs", "2", "--threads", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("pixels/s"), std::string::npos);
    EXPECT_NE(r.out.find("steps/ray histogram"), std::string::npos);
    EXPECT_NE(r.out.find("primary rays: 256"), std::string::npos);
}

TEST(Cli, HelpListsFlagsAndDefaults) {
    const auto r = runCli({"render", "--help"});
    EXPECT_EQ(r.code, 0);
    for (const char* flag :
         {"--scene", "--preset", "--out", "--width", "--height", "--threads", "--iterations"}) {
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    }
    for (const char* constant : {"200", "7000", "1024", "0.2", "256", "0.1", "3.5", "1.65"}) {
        EXPECT_NE(r.out.find(constant), std::string::npos) << constant;
    }
    const auto animate = runCli({"animate", "--help"});
    EXPECT_NE(animate.out.find("--frames"), std::string::npos);
    const auto serve = runCli({"serve", "--help"});
    EXPECT_NE(serve.out.find("--port"), std::string::npos);
    EXPECT_NE(serve.out.find("8080"), std::string::npos);
    const auto top = runCli({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const char* sub : {"render", "animate", "bench", "serve"}) {
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
    }
}
