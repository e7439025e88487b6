// Acceptance suite: one line per criterion, exit status 1 if any gating
// criterion fails. `--bless` rewrites the golden hash file from the current
// renders instead of comparing against it.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fractalmarch/engine.hpp"
#include "fractalmarch/estimators.hpp"
#include "fractalmarch/marcher.hpp"
#include "fractalmarch/scene.hpp"
#include "oracles.hpp"

namespace fm = fractalmarch;
using fm::Vec3;

namespace {

// Tolerances and sizes, fixed here so they cannot drift per run.
constexpr double kLn2Tol = 1e-3;
constexpr double kFarFieldLo = 0.99;
constexpr double kFarFieldHi = 1.01;
constexpr double kC1Seconds = 1.0;
constexpr double kCenterTLo = 1.99;
constexpr double kCenterTHi = 2.003;
constexpr double kDiscAreaTol = 0.02;
constexpr double kC2Seconds = 30.0;
constexpr double kBulbHandTrace = 0.6925;
constexpr double kBulbTol = 1e-3;
constexpr double kBulbRadius = 1.5;
constexpr double kNormalMaxDegrees = 0.5;
constexpr int kNormalSamples = 500;
constexpr double kPerfSeconds = 10.0;
constexpr int kGoldenSize = 128;

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

fm::SceneConfig sized(const std::string& preset, int w, int h) {
    fm::SceneConfig s = fm::presetScene(preset);
    s.camera.width = w;
    s.camera.height = h;
    return s;
}

std::string sha256Hex(const std::vector<std::uint8_t>& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

// 1. c = 0 cubic Julia: ln 2 at |p| = 2 on every axis; 0.5 r ln r far field.
Outcome analyticJulia() {
    const auto start = Clock::now();
    const fm::JuliaParams params;
    double worstAxis = 0.0;
    for (const Vec3& p : {Vec3{2, 0, 0}, Vec3{-2, 0, 0}, Vec3{0, 2, 0}, Vec3{0, -2, 0},
                          Vec3{0, 0, 2}, Vec3{0, 0, -2}}) {
        worstAxis = std::max(worstAxis, std::abs(fm::juliaDistance(p, params).d - std::log(2.0)));
    }
    std::mt19937_64 rng(1001);
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p = oracle::randomShellPoint(rng, 2.0, 20.0);
        const double r = fm::length(p);
        const double ratio = fm::juliaDistance(p, params).d / (0.5 * r * std::log(r));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    const double secs = secondsSince(start);
    return {worstAxis <= kLn2Tol && lo >= kFarFieldLo && hi <= kFarFieldHi && secs < kC1Seconds,
            fmt("max |d - ln2| = %.2e, ratio in [%.5f, %.5f], %.3f s", worstAxis, lo, hi, secs)};
}

// 2. Unit sphere: centre-ray t and silhouette area vs. the projected disc.
Outcome unitSphere() {
    const auto start = Clock::now();
    const fm::SceneConfig scene = sized("julia-c0", 256, 256);
    const fm::CameraFrame frame = fm::makeCameraFrame(scene.camera);
    const auto hit = fm::intersectScene(frame.rayThrough(128.0, 128.0), scene.instances);
    const double t = hit ? hit->hit.hit.t : NAN;

    const fm::RenderResult r = fm::renderFrameDetailed(scene);
    const double area = static_cast<double>(oracle::silhouettePixels(r));
    const double expected = oracle::projectedDiscArea(1.0, 3.0, 60.0, 256);
    const double rel = std::abs(area - expected) / expected;
    const double secs = secondsSince(start);
    return {hit && t >= kCenterTLo && t <= kCenterTHi && rel <= kDiscAreaTol && secs < kC2Seconds,
            fmt("centre t = %.6f, silhouette %.0f px vs %.1f analytic (%.2f%%)", t, area, expected,
                100.0 * rel) +
                fmt(", %.2f s", secs)};
}

// 3. Mandelbulb hand trace and bounding radius of every hit.
Outcome mandelbulb() {
    const double d = fm::mandelbulbDistance({0, 0, 2}, {}).d;
    const fm::SceneConfig scene = sized("mandelbulb8", 128, 128);
    double farthest = 0.0;
    int hits = 0;
    for (int y = 0; y < 128; ++y) {
        for (int x = 0; x < 128; ++x) {
            if (const auto h = fm::intersectScene(fm::generatePrimaryRay(scene.camera, x, y),
                                                  scene.instances)) {
                ++hits;
                farthest = std::max(farthest, fm::length(h->hit.objectPoint));
            }
        }
    }
    return {std::abs(d - kBulbHandTrace) <= kBulbTol && hits > 0 &&
                farthest <= kBulbRadius * (1 + 1e-12),
            fmt("d(0,0,2) = %.6f, %.0f hits, max |p| = %.6f", d, static_cast<double>(hits), farthest)};
}

// 4. Tetrahedral normals vs. central differences with step h/10.
double worstNormalError(const std::function<double(const Vec3&)>& field, double rmin,
                        double rmax, unsigned seed) {
    const double precis = fm::MarchConfig{}.precis;
    const double h = fm::kNormalStepScale * precis;
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int checked = 0; checked < kNormalSamples;) {
        const Vec3 p = oracle::randomShellPoint(rng, rmin, rmax);
        if (!(std::abs(field(p)) > 10.0 * h)) {
            continue;
        }
        const auto n = fm::estimateNormal(field, p, precis);
        if (!n) {
            return INFINITY;
        }
        worst = std::max(worst, oracle::angleDegrees(*n, oracle::centralGradient(field, p, h / 10)));
        ++checked;
    }
    return worst;
}

Outcome normals() {
    const auto julia = std::get<fm::JuliaParams>(fm::presetScene("julia-cut").instances[0].params);
    const double wj = worstNormalError(
        [&](const Vec3& p) { return fm::juliaDistance(p, julia).d; }, 0.3, 2.0, 4001);
    const double wb = worstNormalError(
        [](const Vec3& p) { return fm::mandelbulbDistance(p, {}).d; }, 0.3, 1.5, 4002);
    return {wj < kNormalMaxDegrees && wb < kNormalMaxDegrees,
            fmt("worst angle julia %.4f deg, mandelbulb %.4f deg over %.0f points each", wj, wb,
                static_cast<double>(kNormalSamples))};
}

// 5. combo at 256x256 with 1, 4 and 8 threads, three runs each.
Outcome determinism() {
    const fm::SceneConfig scene = sized("combo", 256, 256);
    const auto reference = oracle::ppmBytes(fm::renderFrame(scene, 1));
    int renders = 0;
    bool same = true;
    for (int threads : {1, 4, 8}) {
        for (int run = 0; run < 3; ++run) {
            same = same && oracle::ppmBytes(fm::renderFrame(scene, threads)) == reference;
            ++renders;
        }
    }
    return {same, fmt("%.0f renders, sha256 ", static_cast<double>(renders)) + sha256Hex(reference).substr(0, 16)};
}

// 6. One cut plane: no hit on the removed side, strictly fewer silhouette pixels.
Outcome cutPlane() {
    fm::SceneConfig cut = sized("julia-cut", 128, 128);
    cut.instances[0].march.cutPlanes.resize(1);
    fm::SceneConfig uncut = cut;
    uncut.instances[0].march.cutPlanes.clear();

    const fm::CutPlane plane = cut.instances[0].march.cutPlanes[0];
    const double precis = cut.instances[0].march.precis;
    int violations = 0;
    for (int y = 0; y < 128; ++y) {
        for (int x = 0; x < 128; ++x) {
            if (const auto h = fm::intersectScene(fm::generatePrimaryRay(cut.camera, x, y),
                                                  cut.instances)) {
                const double side = fm::dot(h->hit.objectPoint - plane.point, fm::normalize(plane.normal));
                violations += side > precis ? 1 : 0;
            }
        }
    }
    const auto withCut = oracle::silhouettePixels(fm::renderFrameDetailed(cut));
    const auto without = oracle::silhouettePixels(fm::renderFrameDetailed(uncut));
    return {violations == 0 && withCut < without,
            fmt("%.0f violations, silhouette %.0f px cut vs %.0f uncut", static_cast<double>(violations),
                static_cast<double>(withCut), static_cast<double>(without))};
}

// 7. Iteration counts 2, 4, 200: distinct frames, non-increasing silhouette.
Outcome iterationAnimation() {
    fm::SceneConfig scene = sized("julia-cut", 128, 128);
    std::vector<fm::Framebuffer> frames;
    std::vector<std::size_t> counts;
    for (int it : {2, 4, 200}) {
        scene.instances[0].setMaxIterations(it);
        const fm::RenderResult r = fm::renderFrameDetailed(scene);
        frames.push_back(r.image);
        counts.push_back(oracle::silhouettePixels(r));
    }
    const bool distinct = frames[0] != frames[1] && frames[1] != frames[2] && frames[0] != frames[2];
    const bool monotone = counts[0] >= counts[1] && counts[1] >= counts[2];
    return {distinct && monotone,
            fmt("silhouette %.0f / %.0f / %.0f px", static_cast<double>(counts[0]),
                static_cast<double>(counts[1]), static_cast<double>(counts[2])) +
                (distinct ? ", frames distinct" : ", frames NOT distinct")};
}

// 8. Golden hashes of every preset at 128x128.
Outcome golden(bool bless) {
    const std::filesystem::path file = std::filesystem::path(FRACTALMARCH_GOLDEN_DIR) / "presets.sha256";
    std::map<std::string, std::string> current;
    for (const std::string& name : fm::presetNames()) {
        current[name] = sha256Hex(oracle::ppmBytes(fm::renderFrame(sized(name, kGoldenSize, kGoldenSize), 4)));
    }
    if (bless) {
        std::ofstream out(file);
        for (const auto& [name, hash] : current) {
            out << hash << "  " << name << "\n";
        }
        return {static_cast<bool>(out), "blessed " + std::to_string(current.size()) + " hashes"};
    }
    std::ifstream in(file);
    if (!in) {
        return {false, "missing " + file.string() + " (run with --bless)"};
    }
    std::map<std::string, std::string> expected;
    std::string hash, name;
    while (in >> hash >> name) {
        expected[name] = hash;
    }
    std::string mismatched;
    for (const auto& [n, h] : current) {
        if (expected[n] != h) {
            mismatched += " " + n;
        }
    }
    return {mismatched.empty() && expected.size() == current.size(),
            mismatched.empty() ? std::to_string(current.size()) + " presets match"
                               : "mismatch:" + mismatched};
}

// 9. Soft: 512x512 julia-c0 on 8 threads, plus the steps/ray histogram.
Outcome performance(std::string& histogram) {
    const fm::SceneConfig scene = sized("julia-c0", 512, 512);
    fm::RenderOptions options;
    options.threads = 8;
    const auto start = Clock::now();
    const fm::RenderResult r = fm::renderFrameDetailed(scene, options);
    const double secs = secondsSince(start);
    std::ostringstream h;
    for (std::size_t b = 0; b < fm::RenderStats::kBuckets; ++b) {
        if (r.stats.stepHistogram[b] == 0) {
            continue;
        }
        const unsigned lo = b == 0 ? 0 : 1u << (b - 1);
        h << "      steps " << std::setw(5) << lo << (b + 1 == fm::RenderStats::kBuckets ? "+ " : "  ")
          << std::setw(8) << r.stats.stepHistogram[b] << "\n";
    }
    histogram = h.str();
    return {secs <= kPerfSeconds,
            fmt("%.2f s for 512x512 on 8 threads (%.0f hardware threads), %.1f steps/ray", secs,
                static_cast<double>(std::thread::hardware_concurrency()),
                static_cast<double>(r.stats.totalSteps) / static_cast<double>(r.stats.primaryRays))};
}

}  // namespace

int main(int argc, char** argv) {
    const bool bless = argc > 1 && std::string(argv[1]) == "--bless";
    int failures = 0;
    const auto report = [&](int id, const char* title, const Outcome& o, bool gating = true) {
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " -- "
                  << o.detail << (gating ? "" : " [soft, not gating]") << std::endl;
        failures += (!o.pass && gating) ? 1 : 0;
    };

    report(1, "analytic julia oracle", analyticJulia());
    report(2, "unit-sphere rendering", unitSphere());
    report(3, "mandelbulb hand trace and bound", mandelbulb());
    report(4, "normal accuracy", normals());
    report(5, "multithreaded determinism", determinism());
    report(6, "cut-plane soundness", cutPlane());
    report(7, "iteration animation", iterationAnimation());
    report(8, "golden-image regression", golden(bless));
    std::string histogram;
    report(9, "performance", performance(histogram), false);
    std::cout << histogram;
    return failures == 0 ? 0 : 1;
}
