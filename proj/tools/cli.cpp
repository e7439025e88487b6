#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "fractalmarch/engine.hpp"
#include "fractalmarch/errors.hpp"
#include "fractalmarch/image_io.hpp"
#include "fractalmarch/viewserver.hpp"

namespace fractalmarch::cli {
namespace {

struct Options {
    std::string scenePath;
    std::string preset;
    std::string out;
    std::optional<int> width;
    std::optional<int> height;
    int threads = 1;
    std::optional<int> iterations;
    std::optional<int> frames;
    int runs = 3;
    unsigned short port = 8080;
    std::string address = "127.0.0.1";
    std::string uiDir;
};

int defaultThreads() {
    if (const char* env = std::getenv("FRACTALMARCH_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
            return static_cast<int>(v);
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SceneConfig loadWithOverrides(const Options& o) {
    if (o.scenePath.empty() == o.preset.empty()) {
        throw UsageError("exactly one of --scene or --preset is required");
    }
    SceneConfig scene = o.preset.empty() ? loadSceneFile(o.scenePath) : presetScene(o.preset);
    if (o.width) {
        scene.camera.width = *o.width;
    }
    if (o.height) {
        scene.camera.height = *o.height;
    }
    if (o.iterations) {
        for (Instance& inst : scene.instances) {
            inst.setMaxIterations(*o.iterations);
        }
    }
    if (o.frames) {
        if (!scene.animation) {
            Animation anim;
            anim.iterationsStart = 1;
            anim.iterationsEnd = 1;
            for (const Instance& inst : scene.instances) {
                anim.iterationsEnd = std::max(anim.iterationsEnd, inst.maxIterations());
            }
            scene.animation = anim;
        }
        scene.animation->frameCount = *o.frames;
    }
    validateScene(scene);
    return scene;
}

void requireImageExtension(const std::string& path) {
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext != ".ppm" && ext != ".png") {
        throw UsageError("--out must end in .ppm or .png");
    }
}

int doRender(const Options& o, std::ostream& out) {
    requireImageExtension(o.out);
    const SceneConfig scene = loadWithOverrides(o);
    const auto start = std::chrono::steady_clock::now();
    const Framebuffer fb = renderFrame(scene, o.threads);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    writeImage(fb, o.out);
    out << "wrote " << o.out << " (" << fb.width << "x" << fb.height << ", " << std::fixed
        << std::setprecision(2) << elapsed.count() << " s, " << o.threads << " threads)\n";
    return kOk;
}

int doAnimate(const Options& o, std::ostream& out) {
    requireImageExtension(o.out);
    const SceneConfig scene = loadWithOverrides(o);
    if (!scene.animation) {
        throw ValidationError("animation", "scene has no animation block (pass --frames)");
    }
    const auto files = renderAnimation(scene, o.out, o.threads);
    for (const auto& f : files) {
        out << "wrote " << f.string() << "\n";
    }
    return kOk;
}

int doBench(const Options& o, std::ostream& out) {
    const SceneConfig scene = loadWithOverrides(o);
    const double pixels = static_cast<double>(scene.camera.width) * scene.camera.height;
    RenderOptions options;
    options.threads = o.threads;

    out << "scene " << (o.preset.empty() ? o.scenePath : o.preset) << ", " << scene.camera.width
        << "x" << scene.camera.height << ", " << o.threads << " threads\n";
    out << std::left << std::setw(6) << "run" << std::right << std::setw(12) << "seconds"
        << std::setw(16) << "pixels/s" << std::setw(14) << "steps/ray" << "\n";
    RenderStats stats;
    for (int r = 0; r < o.runs; ++r) {
        const auto start = std::chrono::steady_clock::now();
        const RenderResult result = renderFrameDetailed(scene, options);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        stats = result.stats;
        out << std::left << std::setw(6) << r << std::right << std::fixed << std::setprecision(3)
            << std::setw(12) << elapsed.count() << std::setprecision(0) << std::setw(16)
            << pixels / elapsed.count() << std::setprecision(2) << std::setw(14)
            << static_cast<double>(stats.totalSteps) / std::max<std::uint64_t>(stats.primaryRays, 1)
            << "\n";
    }

    out << "\nsteps/ray histogram (primary rays: " << stats.primaryRays
        << ", hits: " << stats.primaryHits << ")\n";
    for (std::size_t b = 0; b < RenderStats::kBuckets; ++b) {
        std::ostringstream label;
        if (b == 0) {
            label << "0";
        } else if (b + 1 == RenderStats::kBuckets) {
            label << (1u << (b - 1)) << "+";
        } else {
            label << (1u << (b - 1)) << "-" << ((1u << b) - 1);
        }
        const double share =
            100.0 * static_cast<double>(stats.stepHistogram[b]) / std::max<std::uint64_t>(stats.primaryRays, 1);
        out << std::left << std::setw(12) << label.str() << std::right << std::setw(10)
            << stats.stepHistogram[b] << std::fixed << std::setprecision(1) << std::setw(8) << share
            << "%\n";
    }
    return kOk;
}

int doServe(const Options& o, std::ostream& out) {
    ServerOptions server;
    server.scene = loadWithOverrides(o);
    server.port = o.port;
    server.address = o.address;
    server.uiDir = o.uiDir;
    server.renderThreads = o.threads;
    ViewServer viewServer(std::move(server));
    out << "serving on http://" << o.address << ":" << viewServer.port() << "/" << std::endl;
    viewServer.run();
    return kOk;
}

void addSceneFlags(CLI::App& cmd, Options& o) {
    auto* scene = cmd.add_option("--scene", o.scenePath, "Scene file (JSON, schema 1)");
    auto* preset = cmd.add_option("--preset", o.preset, "Built-in scene")
                       ->check(CLI::IsMember(presetNames()));
    scene->excludes(preset);
    cmd.add_option("--width", o.width, "Override image width in pixels")
        ->check(CLI::Range(1, 16384));
    cmd.add_option("--height", o.height, "Override image height in pixels")
        ->check(CLI::Range(1, 16384));
    cmd.add_option("--threads", o.threads,
                   "Render threads (default: $FRACTALMARCH_THREADS or hardware concurrency)")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    cmd.add_option("--iterations", o.iterations,
                   "Override maxIterations of every instance (scene defaults: julia 200, "
                   "mandelbulb 4)")
        ->check(CLI::Range(1, kIterationLimit));
}

constexpr const char* kFooter =
    "Marching defaults: precis 2.5e-4, tMax 7000, maxSteps 1024, step clamp 0.2,\n"
    "escape |z|^2 > 256, julia degree 3 / 200 iterations, mandelbulb power 8 / 4 iterations,\n"
    "reflectance 0.1, albedo scale 3.5, last-bounce boost 1.65.\n"
    "Exit codes: 0 ok, 1 usage, 2 invalid scene, 3 I/O error.";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    o.threads = defaultThreads();

    CLI::App app{"fractalmarch - distance-estimated ray marching of quaternion Julia sets and the "
                 "Mandelbulb"};
    app.name(args.empty() ? "fractalmarch" : args.front());
    app.footer(kFooter);
    app.require_subcommand(1, 1);

    auto* render = app.add_subcommand("render", "Render one still image");
    addSceneFlags(*render, o);
    render->add_option("--out", o.out, "Output image (.ppm or .png)")->required();

    auto* animate = app.add_subcommand("animate", "Render the scene's animation frames");
    addSceneFlags(*animate, o);
    animate->add_option("--out", o.out, "Frame pattern; frames are written as {stem}_0000.{ext}")
        ->required();
    animate->add_option("--frames", o.frames, "Number of frames (iterations ramp over the run)")
        ->check(CLI::Range(1, 1000000));

    auto* bench = app.add_subcommand("bench", "Time repeated renders and print a steps/ray histogram");
    addSceneFlags(*bench, o);
    bench->add_option("--runs", o.runs, "Number of timed renders")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();

    auto* serve = app.add_subcommand("serve", "Serve an interactive session over HTTP/WebSocket");
    addSceneFlags(*serve, o);
    serve->add_option("--port", o.port, "Listen port")->capture_default_str();
    serve->add_option("--address", o.address, "Listen address")->capture_default_str();
    serve->add_option("--ui-dir", o.uiDir, "Directory with the browser client bundle");

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (CLI::App* sub : app.get_subcommands()) {
            target = sub;
        }
        out << target->help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (render->parsed()) return doRender(o, out);
        if (animate->parsed()) return doAnimate(o, out);
        if (bench->parsed()) return doBench(o, out);
        return doServe(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        err << "invalid scene: " << e.what() << "\n";
        return kInvalidScene;
    } catch (const ValidationError& e) {
        err << "invalid scene: " << e.what() << "\n";
        return kInvalidScene;
    } catch (const SingularTransform& e) {
        err << "invalid scene: " << e.what() << "\n";
        return kInvalidScene;
    } catch (const DegenerateBasis& e) {
        err << "invalid scene: " << e.what() << "\n";
        return kInvalidScene;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace fractalmarch::cli
