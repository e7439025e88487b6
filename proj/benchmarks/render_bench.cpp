#include <benchmark/benchmark.h>

#include <string>

#include "fractalmarch/engine.hpp"
#include "fractalmarch/scene.hpp"

namespace fm = fractalmarch;

namespace {

const char* const kPresets[] = {"julia-c0", "julia-cut", "mandelbulb8", "combo"};

// range(0): preset index, range(1): image side, range(2): threads
void BM_RenderFrame(benchmark::State& state) {
    fm::SceneConfig scene = fm::presetScene(kPresets[state.range(0)]);
    scene.camera.width = static_cast<int>(state.range(1));
    scene.camera.height = static_cast<int>(state.range(1));
    fm::RenderOptions options;
    options.threads = static_cast<int>(state.range(2));
    std::uint64_t steps = 0, rays = 0;
    for (auto _ : state) {
        const fm::RenderResult r = fm::renderFrameDetailed(scene, options);
        steps += r.stats.totalSteps;
        rays += r.stats.primaryRays;
    }
    state.SetLabel(kPresets[state.range(0)]);
    state.SetItemsProcessed(static_cast<std::int64_t>(rays));
    state.counters["steps/ray"] = static_cast<double>(steps) / static_cast<double>(rays);
}
BENCHMARK(BM_RenderFrame)
    ->ArgsProduct({{0, 1, 2, 3}, {128}, {1}})
    ->Args({0, 512, 8})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

}  // namespace
