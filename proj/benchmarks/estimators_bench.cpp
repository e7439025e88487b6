#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fractalmarch/estimators.hpp"
#include "fractalmarch/scene.hpp"

namespace fm = fractalmarch;

namespace {

std::vector<fm::Vec3> samplePoints(double radius) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<fm::Vec3> points(4096);
    for (auto& p : points) {
        p = {u(rng), u(rng), u(rng)};
    }
    return points;
}

void BM_JuliaDistance(benchmark::State& state) {
    const auto params =
        std::get<fm::JuliaParams>(fm::presetScene("julia-cut").instances[0].params);
    const auto points = samplePoints(2.0);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fm::juliaDistance(points[i++ % points.size()], params));
    }
}
BENCHMARK(BM_JuliaDistance);

void BM_MandelbulbDistance(benchmark::State& state) {
    const fm::MandelbulbParams params;
    const auto points = samplePoints(1.5);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fm::mandelbulbDistance(points[i++ % points.size()], params));
    }
}
BENCHMARK(BM_MandelbulbDistance);

void BM_EstimateNormalJulia(benchmark::State& state) {
    const auto params =
        std::get<fm::JuliaParams>(fm::presetScene("julia-cut").instances[0].params);
    const auto field = [&](const fm::Vec3& q) { return fm::juliaDistance(q, params).d; };
    const auto points = samplePoints(2.0);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fm::estimateNormal(field, points[i++ % points.size()], 2.5e-4));
    }
}
BENCHMARK(BM_EstimateNormalJulia);

}  // namespace
