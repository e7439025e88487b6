#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "fractalmarch/scene.hpp"

namespace fractalmarch {

/// 8-bit RGBA, row-major, origin at the top-left.
struct Framebuffer {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;

    Framebuffer() = default;
    Framebuffer(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), rgba(static_cast<std::size_t>(w) * h * 4, fill) {}

    std::uint8_t* pixel(int x, int y) { return rgba.data() + (static_cast<std::size_t>(y) * width + x) * 4; }
    const std::uint8_t* pixel(int x, int y) const {
        return rgba.data() + (static_cast<std::size_t>(y) * width + x) * 4;
    }

    bool operator==(const Framebuffer&) const = default;
};

struct Tile {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;

    bool operator==(const Tile&) const = default;
};

inline constexpr int kDefaultTileSize = 32;

/// Row-major tiles of at most tileSize x tileSize covering the image.
std::vector<Tile> partitionTiles(int width, int height, int tileSize = kDefaultTileSize);

/// True when the tiles are disjoint and cover every pixel exactly once.
bool isExactPartition(std::span<const Tile> tiles, int width, int height);

/// Per-render counters. Step counts are the marching steps spent on each
/// primary ray, summed over all instances tested.
struct RenderStats {
    static constexpr std::size_t kBuckets = 12;

    std::uint64_t primaryRays = 0;
    std::uint64_t primaryHits = 0;
    std::uint64_t totalSteps = 0;
    std::uint64_t nonFinitePixels = 0;
    /// Bucket 0 counts rays with no steps; bucket k >= 1 counts steps in
    /// [2^(k-1), 2^k), the last bucket is open-ended.
    std::array<std::uint64_t, kBuckets> stepHistogram{};

    void addRay(int steps, bool hit);
    void merge(const RenderStats& other);
    static std::size_t bucketFor(int steps);
};

struct RenderOptions {
    int threads = 1;
    /// Polled between tiles; returning true abandons the remaining tiles.
    std::function<bool()> cancelled;
    /// Invoked from worker threads once a tile's pixels are final.
    std::function<void(const Tile&, const Framebuffer&)> onTile;
};

struct RenderResult {
    Framebuffer image;
    /// Number of sub-samples per pixel whose primary ray hit an instance.
    std::vector<std::uint8_t> coverage;
    RenderStats stats;
    bool completed = true;
};

/// Renders the scene; the image depends only on the scene, never on the
/// thread count or the order tiles are picked up.
Framebuffer renderFrame(const SceneConfig& scene, int threadCount = 1);

RenderResult renderFrameDetailed(const SceneConfig& scene, const RenderOptions& options = {});

/// Renders one tile into `image` (sized to the camera). Coverage is optional.
void renderTile(const SceneConfig& scene, const CameraFrame& frame, const Tile& tile,
                Framebuffer& image, std::vector<std::uint8_t>* coverage, RenderStats& stats);

/// Linear [0, 1] -> gamma 2.2 8-bit; values are clamped first.
std::uint8_t encodeGamma(double linear);

/// Scene for frame `index` of the scene's animation: iteration count and the
/// Julia constant interpolated across the frame range.
SceneConfig animationFrameScene(const SceneConfig& scene, int index);

/// `{stem}_{index:04d}{extension}`
std::filesystem::path frameFileName(const std::filesystem::path& pattern, int index);

/// Writes every animation frame next to `pattern` (format from its
/// extension). Throws IoError on the first failed write; frames already
/// written are left in place.
std::vector<std::filesystem::path> renderAnimation(const SceneConfig& scene,
                                                   const std::filesystem::path& pattern,
                                                   int threadCount = 1);

}  // namespace fractalmarch
