#include "fractalmarch/engine.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "fractalmarch/errors.hpp"
#include "fractalmarch/image_io.hpp"

namespace fractalmarch {

std::vector<Tile> partitionTiles(int width, int height, int tileSize) {
    std::vector<Tile> tiles;
    if (width <= 0 || height <= 0 || tileSize <= 0) {
        return tiles;
    }
    for (int y = 0; y < height; y += tileSize) {
        for (int x = 0; x < width; x += tileSize) {
            tiles.push_back({x, y, std::min(tileSize, width - x), std::min(tileSize, height - y)});
        }
    }
    return tiles;
}

bool isExactPartition(std::span<const Tile> tiles, int width, int height) {
    std::vector<std::uint8_t> hits(static_cast<std::size_t>(width) * height, 0);
    for (const Tile& t : tiles) {
        if (t.x0 < 0 || t.y0 < 0 || t.width <= 0 || t.height <= 0 || t.x0 + t.width > width ||
            t.y0 + t.height > height) {
            return false;
        }
        for (int y = t.y0; y < t.y0 + t.height; ++y) {
            for (int x = t.x0; x < t.x0 + t.width; ++x) {
                if (hits[static_cast<std::size_t>(y) * width + x]++ != 0) {
                    return false;
                }
            }
        }
    }
    return std::all_of(hits.begin(), hits.end(), [](std::uint8_t h) { return h == 1; });
}

std::size_t RenderStats::bucketFor(int steps) {
    if (steps <= 0) {
        return 0;
    }
    return std::min<std::size_t>(std::bit_width(static_cast<unsigned>(steps)), kBuckets - 1);
}

void RenderStats::addRay(int steps, bool hit) {
    ++primaryRays;
    primaryHits += hit ? 1 : 0;
    totalSteps += static_cast<std::uint64_t>(std::max(steps, 0));
    ++stepHistogram[bucketFor(steps)];
}

void RenderStats::merge(const RenderStats& other) {
    primaryRays += other.primaryRays;
    primaryHits += other.primaryHits;
    totalSteps += other.totalSteps;
    nonFinitePixels += other.nonFinitePixels;
    for (std::size_t i = 0; i < kBuckets; ++i) {
        stepHistogram[i] += other.stepHistogram[i];
    }
}

std::uint8_t encodeGamma(double linear) {
    const double c = std::clamp(linear, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(std::pow(c, 1.0 / 2.2) * 255.0));
}

void renderTile(const SceneConfig& scene, const CameraFrame& frame, const Tile& tile,
                Framebuffer& image, std::vector<std::uint8_t>* coverage, RenderStats& stats) {
    const int n = scene.render.supersample;
    const double invSamples = 1.0 / (n * n);
    for (int y = tile.y0; y < tile.y0 + tile.height; ++y) {
        for (int x = tile.x0; x < tile.x0 + tile.width; ++x) {
            Rgb sum;
            int hits = 0;
            for (int sy = 0; sy < n; ++sy) {
                for (int sx = 0; sx < n; ++sx) {
                    const Ray ray = frame.rayThrough(x + (sx + 0.5) / n, y + (sy + 0.5) / n);
                    int steps = 0;
                    const std::optional<SceneHit> primary =
                        intersectScene(ray, scene.instances, &steps);
                    stats.addRay(steps, primary.has_value());
                    hits += primary ? 1 : 0;
                    sum = sum + shadeIntersection(ray, primary, 0, scene).rgb();
                }
            }
            Rgb c = sum * invSamples;
            if (!std::isfinite(c.r) || !std::isfinite(c.g) || !std::isfinite(c.b)) {
                ++stats.nonFinitePixels;
                c = {};
            }
            std::uint8_t* px = image.pixel(x, y);
            px[0] = encodeGamma(c.r);
            px[1] = encodeGamma(c.g);
            px[2] = encodeGamma(c.b);
            px[3] = 255;
            if (coverage != nullptr) {
                (*coverage)[static_cast<std::size_t>(y) * image.width + x] =
                    static_cast<std::uint8_t>(hits);
            }
        }
    }
}

RenderResult renderFrameDetailed(const SceneConfig& scene, const RenderOptions& options) {
    const CameraFrame frame = makeCameraFrame(scene.camera);
    const int width = scene.camera.width;
    const int height = scene.camera.height;
    const std::vector<Tile> tiles = partitionTiles(width, height, scene.render.tileSize);
    if (!isExactPartition(tiles, width, height)) {
        throw Error("tile layout does not partition the framebuffer");
    }

    RenderResult result;
    result.image = Framebuffer(width, height);
    result.coverage.assign(static_cast<std::size_t>(width) * height, 0);

    // Stats are kept per tile and merged in tile order so totals do not depend
    // on scheduling.
    std::vector<RenderStats> tileStats(tiles.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abandoned{false};

    const auto worker = [&] {
        for (;;) {
            if (options.cancelled && options.cancelled()) {
                abandoned = true;
                return;
            }
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= tiles.size()) {
                return;
            }
            renderTile(scene, frame, tiles[i], result.image, &result.coverage, tileStats[i]);
            if (options.onTile) {
                options.onTile(tiles[i], result.image);
            }
        }
    };

    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(tiles.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    for (const RenderStats& s : tileStats) {
        result.stats.merge(s);
    }
    result.completed = !abandoned;
    return result;
}

Framebuffer renderFrame(const SceneConfig& scene, int threadCount) {
    RenderOptions options;
    options.threads = threadCount;
    return renderFrameDetailed(scene, options).image;
}

SceneConfig animationFrameScene(const SceneConfig& scene, int index) {
    SceneConfig out = scene;
    if (!scene.animation) {
        return out;
    }
    const Animation& anim = *scene.animation;
    const double alpha =
        anim.frameCount > 1 ? static_cast<double>(index) / (anim.frameCount - 1) : 0.0;
    const int iterations = static_cast<int>(
        std::lround(anim.iterationsStart + (anim.iterationsEnd - anim.iterationsStart) * alpha));

    std::optional<Quaternion> c;
    if (anim.cPath.size() == 1) {
        c = anim.cPath.front();
    } else if (anim.cPath.size() > 1) {
        const double s = alpha * static_cast<double>(anim.cPath.size() - 1);
        const std::size_t seg = std::min(static_cast<std::size_t>(s), anim.cPath.size() - 2);
        const double f = s - static_cast<double>(seg);
        c = anim.cPath[seg] * (1.0 - f) + anim.cPath[seg + 1] * f;
    }

    for (Instance& inst : out.instances) {
        inst.setMaxIterations(iterations);
        if (auto* julia = std::get_if<JuliaParams>(&inst.params); julia != nullptr && c) {
            julia->c = *c;
        }
    }
    return out;
}

std::filesystem::path frameFileName(const std::filesystem::path& pattern, int index) {
    std::ostringstream name;
    name << pattern.stem().string() << '_' << std::setw(4) << std::setfill('0') << index
         << pattern.extension().string();
    return pattern.parent_path() / name.str();
}

std::vector<std::filesystem::path> renderAnimation(const SceneConfig& scene,
                                                   const std::filesystem::path& pattern,
                                                   int threadCount) {
    if (!scene.animation) {
        throw ValidationError("animation", "scene has no animation block");
    }
    std::vector<std::filesystem::path> written;
    for (int k = 0; k < scene.animation->frameCount; ++k) {
        const Framebuffer fb = renderFrame(animationFrameScene(scene, k), threadCount);
        const std::filesystem::path path = frameFileName(pattern, k);
        writeImage(fb, path);
        written.push_back(path);
    }
    return written;
}

}  // namespace fractalmarch
