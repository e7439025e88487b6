#include <algorithm>

#include "fractalmarch/engine.hpp"
#include "fractalmarch/viewserver.hpp"

namespace fractalmarch {

namespace proto = protocol;

SceneConfig levelScene(const SceneConfig& scene, int level) {
    SceneConfig out = scene;
    out.camera.width = std::max(1, (scene.camera.width + level - 1) / level);
    out.camera.height = std::max(1, (scene.camera.height + level - 1) / level);
    return out;
}

ViewSession::ViewSession(SceneConfig initial, Sink sink, SessionOptions options)
    : sink_(std::move(sink)), options_(options), scene_(std::move(initial)) {
    validateScene(scene_);
}

ViewSession::~ViewSession() { stop(); }

void ViewSession::start() {
    {
        std::lock_guard lock(mutex_);
        pending_ = true;
        if (!worker_.joinable()) {
            worker_ = std::jthread([this](std::stop_token st) { workerLoop(st); });
        }
    }
    wake_.notify_all();
}

void ViewSession::stop() {
    if (worker_.joinable()) {
        worker_.request_stop();
        wake_.notify_all();
        worker_.join();
    }
}

SceneConfig ViewSession::scene() const {
    std::lock_guard lock(mutex_);
    return scene_;
}

std::optional<std::uint32_t> ViewSession::handleText(std::string_view text) {
    const auto reject = [this](std::string_view reason) {
        std::lock_guard lock(mutex_);
        sink_(OutboundMessage{proto::errorMessage(reason)});
    };

    SceneConfig next;
    bool fullOnly = false;
    try {
        const proto::ControlMessage message = proto::parseControl(text);
        fullOnly = std::holds_alternative<proto::RequestFullFrame>(message);
        next = apply(message);
        validateScene(next);
    } catch (const Error& e) {
        reject(e.what());
        return std::nullopt;
    }

    std::uint32_t acked = 0;
    {
        std::lock_guard lock(mutex_);
        scene_ = std::move(next);
        fullOnly_ = fullOnly;
        pending_ = true;
        acked = generation_.fetch_add(1) + 1;
        sink_(OutboundMessage{proto::ackMessage(acked)});
    }
    wake_.notify_all();
    return acked;
}

SceneConfig ViewSession::apply(const proto::ControlMessage& message) const {
    SceneConfig next = scene();
    std::visit(
        [&next](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, proto::SetCamera>) {
                next.camera.position = m.position;
                next.camera.target = m.target;
                next.camera.up = m.up.value_or(next.camera.up);
                next.camera.verticalFov = m.fov.value_or(next.camera.verticalFov);
            } else if constexpr (std::is_same_v<T, proto::SetFractalParams>) {
                if (m.instance >= next.instances.size()) {
                    throw ValidationError("instance", "index " + std::to_string(m.instance) +
                                                          " out of range");
                }
                const std::string path = "instances[" + std::to_string(m.instance) + "]";
                Instance& inst = next.instances[m.instance];
                if (auto* julia = std::get_if<JuliaParams>(&inst.params)) {
                    if (m.power) {
                        throw ValidationError(path + ".power", "not applicable to a julia instance");
                    }
                    julia->c = m.c.value_or(julia->c);
                    julia->degree = m.degree.value_or(julia->degree);
                } else {
                    auto& bulb = std::get<MandelbulbParams>(inst.params);
                    if (m.degree || m.c) {
                        throw ValidationError(path + (m.degree ? ".degree" : ".c"),
                                              "not applicable to a mandelbulb instance");
                    }
                    bulb.power = m.power.value_or(bulb.power);
                }
                if (m.iterations) {
                    inst.setMaxIterations(*m.iterations);
                }
                if (m.cutPlanes) {
                    inst.march.cutPlanes = *m.cutPlanes;
                }
            } else if constexpr (std::is_same_v<T, proto::SetQuality>) {
                next.camera.width = m.width.value_or(next.camera.width);
                next.camera.height = m.height.value_or(next.camera.height);
                next.shading.maxRecursionDepth =
                    m.maxRecursionDepth.value_or(next.shading.maxRecursionDepth);
            }
        },
        message);
    return next;
}

bool ViewSession::emitIfCurrent(std::uint32_t generation, OutboundMessage message) {
    std::lock_guard lock(mutex_);
    if (generation_.load() != generation) {
        return false;
    }
    sink_(std::move(message));
    return true;
}

void ViewSession::workerLoop(std::stop_token stop) {
    while (!stop.stop_requested()) {
        SceneConfig scene;
        std::uint32_t generation = 0;
        bool fullOnly = false;
        {
            std::unique_lock lock(mutex_);
            if (!wake_.wait(lock, stop, [this] { return pending_; })) {
                return;
            }
            pending_ = false;
            scene = scene_;
            generation = generation_.load();
            fullOnly = fullOnly_;
        }
        renderGeneration(scene, generation, fullOnly, stop);
    }
}

void ViewSession::renderGeneration(const SceneConfig& scene, std::uint32_t generation,
                                   bool fullOnly, const std::stop_token& stop) {
    const auto stale = [&] { return stop.stop_requested() || generation_.load() != generation; };
    const std::vector<std::uint8_t> levels =
        fullOnly ? std::vector<std::uint8_t>{1}
                 : std::vector<std::uint8_t>(proto::kLevels.begin(), proto::kLevels.end());

    for (const std::uint8_t level : levels) {
        if (stale()) {
            return;
        }
        RenderOptions options;
        options.threads = options_.renderThreads;
        options.cancelled = stale;
        options.onTile = [&](const Tile& tile, const Framebuffer& fb) {
            proto::TileFrame frame;
            frame.generation = generation;
            frame.level = level;
            frame.x0 = static_cast<std::uint16_t>(tile.x0);
            frame.y0 = static_cast<std::uint16_t>(tile.y0);
            frame.width = static_cast<std::uint16_t>(tile.width);
            frame.height = static_cast<std::uint16_t>(tile.height);
            frame.rgba.reserve(static_cast<std::size_t>(tile.width) * tile.height * 4);
            for (int y = tile.y0; y < tile.y0 + tile.height; ++y) {
                const std::uint8_t* row = fb.pixel(tile.x0, y);
                frame.rgba.insert(frame.rgba.end(), row, row + static_cast<std::size_t>(tile.width) * 4);
            }
            emitIfCurrent(generation, OutboundMessage{proto::encodeTile(frame)});
        };
        const RenderResult result = renderFrameDetailed(levelScene(scene, level), options);
        if (!result.completed ||
            !emitIfCurrent(generation, OutboundMessage{proto::levelCompleteMessage(generation, level)})) {
            return;
        }
    }
    emitIfCurrent(generation, OutboundMessage{proto::frameCompleteMessage(generation)});
}

}  // namespace fractalmarch
