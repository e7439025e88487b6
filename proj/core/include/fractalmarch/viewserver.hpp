#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "fractalmarch/protocol.hpp"
#include "fractalmarch/scene.hpp"

namespace fractalmarch {

/// A message leaving the server: JSON text or an encoded binary tile frame.
struct OutboundMessage {
    std::variant<std::string, std::vector<std::uint8_t>> payload;

    bool isText() const { return std::holds_alternative<std::string>(payload); }
    const std::string& text() const { return std::get<std::string>(payload); }
    const std::vector<std::uint8_t>& binary() const {
        return std::get<std::vector<std::uint8_t>>(payload);
    }
};

struct SessionOptions {
    int renderThreads = 1;
};

/// One interactive exploration session, independent of the transport.
///
/// Every accepted update bumps the generation and restarts progressive
/// rendering at the coarsest level. Rendering runs on a worker thread that
/// checks the generation between tiles, so an update abandons the previous
/// render within one tile. All outbound messages go through `sink` under a
/// single lock together with the generation check, which guarantees that no
/// tile of generation g reaches the sink after the ack of generation g + 1.
/// `sink` must not block.
class ViewSession {
public:
    using Sink = std::function<void(OutboundMessage)>;

    ViewSession(SceneConfig initial, Sink sink, SessionOptions options = {});
    ~ViewSession();

    ViewSession(const ViewSession&) = delete;
    ViewSession& operator=(const ViewSession&) = delete;

    /// Starts rendering generation 0.
    void start();

    /// Stops and joins the render worker. Idempotent.
    void stop();

    /// Applies one client control message. Returns the acknowledged
    /// generation, or nullopt after emitting an error frame; the session
    /// stays usable either way.
    std::optional<std::uint32_t> handleText(std::string_view text);

    std::uint32_t generation() const { return generation_.load(); }
    SceneConfig scene() const;

private:
    void workerLoop(std::stop_token stop);
    void renderGeneration(const SceneConfig& scene, std::uint32_t generation, bool fullOnly,
                          const std::stop_token& stop);
    bool emitIfCurrent(std::uint32_t generation, OutboundMessage message);
    SceneConfig apply(const protocol::ControlMessage& message) const;

    Sink sink_;
    SessionOptions options_;

    mutable std::mutex mutex_;  // guards scene_, fullOnly_, pending_ and sink calls
    std::condition_variable_any wake_;
    SceneConfig scene_;
    bool fullOnly_ = false;
    bool pending_ = false;
    std::atomic<std::uint32_t> generation_{0};

    std::jthread worker_;
};

/// Scene rendered at a progressive level: the camera resolution divided by
/// `level`, rounded up.
SceneConfig levelScene(const SceneConfig& scene, int level);

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080;  ///< 0 picks a free port
    SceneConfig scene;
    /// Directory holding the browser client bundle; served over plain GET.
    std::filesystem::path uiDir;
    int renderThreads = 1;
};

/// HTTP + WebSocket front end. Plain GETs serve files from uiDir; an upgrade
/// request on any path opens a ViewSession for that connection.
class ViewServer {
public:
    explicit ViewServer(ServerOptions options);
    ~ViewServer();

    ViewServer(const ViewServer&) = delete;
    ViewServer& operator=(const ViewServer&) = delete;

    /// Port actually bound.
    unsigned short port() const;

    /// Runs the event loop on the calling thread until stop().
    void run();

    /// Runs the event loop on a background thread.
    void start();

    void stop();

    struct Impl;  // transport internals

private:
    std::unique_ptr<Impl> impl_;
};

}  // namespace fractalmarch
