#include <deque>
#include <fstream>
#include <sstream>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "fractalmarch/viewserver.hpp"

namespace fractalmarch {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr std::string_view kFallbackIndex = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>fractalmarch</title></head>
<body>
<h1>fractalmarch view server</h1>
<p>No client bundle is installed. Start the server with <code>--ui-dir</code> pointing at
the built web client, or connect a WebSocket client to this address.</p>
</body></html>
)";

std::string_view mimeType(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json" || ext == ".map") return "application/json";
    if (ext == ".png") return "image/png";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".wasm") return "application/wasm";
    return "application/octet-stream";
}

/// Outbound queue shared between a connection and its session's worker
/// threads. Workers only touch this object, never the connection itself.
struct Outbox {
    std::mutex mutex;
    std::deque<OutboundMessage> queue;
};

}  // namespace

class WsConnection;

struct ViewServer::Impl {
    explicit Impl(ServerOptions opts) : options(std::move(opts)), acceptor(ioc) {
        try {
            const tcp::endpoint endpoint(net::ip::make_address(options.address), options.port);
            acceptor.open(endpoint.protocol());
            acceptor.set_option(net::socket_base::reuse_address(true));
            acceptor.bind(endpoint);
            acceptor.listen(net::socket_base::max_listen_connections);
        } catch (const boost::system::system_error& e) {
            throw IoError("cannot listen on " + options.address + ":" +
                          std::to_string(options.port) + ": " + e.what());
        }
        doAccept();
    }

    ~Impl();

    void doAccept();
    void registerConnection(const std::shared_ptr<WsConnection>& conn) {
        std::lock_guard lock(registryMutex);
        std::erase_if(connections, [](const auto& w) { return w.expired(); });
        connections.push_back(conn);
    }
    void shutdownSessions();

    ServerOptions options;
    net::io_context ioc;
    tcp::acceptor acceptor;
    std::thread thread;
    std::atomic<bool> stopping{false};
    std::mutex registryMutex;
    std::vector<std::weak_ptr<WsConnection>> connections;
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
public:
    WsConnection(tcp::socket&& socket, const ServerOptions& options)
        : ws_(std::move(socket)), options_(options), outbox_(std::make_shared<Outbox>()) {}

    void run(http::request<http::string_body> request) {
        beast::get_lowest_layer(ws_).expires_never();
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(request,
                         beast::bind_front_handler(&WsConnection::onAccept, shared_from_this()));
    }

    void shutdownSession() {
        std::lock_guard lock(sessionMutex_);
        if (session_) {
            session_->stop();
        }
    }

private:
    void onAccept(beast::error_code ec) {
        if (ec) {
            return;
        }
        std::weak_ptr<WsConnection> weak = shared_from_this();
        auto executor = ws_.get_executor();
        std::weak_ptr<Outbox> outbox = outbox_;
        auto sink = [weak, executor, outbox](OutboundMessage message) {
            if (auto box = outbox.lock()) {
                std::lock_guard lock(box->mutex);
                box->queue.push_back(std::move(message));
            }
            net::post(executor, [weak] {
                if (auto self = weak.lock()) {
                    self->flush();
                }
            });
        };
        {
            std::lock_guard lock(sessionMutex_);
            session_ = std::make_unique<ViewSession>(options_.scene, std::move(sink),
                                                     SessionOptions{options_.renderThreads});
            session_->start();
        }
        doRead();
    }

    void doRead() {
        ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::onRead, shared_from_this()));
    }

    void onRead(beast::error_code ec, std::size_t) {
        if (ec) {
            close();
            return;
        }
        if (closed_) {
            return;
        }
        if (ws_.got_text()) {
            const std::string text = beast::buffers_to_string(buffer_.data());
            session_->handleText(text);
        } else {
            std::lock_guard lock(outbox_->mutex);
            outbox_->queue.push_back(
                OutboundMessage{protocol::errorMessage("binary messages are not accepted")});
        }
        buffer_.consume(buffer_.size());
        flush();
        doRead();
    }

    void flush() {
        if (writing_ || closed_) {
            return;
        }
        {
            std::lock_guard lock(outbox_->mutex);
            if (outbox_->queue.empty()) {
                return;
            }
            current_ = std::move(outbox_->queue.front());
            outbox_->queue.pop_front();
        }
        writing_ = true;
        ws_.text(current_.isText());
        const net::const_buffer buffer =
            current_.isText() ? net::buffer(current_.text()) : net::buffer(current_.binary());
        ws_.async_write(buffer, beast::bind_front_handler(&WsConnection::onWrite, shared_from_this()));
    }

    void onWrite(beast::error_code ec, std::size_t) {
        writing_ = false;
        if (ec) {
            close();
            return;
        }
        flush();
    }

    void close() {
        closed_ = true;
        std::unique_ptr<ViewSession> session;
        {
            std::lock_guard lock(sessionMutex_);
            session = std::move(session_);
        }
        if (session) {
            session->stop();
        }
    }

    websocket::stream<beast::tcp_stream> ws_;
    const ServerOptions& options_;
    beast::flat_buffer buffer_;
    std::shared_ptr<Outbox> outbox_;
    OutboundMessage current_;
    bool writing_ = false;
    bool closed_ = false;
    std::mutex sessionMutex_;
    std::unique_ptr<ViewSession> session_;
};

namespace {

http::response<http::string_body> staticResponse(const http::request<http::string_body>& req,
                                                 const std::filesystem::path& uiDir) {
    const auto make = [&req](http::status status, std::string_view type, std::string body) {
        http::response<http::string_body> res{status, req.version()};
        res.set(http::field::server, "fractalmarch");
        res.set(http::field::content_type, std::string(type));
        res.keep_alive(req.keep_alive());
        res.body() = std::move(body);
        res.prepare_payload();
        return res;
    };
    if (req.method() != http::verb::get && req.method() != http::verb::head) {
        return make(http::status::method_not_allowed, "text/plain", "method not allowed\n");
    }
    std::string target(req.target());
    target = target.substr(0, target.find('?'));
    if (target.empty() || target.front() != '/' || target.find("..") != std::string::npos) {
        return make(http::status::bad_request, "text/plain", "bad path\n");
    }
    if (target == "/") {
        target = "/index.html";
    }
    if (!uiDir.empty()) {
        const std::filesystem::path file = uiDir / target.substr(1);
        std::ifstream in(file, std::ios::binary);
        if (in && std::filesystem::is_regular_file(file)) {
            std::ostringstream body;
            body << in.rdbuf();
            return make(http::status::ok, mimeType(file), body.str());
        }
    }
    if (target == "/index.html") {
        return make(http::status::ok, "text/html; charset=utf-8", std::string(kFallbackIndex));
    }
    return make(http::status::not_found, "text/plain", "not found\n");
}

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket&& socket, ViewServer::Impl& server)
        : stream_(std::move(socket)), server_(server) {}

    void run() { doRead(); }

private:
    void doRead() {
        request_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_,
                         beast::bind_front_handler(&HttpConnection::onRead, shared_from_this()));
    }

    void onRead(beast::error_code ec, std::size_t) {
        if (ec == http::error::end_of_stream) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (ec) {
            return;
        }
        if (websocket::is_upgrade(request_)) {
            auto conn = std::make_shared<WsConnection>(stream_.release_socket(), server_.options);
            server_.registerConnection(conn);
            conn->run(std::move(request_));
            return;
        }
        response_ = staticResponse(request_, server_.options.uiDir);
        http::async_write(stream_, response_,
                          beast::bind_front_handler(&HttpConnection::onWrite, shared_from_this()));
    }

    void onWrite(beast::error_code ec, std::size_t) {
        if (ec) {
            return;
        }
        if (!response_.keep_alive()) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        doRead();
    }

    beast::tcp_stream stream_;
    ViewServer::Impl& server_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
    http::response<http::string_body> response_;
};

}  // namespace

void ViewServer::Impl::doAccept() {
    acceptor.async_accept(ioc, [this](beast::error_code ec, tcp::socket socket) {
        if (stopping) {
            return;
        }
        if (!ec) {
            std::make_shared<HttpConnection>(std::move(socket), *this)->run();
        }
        doAccept();
    });
}

void ViewServer::Impl::shutdownSessions() {
    std::vector<std::shared_ptr<WsConnection>> live;
    {
        std::lock_guard lock(registryMutex);
        for (const auto& weak : connections) {
            if (auto conn = weak.lock()) {
                live.push_back(std::move(conn));
            }
        }
    }
    for (const auto& conn : live) {
        conn->shutdownSession();
    }
}

ViewServer::Impl::~Impl() {
    stopping = true;
    ioc.stop();
    if (thread.joinable()) {
        thread.join();
    }
    // Workers may still post into the (stopped) context; stop them before it
    // goes away.
    shutdownSessions();
}

ViewServer::ViewServer(ServerOptions options) {
    validateScene(options.scene);
    impl_ = std::make_unique<Impl>(std::move(options));
}

ViewServer::~ViewServer() = default;

unsigned short ViewServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void ViewServer::run() { impl_->ioc.run(); }

void ViewServer::start() {
    impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

void ViewServer::stop() {
    impl_->stopping = true;
    impl_->ioc.stop();
    if (impl_->thread.joinable() && impl_->thread.get_id() != std::this_thread::get_id()) {
        impl_->thread.join();
    }
}

}  // namespace fractalmarch
