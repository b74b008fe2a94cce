// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/server.hpp>

#include <volray/error.hpp>
#include <volray/image_io.hpp>
#include <volray/presets.hpp>
#include <volray/session.hpp>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <deque>
#include <iostream>
#include <list>
#include <mutex>
#include <thread>

namespace volray {

namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

constexpr std::size_t kMaxMessageBytes = 1 << 20;

/// Read-only data shared by every session.
struct SharedContext {
    Scene scene;
    ServerOptions options;
    Histogram histogram;
};

class Session : public std::enable_shared_from_this<Session> {
  public:
    Session(tcp::socket socket, const SharedContext& shared)
        : ws_(std::move(socket)),
          shared_(shared),
          state_(shared.scene, shared.options.width, shared.options.height) {}

    void start() {
        http::async_read(ws_.next_layer(), buffer_, request_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) {
                             self->on_request(ec);
                         });
    }

  private:
    struct Outgoing {
        std::string payload;
        bool binary = false;
    };

    void on_request(beast::error_code ec) {
        if (ec) {
            return;
        }
        if (!websocket::is_upgrade(request_)) {
            reply_plain_http();
            return;
        }
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.read_message_max(kMaxMessageBytes);
        ws_.async_accept(request_, [self = shared_from_this()](beast::error_code accept_ec) {
            self->on_accept(accept_ec);
        });
    }

    void reply_plain_http() {
        response_.result(http::status::upgrade_required);
        response_.version(request_.version());
        response_.set(http::field::content_type, "text/plain");
        response_.set(http::field::upgrade, "websocket");
        response_.body() = "volray session endpoint: connect with a WebSocket client\n";
        response_.keep_alive(false);
        response_.prepare_payload();
        http::async_write(ws_.next_layer(), response_,
                          [self = shared_from_this()](beast::error_code, std::size_t) {
                              beast::error_code ignored;
                              self->ws_.next_layer().socket().shutdown(tcp::socket::shutdown_send,
                                                                       ignored);
                          });
    }

    void on_accept(beast::error_code ec) {
        if (ec) {
            return;
        }
        buffer_.consume(buffer_.size());
        enqueue(hello_message(state_.scene(), shared_.histogram, bundled_presets(),
                              state_.width(), state_.height())
                    .dump(),
                false);
        schedule_render();
        do_read();
    }

    void do_read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->on_read(ec);
        });
    }

    void on_read(beast::error_code ec) {
        if (ec) {
            closing_ = true;
            return;
        }
        if (!ws_.got_text()) {
            enqueue(error_message("binary client messages are not supported").dump(), false);
        } else {
            const std::string text = beast::buffers_to_string(buffer_.data());
            try {
                state_.receive(text);
                render_wanted_ = true;
            } catch (const std::exception& e) {
                enqueue(error_message(e.what()).dump(), false);
            }
        }
        buffer_.consume(buffer_.size());
        schedule_render();
        do_read();
    }

    /// A frame is rendered only once the previous one has left the outbox.
    void schedule_render() {
        if (!render_wanted_ || render_posted_ || frames_queued_ > 0 || closing_) {
            return;
        }
        render_posted_ = true;
        net::post(ws_.get_executor(), [self = shared_from_this()] { self->render(); });
    }

    void render() {
        render_posted_ = false;
        if (closing_ || !render_wanted_) {
            return;
        }
        render_wanted_ = false;
        try {
            state_.apply_pending();
            const RenderResult result = state_.render(shared_.options.workers);
            std::vector<std::uint8_t> png = encode_png(result.image);
            enqueue(frame_message(state_.frame_seq(), result.image.width, result.image.height,
                                  result.stats, state_.applied_updates())
                        .dump(),
                    false);
            ++frames_queued_;
            enqueue(std::string(png.begin(), png.end()), true);
        } catch (const std::exception& e) {
            enqueue(error_message(e.what()).dump(), false);
        }
    }

    void enqueue(std::string payload, bool binary) {
        outbox_.push_back({std::move(payload), binary});
        if (!writing_) {
            do_write();
        }
    }

    void do_write() {
        writing_ = true;
        const Outgoing& next = outbox_.front();
        ws_.binary(next.binary);
        ws_.async_write(net::buffer(next.payload),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) {
                            self->on_write(ec);
                        });
    }

    void on_write(beast::error_code ec) {
        if (ec) {
            closing_ = true;
            outbox_.clear();
            writing_ = false;
            return;
        }
        if (outbox_.front().binary) {
            --frames_queued_;
        }
        outbox_.pop_front();
        if (!outbox_.empty()) {
            do_write();
            return;
        }
        writing_ = false;
        schedule_render();
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
    http::response<http::string_body> response_;
    const SharedContext& shared_;
    SessionState state_;
    std::deque<Outgoing> outbox_;
    bool writing_ = false;
    bool render_wanted_ = true;
    bool render_posted_ = false;
    bool closing_ = false;
    int frames_queued_ = 0;
};

/// One session's event loop and the thread driving it.
struct SessionRunner {
    net::io_context ioc{1};
    std::thread thread;
    std::atomic<bool> done{false};
};

}  // namespace

struct SessionServer::Impl {
    explicit Impl(SharedContext context) : shared(std::move(context)) {}

    SharedContext shared;
    net::io_context ioc{1};
    tcp::acceptor acceptor{ioc};
    std::mutex mutex;
    std::list<std::unique_ptr<SessionRunner>> runners;
    bool stopped = false;

    void do_accept() {
        auto runner = std::make_unique<SessionRunner>();
        SessionRunner* raw = runner.get();
        {
            std::lock_guard lock(mutex);
            reap_finished();
            runners.push_back(std::move(runner));
        }
        acceptor.async_accept(raw->ioc, [this, raw](beast::error_code ec, tcp::socket socket) {
            if (ec) {
                if (ec != net::error::operation_aborted) {
                    std::cerr << "accept failed: " << ec.message() << '\n';
                }
                return;
            }
            std::make_shared<Session>(std::move(socket), shared)->start();
            raw->thread = std::thread([raw] {
                raw->ioc.run();
                raw->done = true;
            });
            do_accept();
        });
    }

    /// Caller holds `mutex`.
    void reap_finished() {
        for (auto it = runners.begin(); it != runners.end();) {
            if ((*it)->done && (*it)->thread.joinable()) {
                (*it)->thread.join();
                it = runners.erase(it);
            } else {
                ++it;
            }
        }
    }
};

SessionServer::SessionServer(Scene default_scene, ServerOptions options)
{
    if (!default_scene.volume) {
        throw InvalidArgument("session server needs a volume");
    }
    if (options.width < 1 || options.height < 1 || options.workers < 1) {
        throw InvalidArgument("frame size and worker count must be positive");
    }
    validate_camera(default_scene.camera);
    validate_config(default_scene.config);
    Histogram histogram = compute_histogram(*default_scene.volume, options.histogram_bins);
    impl_ = std::make_unique<Impl>(
        SharedContext{std::move(default_scene), options, std::move(histogram)});

    const tcp::endpoint endpoint(net::ip::make_address(options.address), options.port);
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen(net::socket_base::max_listen_connections);
}

SessionServer::~SessionServer() {
    stop();
    std::lock_guard lock(impl_->mutex);
    for (auto& runner : impl_->runners) {
        if (runner->thread.joinable()) {
            runner->thread.join();
        }
    }
}

std::uint16_t SessionServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void SessionServer::run() {
    impl_->do_accept();
    impl_->ioc.run();
}

void SessionServer::stop() {
    std::lock_guard lock(impl_->mutex);
    if (impl_->stopped) {
        return;
    }
    impl_->stopped = true;
    impl_->ioc.stop();
    for (auto& runner : impl_->runners) {
        runner->ioc.stop();
    }
}

}  // namespace volray
