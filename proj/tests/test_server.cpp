// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/engine.hpp>
#include <volray/image_io.hpp>
#include <volray/presets.hpp>
#include <volray/server.hpp>
#include <volray/session.hpp>
#include <volray/synthetic.hpp>

#include "doctest.h"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <thread>

using namespace volray;
using nlohmann::json;

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr int kWidth = 48;
constexpr int kHeight = 40;

Scene sphere_scene() {
    auto volume = std::make_shared<const ScalarVolume>(synthetic::radial_sphere(24, 1.0, 10.0));
    Scene scene{volume, find_bundled_preset("soft-tissue")->transfer_function(),
                framing_camera(volume->bounds()), RaycastConfig{}};
    scene.config.step = 0.5;
    return scene;
}

/// Server on an ephemeral loopback port, running on its own thread.
class RunningServer {
  public:
    RunningServer() : server_(sphere_scene(), options()), thread_([this] { server_.run(); }) {}
    ~RunningServer() {
        server_.stop();
        thread_.join();
    }
    std::uint16_t port() const { return server_.port(); }

  private:
    static ServerOptions options() {
        ServerOptions o;
        o.address = "127.0.0.1";
        o.port = 0;
        o.width = kWidth;
        o.height = kHeight;
        o.workers = 2;
        return o;
    }
    SessionServer server_;
    std::thread thread_;
};

struct Frame {
    json header;
    FrameImage image;
};

/// Blocking scripted viewer.
class Client {
  public:
    explicit Client(std::uint16_t port) : ws_(ioc_) {
        tcp::resolver resolver(ioc_);
        net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1:" + std::to_string(port), "/");
    }
    ~Client() {
        beast::error_code ignored;
        ws_.close(websocket::close_code::normal, ignored);
    }

    void send(const json& message) { send_text(message.dump()); }
    void send_text(const std::string& text) {
        ws_.text(true);
        ws_.write(net::buffer(text));
    }

    /// Next text message; a frame header pulls its PNG along with it.
    json next() {
        beast::flat_buffer buffer;
        ws_.read(buffer);
        REQUIRE(ws_.got_text());
        json message = json::parse(beast::buffers_to_string(buffer.data()));
        if (message["type"] == "frame") {
            beast::flat_buffer png;
            ws_.read(png);
            REQUIRE(ws_.got_binary());
            const auto* bytes = static_cast<const std::uint8_t*>(png.data().data());
            last_image_ = decode_png(std::span(bytes, png.size()));
        }
        return message;
    }

    Frame next_frame() {
        for (;;) {
            json message = next();
            if (message["type"] == "frame") return {message, last_image_};
            errors_.push_back(message);
        }
    }

    const std::vector<json>& skipped() const { return errors_; }

  private:
    net::io_context ioc_;
    websocket::stream<tcp::socket> ws_;
    FrameImage last_image_;
    std::vector<json> errors_;
};

json camera_update(const Vec3& position) {
    return {{"type", "update"}, {"camera", {{"position", {position.x, position.y, position.z}}}}};
}

}  // namespace

TEST_CASE("hello then a first frame of the default scene") {
    RunningServer server;
    Client client(server.port());
    const json hello = client.next();
    CHECK(hello["type"] == "hello");
    CHECK(hello["dims"] == json::array({24, 24, 24}));
    CHECK(hello["histogram"].size() == 64);
    CHECK(hello["presets"].size() == 3);

    const Frame frame = client.next_frame();
    CHECK(frame.header["seq"] == 1);
    CHECK(frame.header["width"] == kWidth);
    CHECK(frame.header["stats"]["rays"] == kWidth * kHeight);
    CHECK(frame.image.width == kWidth);
    CHECK(frame.image.pixels == render_frame(sphere_scene(), kWidth, kHeight, 1).image.pixels);
}

TEST_CASE("rapid camera updates coalesce to the final state") {
    RunningServer server;
    Client client(server.port());
    client.next();
    client.next_frame();

    const Vec3 center = sphere_scene().volume->bounds().center();
    json last;
    for (int n = 1; n <= 10; ++n) {
        const Camera c = orbit_camera(center, 70.0, 9.0 * n, 5.0 * n);
        last = camera_update(c.position);
        client.send(last);
    }

    Frame frame = client.next_frame();
    std::uint64_t seq = frame.header["seq"];
    while (frame.header["applied_updates"] != 10) {
        frame = client.next_frame();
        CHECK(frame.header["seq"].get<std::uint64_t>() > seq);
        seq = frame.header["seq"];
    }
    CHECK(seq <= 11);
    const Scene expected = apply_update(sphere_scene(), last);
    CHECK(frame.image.pixels == render_frame(expected, kWidth, kHeight, 1).image.pixels);
}

TEST_CASE("a transfer function edit changes the next frame") {
    RunningServer server;
    Client client(server.port());
    client.next();
    const Frame before = client.next_frame();
    client.send(json{{"type", "update"},
                     {"tf", {{"points", points_to_json({{0.0, {0, 0, 0}, 0.0}, {1.0, {1, 0, 0}, 0.8}})}}}});
    const Frame after = client.next_frame();
    CHECK(after.header["applied_updates"] == 1);
    CHECK(after.image.pixels != before.image.pixels);
}

TEST_CASE("malformed messages get an error and the session continues") {
    RunningServer server;
    Client client(server.port());
    client.next();
    client.next_frame();

    client.send_text("this is not json");
    const json error = client.next();
    CHECK(error["type"] == "error");
    CHECK_FALSE(error["message"].get<std::string>().empty());

    client.send(json{{"type", "update"}, {"config", {{"mode", "hologram"}}}});
    CHECK(client.next()["type"] == "error");

    client.send(json{{"type", "update"}, {"config", {{"mode", "mip"}}}});
    const Frame frame = client.next_frame();
    CHECK(frame.header["applied_updates"] == 1);
    Scene mip = sphere_scene();
    mip.config.function = RayFunction::mip;
    CHECK(frame.image.pixels == render_frame(mip, kWidth, kHeight, 1).image.pixels);
}

TEST_CASE("sessions are independent and survive disconnects") {
    RunningServer server;
    {
        Client first(server.port());
        first.next();
        first.next_frame();
        first.send(json{{"type", "update"}, {"config", {{"mode", "average"}}}});
    }
    Client second(server.port());
    second.next();
    const Frame frame = second.next_frame();
    CHECK(frame.header["seq"] == 1);
    CHECK(frame.header["applied_updates"] == 0);
    CHECK(frame.image.pixels == render_frame(sphere_scene(), kWidth, kHeight, 1).image.pixels);
}

TEST_CASE("plain HTTP requests are told to upgrade") {
    RunningServer server;
    net::io_context ioc;
    tcp::socket socket(ioc);
    tcp::resolver resolver(ioc);
    net::connect(socket, resolver.resolve("127.0.0.1", std::to_string(server.port())));
    http::request<http::empty_body> request{http::verb::get, "/", 11};
    request.set(http::field::host, "127.0.0.1");
    http::write(socket, request);
    beast::flat_buffer buffer;
    http::response<http::string_body> response;
    http::read(socket, buffer, response);
    CHECK(response.result() == http::status::upgrade_required);
}
