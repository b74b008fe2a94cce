// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/engine.hpp>

#include <cstdint>
#include <memory>
#include <string>

namespace volray {

struct ServerOptions {
    std::string address = "0.0.0.0";
    std::uint16_t port = 8080;  // 0 picks a free port
    int width = 512;
    int height = 512;
    int workers = 1;
    int histogram_bins = 64;
};

/// Frame-streaming session service. Every WebSocket connection gets its own
/// session thread running the loop: apply the latest pending update, render,
/// send `frame` JSON followed by the PNG as a binary message. Receiving and
/// rendering alternate on that thread, so they never overlap.
class SessionServer {
  public:
    SessionServer(Scene default_scene, ServerOptions options);
    ~SessionServer();
    SessionServer(const SessionServer&) = delete;
    SessionServer& operator=(const SessionServer&) = delete;

    /// Port actually bound (meaningful when options.port was 0).
    std::uint16_t port() const;

    /// Accepts connections until stop() is called.
    void run();

    /// Thread-safe; closes the listener and every live session.
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace volray
