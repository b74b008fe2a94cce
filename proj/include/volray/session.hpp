// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/engine.hpp>
#include <volray/presets.hpp>

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace volray {

nlohmann::json camera_to_json(const Camera& camera);
nlohmann::json config_to_json(const RaycastConfig& config);
nlohmann::json stats_to_json(const RenderStats& stats);

/// Merges the sections of an `update` message into `scene`. Fields absent
/// from a section keep their current values. Throws InvalidArgument (or
/// InvalidPreset for tf points) if the message is malformed or the merged
/// scene violates an invariant; `scene` is untouched in that case.
Scene apply_update(const Scene& scene, const nlohmann::json& update);

/// Folds `incoming` into `pending` section by section, newer fields winning.
void coalesce_update(nlohmann::json& pending, const nlohmann::json& incoming);

nlohmann::json hello_message(const Scene& scene, const Histogram& histogram,
                             const std::vector<TfPreset>& presets, int width, int height);
nlohmann::json frame_message(std::uint64_t seq, int width, int height, const RenderStats& stats,
                             std::uint64_t applied_updates);
nlohmann::json error_message(std::string_view message);

/// Per-connection steering state. At most one pending update is held; every
/// accepted message is coalesced into it, so memory stays bounded no matter
/// how fast the client sends.
class SessionState {
  public:
    SessionState(Scene scene, int width, int height);

    /// Parses and validates one client text message against the state it
    /// would be applied to. Valid updates are coalesced into the pending
    /// slot; anything else throws and leaves the state unchanged.
    void receive(std::string_view text);

    bool has_pending() const { return pending_.has_value(); }
    const std::optional<nlohmann::json>& pending() const { return pending_; }

    /// Applies the pending update, if any. Returns true when one was applied.
    bool apply_pending();

    /// Renders the current scene and advances frame_seq.
    RenderResult render(int workers);

    const Scene& scene() const { return scene_; }
    int width() const { return width_; }
    int height() const { return height_; }
    std::uint64_t frame_seq() const { return frame_seq_; }
    /// Client messages merged into the scene so far.
    std::uint64_t applied_updates() const { return applied_updates_; }

  private:
    Scene scene_;
    int width_;
    int height_;
    std::uint64_t frame_seq_ = 0;
    std::uint64_t received_updates_ = 0;
    std::uint64_t applied_updates_ = 0;
    std::uint64_t pending_count_ = 0;
    std::optional<nlohmann::json> pending_;
};

}  // namespace volray
