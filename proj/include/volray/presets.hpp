// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/transfer_function.hpp>

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace volray {

/// Serialized transfer function plus the step length its opacities refer to.
struct TfPreset {
    std::string name;
    std::vector<ControlPoint> points;
    double reference_step = 1.0;

    TransferFunction transfer_function() const { return TransferFunction(points, name); }

    friend bool operator==(const TfPreset&, const TfPreset&) = default;
};

/// Accepts {name, reference_step, points: [{scalar, color: [r,g,b], opacity}]}
/// or separate `color_points` / `opacity_points` tables, which are merged over
/// the union of their scalar positions. Throws InvalidPreset naming the first
/// offending point index.
TfPreset preset_from_json(const nlohmann::json& j);
nlohmann::json preset_to_json(const TfPreset& preset);

/// Point list in the wire/preset layout.
std::vector<ControlPoint> points_from_json(const nlohmann::json& points);
nlohmann::json points_to_json(const std::vector<ControlPoint>& points);

TfPreset load_tf_preset(const std::filesystem::path& path);
void save_tf_preset(const TfPreset& preset, const std::filesystem::path& path);

/// grayscale-ramp, soft-tissue and bone-bright. Labels only.
const std::vector<TfPreset>& bundled_presets();
std::optional<TfPreset> find_bundled_preset(std::string_view name);

/// A bundled preset name, otherwise a path to a preset file.
TfPreset resolve_preset(const std::string& name_or_path);

}  // namespace volray
