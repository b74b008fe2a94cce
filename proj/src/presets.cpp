// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/presets.hpp>

#include <volray/error.hpp>
#include <volray/image_io.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace volray {

namespace {

using nlohmann::json;

double number_field(const json& point, const char* key, int index) {
    if (!point.is_object() || !point.contains(key) || !point.at(key).is_number()) {
        throw InvalidPreset(std::string("point ") + std::to_string(index) + " lacks numeric '" +
                                key + "'",
                            index);
    }
    return point.at(key).get<double>();
}

Vec3 color_field(const json& point, int index) {
    if (!point.is_object() || !point.contains("color") || !point.at("color").is_array() ||
        point.at("color").size() != 3) {
        throw InvalidPreset("point " + std::to_string(index) + " needs color: [r, g, b]", index);
    }
    const json& c = point.at("color");
    for (const json& v : c) {
        if (!v.is_number()) {
            throw InvalidPreset("point " + std::to_string(index) + " has a non-numeric color",
                                index);
        }
    }
    return {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()};
}

void check_points(const std::vector<ControlPoint>& points, const std::string& what) {
    if (const auto violation = find_point_violation(points)) {
        std::string message = "invalid " + what;
        if (violation->index >= 0) {
            message += " at point " + std::to_string(violation->index);
        }
        throw InvalidPreset(message + ": " + violation->reason, violation->index);
    }
}

/// Piecewise-linear evaluation of a single table, clamped at the ends.
template <typename Get>
auto evaluate_table(const std::vector<ControlPoint>& table, double s, Get get) {
    if (s <= table.front().scalar) return get(table.front());
    if (s >= table.back().scalar) return get(table.back());
    std::size_t n = 1;
    while (table[n].scalar <= s) ++n;
    const ControlPoint& a = table[n - 1];
    const ControlPoint& b = table[n];
    const double t = (s - a.scalar) / (b.scalar - a.scalar);
    return get(a) * (1.0 - t) + get(b) * t;
}

std::vector<ControlPoint> merge_tables(const json& color_points, const json& opacity_points) {
    if (!color_points.is_array() || !opacity_points.is_array()) {
        throw InvalidPreset("color_points and opacity_points must be arrays", -1);
    }
    std::vector<ControlPoint> colors;
    for (std::size_t n = 0; n < color_points.size(); ++n) {
        const int index = static_cast<int>(n);
        colors.push_back({number_field(color_points[n], "scalar", index),
                          color_field(color_points[n], index), 1.0});
    }
    std::vector<ControlPoint> opacities;
    for (std::size_t n = 0; n < opacity_points.size(); ++n) {
        const int index = static_cast<int>(n);
        opacities.push_back({number_field(opacity_points[n], "scalar", index), Vec3{},
                             number_field(opacity_points[n], "opacity", index)});
    }
    check_points(colors, "color table");
    check_points(opacities, "opacity table");

    std::vector<double> positions;
    for (const auto& p : colors) positions.push_back(p.scalar);
    for (const auto& p : opacities) positions.push_back(p.scalar);
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());

    std::vector<ControlPoint> merged;
    for (const double s : positions) {
        merged.push_back({s, evaluate_table(colors, s, [](const ControlPoint& p) { return p.color; }),
                          evaluate_table(opacities, s,
                                         [](const ControlPoint& p) { return p.opacity; })});
    }
    return merged;
}

TfPreset make_preset(std::string name, std::vector<ControlPoint> points) {
    return TfPreset{std::move(name), std::move(points), 1.0};
}

}  // namespace

std::vector<ControlPoint> points_from_json(const json& points) {
    if (!points.is_array()) {
        throw InvalidPreset("points must be an array", -1);
    }
    std::vector<ControlPoint> out;
    for (std::size_t n = 0; n < points.size(); ++n) {
        const int index = static_cast<int>(n);
        out.push_back({number_field(points[n], "scalar", index), color_field(points[n], index),
                       number_field(points[n], "opacity", index)});
    }
    check_points(out, "transfer function");
    return out;
}

json points_to_json(const std::vector<ControlPoint>& points) {
    json out = json::array();
    for (const ControlPoint& p : points) {
        out.push_back({{"scalar", p.scalar},
                       {"color", {p.color.x, p.color.y, p.color.z}},
                       {"opacity", p.opacity}});
    }
    return out;
}

TfPreset preset_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidPreset("preset must be a JSON object", -1);
    }
    TfPreset preset;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw InvalidPreset("name must be a string", -1);
        preset.name = j.at("name").get<std::string>();
    }
    if (j.contains("reference_step")) {
        const json& step = j.at("reference_step");
        if (!step.is_number() || !(step.get<double>() > 0.0)) {
            throw InvalidPreset("reference_step must be a positive number", -1);
        }
        preset.reference_step = step.get<double>();
    }
    if (j.contains("points")) {
        preset.points = points_from_json(j.at("points"));
    } else if (j.contains("color_points") && j.contains("opacity_points")) {
        preset.points = merge_tables(j.at("color_points"), j.at("opacity_points"));
        check_points(preset.points, "merged transfer function");
    } else {
        throw InvalidPreset("preset needs 'points' or both 'color_points' and 'opacity_points'", -1);
    }
    return preset;
}

json preset_to_json(const TfPreset& preset) {
    return {{"name", preset.name},
            {"reference_step", preset.reference_step},
            {"points", points_to_json(preset.points)}};
}

TfPreset load_tf_preset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open preset " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidPreset(path.string() + ": " + e.what(), -1);
    }
    return preset_from_json(j);
}

void save_tf_preset(const TfPreset& preset, const std::filesystem::path& path) {
    check_points(preset.points, "transfer function");
    const std::string text = preset_to_json(preset).dump(2) + "\n";
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                     text.size()));
}

const std::vector<TfPreset>& bundled_presets() {
    static const std::vector<TfPreset> presets = {
        make_preset("grayscale-ramp", {{0.0, {0.0, 0.0, 0.0}, 0.0}, {1.0, {1.0, 1.0, 1.0}, 1.0}}),
        make_preset("soft-tissue", {{0.0, {0.0, 0.0, 0.0}, 0.0},
                                    {0.15, {0.12, 0.06, 0.05}, 0.0},
                                    {0.35, {0.85, 0.55, 0.45}, 0.03},
                                    {0.6, {0.95, 0.78, 0.68}, 0.06},
                                    {0.8, {1.0, 0.93, 0.86}, 0.25},
                                    {1.0, {1.0, 1.0, 1.0}, 0.5}}),
        make_preset("bone-bright", {{0.0, {0.0, 0.0, 0.0}, 0.0},
                                    {0.55, {0.3, 0.25, 0.2}, 0.0},
                                    {0.75, {0.9, 0.85, 0.75}, 0.4},
                                    {1.0, {1.0, 1.0, 1.0}, 0.95}}),
    };
    return presets;
}

std::optional<TfPreset> find_bundled_preset(std::string_view name) {
    for (const TfPreset& preset : bundled_presets()) {
        if (preset.name == name) {
            return preset;
        }
    }
    return std::nullopt;
}

TfPreset resolve_preset(const std::string& name_or_path) {
    if (auto bundled = find_bundled_preset(name_or_path)) {
        return *bundled;
    }
    if (!std::filesystem::exists(name_or_path)) {
        throw InvalidArgument("'" + name_or_path +
                              "' is neither a bundled preset nor an existing preset file");
    }
    return load_tf_preset(name_or_path);
}

}  // namespace volray
