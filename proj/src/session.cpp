// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/session.hpp>

#include <volray/error.hpp>

namespace volray {

namespace {

using nlohmann::json;

void require_known_keys(const json& section, std::string_view name,
                        std::initializer_list<std::string_view> allowed) {
    if (!section.is_object()) {
        throw InvalidArgument(std::string(name) + " must be a JSON object");
    }
    for (const auto& item : section.items()) {
        bool known = false;
        for (const std::string_view key : allowed) {
            known = known || item.key() == key;
        }
        if (!known) {
            throw InvalidArgument("unknown field '" + item.key() + "' in " + std::string(name));
        }
    }
}

double number(const json& section, const char* key) {
    const json& v = section.at(key);
    if (!v.is_number()) {
        throw InvalidArgument(std::string(key) + " must be a number");
    }
    return v.get<double>();
}

Vec3 vec3(const json& section, const char* key) {
    const json& v = section.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
        throw InvalidArgument(std::string(key) + " must be an array of 3 numbers");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Camera merge_camera(Camera camera, const json& section) {
    require_known_keys(section, "camera",
                       {"position", "target", "up", "vfov", "projection", "ortho_height"});
    if (section.contains("position")) camera.position = vec3(section, "position");
    if (section.contains("target")) camera.target = vec3(section, "target");
    if (section.contains("up")) camera.up = vec3(section, "up");
    if (section.contains("vfov")) camera.vfov_deg = number(section, "vfov");
    if (section.contains("ortho_height")) camera.ortho_height = number(section, "ortho_height");
    if (section.contains("projection")) {
        const json& p = section.at("projection");
        if (p == "perspective") {
            camera.projection = Projection::perspective;
        } else if (p == "orthographic") {
            camera.projection = Projection::orthographic;
        } else {
            throw InvalidArgument("projection must be 'perspective' or 'orthographic'");
        }
    }
    validate_camera(camera);
    return camera;
}

RaycastConfig merge_config(RaycastConfig config, const json& section) {
    require_known_keys(section, "config", {"mode", "step", "iso_value", "threshold_value"});
    if (section.contains("mode")) {
        const json& mode = section.at("mode");
        const auto function =
            mode.is_string() ? parse_ray_function(mode.get<std::string>()) : std::nullopt;
        if (!function) {
            throw InvalidArgument("mode must be one of composite, mip, average, iso, threshold");
        }
        config.function = *function;
    }
    if (section.contains("step")) config.step = number(section, "step");
    if (section.contains("iso_value")) config.iso_value = number(section, "iso_value");
    if (section.contains("threshold_value")) {
        config.threshold_value = number(section, "threshold_value");
    }
    validate_config(config);
    return config;
}

}  // namespace

json camera_to_json(const Camera& camera) {
    return {{"position", vec3_json(camera.position)},
            {"target", vec3_json(camera.target)},
            {"up", vec3_json(camera.up)},
            {"vfov", camera.vfov_deg},
            {"projection",
             camera.projection == Projection::perspective ? "perspective" : "orthographic"},
            {"ortho_height", camera.ortho_height}};
}

json config_to_json(const RaycastConfig& config) {
    return {{"mode", std::string(ray_function_name(config.function))},
            {"step", config.step},
            {"iso_value", config.iso_value},
            {"threshold_value", config.threshold_value}};
}

json stats_to_json(const RenderStats& stats) {
    return {{"frame_ms", stats.frame_ms},
            {"rays", stats.rays},
            {"samples", stats.samples},
            {"early_terminated", stats.early_terminated},
            {"tiles", stats.tiles},
            {"workers", stats.workers}};
}

Scene apply_update(const Scene& scene, const json& update) {
    require_known_keys(update, "update message", {"type", "camera", "tf", "config"});
    if (!update.contains("type") || update.at("type") != "update") {
        throw InvalidArgument("expected a message with type 'update'");
    }
    Scene next = scene;
    if (update.contains("camera")) {
        next.camera = merge_camera(next.camera, update.at("camera"));
    }
    if (update.contains("tf")) {
        const json& tf = update.at("tf");
        require_known_keys(tf, "tf", {"points", "reference_step", "name"});
        if (tf.contains("points")) {
            const std::string name =
                tf.contains("name") && tf.at("name").is_string() ? tf.at("name").get<std::string>()
                                                                 : next.tf.name();
            next.tf = TransferFunction(points_from_json(tf.at("points")), name);
        }
        if (tf.contains("reference_step")) {
            next.config.reference_step = number(tf, "reference_step");
        }
    }
    if (update.contains("config")) {
        next.config = merge_config(next.config, update.at("config"));
    }
    validate_config(next.config);
    return next;
}

void coalesce_update(json& pending, const json& incoming) {
    if (!pending.is_object()) {
        pending = incoming;
        return;
    }
    for (const auto& item : incoming.items()) {
        json& target = pending[item.key()];
        if (target.is_object() && item.value().is_object()) {
            for (const auto& field : item.value().items()) {
                target[field.key()] = field.value();
            }
        } else {
            target = item.value();
        }
    }
}

json hello_message(const Scene& scene, const Histogram& histogram,
                   const std::vector<TfPreset>& presets, int width, int height) {
    const ScalarVolume& volume = *scene.volume;
    json preset_list = json::array();
    for (const TfPreset& preset : presets) {
        preset_list.push_back(preset_to_json(preset));
    }
    return {{"type", "hello"},
            {"dims", {volume.dims().nx, volume.dims().ny, volume.dims().nz}},
            {"spacing", vec3_json(volume.spacing())},
            {"bounds", {vec3_json(volume.bounds().min), vec3_json(volume.bounds().max)}},
            {"histogram", histogram.counts},
            {"presets", preset_list},
            {"width", width},
            {"height", height},
            {"camera", camera_to_json(scene.camera)},
            {"config", config_to_json(scene.config)},
            {"tf", {{"name", scene.tf.name()}, {"points", points_to_json(scene.tf.points())}}}};
}

json frame_message(std::uint64_t seq, int width, int height, const RenderStats& stats,
                   std::uint64_t applied_updates) {
    return {{"type", "frame"},
            {"seq", seq},
            {"width", width},
            {"height", height},
            {"stats", stats_to_json(stats)},
            {"applied_updates", applied_updates}};
}

json error_message(std::string_view message) {
    return {{"type", "error"}, {"message", std::string(message)}};
}

SessionState::SessionState(Scene scene, int width, int height)
    : scene_(std::move(scene)), width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("session frame size must be at least 1x1");
    }
}

void SessionState::receive(std::string_view text) {
    json message;
    try {
        message = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("message is not valid JSON: ") + e.what());
    }
    if (!message.is_object()) {
        throw InvalidArgument("message must be a JSON object");
    }
    // Validate against the state the update will actually meet.
    json merged = pending_.value_or(json::object());
    Scene target = pending_ ? apply_update(scene_, merged) : scene_;
    apply_update(target, message);

    coalesce_update(merged, message);
    pending_ = std::move(merged);
    ++pending_count_;
    ++received_updates_;
}

bool SessionState::apply_pending() {
    if (!pending_) {
        return false;
    }
    scene_ = apply_update(scene_, *pending_);
    pending_.reset();
    applied_updates_ += pending_count_;
    pending_count_ = 0;
    return true;
}

RenderResult SessionState::render(int workers) {
    RenderResult result = render_frame(scene_, width_, height_, workers);
    ++frame_seq_;
    return result;
}

}  // namespace volray
