// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/camera.hpp>

#include <volray/error.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace volray {

namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

void validate_camera(const Camera& camera) {
    const Vec3 axis = camera.target - camera.position;
    if (axis == Vec3{}) {
        throw InvalidArgument("camera position and target coincide");
    }
    const double up_len = length(camera.up);
    if (!(up_len > 0.0) || length(cross(axis, camera.up)) <= 1e-12 * length(axis) * up_len) {
        throw InvalidArgument("camera up vector is parallel to the view direction");
    }
    if (camera.projection == Projection::perspective &&
        !(camera.vfov_deg > 0.0 && camera.vfov_deg < 180.0)) {
        throw InvalidArgument("vertical field of view must be in (0, 180) degrees");
    }
    if (camera.projection == Projection::orthographic && !(camera.ortho_height > 0.0)) {
        throw InvalidArgument("orthographic height must be positive");
    }
}

ViewRays::ViewRays(const Camera& camera, int width, int height)
    : projection_(camera.projection), position_(camera.position), width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be at least 1x1");
    }
    validate_camera(camera);
    forward_ = normalize(camera.target - camera.position);
    right_ = normalize(cross(forward_, camera.up));
    up_ = cross(right_, forward_);
    half_height_ = projection_ == Projection::perspective ? std::tan(radians(camera.vfov_deg) / 2.0)
                                                          : camera.ortho_height / 2.0;
    half_width_ = half_height_ * static_cast<double>(width) / static_cast<double>(height);
}

Ray ViewRays::ray(int px, int py) const {
    const double u = ((px + 0.5) / width_ * 2.0 - 1.0) * half_width_;
    const double v = (1.0 - (py + 0.5) / height_ * 2.0) * half_height_;
    Ray r;
    if (projection_ == Projection::perspective) {
        r.origin = position_;
        r.direction = normalize(forward_ + right_ * u + up_ * v);
    } else {
        r.origin = position_ + right_ * u + up_ * v;
        r.direction = forward_;
    }
    return r;
}

Ray generate_ray(const Camera& camera, int px, int py, int width, int height) {
    if (width < 1 || height < 1 || px < 0 || px >= width || py < 0 || py >= height) {
        throw InvalidArgument("pixel (" + std::to_string(px) + ", " + std::to_string(py) +
                              ") outside a " + std::to_string(width) + "x" +
                              std::to_string(height) + " image");
    }
    return ViewRays(camera, width, height).ray(px, py);
}

Camera orbit_camera(const Vec3& center, double distance, double azimuth_deg, double elevation_deg,
                    double vfov_deg) {
    const double az = radians(std::fmod(azimuth_deg, 360.0));
    const double el = radians(std::fmod(elevation_deg, 360.0));
    Camera camera;
    camera.target = center;
    camera.position = center + Vec3(std::cos(el) * std::sin(az), std::sin(el),
                                    std::cos(el) * std::cos(az)) *
                                   distance;
    camera.up = {0.0, 1.0, 0.0};
    camera.vfov_deg = vfov_deg;
    return camera;
}

Camera framing_camera(const Aabb& bounds, double vfov_deg) {
    const double radius = length(bounds.extent()) / 2.0;
    const double distance = 1.05 * radius / std::sin(radians(vfov_deg) / 2.0);
    Camera camera;
    camera.target = bounds.center();
    camera.position = camera.target + Vec3(0.0, 0.0, distance);
    camera.vfov_deg = vfov_deg;
    return camera;
}

}  // namespace volray
