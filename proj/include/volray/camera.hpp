// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/vec3.hpp>
#include <volray/volume.hpp>

namespace volray {

enum class Projection { perspective, orthographic };

struct Camera {
    Vec3 position{0.0, 0.0, 10.0};
    Vec3 target{0.0, 0.0, 0.0};
    Vec3 up{0.0, 1.0, 0.0};
    Projection projection = Projection::perspective;
    double vfov_deg = 30.0;     // perspective only
    double ortho_height = 1.0;  // mm, orthographic only

    friend bool operator==(const Camera&, const Camera&) = default;
};

/// Throws InvalidArgument when position == target, up is parallel to the view
/// axis, vfov is outside (0, 180) or ortho_height is not positive.
void validate_camera(const Camera& camera);

/// Precomputed image-plane basis for one camera and image size. Pixel (0,0)
/// is top-left; rays pass through pixel centers and pixels are square.
class ViewRays {
  public:
    ViewRays(const Camera& camera, int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }

    /// Unchecked; callers guarantee 0 <= px < width and 0 <= py < height.
    Ray ray(int px, int py) const;

  private:
    Projection projection_;
    Vec3 position_;
    Vec3 forward_;
    Vec3 right_;
    Vec3 up_;
    double half_width_ = 0.0;
    double half_height_ = 0.0;
    int width_ = 0;
    int height_ = 0;
};

/// Viewing ray through the center of pixel (px, py) with t range (0, +inf).
/// Throws InvalidArgument for pixels outside the image or invalid cameras.
Ray generate_ray(const Camera& camera, int px, int py, int width, int height);

/// Perspective camera on a sphere around `center`: position is
/// center + distance * (cos el * sin az, sin el, cos el * cos az) with world +y
/// up. Angles are reduced modulo 360 so a full turn reproduces the start view.
Camera orbit_camera(const Vec3& center, double distance, double azimuth_deg, double elevation_deg,
                    double vfov_deg = 30.0);

/// Perspective camera looking down -z at the volume center, backed off far
/// enough that the bounding sphere fits the vertical field of view.
Camera framing_camera(const Aabb& bounds, double vfov_deg = 30.0);

}  // namespace volray
