// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/vec3.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace volray {

/// Voxel counts along x, y and z.
struct Dims {
    int nx = 0;
    int ny = 0;
    int nz = 0;

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    int operator[](std::size_t axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Raw value window used to normalize samples into [0,1].
struct ValueRange {
    double lo = 0.0;
    double hi = 1.0;

    friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

/// Axis-aligned box in world millimeters.
struct Aabb {
    Vec3 min;
    Vec3 max;

    Vec3 extent() const { return max - min; }
    Vec3 center() const { return (min + max) * 0.5; }
    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
               p.z <= max.z;
    }
};

/// A viewing ray. `direction` is unit length; the parametric range is in mm.
struct Ray {
    Vec3 origin;
    Vec3 direction{0.0, 0.0, 1.0};
    double t_near = 0.0;
    double t_far = std::numeric_limits<double>::infinity();

    Vec3 at(double t) const { return origin + direction * t; }
};

/// Scalar field on a vertex-centered Cartesian grid. Samples are normalized
/// to [0,1] and stored x-fastest, then y, then z. Immutable once built.
class ScalarVolume {
  public:
    /// Throws InvalidArgument when the sample count does not match `dims`, an
    /// axis has fewer than two voxels, spacing is not positive or a sample is
    /// outside [0,1].
    ScalarVolume(Dims dims, Vec3 spacing, Vec3 origin, std::vector<double> samples,
                 ValueRange source_range = {});

    const Dims& dims() const { return dims_; }
    const Vec3& spacing() const { return spacing_; }
    const Vec3& origin() const { return origin_; }
    const ValueRange& source_range() const { return source_range_; }
    std::span<const double> samples() const { return samples_; }

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims_.nx) *
                   (static_cast<std::size_t>(j) +
                    static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(k));
    }
    double at(int i, int j, int k) const { return samples_[index(i, j, k)]; }

    /// World position of voxel (i, j, k).
    Vec3 voxel_position(int i, int j, int k) const {
        return origin_ + hadamard(Vec3(i, j, k), spacing_);
    }

    /// [origin, origin + (dims - 1) * spacing] per axis.
    const Aabb& bounds() const { return bounds_; }

    double min_spacing() const;

  private:
    Dims dims_;
    Vec3 spacing_;
    Vec3 origin_;
    ValueRange source_range_;
    std::vector<double> samples_;
    Aabb bounds_;
};

struct Histogram {
    int bin_count = 0;
    std::vector<std::uint64_t> counts;
};

/// Trilinear blend of the 8 voxels enclosing `p`; absent outside the bounds.
/// Grid points reproduce the stored value exactly and the result never leaves
/// the [min, max] of the enclosing corners.
std::optional<double> sample_trilinear(const ScalarVolume& volume, const Vec3& p);

/// Gradient in 1/mm by central differences of sample_trilinear at one voxel
/// spacing. Falls back to one-sided differences within one voxel of a face.
std::optional<Vec3> gradient_central(const ScalarVolume& volume, const Vec3& p);

/// Slab-method intersection. Returns (t_near, t_far) with t_near clamped at 0
/// when the origin is inside, or absent on a miss.
std::optional<std::pair<double, double>> intersect_ray_aabb(const Ray& ray, const Aabb& box);

/// Bin b counts voxels with floor(sample * bin_count) == b; a sample of
/// exactly 1.0 lands in the last bin. Throws InvalidArgument for bin_count < 2.
Histogram compute_histogram(const ScalarVolume& volume, int bin_count);

struct NormalizedScalars {
    std::vector<double> samples;
    ValueRange source_range;
};

/// Maps raw element values into [0,1]. With a window, values are clamped to it
/// first; without one the data's own (min, max) is used. A constant input maps
/// to all zeros with source range (v, v + 1).
NormalizedScalars normalize_scalars(std::span<const double> raw,
                                    std::optional<ValueRange> window = std::nullopt);

}  // namespace volray
