// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/volume.hpp>

#include <volray/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace volray {

ScalarVolume::ScalarVolume(Dims dims, Vec3 spacing, Vec3 origin, std::vector<double> samples,
                           ValueRange source_range)
    : dims_(dims),
      spacing_(spacing),
      origin_(origin),
      source_range_(source_range),
      samples_(std::move(samples)) {
    if (dims_.nx < 2 || dims_.ny < 2 || dims_.nz < 2) {
        throw InvalidArgument("volume needs at least 2 voxels per axis, got " +
                              std::to_string(dims_.nx) + "x" + std::to_string(dims_.ny) + "x" +
                              std::to_string(dims_.nz));
    }
    if (!(spacing_.x > 0.0 && spacing_.y > 0.0 && spacing_.z > 0.0)) {
        throw InvalidArgument("voxel spacing must be positive on every axis");
    }
    if (samples_.size() != dims_.voxel_count()) {
        throw InvalidArgument("expected " + std::to_string(dims_.voxel_count()) +
                              " samples, got " + std::to_string(samples_.size()));
    }
    for (std::size_t n = 0; n < samples_.size(); ++n) {
        if (!(samples_[n] >= 0.0 && samples_[n] <= 1.0)) {
            throw InvalidArgument("sample " + std::to_string(n) + " is outside [0,1]");
        }
    }
    bounds_.min = origin_;
    bounds_.max = origin_ + hadamard(Vec3(dims_.nx - 1, dims_.ny - 1, dims_.nz - 1), spacing_);
}

double ScalarVolume::min_spacing() const {
    return std::min({spacing_.x, spacing_.y, spacing_.z});
}

std::optional<double> sample_trilinear(const ScalarVolume& volume, const Vec3& p) {
    const Dims& d = volume.dims();
    const Vec3& o = volume.origin();
    const Vec3& s = volume.spacing();

    const double gx = (p.x - o.x) / s.x;
    const double gy = (p.y - o.y) / s.y;
    const double gz = (p.z - o.z) / s.z;
    // Negated form so NaN coordinates count as outside.
    if (!(gx >= 0.0 && gx <= d.nx - 1 && gy >= 0.0 && gy <= d.ny - 1 && gz >= 0.0 &&
          gz <= d.nz - 1)) {
        return std::nullopt;
    }

    const int i = std::min(static_cast<int>(gx), d.nx - 2);
    const int j = std::min(static_cast<int>(gy), d.ny - 2);
    const int k = std::min(static_cast<int>(gz), d.nz - 2);
    const double fx = gx - i;
    const double fy = gy - j;
    const double fz = gz - k;

    const std::span<const double> v = volume.samples();
    const std::size_t row = static_cast<std::size_t>(d.nx);
    const std::size_t slab = row * static_cast<std::size_t>(d.ny);
    const std::size_t base = volume.index(i, j, k);

    const double c00 = std::lerp(v[base], v[base + 1], fx);
    const double c10 = std::lerp(v[base + row], v[base + row + 1], fx);
    const double c01 = std::lerp(v[base + slab], v[base + slab + 1], fx);
    const double c11 = std::lerp(v[base + slab + row], v[base + slab + row + 1], fx);
    const double c0 = std::lerp(c00, c10, fy);
    const double c1 = std::lerp(c01, c11, fy);
    return std::lerp(c0, c1, fz);
}

std::optional<Vec3> gradient_central(const ScalarVolume& volume, const Vec3& p) {
    const auto center = sample_trilinear(volume, p);
    if (!center) {
        return std::nullopt;
    }
    const Aabb& box = volume.bounds();
    Vec3 gradient;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const double h = volume.spacing()[axis];
        const double lo = box.min[axis];
        const double hi = box.max[axis];
        Vec3 plus = p;
        Vec3 minus = p;
        plus[axis] += h;
        minus[axis] -= h;
        const bool has_plus = plus[axis] <= hi;
        const bool has_minus = minus[axis] >= lo;

        double slope = 0.0;
        if (has_plus && has_minus) {
            slope = (*sample_trilinear(volume, plus) - *sample_trilinear(volume, minus)) / (2.0 * h);
        } else if (has_plus) {
            slope = (*sample_trilinear(volume, plus) - *center) / h;
        } else if (has_minus) {
            slope = (*center - *sample_trilinear(volume, minus)) / h;
        } else {
            // Axis is exactly one voxel thick: difference across the full extent.
            plus[axis] = hi;
            minus[axis] = lo;
            slope = (*sample_trilinear(volume, plus) - *sample_trilinear(volume, minus)) / (hi - lo);
        }
        gradient[axis] = slope;
    }
    return gradient;
}

std::optional<std::pair<double, double>> intersect_ray_aabb(const Ray& ray, const Aabb& box) {
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const double o = ray.origin[axis];
        const double d = ray.direction[axis];
        if (d == 0.0) {
            if (o < box.min[axis] || o > box.max[axis]) {
                return std::nullopt;
            }
            continue;
        }
        double t0 = (box.min[axis] - o) / d;
        double t1 = (box.max[axis] - o) / d;
        if (t0 > t1) {
            std::swap(t0, t1);
        }
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far) {
            return std::nullopt;
        }
    }
    if (t_far < 0.0) {
        return std::nullopt;
    }
    return std::pair{std::max(t_near, 0.0), t_far};
}

Histogram compute_histogram(const ScalarVolume& volume, int bin_count) {
    if (bin_count < 2) {
        throw InvalidArgument("histogram needs at least 2 bins, got " + std::to_string(bin_count));
    }
    Histogram histogram{bin_count, std::vector<std::uint64_t>(static_cast<std::size_t>(bin_count))};
    for (const double s : volume.samples()) {
        const int bin = std::min(static_cast<int>(std::floor(s * bin_count)), bin_count - 1);
        ++histogram.counts[static_cast<std::size_t>(bin)];
    }
    return histogram;
}

NormalizedScalars normalize_scalars(std::span<const double> raw, std::optional<ValueRange> window) {
    if (raw.empty()) {
        throw InvalidArgument("cannot normalize an empty sample sequence");
    }
    NormalizedScalars out;
    out.samples.resize(raw.size());

    ValueRange range;
    if (window) {
        if (!(window->lo < window->hi)) {
            throw InvalidArgument("value window requires lo < hi");
        }
        range = *window;
    } else {
        const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
        range = {*lo, *hi};
        if (range.lo == range.hi) {
            out.source_range = {range.lo, range.lo + 1.0};
            std::fill(out.samples.begin(), out.samples.end(), 0.0);
            return out;
        }
    }

    const double width = range.hi - range.lo;
    for (std::size_t n = 0; n < raw.size(); ++n) {
        const double v = std::clamp(raw[n], range.lo, range.hi);
        out.samples[n] = std::clamp((v - range.lo) / width, 0.0, 1.0);
    }
    out.source_range = range;
    return out;
}

}  // namespace volray
