// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/raycast.hpp>

#include <volray/error.hpp>

#include <algorithm>

namespace volray {

namespace {

constexpr double kAmbient = 0.1;
constexpr double kDiffuse = 0.9;

template <typename Accumulator>
RayResult accumulate(std::span<const RaySample> samples, Accumulator accumulator) {
    for (const RaySample& sample : samples) {
        if (!accumulator.add(sample)) {
            break;
        }
    }
    return accumulator.finish();
}

template <typename Accumulator>
RayResult march_into(const ScalarVolume& volume, const TransferFunction& tf, const Ray& ray,
                     const RaycastConfig& config, Accumulator accumulator) {
    march_ray(volume, tf, ray, config,
              [&](const RaySample& sample) { return accumulator.add(sample); });
    return accumulator.finish();
}

}  // namespace

std::optional<RayFunction> parse_ray_function(std::string_view name) {
    if (name == "composite" || name == "compositing") return RayFunction::compositing;
    if (name == "mip") return RayFunction::mip;
    if (name == "average") return RayFunction::average;
    if (name == "iso" || name == "isosurface") return RayFunction::isosurface;
    if (name == "threshold") return RayFunction::threshold;
    return std::nullopt;
}

std::string_view ray_function_name(RayFunction function) {
    switch (function) {
        case RayFunction::compositing: return "composite";
        case RayFunction::mip: return "mip";
        case RayFunction::average: return "average";
        case RayFunction::isosurface: return "iso";
        case RayFunction::threshold: return "threshold";
    }
    return "composite";
}

void validate_config(const RaycastConfig& config) {
    if (!(config.step > 0.0) || !std::isfinite(config.step)) {
        throw InvalidArgument("step must be a positive length");
    }
    if (!(config.reference_step > 0.0) || !std::isfinite(config.reference_step)) {
        throw InvalidArgument("reference step must be a positive length");
    }
    if (!(config.early_termination_alpha > 0.0 && config.early_termination_alpha <= 1.0)) {
        throw InvalidArgument("early termination alpha must be in (0, 1]");
    }
    if (!(config.iso_value >= 0.0 && config.iso_value <= 1.0)) {
        throw InvalidArgument("iso value must be in [0, 1]");
    }
    if (!(config.threshold_value >= 0.0 && config.threshold_value <= 1.0)) {
        throw InvalidArgument("threshold value must be in [0, 1]");
    }
    if (config.bisection_iters < 0) {
        throw InvalidArgument("bisection iterations must be non-negative");
    }
    const Vec3& b = config.background;
    if (!(b.x >= 0.0 && b.y >= 0.0 && b.z >= 0.0) || !std::isfinite(b.x + b.y + b.z)) {
        throw InvalidArgument("background color must be finite and non-negative");
    }
}

std::vector<RaySample> sample_along_ray(const ScalarVolume& volume, const TransferFunction& tf,
                                        const Ray& ray, const RaycastConfig& config) {
    std::vector<RaySample> samples;
    march_ray(volume, tf, ray, config, [&](const RaySample& sample) {
        samples.push_back(sample);
        return true;
    });
    return samples;
}

RayResult MipAccumulator::finish() const {
    if (samples_ == 0) {
        return {background_, 0.0, 0, false, std::nullopt};
    }
    return {best_.classified.color, 1.0, samples_, false, best_.t};
}

RayResult AverageAccumulator::finish() const {
    if (samples_ == 0) {
        return {background_, 0.0, 0, false, std::nullopt};
    }
    const double mean = std::clamp(sum_ / samples_, 0.0, 1.0);
    return {tf_->evaluate(mean).color, 1.0, samples_, false, std::nullopt};
}

RayResult ThresholdAccumulator::finish() const {
    if (!hit_) {
        return {background_, 0.0, samples_, false, std::nullopt};
    }
    return {hit_->classified.color, 1.0, samples_, false, hit_->t};
}

RayResult composite_ray(std::span<const RaySample> samples, const RaycastConfig& config) {
    return accumulate(samples, CompositeAccumulator(config));
}

RayResult mip_ray(std::span<const RaySample> samples, const RaycastConfig& config) {
    return accumulate(samples, MipAccumulator(config));
}

RayResult average_ray(std::span<const RaySample> samples, const TransferFunction& tf,
                      const RaycastConfig& config) {
    return accumulate(samples, AverageAccumulator(tf, config));
}

RayResult threshold_ray(std::span<const RaySample> samples, const RaycastConfig& config) {
    return accumulate(samples, ThresholdAccumulator(config));
}

RayResult isosurface_ray(const ScalarVolume& volume, const TransferFunction& tf, const Ray& ray,
                         const RaycastConfig& config) {
    const double iso = config.iso_value;
    std::optional<RaySample> previous;
    std::optional<double> hit;
    int taken = 0;
    march_ray(volume, tf, ray, config, [&](const RaySample& sample) {
        ++taken;
        if (previous && (previous->scalar >= iso) != (sample.scalar >= iso)) {
            const bool low_side_above = previous->scalar >= iso;
            double lo = previous->t;
            double hi = sample.t;
            for (int n = 0; n < config.bisection_iters; ++n) {
                const double mid = 0.5 * (lo + hi);
                const auto value = sample_trilinear(volume, ray.at(mid));
                if (!value) {
                    break;
                }
                if ((*value >= iso) == low_side_above) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hit = 0.5 * (lo + hi);
            return false;
        }
        previous = sample;
        return true;
    });

    if (!hit) {
        RayResult miss = miss_result(config);
        miss.samples_taken = taken;
        return miss;
    }

    Vec3 color = tf.evaluate(iso).color;
    if (config.shading == Shading::headlight_lambert) {
        const Vec3 gradient = gradient_central(volume, ray.at(*hit)).value_or(Vec3{});
        color = shade_headlight(color, gradient, ray.direction);
    }
    return {color, 1.0, taken, false, hit};
}

Vec3 shade_headlight(const Vec3& base_color, const Vec3& gradient, const Vec3& view_dir) {
    const double magnitude = length(gradient);
    if (!(magnitude > 0.0)) {
        return base_color;
    }
    const Vec3 normal = -(gradient / magnitude);
    const double facing = std::min(1.0, std::abs(dot(normal, view_dir)));
    return base_color * (kAmbient + kDiffuse * facing);
}

RayResult miss_result(const RaycastConfig& config) {
    return {config.background, 0.0, 0, false, std::nullopt};
}

RayResult cast_ray(const ScalarVolume& volume, const TransferFunction& tf, const Ray& ray,
                   const RaycastConfig& config) {
    const auto range = intersect_ray_aabb(ray, volume.bounds());
    if (!range) {
        return miss_result(config);
    }
    Ray clipped = ray;
    clipped.t_near = range->first;
    clipped.t_far = range->second;

    switch (config.function) {
        case RayFunction::compositing:
            return march_into(volume, tf, clipped, config, CompositeAccumulator(config));
        case RayFunction::mip:
            return march_into(volume, tf, clipped, config, MipAccumulator(config));
        case RayFunction::average:
            return march_into(volume, tf, clipped, config, AverageAccumulator(tf, config));
        case RayFunction::threshold:
            return march_into(volume, tf, clipped, config, ThresholdAccumulator(config));
        case RayFunction::isosurface:
            return isosurface_ray(volume, tf, clipped, config);
    }
    return miss_result(config);
}

}  // namespace volray
