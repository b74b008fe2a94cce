// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/transfer_function.hpp>
#include <volray/vec3.hpp>
#include <volray/volume.hpp>

#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace volray {

enum class RayFunction { compositing, mip, average, isosurface, threshold };
enum class Shading { none, headlight_lambert };

/// Accepts composite|compositing|mip|average|iso|isosurface|threshold.
std::optional<RayFunction> parse_ray_function(std::string_view name);
std::string_view ray_function_name(RayFunction function);

struct RaycastConfig {
    RayFunction function = RayFunction::compositing;
    double step = 1.0;            // mm between samples
    double reference_step = 1.0;  // mm at which TF opacities are defined
    double early_termination_alpha = 0.999;
    Vec3 background{0.0, 0.0, 0.0};
    double iso_value = 0.5;
    double threshold_value = 0.5;
    int bisection_iters = 8;
    Shading shading = Shading::headlight_lambert;
};

/// Throws InvalidArgument when a numeric knob is out of range.
void validate_config(const RaycastConfig& config);

struct RaySample {
    double t = 0.0;
    double scalar = 0.0;
    Classified classified;
};

struct RayResult {
    Vec3 color;
    double alpha = 0.0;
    int samples_taken = 0;
    bool terminated_early = false;
    std::optional<double> hit_t;
};

/// Visits evenly spaced samples t_k = t_near + (k + 0.5) * step while
/// t_k <= t_far, skipping positions outside the volume. Each sample carries
/// its classification with opacity corrected for the step length. `visit`
/// returns false to stop the march. A ray with an unbounded far end is first
/// clipped to the volume bounds.
template <typename Visitor>
void march_ray(const ScalarVolume& volume, const TransferFunction& tf, const Ray& ray,
               const RaycastConfig& config, Visitor&& visit) {
    double t_near = ray.t_near;
    double t_far = ray.t_far;
    if (!std::isfinite(t_far)) {
        const auto clipped = intersect_ray_aabb(ray, volume.bounds());
        if (!clipped) {
            return;
        }
        t_far = clipped->second;
    }
    for (long k = 0;; ++k) {
        const double t = t_near + (static_cast<double>(k) + 0.5) * config.step;
        if (!(t <= t_far)) {
            break;
        }
        const auto scalar = sample_trilinear(volume, ray.at(t));
        if (!scalar) {
            continue;
        }
        RaySample sample{t, *scalar, tf.evaluate(*scalar)};
        sample.classified.opacity =
            correct_opacity(sample.classified.opacity, config.step, config.reference_step);
        if (!visit(sample)) {
            break;
        }
    }
}

std::vector<RaySample> sample_along_ray(const ScalarVolume& volume, const TransferFunction& tf,
                                        const Ray& ray, const RaycastConfig& config);

/// Front-to-back emission-absorption compositing with associated colors:
///   C += (1 - A) * alpha_k * c_k,  A += (1 - A) * alpha_k
/// which is the discrete form of the ray integral where each emitted term is
/// attenuated by the product of the transparencies in front of it. Stops once
/// A reaches early_termination_alpha.
class CompositeAccumulator {
  public:
    explicit CompositeAccumulator(const RaycastConfig& config)
        : stop_alpha_(config.early_termination_alpha), background_(config.background) {}

    /// Returns false once accumulation has terminated.
    bool add(const RaySample& sample) {
        const double alpha = sample.classified.opacity;
        ++samples_;
        if (alpha > 0.0) {
            const double weight = (1.0 - alpha_) * alpha;
            color_ += sample.classified.color * weight;
            alpha_ += weight;
        }
        if (alpha_ >= stop_alpha_) {
            terminated_ = true;
            return false;
        }
        return true;
    }

    RayResult finish() const {
        RayResult result;
        result.color = color_ + background_ * (1.0 - alpha_);
        result.alpha = alpha_;
        result.samples_taken = samples_;
        result.terminated_early = terminated_;
        return result;
    }

  private:
    double stop_alpha_;
    Vec3 background_;
    Vec3 color_;
    double alpha_ = 0.0;
    int samples_ = 0;
    bool terminated_ = false;
};

/// Largest scalar along the ray; reports the first sample attaining it.
class MipAccumulator {
  public:
    explicit MipAccumulator(const RaycastConfig& config) : background_(config.background) {}

    bool add(const RaySample& sample) {
        if (samples_ == 0 || sample.scalar > best_.scalar) {
            best_ = sample;
        }
        ++samples_;
        return true;
    }

    RayResult finish() const;

  private:
    Vec3 background_;
    RaySample best_;
    int samples_ = 0;
};

/// Mean scalar along the ray, classified through the transfer function.
class AverageAccumulator {
  public:
    AverageAccumulator(const TransferFunction& tf, const RaycastConfig& config)
        : tf_(&tf), background_(config.background) {}

    bool add(const RaySample& sample) {
        sum_ += sample.scalar;
        ++samples_;
        return true;
    }

    RayResult finish() const;

  private:
    const TransferFunction* tf_;
    Vec3 background_;
    double sum_ = 0.0;
    int samples_ = 0;
};

/// First sample whose scalar reaches threshold_value, shown with its own
/// classified color.
class ThresholdAccumulator {
  public:
    explicit ThresholdAccumulator(const RaycastConfig& config)
        : threshold_(config.threshold_value), background_(config.background) {}

    bool add(const RaySample& sample) {
        ++samples_;
        if (sample.scalar >= threshold_) {
            hit_ = sample;
            return false;
        }
        return true;
    }

    RayResult finish() const;

  private:
    double threshold_;
    Vec3 background_;
    std::optional<RaySample> hit_;
    int samples_ = 0;
};

RayResult composite_ray(std::span<const RaySample> samples, const RaycastConfig& config);
RayResult mip_ray(std::span<const RaySample> samples, const RaycastConfig& config);
RayResult average_ray(std::span<const RaySample> samples, const TransferFunction& tf,
                      const RaycastConfig& config);
RayResult threshold_ray(std::span<const RaySample> samples, const RaycastConfig& config);

/// Marches until (scalar - iso_value) changes sign between consecutive
/// in-volume samples, then refines the crossing with bisection_iters halvings
/// of the bracketing interval. The hit is the midpoint of the final bracket.
RayResult isosurface_ray(const ScalarVolume& volume, const TransferFunction& tf, const Ray& ray,
                         const RaycastConfig& config);

/// Two-sided headlight Lambert term: base * (0.1 + 0.9 * |n . view_dir|) with
/// n the normalized gradient. A zero gradient gets full diffuse.
Vec3 shade_headlight(const Vec3& base_color, const Vec3& gradient, const Vec3& view_dir);

/// Result for a ray that never reaches the volume: background at zero alpha.
RayResult miss_result(const RaycastConfig& config);

/// Clips `ray` to the volume and evaluates the configured ray function
/// without materializing the sample list.
RayResult cast_ray(const ScalarVolume& volume, const TransferFunction& tf, const Ray& ray,
                   const RaycastConfig& config);

}  // namespace volray
