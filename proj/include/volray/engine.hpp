// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/camera.hpp>
#include <volray/raycast.hpp>
#include <volray/transfer_function.hpp>
#include <volray/volume.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace volray {

/// Everything needed to render one frame. The volume is shared because
/// scenes are copied freely (sessions, benchmarks) and volumes are large.
struct Scene {
    std::shared_ptr<const ScalarVolume> volume;
    TransferFunction tf;
    Camera camera;
    RaycastConfig config;
};

/// 8-bit sRGB RGBA, row-major, top-left origin.
struct FrameImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 4

    const std::uint8_t* pixel(int x, int y) const {
        return pixels.data() + 4 * (static_cast<std::size_t>(y) * width + x);
    }
};

/// Linear-light RGBA as produced by the ray functions, before encoding.
struct LinearFrame {
    int width = 0;
    int height = 0;
    std::vector<double> rgba;  // width * height * 4
};

struct RenderStats {
    double frame_ms = 0.0;
    std::int64_t rays = 0;
    std::int64_t samples = 0;
    std::int64_t early_terminated = 0;
    std::int64_t tiles = 0;
    int workers = 0;
};

struct RenderResult {
    FrameImage image;
    RenderStats stats;
};

struct LinearRenderResult {
    LinearFrame image;
    RenderStats stats;
};

inline constexpr int kTileSize = 32;

/// round(255 * srgb_gamma(clamp(linear, 0, 1))), rounding half up.
std::uint8_t encode_srgb(double linear);
/// round(255 * clamp(alpha, 0, 1)), rounding half up.
std::uint8_t encode_alpha(double alpha);

/// Renders every pixel of a width x height image: generate the ray, clip it
/// to the volume and evaluate the configured ray function. The image is cut
/// into 32x32 tiles shared among `workers` threads; each tile owns a disjoint
/// slice of the output so the bytes never depend on the worker count.
/// Throws InvalidArgument for zero dimensions or workers.
RenderResult render_frame(const Scene& scene, int width, int height, int workers);

/// Same traversal as render_frame but keeps the unencoded linear values.
LinearRenderResult render_frame_linear(const Scene& scene, int width, int height, int workers);

struct BenchmarkRow {
    int workers = 0;
    double min_ms = 0.0;
    double median_ms = 0.0;
    double rays_per_s = 0.0;
    double samples_per_s = 0.0;
    double speedup = 0.0;  // median(workers = 1) / median(this row)
    std::int64_t rays = 0;
    std::int64_t samples = 0;
};

/// Renders the scene `repetitions` times per worker count. A workers = 1
/// baseline is measured separately when the list does not contain it.
std::vector<BenchmarkRow> run_benchmark(const Scene& scene, int width, int height,
                                        const std::vector<int>& workers_list, int repetitions);

/// `workers,min_ms,median_ms,rays_per_s,samples_per_s,speedup` plus one row
/// per entry.
std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);

}  // namespace volray
