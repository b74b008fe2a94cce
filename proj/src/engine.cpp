// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/engine.hpp>

#include <volray/error.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

namespace volray {

namespace {

struct WorkerCounters {
    std::int64_t samples = 0;
    std::int64_t early_terminated = 0;
};

void check_frame_args(const Scene& scene, int width, int height, int workers) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("frame dimensions must be at least 1x1");
    }
    if (workers < 1) {
        throw InvalidArgument("at least one worker is required");
    }
    if (!scene.volume) {
        throw InvalidArgument("scene has no volume");
    }
    validate_config(scene.config);
}

/// Shared tile traversal. `store(pixel_index, result)` writes one pixel; each
/// pixel index is written by exactly one worker.
template <typename Store>
RenderStats render_tiles(const Scene& scene, int width, int height, int workers, Store&& store) {
    check_frame_args(scene, width, height, workers);
    const auto start = std::chrono::steady_clock::now();

    const ViewRays view(scene.camera, width, height);
    const ScalarVolume& volume = *scene.volume;
    const int tiles_x = (width + kTileSize - 1) / kTileSize;
    const int tiles_y = (height + kTileSize - 1) / kTileSize;
    const int tile_count = tiles_x * tiles_y;

    std::atomic<int> next_tile{0};
    std::vector<WorkerCounters> counters(static_cast<std::size_t>(workers));

    auto work = [&](WorkerCounters& local) {
        for (int tile = next_tile.fetch_add(1); tile < tile_count; tile = next_tile.fetch_add(1)) {
            const int x0 = (tile % tiles_x) * kTileSize;
            const int y0 = (tile / tiles_x) * kTileSize;
            const int x1 = std::min(x0 + kTileSize, width);
            const int y1 = std::min(y0 + kTileSize, height);
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    const RayResult result = cast_ray(volume, scene.tf, view.ray(x, y), scene.config);
                    local.samples += result.samples_taken;
                    local.early_terminated += result.terminated_early ? 1 : 0;
                    store(static_cast<std::size_t>(y) * width + x, result);
                }
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers - 1));
        for (int w = 1; w < workers; ++w) {
            pool.emplace_back(work, std::ref(counters[static_cast<std::size_t>(w)]));
        }
        work(counters[0]);
    }

    RenderStats stats;
    for (const WorkerCounters& c : counters) {
        stats.samples += c.samples;
        stats.early_terminated += c.early_terminated;
    }
    stats.rays = static_cast<std::int64_t>(width) * height;
    stats.tiles = tile_count;
    stats.workers = workers;
    stats.frame_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct Timing {
    double min_ms = 0.0;
    double median_ms = 0.0;
    RenderStats last;
};

Timing time_renders(const Scene& scene, int width, int height, int workers, int repetitions) {
    std::vector<double> times;
    Timing timing;
    for (int r = 0; r < repetitions; ++r) {
        timing.last = render_frame(scene, width, height, workers).stats;
        times.push_back(timing.last.frame_ms);
    }
    timing.min_ms = *std::min_element(times.begin(), times.end());
    timing.median_ms = median(times);
    return timing;
}

}  // namespace

std::uint8_t encode_srgb(double linear) {
    const double c = std::clamp(linear, 0.0, 1.0);
    const double gamma = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
    return static_cast<std::uint8_t>(std::floor(255.0 * gamma + 0.5));
}

std::uint8_t encode_alpha(double alpha) {
    return static_cast<std::uint8_t>(std::floor(255.0 * std::clamp(alpha, 0.0, 1.0) + 0.5));
}

RenderResult render_frame(const Scene& scene, int width, int height, int workers) {
    RenderResult out;
    out.image.width = std::max(width, 0);
    out.image.height = std::max(height, 0);
    out.image.pixels.resize(4 * static_cast<std::size_t>(out.image.width) * out.image.height);
    std::uint8_t* pixels = out.image.pixels.data();
    out.stats = render_tiles(scene, width, height, workers,
                             [pixels](std::size_t index, const RayResult& r) {
                                 std::uint8_t* p = pixels + 4 * index;
                                 p[0] = encode_srgb(r.color.x);
                                 p[1] = encode_srgb(r.color.y);
                                 p[2] = encode_srgb(r.color.z);
                                 p[3] = encode_alpha(r.alpha);
                             });
    return out;
}

LinearRenderResult render_frame_linear(const Scene& scene, int width, int height, int workers) {
    LinearRenderResult out;
    out.image.width = std::max(width, 0);
    out.image.height = std::max(height, 0);
    out.image.rgba.resize(4 * static_cast<std::size_t>(out.image.width) * out.image.height);
    double* rgba = out.image.rgba.data();
    out.stats = render_tiles(scene, width, height, workers,
                             [rgba](std::size_t index, const RayResult& r) {
                                 double* p = rgba + 4 * index;
                                 p[0] = r.color.x;
                                 p[1] = r.color.y;
                                 p[2] = r.color.z;
                                 p[3] = r.alpha;
                             });
    return out;
}

std::vector<BenchmarkRow> run_benchmark(const Scene& scene, int width, int height,
                                        const std::vector<int>& workers_list, int repetitions) {
    if (repetitions < 1) {
        throw InvalidArgument("benchmark needs at least one repetition");
    }
    if (workers_list.empty()) {
        throw InvalidArgument("benchmark needs at least one worker count");
    }
    for (const int w : workers_list) {
        if (w < 1) {
            throw InvalidArgument("worker counts must be at least 1");
        }
    }

    std::vector<BenchmarkRow> rows;
    std::optional<double> baseline_ms;
    for (const int workers : workers_list) {
        const Timing timing = time_renders(scene, width, height, workers, repetitions);
        BenchmarkRow row;
        row.workers = workers;
        row.min_ms = timing.min_ms;
        row.median_ms = timing.median_ms;
        row.rays = timing.last.rays;
        row.samples = timing.last.samples;
        const double seconds = timing.median_ms / 1000.0;
        row.rays_per_s = seconds > 0.0 ? static_cast<double>(row.rays) / seconds : 0.0;
        row.samples_per_s = seconds > 0.0 ? static_cast<double>(row.samples) / seconds : 0.0;
        if (workers == 1 && !baseline_ms) {
            baseline_ms = timing.median_ms;
        }
        rows.push_back(row);
    }
    if (!baseline_ms) {
        baseline_ms = time_renders(scene, width, height, 1, repetitions).median_ms;
    }
    for (BenchmarkRow& row : rows) {
        row.speedup = row.workers == 1 ? 1.0
                      : row.median_ms > 0.0 ? *baseline_ms / row.median_ms
                                            : 0.0;
    }
    return rows;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
    std::string csv = "workers,min_ms,median_ms,rays_per_s,samples_per_s,speedup\n";
    char line[256];
    for (const BenchmarkRow& row : rows) {
        std::snprintf(line, sizeof(line), "%d,%.3f,%.3f,%.1f,%.1f,%.3f\n", row.workers, row.min_ms,
                      row.median_ms, row.rays_per_s, row.samples_per_s, row.speedup);
        csv += line;
    }
    return csv;
}

}  // namespace volray
