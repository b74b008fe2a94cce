// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. The performance criterion depends on host
// parallelism, so it runs only with --performance (or --all).
#include <volray/engine.hpp>
#include <volray/error.hpp>
#include <volray/image_io.hpp>
#include <volray/presets.hpp>
#include <volray/synthetic.hpp>
#include <volray/volume_io.hpp>

#include "oracles.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace volray;

namespace {

// Pinned tolerances and sizes.
constexpr int kOracleRays = 256;
constexpr double kOracleTolerance = 1e-12;
constexpr double kOracleSeconds = 10.0;
constexpr double kAbsorptionTolerance = 1e-9;
constexpr double kAbsorptionSeconds = 1.0;
constexpr int kScanSequences = 50;
constexpr double kScanTolerance = 1e-12;
constexpr int kIsoRays = 128;
constexpr int kIsoBisections = 8;
constexpr double kIsoSlack = 1e-6;
constexpr int kDeterminismSize = 128;
constexpr int kPerfVolume = 256;
constexpr int kPerfImage = 512;
constexpr int kPerfWorkers = 8;
constexpr double kPerfMedianMs = 2000.0;
constexpr double kPerfSpeedup = 3.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, format, value);
    return buffer;
}

Ray random_ray_through(std::mt19937_64& rng, const Aabb& box, double jitter_fraction) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const Vec3 dir = normalize({gauss(rng), gauss(rng), gauss(rng)});
    const Vec3 half = box.extent() * 0.5 * jitter_fraction;
    const Vec3 aim = box.center() + Vec3(unit(rng) * half.x, unit(rng) * half.y, unit(rng) * half.z);
    return Ray{aim - dir * (2.0 * length(box.extent())), dir};
}

bool inside(const Aabb& box, const Vec3& p) {
    return p.x >= box.min.x && p.x <= box.max.x && p.y >= box.min.y && p.y <= box.max.y &&
           p.z >= box.min.z && p.z <= box.max.z;
}

Outcome oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> step_dist(0.2, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    long samples_seen = 0;
    for (int n = 0; n < kOracleRays; ++n) {
        const ScalarVolume volume = oracle::random_volume(rng, {16, 16, 16}, {1.0, 0.8, 1.2}, {-3, 2, 0.5});
        const auto points = oracle::random_tf_points(rng, 5);
        const TransferFunction tf(points);
        RaycastConfig config;
        config.early_termination_alpha = 1.0;
        config.step = step_dist(rng);
        config.reference_step = 0.75;
        config.background = {unit(rng), unit(rng), unit(rng)};
        const Ray ray = random_ray_through(rng, volume.bounds(), 0.8);

        const RayResult got = cast_ray(volume, tf, ray, config);

        // Independent pipeline: own sample placement, corner-weight
        // interpolation, segment search, opacity correction and the
        // back-to-front recursion.
        std::vector<RaySample> samples;
        const auto range = intersect_ray_aabb(ray, volume.bounds());
        if (range) {
            for (int k = 0;; ++k) {
                const double t = range->first + (k + 0.5) * config.step;
                if (t > range->second) break;
                const Vec3 p = ray.origin + ray.direction * t;
                if (!inside(volume.bounds(), p)) continue;
                const double s = oracle::trilinear(volume, p);
                Classified c = oracle::classify(points, s);
                c.opacity = 1.0 - std::pow(1.0 - c.opacity, config.step / config.reference_step);
                samples.push_back({t, s, c});
            }
        }
        const oracle::Composite want = oracle::back_to_front(samples, config.background);
        samples_seen += static_cast<long>(samples.size());
        // Accumulated alpha can round to exactly 1 on dense rays, which ends
        // the march with zero remaining weight.
        if (!got.terminated_early && got.samples_taken != static_cast<int>(samples.size())) {
            return {false, "sample count mismatch on ray " + std::to_string(n)};
        }
        for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(got.color[ch] - want.color[ch]));
        worst = std::max(worst, std::abs(got.alpha - want.alpha));
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst <= kOracleTolerance && elapsed < kOracleSeconds;
    return {pass, std::to_string(kOracleRays) + " rays (" + std::to_string(samples_seen) +
                      " samples), max error " + fmt("%.3g", worst) + " (tol " +
                      fmt("%.0e", kOracleTolerance) + "), " + fmt("%.2f", elapsed) + " s (limit " +
                      fmt("%.0f", kOracleSeconds) + " s)"};
}

Outcome analytic_absorption() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    int cases = 0;
    for (const double sigma : {0.1, 0.5, 2.0}) {
        for (const double path : {1.0, 4.0, 16.0}) {
            const Dims dims{2, 2, 2};
            const ScalarVolume volume(dims, {path, 1.0, 1.0}, {}, std::vector<double>(8, 0.5));
            const double alpha_ref = 1.0 - std::exp(-sigma);
            const TransferFunction tf({{0.0, {1, 1, 1}, alpha_ref}, {1.0, {1, 1, 1}, alpha_ref}});
            RaycastConfig config;
            config.early_termination_alpha = 1.0;
            config.step = path / 256.0;
            config.reference_step = 1.0;
            const RayResult r = cast_ray(volume, tf, Ray{{-1.0, 0.5, 0.5}, {1, 0, 0}}, config);
            if (r.samples_taken != 256) {
                return {false, "expected 256 samples, got " + std::to_string(r.samples_taken)};
            }
            worst = std::max(worst, std::abs((1.0 - r.alpha) - std::exp(-sigma * path)));
            ++cases;
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst <= kAbsorptionTolerance && elapsed < kAbsorptionSeconds;
    return {pass, std::to_string(cases) + " (sigma, L) cases, max transmittance error " +
                      fmt("%.3g", worst) + " (tol " + fmt("%.0e", kAbsorptionTolerance) + "), " +
                      fmt("%.3f", elapsed) + " s (limit " + fmt("%.0f", kAbsorptionSeconds) + " s)"};
}

Outcome scan_equivalence() {
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<int> length(1, 80);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int mismatches = 0;
    RaycastConfig config;
    config.background = {0.05, 0.1, 0.15};
    for (int n = 0; n < kScanSequences; ++n) {
        const auto points = oracle::random_tf_points(rng, 5);
        const TransferFunction tf(points);
        const auto samples = oracle::random_samples(rng, length(rng));

        // MIP: first maximum by linear scan.
        std::size_t best = 0;
        for (std::size_t k = 1; k < samples.size(); ++k) {
            if (samples[k].scalar > samples[best].scalar) best = k;
        }
        const RayResult mip = mip_ray(samples, config);
        for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(mip.color[ch] - samples[best].classified.color[ch]));
        if (mip.hit_t != samples[best].t || mip.alpha != 1.0) ++mismatches;

        // Average: mean scalar through the segment-search classifier.
        double sum = 0.0;
        for (const auto& s : samples) sum += s.scalar;
        const Classified mean = oracle::classify(points, sum / static_cast<double>(samples.size()));
        const RayResult avg = average_ray(samples, tf, config);
        for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(avg.color[ch] - mean.color[ch]));

        // Threshold: first qualifying sample.
        config.threshold_value = unit(rng);
        const RayResult thr = threshold_ray(samples, config);
        std::optional<std::size_t> first;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            if (samples[k].scalar >= config.threshold_value) {
                first = k;
                break;
            }
        }
        if (first) {
            for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(thr.color[ch] - samples[*first].classified.color[ch]));
            if (thr.hit_t != samples[*first].t || thr.alpha != 1.0) ++mismatches;
        } else {
            for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(thr.color[ch] - config.background[ch]));
            if (thr.hit_t || thr.alpha != 0.0) ++mismatches;
        }
    }
    const bool pass = worst <= kScanTolerance && mismatches == 0;
    return {pass, std::to_string(kScanSequences) + " sequences x {mip, average, threshold}, max error " +
                      fmt("%.3g", worst) + " (tol " + fmt("%.0e", kScanTolerance) + "), " +
                      std::to_string(mismatches) + " hit/alpha mismatches"};
}

Outcome isosurface_accuracy() {
    // The renderer sees the trilinear reconstruction of the radial field, so
    // the reference radius is where that reconstruction crosses the iso
    // value along each ray, found by a fine scan and 60 bisections on the
    // corner-weight interpolator.
    const int n = 65;
    const double radius = 28.0;
    const ScalarVolume volume = synthetic::radial_sphere(n, 1.0, radius);
    const Vec3 center(32.0, 32.0, 32.0);
    const TransferFunction tf({{0.0, {0, 0, 0}, 0.0}, {1.0, {1, 1, 1}, 1.0}});
    RaycastConfig config;
    config.function = RayFunction::isosurface;
    config.iso_value = 0.5;
    config.step = 0.5;
    config.bisection_iters = kIsoBisections;
    const double tolerance = config.step / std::pow(2.0, kIsoBisections) + kIsoSlack;

    std::mt19937_64 rng(1003);
    double worst = 0.0;
    double worst_analytic = 0.0;
    for (int k = 0; k < kIsoRays; ++k) {
        const Ray ray = random_ray_through(rng, volume.bounds(), 0.15);
        const RayResult r = cast_ray(volume, tf, ray, config);
        if (!r.hit_t) {
            return {false, "ray " + std::to_string(k) + " missed the sphere"};
        }
        const auto range = intersect_ray_aabb(ray, volume.bounds());
        const auto g = [&](double t) { return oracle::trilinear(volume, ray.at(t)) - 0.5; };
        const double fine = config.step / 64.0;
        double lo = range->first;
        double hi = lo;
        while (g(hi) < 0.0) {
            lo = hi;
            hi += fine;
            if (hi > range->second) return {false, "reference scan found no crossing"};
        }
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        const double r_ref = length(ray.at(0.5 * (lo + hi)) - center);
        const double r_hit = length(ray.at(*r.hit_t) - center);
        worst = std::max(worst, std::abs(r_hit - r_ref));
        worst_analytic = std::max(worst_analytic, std::abs(r_hit - radius / 2.0));
    }
    const bool pass = worst <= tolerance;
    return {pass, std::to_string(kIsoRays) + " rays, max hit-radius error " + fmt("%.3g", worst) +
                      " mm (tol step/2^8 + 1e-6 = " + fmt("%.3g", tolerance) +
                      "); distance to the analytic R/2 including reconstruction error " +
                      fmt("%.3g", worst_analytic) + " mm"};
}

Scene sphere_scene() {
    auto volume = std::make_shared<const ScalarVolume>(synthetic::by_name("sphere", 64));
    Scene scene{volume, find_bundled_preset("soft-tissue")->transfer_function(),
                framing_camera(volume->bounds()), RaycastConfig{}};
    scene.config.step = 0.5;
    return scene;
}

Outcome determinism() {
    Scene scene = sphere_scene();
    const int size = kDeterminismSize;
    const auto reference = encode_png(render_frame(scene, size, size, 1).image);
    std::string detail = "workers {1,2,4,8}: ";
    bool identical = true;
    for (const int workers : {2, 4, 8}) {
        identical = identical && encode_png(render_frame(scene, size, size, workers).image) == reference;
    }
    detail += identical ? "byte-identical PNGs" : "PNG bytes differ";

    const Vec3 center = scene.volume->bounds().center();
    scene.camera = orbit_camera(center, 150.0, 0.0, 15.0);
    const auto first = encode_png(render_frame(scene, size, size, 4).image);
    double azimuth = 0.0;
    std::vector<std::uint8_t> last;
    for (int n = 0; n < 8; ++n) {
        azimuth += 45.0;
        scene.camera = orbit_camera(center, 150.0, azimuth, 15.0);
        last = encode_png(render_frame(scene, size, size, 4).image);
    }
    const bool closed = last == first;
    detail += closed ? "; 8 x 45 deg orbit returns the identical first frame"
                     : "; orbit frame differs from the first frame";
    return {identical && closed, detail};
}

double max_channel_difference(const LinearFrame& a, const LinearFrame& b) {
    double worst = 0.0;
    for (std::size_t n = 0; n < a.rgba.size(); ++n) {
        if (n % 4 != 3) worst = std::max(worst, std::abs(a.rgba[n] - b.rgba[n]));
    }
    return worst;
}

Outcome step_convergence() {
    bool pass = true;
    std::string detail;
    for (const char* kind : {"blobs", "phantom"}) {
        auto volume = std::make_shared<const ScalarVolume>(synthetic::by_name(kind, 64));
        Scene scene{volume, find_bundled_preset("soft-tissue")->transfer_function(),
                    framing_camera(volume->bounds()), RaycastConfig{}};
        std::vector<LinearFrame> frames;
        for (const double step : {1.0, 0.5, 0.25}) {
            scene.config.step = step * volume->min_spacing();
            frames.push_back(render_frame_linear(scene, 96, 96, 2).image);
        }
        const double d1 = max_channel_difference(frames[0], frames[1]);
        const double d2 = max_channel_difference(frames[1], frames[2]);
        pass = pass && d2 < d1;
        detail += std::string(detail.empty() ? "" : "; ") + kind + ": |h - h/2| = " + fmt("%.4g", d1) +
                  ", |h/2 - h/4| = " + fmt("%.4g", d2);
    }
    return {pass, detail};
}

template <typename E, typename F>
bool throws(F&& f) {
    try {
        f();
    } catch (const E&) {
        return true;
    } catch (...) {
        return false;
    }
    return false;
}

Outcome ingestion() {
    volray::testing::TempDir dir;
    std::mt19937_64 rng(1004);
    std::uniform_int_distribution<int> level(0, 255);

    const Dims dims{17, 13, 9};
    std::vector<double> samples(dims.voxel_count());
    for (auto& s : samples) s = level(rng) / 255.0;
    samples.front() = 0.0;
    samples.back() = 1.0;
    const ScalarVolume original(dims, {0.7, 1.0, 2.5}, {}, samples);
    save_volume(original, dir / "v.mhd");
    const ScalarVolume reloaded = load_volume(dir / "v.mhd");
    const bool mhd_exact = volray::testing::values(reloaded) == samples &&
                           reloaded.spacing() == original.spacing();

    const ScalarVolume phantom = synthetic::head_phantom(32);
    save_slice_stack(phantom, dir / "slices");
    const ScalarVolume stacked = load_slice_stack(dir / "slices", phantom.spacing());
    double slice_error = 0.0;
    for (std::size_t n = 0; n < phantom.samples().size(); ++n) {
        slice_error = std::max(slice_error, std::abs(stacked.samples()[n] - phantom.samples()[n]));
    }
    const bool slices_ok = slice_error <= 1.0 / 255.0;

    int rejected = 0;
    int fixtures = 0;
    auto header = [&](const std::string& name, const std::string& dims_text, const std::string& type) {
        volray::testing::write_text(dir / (name + ".mhd"),
                                    "NDims = 3\nDimSize = " + dims_text + "\nElementType = " + type +
                                        "\nElementDataFile = " + name + ".raw\n");
        return dir / (name + ".mhd");
    };
    auto expect = [&](bool ok) {
        ++fixtures;
        rejected += ok ? 1 : 0;
    };
    const auto short_u8 = header("short", "4 4 4", "MET_UCHAR");
    write_file_bytes(dir / "short.raw", std::vector<std::uint8_t>(63));
    expect(throws<CorruptData>([&] { (void)load_volume(short_u8); }));
    const auto long_u8 = header("long", "4 4 4", "MET_UCHAR");
    write_file_bytes(dir / "long.raw", std::vector<std::uint8_t>(65));
    expect(throws<CorruptData>([&] { (void)load_volume(long_u8); }));
    const auto odd_u16 = header("odd", "3 3 3", "MET_USHORT");
    write_file_bytes(dir / "odd.raw", std::vector<std::uint8_t>(53));
    expect(throws<CorruptData>([&] { (void)load_volume(odd_u16); }));
    const auto short_f32 = header("shortf", "2 2 2", "MET_FLOAT");
    write_file_bytes(dir / "shortf.raw", std::vector<std::uint8_t>(28));
    expect(throws<CorruptData>([&] { (void)load_volume(short_f32); }));
    const auto missing = header("missing", "2 2 2", "MET_UCHAR");
    expect(throws<CorruptData>([&] { (void)load_volume(missing); }));
    const auto bad_type = header("badtype", "2 2 2", "MET_DOUBLE");
    expect(throws<UnsupportedFormat>([&] { (void)load_volume(bad_type); }));
    const auto bad_dims = header("baddims", "2 1 2", "MET_UCHAR");
    expect(throws<InvalidHeader>([&] { (void)load_volume(bad_dims); }));

    std::filesystem::create_directories(dir / "ragged");
    write_gray_png(GrayImage{4, 4, 8, std::vector<std::uint16_t>(16, 0)}, dir / "ragged" / "a.png");
    write_gray_png(GrayImage{4, 5, 8, std::vector<std::uint16_t>(20, 9)}, dir / "ragged" / "b.png");
    expect(throws<InconsistentStack>([&] { (void)load_slice_stack(dir / "ragged", {1, 1, 1}); }));
    std::filesystem::create_directories(dir / "single");
    write_gray_png(GrayImage{4, 4, 8, std::vector<std::uint16_t>(16, 0)}, dir / "single" / "a.png");
    expect(throws<InvalidArgument>([&] { (void)load_slice_stack(dir / "single", {1, 1, 1}); }));

    const bool pass = mhd_exact && slices_ok && rejected == fixtures;
    return {pass, std::string("uint8 MHD round trip ") + (mhd_exact ? "exact" : "NOT exact") +
                      "; slice stack max error " + fmt("%.4g", slice_error) + " (tol 1/255); " +
                      std::to_string(rejected) + "/" + std::to_string(fixtures) +
                      " malformed fixtures rejected with the expected error class"};
}

Outcome performance() {
    auto volume = std::make_shared<const ScalarVolume>(synthetic::head_phantom(kPerfVolume));
    Scene scene{volume, find_bundled_preset("soft-tissue")->transfer_function(),
                framing_camera(volume->bounds()), RaycastConfig{}};
    scene.config.step = volume->min_spacing();
    (void)render_frame(scene, kPerfImage, kPerfImage, kPerfWorkers);  // warm-up
    const auto rows = run_benchmark(scene, kPerfImage, kPerfImage, {1, kPerfWorkers}, 3);
    const BenchmarkRow& one = rows[0];
    const BenchmarkRow& many = rows[1];
    const bool fast = many.median_ms <= kPerfMedianMs;
    const bool scales = many.speedup >= kPerfSpeedup;
    return {fast && scales,
            "256^3 phantom, 512x512 composite, step 1 voxel: median " + fmt("%.0f", one.median_ms) +
                " ms at 1 worker, " + fmt("%.0f", many.median_ms) + " ms at 8 workers (limit " +
                fmt("%.0f", kPerfMedianMs) + " ms: " + (fast ? "met" : "missed") + "); speedup " +
                fmt("%.2f", many.speedup) + "x (need " + fmt("%.0f", kPerfSpeedup) + "x: " +
                (scales ? "met" : "missed") + "); host hardware threads: " +
                std::to_string(std::thread::hardware_concurrency())};
}

}  // namespace

int main(int argc, char** argv) {
    bool correctness = true;
    bool perf = false;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--performance") {
            correctness = false;
            perf = true;
        } else if (arg == "--all") {
            perf = true;
        } else {
            std::cerr << "usage: acceptance [--performance | --all]\n";
            return 2;
        }
    }

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
    if (correctness) {
        criteria = {{"oracle-equivalence", oracle_equivalence},
                    {"analytic-absorption", analytic_absorption},
                    {"mip-average-threshold-scan", scan_equivalence},
                    {"isosurface-accuracy", isosurface_accuracy},
                    {"determinism", determinism},
                    {"step-refinement-convergence", step_convergence},
                    {"ingestion-round-trips", ingestion}};
    }
    if (perf) {
        criteria.emplace_back("performance-proxy", performance);
    }

    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        failures += outcome.pass ? 0 : 1;
        std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
