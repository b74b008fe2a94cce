// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/cli.hpp>

#include <volray/engine.hpp>
#include <volray/error.hpp>
#include <volray/image_io.hpp>
#include <volray/presets.hpp>
#include <volray/server.hpp>
#include <volray/session.hpp>
#include <volray/synthetic.hpp>
#include <volray/volume_io.hpp>

#include "CLI11.hpp"

#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

namespace volray {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::optional<double> parse_double(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return value;
}

std::optional<int> parse_int(std::string_view text) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return value;
}

std::optional<Vec3> parse_triple(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) return std::nullopt;
    Vec3 v;
    for (std::size_t n = 0; n < 3; ++n) {
        const auto value = parse_double(parts[n]);
        if (!value) return std::nullopt;
        v[n] = *value;
    }
    return v;
}

int default_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

/// Flags shared by render, bench and serve.
struct SceneOptions {
    std::string volume;
    std::string slices;
    std::string spacing = "1,1,1";
    std::string tf = "grayscale-ramp";
    std::string size = "512x512";
    std::optional<double> step;
    std::string mode = "composite";
    std::optional<double> iso;
    std::optional<double> threshold;
    bool numeric_sort = false;
};

void add_scene_options(CLI::App& app, SceneOptions& o) {
    app.add_option("--volume", o.volume, "MHD-subset volume header");
    app.add_option("--slices", o.slices, "Directory of grayscale slices (alternative to --volume)");
    app.add_option("--spacing", o.spacing, "Voxel spacing dx,dy,dz in mm for --slices")
        ->capture_default_str();
    app.add_option("--tf", o.tf, "Bundled preset name or preset JSON path")->capture_default_str();
    app.add_option("--size", o.size, "Image size WxH")->capture_default_str();
    app.add_option("--step", o.step, "Sample step in mm (default: smallest voxel spacing)");
    app.add_option("--mode", o.mode, "composite|mip|average|iso|threshold")->capture_default_str();
    app.add_option("--iso", o.iso, "Iso value in [0,1] for --mode iso");
    app.add_option("--threshold", o.threshold, "Threshold in [0,1] for --mode threshold");
    app.add_flag("--numeric-sort", o.numeric_sort,
                 "Order slices by numeric value of digit runs instead of lexicographically");
}

struct LoadedScene {
    Scene scene;
    int width = 0;
    int height = 0;
};

LoadedScene build_scene(const SceneOptions& o) {
    if (o.volume.empty() == o.slices.empty()) {
        throw InvalidArgument("exactly one of --volume or --slices is required");
    }
    const auto size = parse_size(o.size);
    if (!size) {
        throw InvalidArgument("--size must look like 512x512");
    }
    const auto function = parse_ray_function(o.mode);
    if (!function) {
        throw InvalidArgument("--mode must be one of composite, mip, average, iso, threshold");
    }

    std::shared_ptr<const ScalarVolume> volume;
    if (!o.volume.empty()) {
        volume = std::make_shared<const ScalarVolume>(load_volume(o.volume));
    } else {
        const auto spacing = parse_triple(o.spacing);
        if (!spacing) {
            throw InvalidArgument("--spacing must look like 1,1,2.5");
        }
        volume = std::make_shared<const ScalarVolume>(load_slice_stack(
            o.slices, *spacing, o.numeric_sort ? SliceOrder::numeric : SliceOrder::lexicographic));
    }

    const TfPreset preset = resolve_preset(o.tf);
    RaycastConfig config;
    config.function = *function;
    config.step = o.step.value_or(volume->min_spacing());
    config.reference_step = preset.reference_step;
    if (o.iso) config.iso_value = *o.iso;
    if (o.threshold) config.threshold_value = *o.threshold;
    validate_config(config);

    LoadedScene loaded{Scene{volume, preset.transfer_function(), framing_camera(volume->bounds()),
                             config},
                       size->first, size->second};
    return loaded;
}

int report(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << '\n';
    return 1;
}

}  // namespace

std::optional<std::pair<int, int>> parse_size(std::string_view text) {
    const std::size_t x = text.find('x');
    if (x == std::string_view::npos) return std::nullopt;
    const auto w = parse_int(text.substr(0, x));
    const auto h = parse_int(text.substr(x + 1));
    if (!w || !h || *w < 1 || *h < 1) return std::nullopt;
    return std::pair{*w, *h};
}

std::optional<Camera> parse_camera(std::string_view text) {
    const auto parts = split(text, ';');
    if (parts.size() != 4) return std::nullopt;
    const auto position = parse_triple(parts[0]);
    const auto target = parse_triple(parts[1]);
    const auto up = parse_triple(parts[2]);
    const auto vfov = parse_double(parts[3]);
    if (!position || !target || !up || !vfov) return std::nullopt;
    Camera camera;
    camera.position = *position;
    camera.target = *target;
    camera.up = *up;
    camera.vfov_deg = *vfov;
    return camera;
}

std::optional<std::vector<int>> parse_int_list(std::string_view text) {
    std::vector<int> values;
    for (const std::string_view part : split(text, ',')) {
        const auto value = parse_int(part);
        if (!value || *value < 1) return std::nullopt;
        values.push_back(*value);
    }
    return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"volray: software direct volume rendering by raycasting"};
    app.require_subcommand(1);

    SceneOptions render_opts;
    std::string out_path;
    std::string camera_text;
    int render_workers = default_workers();
    CLI::App* render = app.add_subcommand("render", "Render one frame to an image");
    add_scene_options(*render, render_opts);
    render->add_option("--out", out_path, "Output image (.png or .ppm)")->required();
    render->add_option("--camera", camera_text, "px,py,pz;tx,ty,tz;ux,uy,uz;vfov");
    render->add_option("--workers", render_workers, "Render threads")->capture_default_str();

    SceneOptions bench_opts;
    std::string bench_workers = "1," + std::to_string(default_workers());
    int reps = 3;
    std::string csv_path;
    CLI::App* bench = app.add_subcommand("bench", "Time renders across worker counts");
    add_scene_options(*bench, bench_opts);
    bench->add_option("--workers", bench_workers, "Comma-separated worker counts")
        ->capture_default_str();
    bench->add_option("--reps", reps, "Repetitions per worker count")->capture_default_str();
    bench->add_option("--out", csv_path, "CSV report path (default: stdout)");

    SceneOptions serve_opts;
    int port = 8080;
    int serve_workers = default_workers();
    CLI::App* serve = app.add_subcommand("serve", "Stream frames to WebSocket viewers");
    add_scene_options(*serve, serve_opts);
    serve->add_option("--port", port, "TCP port")->capture_default_str();
    serve->add_option("--workers", serve_workers, "Render threads")->capture_default_str();

    std::string synth_kind = "phantom";
    int synth_dims = 128;
    double synth_spacing = 1.0;
    std::string synth_out;
    std::string synth_slices;
    CLI::App* synth = app.add_subcommand("synth", "Write a synthetic test volume");
    synth->add_option("--kind", synth_kind, "sphere|blobs|phantom")->capture_default_str();
    synth->add_option("--dims", synth_dims, "Voxels per axis")->capture_default_str();
    synth->add_option("--spacing", synth_spacing, "Voxel spacing in mm")->capture_default_str();
    synth->add_option("--out", synth_out, "Output .mhd header (a .raw payload is written beside it)");
    synth->add_option("--slices-out", synth_slices, "Also export the volume as a PNG slice stack");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    auto usage_error = [&](const CLI::App& sub, const std::string& message) {
        err << "error: " << message << "\n\n" << sub.help();
        return 2;
    };

    try {
        if (render->parsed()) {
            if (render_opts.volume.empty() && render_opts.slices.empty()) {
                return usage_error(*render, "--volume (or --slices) is required");
            }
            LoadedScene loaded = build_scene(render_opts);
            if (!camera_text.empty()) {
                const auto camera = parse_camera(camera_text);
                if (!camera) {
                    return usage_error(*render, "--camera must look like px,py,pz;tx,ty,tz;ux,uy,uz;vfov");
                }
                validate_camera(*camera);
                loaded.scene.camera = *camera;
            }
            const RenderResult result =
                render_frame(loaded.scene, loaded.width, loaded.height, render_workers);
            save_image(result.image, out_path);
            out << stats_to_json(result.stats).dump() << std::endl;
            return 0;
        }

        if (bench->parsed()) {
            if (bench_opts.volume.empty() && bench_opts.slices.empty()) {
                return usage_error(*bench, "--volume (or --slices) is required");
            }
            if (reps < 1) {
                throw InvalidArgument("--reps must be at least 1");
            }
            const auto workers = parse_int_list(bench_workers);
            if (!workers) {
                throw InvalidArgument("--workers must be a comma-separated list of positive integers");
            }
            const LoadedScene loaded = build_scene(bench_opts);
            const std::string csv = benchmark_csv(
                run_benchmark(loaded.scene, loaded.width, loaded.height, *workers, reps));
            if (csv_path.empty()) {
                out << csv;
            } else {
                std::ofstream file(csv_path);
                file << csv;
                if (!file) {
                    throw Error("cannot write " + csv_path);
                }
            }
            return 0;
        }

        if (serve->parsed()) {
            if (serve_opts.volume.empty() && serve_opts.slices.empty()) {
                return usage_error(*serve, "--volume (or --slices) is required");
            }
            if (port < 0 || port > 65535) {
                throw InvalidArgument("--port must be in [0, 65535]");
            }
            const LoadedScene loaded = build_scene(serve_opts);
            ServerOptions options;
            options.port = static_cast<std::uint16_t>(port);
            options.width = loaded.width;
            options.height = loaded.height;
            options.workers = serve_workers;
            SessionServer server(loaded.scene, options);
            out << "serving on port " << server.port() << std::endl;

            boost::asio::io_context signal_ioc;
            boost::asio::signal_set signals(signal_ioc, SIGINT, SIGTERM);
            signals.async_wait([&server](const boost::system::error_code&, int) { server.stop(); });
            std::thread signal_thread([&signal_ioc] { signal_ioc.run(); });
            server.run();
            signal_ioc.stop();
            signal_thread.join();
            return 0;
        }

        if (synth->parsed()) {
            if (synth_out.empty() && synth_slices.empty()) {
                return usage_error(*synth, "--out or --slices-out is required");
            }
            const ScalarVolume volume = synthetic::by_name(synth_kind, synth_dims, synth_spacing);
            if (!synth_out.empty()) {
                save_volume(volume, synth_out);
            }
            if (!synth_slices.empty()) {
                save_slice_stack(volume, synth_slices);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        return report(e, err);
    }
    return 2;
}

}  // namespace volray
