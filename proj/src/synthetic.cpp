// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/synthetic.hpp>

#include <volray/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace volray::synthetic {

namespace {

double smoothstep(double edge0, double edge1, double x) {
    const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

struct Ellipsoid {
    Vec3 center;  // in [-1,1]^3 box units
    Vec3 radii;
    double value;
};

/// 1 inside, 0 outside, with a smooth transition of `edge` box units.
double inside(const Ellipsoid& e, const Vec3& p, double edge) {
    const Vec3 q = p - e.center;
    const double r = std::sqrt((q.x * q.x) / (e.radii.x * e.radii.x) +
                               (q.y * q.y) / (e.radii.y * e.radii.y) +
                               (q.z * q.z) / (e.radii.z * e.radii.z));
    return 1.0 - smoothstep(1.0 - edge, 1.0 + edge, r);
}

std::vector<double> rescale_to_unit(std::vector<double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double a = *lo;
    const double w = *hi - *lo;
    for (double& v : values) {
        v = w > 0.0 ? std::clamp((v - a) / w, 0.0, 1.0) : 0.0;
    }
    return values;
}

}  // namespace

ScalarVolume radial_sphere(int n, double spacing, double radius) {
    const double c = 0.5 * (n - 1) * spacing;
    return from_function(Dims{n, n, n}, Vec3(spacing, spacing, spacing), [&](int i, int j, int k) {
        const Vec3 p(i * spacing - c, j * spacing - c, k * spacing - c);
        return std::clamp(1.0 - length(p) / radius, 0.0, 1.0);
    });
}

ScalarVolume smooth_blobs(int n, double spacing) {
    const Dims dims{n, n, n};
    std::vector<double> values;
    values.reserve(dims.voxel_count());
    const Vec3 centers[] = {{-0.3, -0.2, 0.1}, {0.35, 0.25, -0.2}, {0.0, 0.3, 0.35}};
    const double widths[] = {0.35, 0.3, 0.25};
    const double weights[] = {1.0, 0.8, 0.6};
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const Vec3 p(2.0 * i / (n - 1) - 1.0, 2.0 * j / (n - 1) - 1.0,
                             2.0 * k / (n - 1) - 1.0);
                double v = 0.0;
                for (int b = 0; b < 3; ++b) {
                    const Vec3 q = p - centers[b];
                    v += weights[b] * std::exp(-dot(q, q) / (2.0 * widths[b] * widths[b]));
                }
                values.push_back(v);
            }
        }
    }
    return ScalarVolume(dims, Vec3(spacing, spacing, spacing), Vec3{},
                        rescale_to_unit(std::move(values)));
}

ScalarVolume head_phantom(int n, double spacing) {
    const Ellipsoid scalp{{0.0, 0.0, 0.0}, {0.72, 0.9, 0.82}, 0.3};
    const Ellipsoid skull{{0.0, 0.0, 0.0}, {0.68, 0.86, 0.78}, 0.95};
    const Ellipsoid brain{{0.0, 0.02, 0.0}, {0.62, 0.8, 0.72}, 0.55};
    const Ellipsoid ventricle_l{{-0.12, 0.1, 0.05}, {0.07, 0.22, 0.18}, 0.22};
    const Ellipsoid ventricle_r{{0.12, 0.1, 0.05}, {0.07, 0.22, 0.18}, 0.22};
    const Ellipsoid lesion{{0.3, -0.25, 0.2}, {0.1, 0.09, 0.11}, 0.8};
    const double edge = 0.04;

    const Dims dims{n, n, n};
    std::vector<double> values;
    values.reserve(dims.voxel_count());
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const Vec3 p(2.0 * i / (n - 1) - 1.0, 2.0 * j / (n - 1) - 1.0,
                             2.0 * k / (n - 1) - 1.0);
                // Painter's order: each nested structure replaces the one around it.
                double v = 0.0;
                for (const Ellipsoid* e : {&scalp, &skull, &brain, &ventricle_l, &ventricle_r, &lesion}) {
                    const double w = inside(*e, p, edge);
                    v = v * (1.0 - w) + e->value * w;
                }
                values.push_back(v);
            }
        }
    }
    return ScalarVolume(dims, Vec3(spacing, spacing, spacing), Vec3{},
                        rescale_to_unit(std::move(values)));
}

ScalarVolume by_name(std::string_view kind, int n, double spacing) {
    if (n < 2) {
        throw InvalidArgument("synthetic volumes need at least 2 voxels per axis");
    }
    if (kind == "sphere") return radial_sphere(n, spacing, 0.45 * (n - 1) * spacing);
    if (kind == "blobs") return smooth_blobs(n, spacing);
    if (kind == "phantom") return head_phantom(n, spacing);
    throw InvalidArgument("unknown synthetic volume '" + std::string(kind) +
                          "' (expected sphere, blobs or phantom)");
}

}  // namespace volray::synthetic
