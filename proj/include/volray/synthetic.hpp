// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/volume.hpp>

#include <string_view>

namespace volray::synthetic {

/// f(p) = clamp(1 - |p - c| / radius, 0, 1) with c the box center. Origin is
/// at (0,0,0).
ScalarVolume radial_sphere(int n, double spacing, double radius);

/// Sum of three broad Gaussian blobs rescaled to span [0,1] exactly.
ScalarVolume smooth_blobs(int n, double spacing = 1.0);

/// Head-like phantom: scalp, skull shell, brain, ventricles and a bright
/// lesion as smooth-edged ellipsoids. Values span [0,1].
ScalarVolume head_phantom(int n, double spacing = 1.0);

/// Samples of `value_at(i, j, k)` on an n^3 grid.
template <typename F>
ScalarVolume from_function(Dims dims, Vec3 spacing, F&& value_at) {
    std::vector<double> samples;
    samples.reserve(dims.voxel_count());
    for (int k = 0; k < dims.nz; ++k) {
        for (int j = 0; j < dims.ny; ++j) {
            for (int i = 0; i < dims.nx; ++i) {
                samples.push_back(value_at(i, j, k));
            }
        }
    }
    return ScalarVolume(dims, spacing, Vec3{}, std::move(samples));
}

/// Looks up a generator by name: sphere, blobs or phantom.
ScalarVolume by_name(std::string_view kind, int n, double spacing = 1.0);

}  // namespace volray::synthetic
