// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/camera.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace volray {

/// Entry point behind the `volray` executable. `args` excludes the program
/// name. Returns 0 on success, 1 on runtime errors and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "WxH", both positive.
std::optional<std::pair<int, int>> parse_size(std::string_view text);

/// "px,py,pz;tx,ty,tz;ux,uy,uz;vfov" (perspective).
std::optional<Camera> parse_camera(std::string_view text);

/// Comma-separated positive integers, e.g. "1,2,4".
std::optional<std::vector<int>> parse_int_list(std::string_view text);

}  // namespace volray
