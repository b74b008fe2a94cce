// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <volray/vec3.hpp>

#include <optional>
#include <string>
#include <vector>

namespace volray {

/// One row of the classification table. `opacity` is the per-sample alpha at
/// the reference step length; `color` is linear-light.
struct ControlPoint {
    double scalar = 0.0;
    Vec3 color;
    double opacity = 0.0;

    friend bool operator==(const ControlPoint&, const ControlPoint&) = default;
};

struct Classified {
    Vec3 color;
    double opacity = 0.0;
};

/// Where a control-point table breaks the transfer-function rules.
struct PointViolation {
    int index = -1;
    std::string reason;
};

/// First rule violation in `points`, if any: fewer than two points, a value
/// outside [0,1], or scalar positions that are not strictly increasing.
std::optional<PointViolation> find_point_violation(const std::vector<ControlPoint>& points);

/// Piecewise-linear joint color + opacity map over normalized scalars.
class TransferFunction {
  public:
    /// Throws InvalidArgument if the table breaks any rule checked by
    /// find_point_violation.
    explicit TransferFunction(std::vector<ControlPoint> points, std::string name = {});

    const std::vector<ControlPoint>& points() const { return points_; }
    const std::string& name() const { return name_; }

    /// Unchecked classification for hot loops; `s` must already be in [0,1].
    Classified evaluate(double s) const;

  private:
    std::vector<ControlPoint> points_;
    std::string name_;
};

/// Linear interpolation between the bracketing control points, clamped to the
/// end points outside the table. Throws InvalidArgument for s outside [0,1].
Classified classify(const TransferFunction& tf, double s);

/// Re-expresses an alpha defined at `reference_step` for a sample spacing of
/// `step`: 1 - (1 - alpha)^(step / reference_step).
double correct_opacity(double alpha, double step, double reference_step);

}  // namespace volray
