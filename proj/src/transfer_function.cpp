// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/transfer_function.hpp>

#include <volray/error.hpp>

#include <cmath>

namespace volray {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::optional<PointViolation> find_point_violation(const std::vector<ControlPoint>& points) {
    if (points.size() < 2) {
        return PointViolation{-1, "a transfer function needs at least 2 control points"};
    }
    for (std::size_t n = 0; n < points.size(); ++n) {
        const ControlPoint& p = points[n];
        const int index = static_cast<int>(n);
        if (!in_unit(p.scalar)) {
            return PointViolation{index, "scalar position outside [0,1]"};
        }
        if (!in_unit(p.opacity)) {
            return PointViolation{index, "opacity outside [0,1]"};
        }
        if (!in_unit(p.color.x) || !in_unit(p.color.y) || !in_unit(p.color.z)) {
            return PointViolation{index, "color channel outside [0,1]"};
        }
        if (n > 0 && !(points[n - 1].scalar < p.scalar)) {
            return PointViolation{index, "scalar positions must be strictly increasing"};
        }
    }
    return std::nullopt;
}

TransferFunction::TransferFunction(std::vector<ControlPoint> points, std::string name)
    : points_(std::move(points)), name_(std::move(name)) {
    if (const auto violation = find_point_violation(points_)) {
        std::string message = "invalid transfer function";
        if (violation->index >= 0) {
            message += " at point " + std::to_string(violation->index);
        }
        throw InvalidArgument(message + ": " + violation->reason);
    }
}

Classified TransferFunction::evaluate(double s) const {
    const ControlPoint& first = points_.front();
    if (s <= first.scalar) {
        return {first.color, first.opacity};
    }
    const ControlPoint& last = points_.back();
    if (s >= last.scalar) {
        return {last.color, last.opacity};
    }
    // Tables are short; a linear scan beats binary search here.
    std::size_t n = 1;
    while (points_[n].scalar <= s) {
        ++n;
    }
    const ControlPoint& a = points_[n - 1];
    const ControlPoint& b = points_[n];
    const double t = (s - a.scalar) / (b.scalar - a.scalar);
    return {Vec3(std::lerp(a.color.x, b.color.x, t), std::lerp(a.color.y, b.color.y, t),
                 std::lerp(a.color.z, b.color.z, t)),
            std::lerp(a.opacity, b.opacity, t)};
}

Classified classify(const TransferFunction& tf, double s) {
    if (!in_unit(s)) {
        throw InvalidArgument("classify expects a scalar in [0,1], got " + std::to_string(s));
    }
    return tf.evaluate(s);
}

double correct_opacity(double alpha, double step, double reference_step) {
    if (!(step > 0.0) || !(reference_step > 0.0)) {
        throw InvalidArgument("opacity correction needs positive step lengths");
    }
    if (step == reference_step || alpha <= 0.0 || alpha >= 1.0) {
        return alpha;
    }
    return 1.0 - std::pow(1.0 - alpha, step / reference_step);
}

}  // namespace volray
