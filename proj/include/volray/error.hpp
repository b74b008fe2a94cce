// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace volray {

/// Root of every error the library raises. Catch this to handle all of them.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Payload does not match what its header promises (size, truncation).
class CorruptData : public Error {
  public:
    using Error::Error;
};

class UnsupportedFormat : public Error {
  public:
    using Error::Error;
};

class InvalidHeader : public Error {
  public:
    using Error::Error;
};

/// Slices of a stack disagree on their dimensions.
class InconsistentStack : public Error {
  public:
    using Error::Error;
};

/// A transfer-function preset violates ordering or range rules.
class InvalidPreset : public Error {
  public:
    InvalidPreset(const std::string& what, int point_index)
        : Error(what), point_index_(point_index) {}

    /// Index of the offending control point, or -1 when the problem is not
    /// tied to a single point.
    int point_index() const noexcept { return point_index_; }

  private:
    int point_index_;
};

}  // namespace volray
