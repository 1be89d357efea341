// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ivb {

/// Invalid configuration, argument or precondition violation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input bytes (bitstream, payload, manifest, image files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failures.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A gated experiment verdict did not hold.
class AssertionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Camera pose too close to gimbal lock to decompose.
class DegeneratePoseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace ivb
