// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cfonet {

/// Base class for every error raised by the library. `kind()` is the
/// machine-parsable error class printed by the command-line tool.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error("DataError", message) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& message) : Error("ShapeError", message) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& message) : Error("NumericError", message) {}
};

class ContractError : public Error {
public:
    explicit ContractError(const std::string& message) : Error("ContractError", message) {}
};

class CheckpointError : public Error {
public:
    explicit CheckpointError(const std::string& message) : Error("CheckpointError", message) {}
};

class VersionError : public Error {
public:
    explicit VersionError(const std::string& message) : Error("VersionError", message) {}
};

}  // namespace cfonet
