/*
 * Copyright (c) 2026, hypergrowth contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypergrowth {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation of a hyperbolic model at or past its singularity.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A value violates a type invariant (series ordering, positivity, model sign).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Synthetic generator specification cannot be sampled.
class InvalidSpec : public Error {
public:
    using Error::Error;
};

/// Malformed input text. Carries the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class FitErrorKind {
    too_few_points,
    non_hyperbolic,
    singularity_in_window,
};

class FitError : public Error {
public:
    FitError(FitErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}

    FitErrorKind kind() const noexcept { return kind_; }

private:
    FitErrorKind kind_;
};

enum class RegimeErrorKind {
    insufficient_points,
    negative_proximity,
    degenerate_scale,
};

class RegimeError : public Error {
public:
    RegimeError(RegimeErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}

    RegimeErrorKind kind() const noexcept { return kind_; }

private:
    RegimeErrorKind kind_;
};

enum class TakeoffErrorKind {
    insufficient_points,
    window_outside_data,
};

class TakeoffError : public Error {
public:
    TakeoffError(TakeoffErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}

    TakeoffErrorKind kind() const noexcept { return kind_; }

private:
    TakeoffErrorKind kind_;
};

/// Bad region or analysis configuration, or a region that cannot be resolved.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace hypergrowth
