// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace moelab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// NaN or otherwise unusable floating point input.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Index outside the valid range (class targets, token ids, row selection).
class IndexError : public Error {
public:
    using Error::Error;
};

/// A caller broke an API precondition (non-scalar loss, double backward, empty input).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value (k > N, negative alpha, bad rates, missing files).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Token id outside the model vocabulary.
class VocabularyError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace moelab
