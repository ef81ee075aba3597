// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file types.hpp
 * @brief Scalar/matrix aliases and the exception hierarchy shared by all
 *        modules.
 *
 * Errors are reported by exception. Each subclass corresponds to one failure
 * category the CLI maps to an exit code: configuration problems (exit 2) vs.
 * numerical check failures (exit 1).
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bethe {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

/// Base class for everything thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad TreeSpec, malformed config file, unknown name.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Requested lattice or dense problem exceeds the configured size cap.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Argument violates an operation precondition (index out of range,
/// non-adjacent sites, parameter on the wrong side of a phase boundary).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A numerical procedure failed: eigensolver non-convergence, missing
/// secular roots, near-singular resolvent, no coalescence in a bracket.
class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace bethe
