#pragma once

#include <stdexcept>
#include <string>

namespace frm {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument values (non-finite inputs, tau outside (0,1), ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed or insufficient input data (files, series too short, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// Request outside the valid range (window beyond panel, extrapolation, ...).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Lookup of an unknown key (firm id, date, ...).
class LookupError : public Error {
public:
    using Error::Error;
};

/// Rank-deficient regression problem; message names the offending columns.
class RankError : public Error {
public:
    using Error::Error;
};

/// Interior-point solver failed to converge; carries iteration diagnostics.
class SolverError : public Error {
public:
    SolverError(const std::string& msg, int iterations, double gap)
        : Error(msg), iterations(iterations), duality_gap(gap) {}
    int iterations = 0;
    double duality_gap = 0.0;
};

/// Interpolating fit with df = n; the GACV denominator vanishes.
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

/// Constant series cannot be scaled to [0,1].
class DegenerateScaleError : public Error {
public:
    using Error::Error;
};

} // namespace frm
