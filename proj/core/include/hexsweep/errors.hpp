#pragma once

#include <stdexcept>
#include <string>

namespace hexsweep {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user-supplied configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Degenerate geometry: non-positive Jacobian, unmatched face nodes, etc.
class MeshError : public Error {
public:
    using Error::Error;
};

/// Cycle detected while leveling a sweep DAG.
class ScheduleError : public Error {
public:
    using Error::Error;
};

/// Pivot collapsed below the singularity threshold in a dense solve.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Scheduler contract violation observed at runtime (counter overshoot,
/// stale upwind data, spawn after shutdown).
class SweepError : public Error {
public:
    using Error::Error;
};

} // namespace hexsweep
