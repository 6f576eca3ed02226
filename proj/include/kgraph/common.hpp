#pragma once

#include <stdexcept>
#include <string>

namespace kgraph {

// Base error for all library failures that are not programming bugs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated geometric/analytic precondition (point outside domain, negative
// warping, unbounded profile, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Point in the 2-parameter leaf chart: (r, theta) on rotationally symmetric
// leaves, (x, y) on the flat Cartesian leaf.  Radial (1-d) problems use b = 0.
struct LeafPoint {
    double a = 0.0;
    double b = 0.0;
};

// Tangent vector components in the coordinate basis (d/da, d/db) of the chart.
struct LeafVector {
    double a = 0.0;
    double b = 0.0;
};

// Shortest-float formatting used by every file writer: round-trip safe,
// locale-independent, byte-stable across runs.
std::string fmt17(double x);

} // namespace kgraph
