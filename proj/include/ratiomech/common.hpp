#pragma once

#include <stdexcept>
#include <string>

namespace ratiomech {

/// An agent type: per-unit value v of the composed bundle and the ratio k
/// of good-1 to good-2 quantities the agent consumes in.
struct TypePoint {
    double v = 0.0;  // in [0,1]
    double k = 1.0;  // in (0,1]
};

/// Centralized numeric knobs. Every tolerance and resolution used by the
/// library lives here so a run is fully described by one record.
struct NumericConfig {
    double k_floor = 1e-3;        // smallest representable ratio; K is open at 0
    int quad_nodes_1d = 1001;     // composite Simpson nodes for 1-D integrals
    int quad_nodes_2d = 201;      // per-axis nodes for 2-D quadrature
    int condition_k_nodes = 101;  // k grid for condition checks and zero curves
    int condition_v_nodes = 201;  // v grid for Condition A sweeps
    double integration_tol = 1e-8;
    double root_tol = 1e-10;
    double strictness_eps = 1e-9;  // slack for "strictly increasing/decreasing"
    double ic_tol = 1e-9;          // deviation gain below this counts as no violation
    double curve_tol = 1e-12;      // threshold-curve validation slack
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvalidCurveError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateDensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ratiomech
