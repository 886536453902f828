#pragma once

#include <functional>
#include <vector>

namespace ratiomech::quad {

using Fn = std::function<double(double)>;

/// Composite Simpson on [a,b] with n nodes (n is forced odd, >= 3).
double simpson(const Fn& f, double a, double b, int n);

/// Adaptive Simpson with absolute tolerance; depth-capped, deterministic.
double adaptive(const Fn& f, double a, double b, double tol, int max_depth = 40);

/// 5-point Gauss-Legendre on [a,b]. Exact for polynomials up to degree 9.
double gauss5(const Fn& f, double a, double b);

/// Composite 5-point Gauss-Legendre with `cells` equal subintervals.
double gauss5_composite(const Fn& f, double a, double b, int cells);

/// Cumulative trapezoid of sampled values on an arbitrary ascending grid.
/// out[i] = integral from x[0] to x[i] of the piecewise-linear interpolant.
std::vector<double> trapezoid_cumulative(const std::vector<double>& x,
                                         const std::vector<double>& y);

/// Trapezoid integral of samples on an ascending grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Piecewise-linear interpolation with constant extension outside the grid.
double interp_linear(const std::vector<double>& x, const std::vector<double>& y,
                     double xq);

/// n equally spaced nodes on [a,b].
std::vector<double> linspace(double a, double b, int n);

}  // namespace ratiomech::quad
