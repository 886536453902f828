#include "ratiomech/quadrature.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ratiomech::quad {

double simpson(const Fn& f, double a, double b, int n) {
    if (n < 3) n = 3;
    if (n % 2 == 0) ++n;
    const int cells = n - 1;
    const double h = (b - a) / cells;
    double sum = f(a) + f(b);
    for (int i = 1; i < cells; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    }
    return sum * h / 3.0;
}

namespace {

double adaptive_step(const Fn& f, double a, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive(const Fn& f, double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double gauss5(const Fn& f, double a, double b) {
    // Nodes/weights on [-1,1].
    static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                                 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    const double c = 0.5 * (b - a);
    const double d = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) sum += ws[i] * f(c * xs[i] + d);
    return c * sum;
}

double gauss5_composite(const Fn& f, double a, double b, int cells) {
    if (cells < 1) cells = 1;
    const double h = (b - a) / cells;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        sum += gauss5(f, a + i * h, a + (i + 1) * h);
    }
    return sum;
}

std::vector<double> trapezoid_cumulative(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    assert(x.size() == y.size());
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return sum;
}

double interp_linear(const std::vector<double>& x, const std::vector<double>& y,
                     double xq) {
    if (x.empty()) throw std::invalid_argument("interp_linear: empty grid");
    if (xq <= x.front()) return y.front();
    if (xq >= x.back()) return y.back();
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double t = (xq - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    }
    out.back() = b;
    return out;
}

}  // namespace ratiomech::quad
