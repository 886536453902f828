#include "ratiomech/threshold_curve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ratiomech/quadrature.hpp"

namespace ratiomech {

ThresholdCurve::ThresholdCurve(std::vector<double> k_grid, std::vector<double> values)
    : k_(std::move(k_grid)), values_(std::move(values)) {
    if (k_.size() != values_.size() || k_.empty()) {
        throw std::invalid_argument("ThresholdCurve: grid/value size mismatch");
    }
    for (std::size_t i = 1; i < k_.size(); ++i) {
        if (k_[i] <= k_[i - 1]) {
            throw std::invalid_argument("ThresholdCurve: k grid must be strictly ascending");
        }
    }
}

ThresholdCurve ThresholdCurve::constant(double value, double k_lo, double k_hi) {
    return ThresholdCurve({k_lo, k_hi}, {value, value});
}

double ThresholdCurve::operator()(double k) const {
    if (k_.size() == 1) return values_[0];
    return quad::interp_linear(k_, values_, k);
}

bool ThresholdCurve::is_constant(double tol) const {
    for (double x : values_) {
        if (std::abs(x - values_[0]) > tol) return false;
    }
    return true;
}

bool ThresholdCurve::nondecreasing(double tol) const {
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] < values_[i - 1] - tol) return false;
    }
    return true;
}

bool ThresholdCurve::ratio_scaled_monotone(double tol) const {
    // psi(k)/k nonincreasing on the grid <=> (k/k') psi(k') <= psi(k) for all pairs
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] / k_[i] > values_[i - 1] / k_[i - 1] + tol) return false;
    }
    return true;
}

void ThresholdCurve::write_csv(const std::string& path, const std::string& value_header) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "k," << value_header << "\n";
    char buf[64];
    for (std::size_t i = 0; i < k_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", k_[i], values_[i]);
        out << buf;
    }
}

}  // namespace ratiomech
