#pragma once

#include <string>
#include <vector>

#include "ratiomech/common.hpp"

namespace ratiomech {

/// A function k -> threshold in [0,1], stored on an ascending k grid and
/// evaluated by piecewise-linear interpolation (constant beyond the ends).
/// Houses price curves psi(k), improvement thresholds rho(k), and zero
/// curves of the virtual valuation.
class ThresholdCurve {
  public:
    ThresholdCurve() = default;
    ThresholdCurve(std::vector<double> k_grid, std::vector<double> values);

    static ThresholdCurve constant(double value, double k_lo, double k_hi);

    double operator()(double k) const;
    const std::vector<double>& k_grid() const { return k_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return k_.size(); }

    bool is_constant(double tol = 1e-12) const;

    /// psi(k) <= psi(k') for grid k < k', within tol.
    bool nondecreasing(double tol = 1e-12) const;
    /// (k/k') psi(k') <= psi(k) for all grid pairs k < k', within tol.
    /// Equivalently psi(k)/k nonincreasing.
    bool ratio_scaled_monotone(double tol = 1e-12) const;

    void write_csv(const std::string& path, const std::string& value_header) const;

  private:
    std::vector<double> k_, values_;
};

}  // namespace ratiomech
