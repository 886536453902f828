#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ratiomech/common.hpp"
#include "ratiomech/threshold_curve.hpp"

namespace ratiomech {

/// A consumption bundle: quantities of the two goods plus the transfer paid.
struct Outcome {
    double a1 = 0.0;
    double a2 = 0.0;
    double t = 0.0;
};

/// Leontief utility v * min(a1/k, a2) - t.
double utility(const TypePoint& type, const Outcome& o);

/// Single price rho: types with v > rho get (k, 1) and pay rho.
struct PostedPrice {
    double rho = 0.0;
};

/// Price psi(k) varies with the reported ratio; psi must be nondecreasing
/// with psi(k)/k nonincreasing.
struct RatioDependent {
    ThresholdCurve psi;
};

/// A non-wasteful mechanism on a rectangular type mesh. Only f2 is stored;
/// f1 is materialized as k * f2, which pins the allocation to the
/// non-wasteful class by construction. Cumulative integrals of f2 in v
/// (trapezoid, i.e. exact for the piecewise-linear interpolant) are cached
/// per ratio column at construction.
class GridMechanism {
  public:
    GridMechanism(std::vector<double> v_grid, std::vector<double> k_grid,
                  std::vector<std::vector<double>> f2,  // [iv][ik]
                  std::vector<std::vector<double>> p);

    const std::vector<double>& v_grid() const { return v_; }
    const std::vector<double>& k_grid() const { return k_; }
    std::size_t nv() const { return v_.size(); }
    std::size_t nk() const { return k_.size(); }

    double f2(std::size_t iv, std::size_t ik) const { return f2_[iv][ik]; }
    double f1(std::size_t iv, std::size_t ik) const { return k_[ik] * f2_[iv][ik]; }
    double payment(std::size_t iv, std::size_t ik) const { return p_[iv][ik]; }
    Outcome outcome(std::size_t iv, std::size_t ik) const;

    /// Cached integral of f2(., k_j) from 0 to v_i.
    double cum(std::size_t iv, std::size_t ik) const { return cum_[iv][ik]; }
    /// Cumulative at a fractional v, by piecewise-linear interpolation.
    double cum_at(double v, std::size_t ik) const;

    double max_abs_payment() const;

  private:
    std::vector<double> v_, k_;
    std::vector<std::vector<double>> f2_, p_, cum_;
};

/// A possibly wasteful mechanism: independent f1, f2, p on a mesh.
struct RawGridMechanism {
    std::vector<double> v_grid, k_grid;
    std::vector<std::vector<double>> f1, f2, p;  // [iv][ik]
};

using Mechanism = std::variant<PostedPrice, RatioDependent, GridMechanism, RawGridMechanism>;

std::string mechanism_kind(const Mechanism& m);

/// Outcome assigned to a report. Ties at the threshold get the null outcome
/// (the "v <= threshold" branch). Grid mechanisms resolve the report to an
/// exact mesh node and throw DomainError for off-mesh reports.
Outcome outcome_at(const Mechanism& m, const TypePoint& report);

/// Validates the two monotonicity conditions on the curve grid and wraps it
/// into a mechanism; a constant curve collapses to a posted price.
Mechanism make_ratio_dependent(const ThresholdCurve& psi, double tol = 1e-12);

/// Payments from an allocation via p(v,k) = p00 + v f2(v,k) - int_0^v f2(t,k) dt.
/// Requires f2 nondecreasing in v per column.
std::vector<std::vector<double>> payment_from_allocation(
    const std::vector<double>& v_grid, const std::vector<double>& k_grid,
    const std::vector<std::vector<double>>& f2, double p00);

/// Per type: keep the binding coordinate, shrink the slack one so that
/// f1 = k f2 exactly. Payments and truthful utilities are unchanged.
GridMechanism non_wasteful_reduction(const RawGridMechanism& m);

/// Sample a closed-form mechanism onto a mesh (payments from its actual
/// price, not the payment identity). Grid inputs are returned as-is when the
/// mesh matches.
GridMechanism to_grid(const Mechanism& m, const std::vector<double>& v_grid,
                      const std::vector<double>& k_grid);

// --- serialization ---
std::string mechanism_to_json(const Mechanism& m);
Mechanism mechanism_from_json(const std::string& text);
void write_mechanism(const Mechanism& m, const std::string& path);
Mechanism read_mechanism(const std::string& path);
/// Grid CSV with header v,k,f1,f2,p.
void write_grid_csv(const GridMechanism& m, const std::string& path);

}  // namespace ratiomech
