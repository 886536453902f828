#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ratiomech/common.hpp"

namespace ratiomech {

/// One-dimensional marginal used by the independent-product family.
/// Either the uniform density on [0,1] or a tabulated, piecewise-linear
/// density that is normalized at construction.
class Marginal1D {
  public:
    static Marginal1D uniform();
    static Marginal1D tabulated(std::vector<double> nodes, std::vector<double> density);

    double density(double x) const;
    double cdf(double x) const;
    bool is_uniform() const { return uniform_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }

  private:
    Marginal1D() = default;
    bool uniform_ = true;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> cum_;  // exact cdf at nodes
};

enum class Family { Uniform, Example1, Example2, IndependentProduct, Tabulated };

std::string family_name(Family f);

struct DistributionValidation {
    struct Issue {
        std::string what;
        double v = 0.0;
        double k = 0.0;
        double magnitude = 0.0;
    };
    bool pass = true;
    double joint_normalization_error = 0.0;
    double max_conditional_error = 0.0;
    std::vector<Issue> issues;
};

/// Joint type distribution on V x K = [0,1] x (0,1].
///
/// Built-in families evaluate their closed forms; tabulated grids are
/// bilinearly interpolated and renormalized once at load. Point evaluation is
/// restricted to k >= k_floor; internal quadrature uses the continuous
/// extension of the built-in densities down to k = 0 so that integrals over
/// the full ratio axis stay exact.
class Distribution {
  public:
    static Distribution uniform(NumericConfig cfg = {});
    static Distribution example1(NumericConfig cfg = {});
    static Distribution example2(NumericConfig cfg = {});
    static Distribution independent_product(Marginal1D v_marginal, Marginal1D k_marginal,
                                            NumericConfig cfg = {});
    static Distribution tabulated(std::vector<double> v_nodes, std::vector<double> k_nodes,
                                  std::vector<std::vector<double>> values,  // [iv][ik]
                                  NumericConfig cfg = {});
    /// CSV with header `v,k,density` on a rectangular mesh.
    static Distribution tabulated_from_csv(const std::string& path, NumericConfig cfg = {});

    Family family() const { return family_; }
    const NumericConfig& config() const { return cfg_; }
    double k_floor() const { return cfg_.k_floor; }
    /// Smallest k usable by internal quadrature (0 for built-ins).
    double k_quad_min() const;

    /// Joint density g(v,k). Throws DomainError off the domain.
    double density(const TypePoint& t) const;
    /// Conditional density g(v|k).
    double conditional_density(double v, double k) const;
    /// Conditional cdf G(v|k).
    double conditional_cdf(double v, double k) const;
    /// Marginal cdf of the value coordinate, G_v(p).
    double marginal_v_cdf(double p) const;
    /// Marginal density of the ratio coordinate, g_k(k).
    double marginal_k_density(double k) const;

    DistributionValidation validate() const;

    /// Density without the k >= k_floor restriction (still clamped to the
    /// tabulated mesh for grid families). Used by quadrature over K.
    double density_extended(double v, double k) const;
    double conditional_density_extended(double v, double k) const;
    double conditional_cdf_extended(double v, double k) const;
    double marginal_k_density_extended(double k) const;

  private:
    Distribution() = default;
    void check_domain(double v, double k) const;

    Family family_ = Family::Uniform;
    NumericConfig cfg_;
    // independent product
    std::shared_ptr<Marginal1D> mv_, mk_;
    // tabulated
    std::vector<double> v_nodes_, k_nodes_;
    std::vector<std::vector<double>> values_;   // [iv][ik], normalized
    std::vector<double> col_mass_;              // integral over v at each k node
    std::vector<double> gv_nodes_;              // marginal density of v at v nodes
    std::vector<double> gv_cum_;                // marginal cdf of v at v nodes
    double bilinear(double v, double k) const;
};

}  // namespace ratiomech
