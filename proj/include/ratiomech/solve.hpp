#pragma once

#include <string>
#include <vector>

#include "ratiomech/common.hpp"
#include "ratiomech/distribution.hpp"
#include "ratiomech/mechanism.hpp"
#include "ratiomech/threshold_curve.hpp"

namespace ratiomech {

/// A mechanism given by a v-threshold rho(k) per ratio: f2 steps from 0 to 1
/// at rho(k).
struct ThresholdMechanismSpec {
    ThresholdCurve rho;
};

struct PostedPriceSearch {
    double rho_star = 0.0;
    double revenue = 0.0;
    /// All refined local maximizers whose revenue is within 1e-8 of the best.
    std::vector<double> near_optimal;
};

struct OptimalityCertificate {
    double candidate_revenue = 0.0;
    double pointwise_bound = 0.0;
    double oracle_best = 0.0;
    double bound_gap = 0.0;   // pointwise_bound - candidate_revenue
    double oracle_gap = 0.0;  // candidate_revenue - oracle_best
    int oracle_k_nodes = 0;
    int oracle_rho_nodes = 0;
    std::string to_json() const;
};

/// Ratio-dependent posted price with psi(k) = phi_k^{-1}(0) (optimal under
/// Condition B). Throws PreconditionError when B fails.
Mechanism solve_condition_b(const Distribution& d);

/// Flat posted price maximizing rho (1 - G_v(rho)): global coarse scan
/// followed by golden-section refinement.
Mechanism solve_posted_price(const Distribution& d);
PostedPriceSearch posted_price_search(const Distribution& d, int scan_nodes = 1000);

/// The revenue-improving step transform: threshold rho(k) = 1 - int_0^1 f2(t,k) dt.
/// Requires Condition A and an input satisfying C1 and C2; asserts the
/// output weakly improves virtual surplus per ratio column.
ThresholdMechanismSpec threshold_improve(const std::vector<double>& v_grid,
                                      const std::vector<double>& k_grid,
                                      const std::vector<std::vector<double>>& f2,
                                      const Distribution& d);

/// Flattens a nondecreasing threshold mechanism into a posted price by the
/// three-case improvement (all-below, interior crossing with the zero curve,
/// all-above). Requires Condition B'.
Mechanism flatten_to_posted_price(const ThresholdMechanismSpec& spec, const Distribution& d);

/// Revenue of the relaxed program: integral of max(phi, 0) against g.
double pointwise_bound(const Distribution& d);

struct OracleResult {
    double revenue = 0.0;
    std::vector<double> rho;  // best nondecreasing threshold per k cell
};

/// Exhaustive search over nondecreasing threshold vectors, with thresholds
/// drawn from an equally spaced rho mesh and piecewise-constant in k over
/// `k_nodes` equal cells of the ratio axis.
OracleResult oracle_best_threshold(const Distribution& d, int k_nodes, int rho_nodes);

OptimalityCertificate certify(const Distribution& d, const Mechanism& candidate, int oracle_k_nodes = 5,
                              int oracle_rho_nodes = 31);

}  // namespace ratiomech
