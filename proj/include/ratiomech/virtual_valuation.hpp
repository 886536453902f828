#pragma once

#include <string>
#include <vector>

#include "ratiomech/common.hpp"
#include "ratiomech/distribution.hpp"
#include "ratiomech/threshold_curve.hpp"

namespace ratiomech {

enum class Condition { A, B, Bprime };

std::string condition_name(Condition c);

struct ConditionVerdict {
    Condition condition = Condition::A;
    bool holds = false;
    struct Witness {
        double v = 0.0;   // location in v (Condition A) or first k of a violating pair
        double k = 0.0;   // k (Condition A) or second k of the pair
        double magnitude = 0.0;
    };
    std::vector<Witness> witnesses;
    double margin = 0.0;  // smallest slack observed
};

/// Conditional virtual valuation phi(v,k) = v - (1 - G(v|k)) / g(v|k).
double phi(const Distribution& d, const TypePoint& t);

/// phi(v,k) * g(v|k), computed as v*g(v|k) - (1 - G(v|k)) so it stays finite
/// where the conditional density vanishes.
double phi_times_density(const Distribution& d, double v, double k);

/// Unique root of phi(.,k) on (0,1), by bisection to the configured root
/// tolerance. When check_unique is set, a sign scan at resolution 1e-3 must
/// find exactly one sign change.
double phi_zero(const Distribution& d, double k, bool check_unique = false);

/// Zero curve phi_k^{-1}(0) sampled on n equally spaced k in [k_floor, 1].
ThresholdCurve zero_curve(const Distribution& d, int n = 0);

/// Condition A: v(1-G(v|k)) strictly concave in v for each k; checked via the
/// equivalent strict increase of phi(v,k) g(v|k) in v.
ConditionVerdict check_condition_a(const Distribution& d, int v_nodes = 0, int k_nodes = 0);

/// Condition B: (k/k') phi_{k'}^{-1}(0) <= phi_k^{-1}(0) <= phi_{k'}^{-1}(0)
/// for all grid pairs k < k'.
ConditionVerdict check_condition_b(const Distribution& d, int k_nodes = 0);

/// Condition B': phi_k^{-1}(0) > phi_{k'}^{-1}(0) for all grid pairs k < k'.
ConditionVerdict check_condition_b_prime(const Distribution& d, int k_nodes = 0);

namespace detail {
/// Root of phi(.,k) without domain restriction on k (used by quadrature
/// that extends below k_floor for built-in families).
double phi_zero_extended(const Distribution& d, double k);
}  // namespace detail

}  // namespace ratiomech
