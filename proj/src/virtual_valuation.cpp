#include "ratiomech/virtual_valuation.hpp"

#include <cmath>
#include <limits>

#include "ratiomech/quadrature.hpp"

namespace ratiomech {

std::string condition_name(Condition c) {
    switch (c) {
        case Condition::A: return "A";
        case Condition::B: return "B";
        case Condition::Bprime: return "B'";
    }
    return "?";
}

double phi(const Distribution& d, const TypePoint& t) {
    const double g = d.conditional_density(t.v, t.k);
    if (d.family() == Family::Tabulated && g <= 0.0) {
        throw DegenerateDensityError("conditional density vanishes at (v,k)");
    }
    const double G = d.conditional_cdf(t.v, t.k);
    return t.v - (1.0 - G) / g;
}

double phi_times_density(const Distribution& d, double v, double k) {
    return v * d.conditional_density_extended(v, k) - (1.0 - d.conditional_cdf_extended(v, k));
}

namespace detail {

double phi_zero_extended(const Distribution& d, double k) {
    // phi and phi*g share the root; bisect the product form, which is finite
    // everywhere. phi*g(0,k) = -1, phi*g(1,k) = g(1|k) > 0.
    double lo = 0.0, hi = 1.0;
    double flo = phi_times_density(d, lo, k);
    const double tol = d.config().root_tol;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = phi_times_density(d, mid, k);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

double phi_zero(const Distribution& d, double k, bool check_unique) {
    if (!(k >= d.k_floor() && k <= 1.0)) {
        throw DomainError("ratio out of [k_floor,1]");
    }
    if (check_unique) {
        int sign_changes = 0;
        double prev = phi_times_density(d, 0.0, k);
        for (double v = 1e-3; v <= 1.0 + 1e-12; v += 1e-3) {
            const double cur = phi_times_density(d, v, k);
            if (prev < 0.0 && cur >= 0.0) ++sign_changes;
            if (prev >= 0.0 && cur < 0.0) ++sign_changes;
            prev = cur;
        }
        if (sign_changes != 1) {
            throw PreconditionError("phi(.,k) has " + std::to_string(sign_changes) +
                                    " sign changes; root is not unique");
        }
    }
    return detail::phi_zero_extended(d, k);
}

ThresholdCurve zero_curve(const Distribution& d, int n) {
    if (n <= 0) n = d.config().condition_k_nodes;
    auto ks = quad::linspace(d.k_floor(), 1.0, n);
    std::vector<double> roots(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        roots[i] = detail::phi_zero_extended(d, ks[i]);
    }
    return ThresholdCurve(std::move(ks), std::move(roots));
}

ConditionVerdict check_condition_a(const Distribution& d, int v_nodes, int k_nodes) {
    const auto& cfg = d.config();
    if (v_nodes <= 0) v_nodes = cfg.condition_v_nodes;
    if (k_nodes <= 0) k_nodes = cfg.condition_k_nodes;
    ConditionVerdict out;
    out.condition = Condition::A;
    out.margin = std::numeric_limits<double>::infinity();
    const auto ks = quad::linspace(cfg.k_floor, 1.0, k_nodes);
    const auto vs = quad::linspace(0.0, 1.0, v_nodes);
    for (double k : ks) {
        double prev = phi_times_density(d, vs[0], k);
        for (std::size_t i = 1; i < vs.size(); ++i) {
            const double cur = phi_times_density(d, vs[i], k);
            const double slack = cur - prev - cfg.strictness_eps;
            out.margin = std::min(out.margin, slack);
            if (slack < 0.0) {
                out.witnesses.push_back({vs[i], k, -slack});
            }
            prev = cur;
        }
    }
    out.holds = out.witnesses.empty();
    return out;
}

namespace {

ConditionVerdict check_zero_curve_condition(const Distribution& d, int k_nodes, Condition which) {
    auto a = check_condition_a(d, 0, k_nodes);
    if (!a.holds) {
        throw PreconditionError("Condition A fails; zero curve is not well defined");
    }
    const auto& cfg = d.config();
    if (k_nodes <= 0) k_nodes = cfg.condition_k_nodes;
    const auto curve = zero_curve(d, k_nodes);
    const auto& ks = curve.k_grid();
    const auto& z = curve.values();

    ConditionVerdict out;
    out.condition = which;
    out.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        for (std::size_t j = i + 1; j < ks.size(); ++j) {
            if (which == Condition::B) {
                // (k/k') z(k') <= z(k) <= z(k'), each allowed strictness_eps slack
                const double s1 = z[i] - (ks[i] / ks[j]) * z[j] + cfg.strictness_eps;
                const double s2 = z[j] - z[i] + cfg.strictness_eps;
                const double slack = std::min(s1, s2);
                out.margin = std::min(out.margin, slack);
                if (slack < 0.0) out.witnesses.push_back({ks[i], ks[j], -slack});
            } else {
                // strict decrease: z(k) > z(k')
                const double slack = z[i] - z[j] - cfg.strictness_eps;
                out.margin = std::min(out.margin, slack);
                if (slack < 0.0) out.witnesses.push_back({ks[i], ks[j], -slack});
            }
        }
    }
    out.holds = out.witnesses.empty();
    return out;
}

}  // namespace

ConditionVerdict check_condition_b(const Distribution& d, int k_nodes) {
    return check_zero_curve_condition(d, k_nodes, Condition::B);
}

ConditionVerdict check_condition_b_prime(const Distribution& d, int k_nodes) {
    return check_zero_curve_condition(d, k_nodes, Condition::Bprime);
}

}  // namespace ratiomech
