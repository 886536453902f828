#include "ratiomech/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "ratiomech/quadrature.hpp"
#include "ratiomech/verify.hpp"
#include "ratiomech/virtual_valuation.hpp"

namespace ratiomech {

std::string OptimalityCertificate::to_json() const {
    nlohmann::json j;
    j["candidate_revenue"] = candidate_revenue;
    j["pointwise_bound"] = pointwise_bound;
    j["oracle_best"] = oracle_best;
    j["gaps"] = {{"bound", bound_gap}, {"oracle", oracle_gap}};
    j["grid"] = {{"oracle_k_nodes", oracle_k_nodes}, {"oracle_rho_nodes", oracle_rho_nodes}};
    return j.dump(2);
}

namespace {

std::string witness_text(const ConditionVerdict& v) {
    if (v.witnesses.empty()) return "";
    const auto& w = v.witnesses.front();
    return " (witness at " + std::to_string(w.v) + ", " + std::to_string(w.k) +
           ", magnitude " + std::to_string(w.magnitude) + ")";
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

Mechanism solve_condition_b(const Distribution& d) {
    const auto b = check_condition_b(d);
    if (!b.holds) {
        throw PreconditionError("Condition B does not hold" + witness_text(b));
    }
    const auto curve = zero_curve(d);
    // root-finding noise on the curve is of order root_tol; accept it
    return make_ratio_dependent(curve, std::max(1e-12, 10.0 * d.config().root_tol));
}

PostedPriceSearch posted_price_search(const Distribution& d, int scan_nodes) {
    const auto ps = quad::linspace(0.0, 1.0, scan_nodes);
    auto revenue = [&](double p) { return p * (1.0 - d.marginal_v_cdf(p)); };
    std::vector<double> r(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) r[i] = revenue(ps[i]);

    // refine every local maximum of the coarse scan; p(1 - G_v(p)) need not
    // be unimodal for arbitrary distributions
    PostedPriceSearch out;
    std::vector<std::pair<double, double>> candidates;  // (rho, revenue)
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const bool left_ok = i == 0 || r[i] >= r[i - 1];
        const bool right_ok = i + 1 == ps.size() || r[i] >= r[i + 1];
        if (!(left_ok && right_ok)) continue;
        const double a = ps[i == 0 ? 0 : i - 1];
        const double b = ps[std::min(ps.size() - 1, i + 1)];
        const double rho = golden_max(revenue, a, b, d.config().root_tol);
        candidates.emplace_back(rho, revenue(rho));
    }
    double best = -1.0;
    for (const auto& [rho, rev] : candidates) best = std::max(best, rev);
    for (const auto& [rho, rev] : candidates) {
        if (rev >= best - 1e-8) out.near_optimal.push_back(rho);
    }
    std::sort(out.near_optimal.begin(), out.near_optimal.end());
    out.near_optimal.erase(std::unique(out.near_optimal.begin(), out.near_optimal.end(),
                                       [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                           out.near_optimal.end());
    out.rho_star = out.near_optimal.front();
    for (double rho : out.near_optimal) {
        if (revenue(rho) > revenue(out.rho_star) + 1e-12) out.rho_star = rho;
    }
    out.revenue = revenue(out.rho_star);
    return out;
}

Mechanism solve_posted_price(const Distribution& d) {
    return PostedPrice{posted_price_search(d).rho_star};
}

ThresholdMechanismSpec threshold_improve(const std::vector<double>& v_grid,
                                      const std::vector<double>& k_grid,
                                      const std::vector<std::vector<double>>& f2,
                                      const Distribution& d) {
    const auto a = check_condition_a(d);
    if (!a.holds) {
        throw PreconditionError("Condition A does not hold; the improvement argument needs it");
    }
    const std::size_t nv = v_grid.size(), nk = k_grid.size();
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t i = 0; i < nv; ++i) {
            if (!(f2[i][j] >= -1e-12 && f2[i][j] <= 1.0 + 1e-12)) {
                throw PreconditionError("allocation out of [0,1]");
            }
            if (i > 0 && f2[i][j] < f2[i - 1][j] - 1e-9) {
                throw PreconditionError("input violates C1 at k=" + std::to_string(k_grid[j]));
            }
        }
    }
    // C2 at every v row over all k pairs
    std::vector<std::vector<double>> cum(nk);
    std::vector<double> col(nv);
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t i = 0; i < nv; ++i) col[i] = f2[i][j];
        cum[j] = quad::trapezoid_cumulative(v_grid, col);
    }
    for (std::size_t j = 0; j + 1 < nk; ++j) {
        for (std::size_t jp = j + 1; jp < nk; ++jp) {
            for (std::size_t i = 0; i < nv; ++i) {
                if (cum[jp][i] > cum[j][i] + 1e-9) {
                    throw PreconditionError("input violates C2 between k=" +
                                            std::to_string(k_grid[j]) + " and k=" +
                                            std::to_string(k_grid[jp]));
                }
            }
        }
    }

    std::vector<double> rho(nk);
    for (std::size_t j = 0; j < nk; ++j) {
        rho[j] = std::clamp(1.0 - cum[j].back(), 0.0, 1.0);
    }
    ThresholdMechanismSpec out{ThresholdCurve(k_grid, rho)};
    if (!out.rho.nondecreasing(1e-9)) {
        throw PreconditionError("internal: improvement threshold not nondecreasing");
    }
    // per-column dominance of the step mechanism over the input
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t i = 0; i < nv; ++i) col[i] = f2[i][j];
        const double before = detail::column_surplus_pl(d, k_grid[j], v_grid, col);
        const double after = detail::column_surplus_above(d, k_grid[j], rho[j]);
        if (after < before - 1e-9) {
            throw PreconditionError("internal: improvement decreased virtual surplus at k=" +
                                    std::to_string(k_grid[j]));
        }
    }
    return out;
}

Mechanism flatten_to_posted_price(const ThresholdMechanismSpec& spec, const Distribution& d) {
    const auto bp = check_condition_b_prime(d);
    if (!bp.holds) {
        throw PreconditionError("Condition B' does not hold" + witness_text(bp));
    }
    if (!spec.rho.nondecreasing(1e-9)) {
        throw PreconditionError("threshold curve must be nondecreasing in k");
    }
    const double kf = d.k_floor();
    auto z = [&](double k) { return detail::phi_zero_extended(d, k); };
    auto diff = [&](double k) { return spec.rho(k) - z(k); };

    double price;
    if (diff(1.0) <= 0.0) {
        price = spec.rho(1.0);  // all thresholds below the zero curve
    } else if (diff(kf) >= 0.0) {
        price = spec.rho(kf);  // all thresholds above the zero curve
    } else {
        // interior crossing: bisect the increasing difference; ties resolve
        // toward the smaller k
        double lo = kf, hi = 1.0;
        while (hi - lo > d.config().root_tol) {
            const double mid = 0.5 * (lo + hi);
            if (diff(mid) >= 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        price = spec.rho(0.5 * (lo + hi));
    }

    // the flat price must not lose revenue on any ratio column
    for (double k : quad::linspace(kf, 1.0, d.config().condition_k_nodes)) {
        const double before = detail::column_surplus_identity(d, k, spec.rho(k));
        const double after = detail::column_surplus_identity(d, k, price);
        if (after < before - 1e-9) {
            throw PreconditionError("internal: flattening decreased revenue at k=" +
                                    std::to_string(k));
        }
    }
    return PostedPrice{price};
}

double pointwise_bound(const Distribution& d) {
    const double kq = d.k_quad_min();
    return quad::gauss5_composite(
        [&](double k) {
            const double z = detail::phi_zero_extended(d, k);
            return d.marginal_k_density_extended(k) * detail::column_surplus_above(d, k, z);
        },
        kq, 1.0, 64);
}

OracleResult oracle_best_threshold(const Distribution& d, int k_nodes, int rho_nodes) {
    if (k_nodes < 1 || k_nodes > 6 || rho_nodes < 2 || rho_nodes > 40) {
        throw PreconditionError("oracle limits: 1 <= k_nodes <= 6, 2 <= rho_nodes <= 40");
    }
    const double kq = d.k_quad_min();
    const auto cell_edges = quad::linspace(kq, 1.0, k_nodes + 1);
    const auto rhos = quad::linspace(0.0, 1.0, rho_nodes);

    // revenue contribution of each (k cell, threshold) pair
    std::vector<std::vector<double>> contrib(static_cast<std::size_t>(k_nodes),
                                             std::vector<double>(rhos.size(), 0.0));
    for (int c = 0; c < k_nodes; ++c) {
        for (std::size_t r = 0; r < rhos.size(); ++r) {
            contrib[static_cast<std::size_t>(c)][r] = quad::gauss5_composite(
                [&](double k) {
                    return d.marginal_k_density_extended(k) *
                           detail::column_surplus_above(d, k, rhos[r]);
                },
                cell_edges[static_cast<std::size_t>(c)], cell_edges[static_cast<std::size_t>(c) + 1], 8);
        }
    }

    OracleResult best;
    best.revenue = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(static_cast<std::size_t>(k_nodes), 0);
    // depth-first enumeration of nondecreasing index vectors
    auto dfs = [&](auto&& self, std::size_t cell, std::size_t min_idx, double partial) -> void {
        if (cell == idx.size()) {
            if (partial > best.revenue) {
                best.revenue = partial;
                best.rho.resize(idx.size());
                for (std::size_t c = 0; c < idx.size(); ++c) best.rho[c] = rhos[idx[c]];
            }
            return;
        }
        for (std::size_t r = min_idx; r < rhos.size(); ++r) {
            idx[cell] = r;
            self(self, cell + 1, r, partial + contrib[cell][r]);
        }
    };
    dfs(dfs, 0, 0, 0.0);
    return best;
}

OptimalityCertificate certify(const Distribution& d, const Mechanism& candidate, int oracle_k_nodes,
                              int oracle_rho_nodes) {
    OptimalityCertificate cert;
    cert.candidate_revenue = expected_revenue(candidate, d);
    cert.pointwise_bound = pointwise_bound(d);
    cert.oracle_best = oracle_best_threshold(d, oracle_k_nodes, oracle_rho_nodes).revenue;
    cert.bound_gap = cert.pointwise_bound - cert.candidate_revenue;
    cert.oracle_gap = cert.candidate_revenue - cert.oracle_best;
    cert.oracle_k_nodes = oracle_k_nodes;
    cert.oracle_rho_nodes = oracle_rho_nodes;
    return cert;
}

}  // namespace ratiomech
