#include "ratiomech/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "ratiomech/quadrature.hpp"
#include "ratiomech/virtual_valuation.hpp"

namespace ratiomech {

std::vector<double> MeshSpec::v_nodes() const { return quad::linspace(0.0, 1.0, nv); }
std::vector<double> MeshSpec::k_nodes() const { return quad::linspace(k_floor, 1.0, nk); }

double VerificationReport::worst(const std::string& family) const {
    for (const auto& f : families) {
        if (f.family == family) return f.max_violation;
    }
    return 0.0;
}

std::string VerificationReport::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    nlohmann::json fam = nlohmann::json::object();
    for (const auto& f : families) {
        fam[f.family] = {{"max_violation", f.max_violation},
                         {"witness",
                          {{"v", f.witness_from.v},
                           {"k", f.witness_from.k},
                           {"v2", f.witness_to.v},
                           {"k2", f.witness_to.k}}}};
    }
    j["families"] = fam;
    return j.dump(2);
}

std::string VerificationReport::to_table() const {
    std::ostringstream out;
    char buf[256];
    out << "mode: " << mode << "  (" << (pass ? "PASS" : "FAIL") << ")\n";
    out << "family,max_violation,witness_v,witness_k,witness_v2,witness_k2\n";
    for (const auto& f : families) {
        std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%.12g,%.12g,%.12g\n", f.family.c_str(),
                      f.max_violation, f.witness_from.v, f.witness_from.k, f.witness_to.v,
                      f.witness_to.k);
        out << buf;
    }
    return out.str();
}

namespace {

struct MeshPoints {
    std::vector<double> vs, ks;
};

MeshPoints mesh_for(const Mechanism& m, const MeshSpec& spec) {
    if (const auto* g = std::get_if<GridMechanism>(&m)) {
        return {g->v_grid(), g->k_grid()};
    }
    if (const auto* rg = std::get_if<RawGridMechanism>(&m)) {
        return {rg->v_grid, rg->k_grid};
    }
    return {spec.v_nodes(), spec.k_nodes()};
}

}  // namespace

VerificationReport check_ic_direct(const Mechanism& m, const MeshSpec& spec, double tol) {
    const auto [vs, ks] = mesh_for(m, spec);
    const std::size_t nv = vs.size(), nk = ks.size();

    std::vector<Outcome> outcomes(nv * nk);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nk; ++j) outcomes[i * nk + j] = outcome_at(m, {vs[i], ks[j]});

    // deduplicate deviation targets: identical outcomes give identical gains
    std::map<std::tuple<long long, long long, long long>, std::size_t> seen;
    std::vector<Outcome> distinct;
    std::vector<TypePoint> rep;  // a representative report per distinct outcome
    auto key = [](const Outcome& o) {
        auto q = [](double x) { return static_cast<long long>(std::llround(x * 1e12)); };
        return std::make_tuple(q(o.a1), q(o.a2), q(o.t));
    };
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = 0; j < nk; ++j) {
            const auto& o = outcomes[i * nk + j];
            if (seen.emplace(key(o), distinct.size()).second) {
                distinct.push_back(o);
                rep.push_back({vs[i], ks[j]});
            }
        }
    }

    FamilyResult fam{"pairwise-IC", 0.0, {}, {}};
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = 0; j < nk; ++j) {
            const TypePoint t{vs[i], ks[j]};
            const double truthful = utility(t, outcomes[i * nk + j]);
            for (std::size_t o = 0; o < distinct.size(); ++o) {
                const double gain = utility(t, distinct[o]) - truthful;
                if (gain > fam.max_violation) {
                    fam.max_violation = gain;
                    fam.witness_from = t;
                    fam.witness_to = rep[o];
                }
            }
        }
    }

    VerificationReport report;
    report.mode = "direct";
    report.tolerance = tol;
    report.families.push_back(fam);
    report.pass = fam.max_violation <= tol;
    return report;
}

VerificationReport check_ir(const Mechanism& m, const MeshSpec& spec, double tol) {
    const auto [vs, ks] = mesh_for(m, spec);
    FamilyResult fam{"IR", 0.0, {}, {}};
    for (double v : vs) {
        for (double k : ks) {
            const TypePoint t{v, k};
            const double u = utility(t, outcome_at(m, t));
            if (-u > fam.max_violation) {
                fam.max_violation = -u;
                fam.witness_from = t;
            }
        }
    }
    VerificationReport report;
    report.mode = "direct";
    report.tolerance = tol;
    report.families.push_back(fam);

    // Participation shortcut: p(0,1) <= 0, reported when payments at v=0 exist
    double p00 = 0.0;
    bool have_p00 = true;
    if (const auto* g = std::get_if<GridMechanism>(&m)) {
        have_p00 = g->v_grid().front() == 0.0;
        if (have_p00) p00 = g->payment(0, g->nk() - 1);
    } else if (const auto* rg = std::get_if<RawGridMechanism>(&m)) {
        have_p00 = rg->v_grid.front() == 0.0;
        if (have_p00) p00 = rg->p.front().back();
    }
    if (have_p00) {
        FamilyResult l2{"zero-type-payment", std::max(0.0, p00), {0.0, 1.0}, {}};
        report.families.push_back(l2);
    }

    report.pass = true;
    for (const auto& f : report.families) {
        if (f.max_violation > tol) report.pass = false;
    }
    return report;
}

VerificationReport check_characterization(const GridMechanism& m, double tol) {
    const auto& vs = m.v_grid();
    const auto& ks = m.k_grid();
    const std::size_t nv = vs.size(), nk = ks.size();
    double hmax = 0.0;
    for (std::size_t i = 1; i < nv; ++i) hmax = std::max(hmax, vs[i] - vs[i - 1]);

    FamilyResult c1{"C1", 0.0, {}, {}};
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t i = 1; i < nv; ++i) {
            const double viol = m.f2(i - 1, j) - m.f2(i, j);
            if (viol > c1.max_violation) {
                c1.max_violation = viol;
                c1.witness_from = {vs[i - 1], ks[j]};
                c1.witness_to = {vs[i], ks[j]};
            }
        }
    }

    FamilyResult c2{"C2", 0.0, {}, {}};
    FamilyResult c3{"C3", 0.0, {}, {}};
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t jp = j + 1; jp < nk; ++jp) {
            const double ratio = ks[j] / ks[jp];
            for (std::size_t i = 0; i < nv; ++i) {
                const double viol2 = m.cum(i, jp) - m.cum(i, j);
                if (viol2 > c2.max_violation) {
                    c2.max_violation = viol2;
                    c2.witness_from = {vs[i], ks[j]};
                    c2.witness_to = {vs[i], ks[jp]};
                }
                const double viol3 = m.cum_at(vs[i] * ratio, j) - m.cum(i, jp);
                if (viol3 > c3.max_violation) {
                    c3.max_violation = viol3;
                    c3.witness_from = {vs[i], ks[jp]};
                    c3.witness_to = {vs[i] * ratio, ks[j]};
                }
            }
        }
    }

    // thresholds sampled onto a mesh are located only to within a cell, so
    // the diagonal constraint and the payment identity carry a step-aware
    // tolerance: the discretization shifts each side by at most half a cell
    // (plus a quarter-cell interpolation excess on the diagonal)
    const double c3_tol = std::max(tol, 1.25 * hmax);
    const double identity_tol = std::max(tol, 0.75 * hmax);
    const double p00 = m.payment(0, nk - 1);
    FamilyResult ident{"payment-identity", 0.0, {}, {}};
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t i = 0; i < nv; ++i) {
            const double expect = p00 + vs[i] * m.f2(i, j) - m.cum(i, j);
            const double viol = std::abs(m.payment(i, j) - expect);
            if (viol > ident.max_violation) {
                ident.max_violation = viol;
                ident.witness_from = {vs[i], ks[j]};
            }
        }
    }

    VerificationReport report;
    report.mode = "characterization";
    report.tolerance = tol;
    report.families = {c1, c2, c3, ident};
    report.pass = c1.max_violation <= tol && c2.max_violation <= tol &&
                  c3.max_violation <= c3_tol && ident.max_violation <= identity_tol;
    return report;
}

bool equivalence_check(const GridMechanism& m, double tol) {
    const auto direct = check_ic_direct(m, MeshSpec{}, tol);
    const auto charac = check_characterization(m, tol);
    return direct.pass == charac.pass;
}

// ---------------------------------------------------------------- revenue

namespace detail {

double column_surplus_above(const Distribution& d, double k, double threshold) {
    if (threshold >= 1.0) return 0.0;
    return quad::gauss5_composite(
        [&](double v) { return phi_times_density(d, v, k); }, threshold, 1.0, 64);
}

double column_surplus_identity(const Distribution& d, double k, double threshold) {
    if (threshold >= 1.0) return 0.0;
    return threshold * (1.0 - d.conditional_cdf_extended(threshold, k));
}

double column_surplus_pl(const Distribution& d, double k, const std::vector<double>& v_grid,
                         const std::vector<double>& f2_col) {
    double acc = 0.0;
    for (std::size_t i = 1; i < v_grid.size(); ++i) {
        const double v0 = v_grid[i - 1], v1 = v_grid[i];
        const double f0 = f2_col[i - 1], f1 = f2_col[i];
        acc += quad::gauss5(
            [&](double v) {
                const double t = (v - v0) / (v1 - v0);
                return phi_times_density(d, v, k) * (f0 + t * (f1 - f0));
            },
            v0, v1);
    }
    return acc;
}

}  // namespace detail

namespace {

/// Integral over the ratio axis of g_k(k) * column(k), split along the price
/// curve's segments so each piece is smooth.
double integrate_over_k(const Distribution& d, const std::vector<double>& k_breaks,
                        const std::function<double(double)>& column) {
    const double kq = d.k_quad_min();
    std::vector<double> brk;
    brk.push_back(kq);
    for (double k : k_breaks) {
        if (k > brk.back() + 1e-15 && k <= 1.0) brk.push_back(k);
    }
    if (brk.back() < 1.0) brk.push_back(1.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < brk.size(); ++i) {
        const int cells = std::max(2, static_cast<int>(std::ceil(32.0 * (brk[i] - brk[i - 1]))));
        acc += quad::gauss5_composite(
            [&](double k) { return d.marginal_k_density_extended(k) * column(k); }, brk[i - 1],
            brk[i], cells);
    }
    return acc;
}

double grid_payment_integral(const Distribution& d, const std::vector<double>& vs,
                             const std::vector<double>& ks,
                             const std::function<double(std::size_t, std::size_t)>& p) {
    // per-column integral of the piecewise-linear payment against g(.|k),
    // then trapezoid across the mechanism's k columns
    std::vector<double> colvals(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 1; i < vs.size(); ++i) {
            const double v0 = vs[i - 1], v1 = vs[i];
            const double p0 = p(i - 1, j), p1 = p(i, j);
            acc += quad::gauss5(
                [&](double v) {
                    const double t = (v - v0) / (v1 - v0);
                    return d.conditional_density_extended(v, ks[j]) * (p0 + t * (p1 - p0));
                },
                v0, v1);
        }
        colvals[j] = acc * d.marginal_k_density_extended(ks[j]);
    }
    return quad::trapezoid(ks, colvals);
}

}  // namespace

double expected_revenue(const Mechanism& m, const Distribution& d) {
    if (const auto* pp = std::get_if<PostedPrice>(&m)) {
        return pp->rho * (1.0 - d.marginal_v_cdf(pp->rho));
    }
    if (const auto* rd = std::get_if<RatioDependent>(&m)) {
        return integrate_over_k(d, rd->psi.k_grid(), [&](double k) {
            const double price = rd->psi(k);
            return price * (1.0 - d.conditional_cdf_extended(price, k));
        });
    }
    if (const auto* g = std::get_if<GridMechanism>(&m)) {
        return grid_payment_integral(d, g->v_grid(), g->k_grid(),
                                     [&](std::size_t i, std::size_t j) { return g->payment(i, j); });
    }
    const auto& rg = std::get<RawGridMechanism>(m);
    return grid_payment_integral(d, rg.v_grid, rg.k_grid,
                                 [&](std::size_t i, std::size_t j) { return rg.p[i][j]; });
}

double virtual_surplus(const Mechanism& m, const Distribution& d) {
    if (const auto* pp = std::get_if<PostedPrice>(&m)) {
        const double rho = pp->rho;
        return integrate_over_k(d, {},
                                [&](double k) { return detail::column_surplus_above(d, k, rho); });
    }
    if (const auto* rd = std::get_if<RatioDependent>(&m)) {
        return integrate_over_k(d, rd->psi.k_grid(), [&](double k) {
            return detail::column_surplus_above(d, k, rd->psi(k));
        });
    }
    const GridMechanism g = std::holds_alternative<GridMechanism>(m)
                                ? std::get<GridMechanism>(m)
                                : non_wasteful_reduction(std::get<RawGridMechanism>(m));
    const auto& vs = g.v_grid();
    const auto& ks = g.k_grid();
    std::vector<double> colvals(ks.size());
    std::vector<double> col(vs.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
        for (std::size_t i = 0; i < vs.size(); ++i) col[i] = g.f2(i, j);
        colvals[j] =
            detail::column_surplus_pl(d, ks[j], vs, col) * d.marginal_k_density_extended(ks[j]);
    }
    return quad::trapezoid(ks, colvals);
}

}  // namespace ratiomech
