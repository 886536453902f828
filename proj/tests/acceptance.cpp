// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Randomized cases use fixed seeds so every run is identical.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ratiomech/distribution.hpp"
#include "ratiomech/mechanism.hpp"
#include "ratiomech/quadrature.hpp"
#include "ratiomech/solve.hpp"
#include "ratiomech/verify.hpp"
#include "ratiomech/virtual_valuation.hpp"

using namespace ratiomech;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

// ----- step mechanisms with thresholds snapped to mesh nodes ---------------

// nondecreasing threshold indices with a_j >= (k_j / k_{j+1}) a_{j+1},
// built from the top ratio down; `cap` bounds the largest index
std::vector<int> snapped_thresholds(std::mt19937_64& rng, const std::vector<double>& vs,
                                    const std::vector<double>& ks, int cap) {
    const double h = vs[1] - vs[0];
    std::vector<int> idx(ks.size());
    idx.back() = std::uniform_int_distribution<int>(1, cap)(rng);
    for (int j = static_cast<int>(ks.size()) - 2; j >= 0; --j) {
        const double lower = vs[idx[j + 1]] * ks[j] / ks[j + 1];
        const int lo = static_cast<int>(std::ceil(lower / h - 1e-9));
        idx[j] = std::uniform_int_distribution<int>(lo, idx[j + 1])(rng);
    }
    return idx;
}

GridMechanism step_from_indices(const std::vector<double>& vs, const std::vector<double>& ks,
                                const std::vector<int>& idx) {
    std::vector<std::vector<double>> f2(vs.size(), std::vector<double>(ks.size(), 0.0));
    std::vector<std::vector<double>> p(vs.size(), std::vector<double>(ks.size(), 0.0));
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const double price = vs[static_cast<std::size_t>(idx[j])];
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (vs[i] > price + 1e-12) {
                f2[i][j] = 1.0;
                p[i][j] = price;
            }
        }
    }
    return GridMechanism(vs, ks, std::move(f2), std::move(p));
}

// ----- criteria ------------------------------------------------------------

Check zero_curve_regression(const Distribution& d,
                            const std::function<double(double)>& closed_form) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double k : quad::linspace(d.k_floor(), 1.0, 100)) {
        worst = std::max(worst, std::abs(phi_zero(d, k) - closed_form(k)));
    }
    const double dt = seconds_since(t0);
    c.note("max error " + fmt(worst) + ", " + fmt(dt) + " s");
    if (worst > 1e-8) c.fail("error above 1e-8");
    if (dt >= 1.0) c.fail("runtime above 1 s");
    return c;
}

Check criterion3() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = solve_posted_price(Distribution::example2());
    const double dt = seconds_since(t0);
    const double rho = std::get<PostedPrice>(m).rho;
    const double expect = (std::sqrt(13.0) - 2.0) / 3.0;
    c.note("rho " + fmt(rho) + ", " + fmt(dt) + " s");
    if (std::abs(rho - expect) > 1e-8) c.fail("price off the closed form");
    if (dt >= 1.0) c.fail("runtime above 1 s");
    return c;
}

Check criterion4() {
    Check c;
    if (!check_condition_b(Distribution::uniform()).holds) c.fail("uniform: B should hold");
    if (!check_condition_b(Distribution::example1()).holds) c.fail("example 1: B should hold");
    const auto ex2 = Distribution::example2();
    if (!check_condition_a(ex2).holds) c.fail("example 2: A should hold");
    if (check_condition_b(ex2).holds) c.fail("example 2: B should fail");
    if (!check_condition_b_prime(ex2).holds) c.fail("example 2: B' should hold");
    if (c.ok) c.detail = "verdicts as expected on the 101-point grid";
    return c;
}

Check criterion5() {
    Check c;
    const MeshSpec mesh{50, 50, 1e-3};
    const std::vector<std::pair<std::string, Mechanism>> cases = {
        {"ratio-dependent/example-1", solve_condition_b(Distribution::example1())},
        {"posted/example-2", solve_posted_price(Distribution::example2())},
    };
    for (const auto& [name, m] : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto ic = check_ic_direct(m, mesh, 1e-10);
        const auto ir = check_ir(m, mesh, 1e-10);
        const double dt = seconds_since(t0);
        c.note(name + ": IC gain " + fmt(ic.worst("pairwise-IC")) + ", " + fmt(dt) + " s");
        if (!ic.pass) c.fail(name + ": IC gain above 1e-10");
        if (!ir.pass) c.fail(name + ": IR violated");
        if (dt >= 30.0) c.fail(name + ": runtime above 30 s");
    }
    return c;
}

Check criterion6() {
    Check c;
    const auto vs = quad::linspace(0.0, 1.0, 30);
    const auto ks = quad::linspace(1e-3, 1.0, 30);
    const double h = vs[1] - vs[0];
    const int nv = 30;
    std::mt19937_64 rng(20260824);

    int agree = 0, total = 0, disagreements = 0;
    double worst_disagreement_mass = 0.0;

    auto run_case = [&](const GridMechanism& g, bool expect_valid) {
        const auto direct = check_ic_direct(Mechanism{g}, MeshSpec{}, 1e-9);
        const auto charac = check_characterization(g, 1e-9);
        ++total;
        if (direct.pass == charac.pass) {
            ++agree;
            if (direct.pass != expect_valid) {
                // both checks moved together; count as agreement but flag
                c.fail("constructed case misclassified by both checks");
            }
        } else {
            ++disagreements;
            // any disagreement must be a threshold-cell artifact: bounded by
            // two grid steps' worth of integral mass
            const double mass = std::max({direct.worst("pairwise-IC"), charac.worst("C1"),
                                          charac.worst("C2"), charac.worst("C3")});
            worst_disagreement_mass = std::max(worst_disagreement_mass, mass);
            if (mass > 2.0 * h) c.fail("disagreement larger than two grid steps");
        }
    };

    for (int trial = 0; trial < 200; ++trial) {
        const auto idx = snapped_thresholds(rng, vs, ks, nv - 5);
        run_case(step_from_indices(vs, ks, idx), true);
    }
    for (int trial = 0; trial < 200; ++trial) {
        auto idx = snapped_thresholds(rng, vs, ks, nv - 5);
        auto g = step_from_indices(vs, ks, idx);
        std::vector<std::vector<double>> f2(vs.size(), std::vector<double>(ks.size()));
        std::vector<std::vector<double>> p(vs.size(), std::vector<double>(ks.size()));
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < 30; ++j) {
                f2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.f2(
                    static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.payment(
                    static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        if (trial % 2 == 0) {
            // raise one column's price 3 steps above its right neighbor
            const int j = std::uniform_int_distribution<int>(0, 28)(rng);
            const int bumped = std::min(idx[static_cast<std::size_t>(j) + 1] + 3, nv - 1);
            const double price = vs[static_cast<std::size_t>(bumped)];
            for (int i = 0; i < nv; ++i) {
                const bool buy = vs[static_cast<std::size_t>(i)] > price + 1e-12;
                f2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = buy ? 1.0 : 0.0;
                p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = buy ? price : 0.0;
            }
        } else {
            // overcharge one buyer node by three grid steps
            const int j = std::uniform_int_distribution<int>(0, 29)(rng);
            const int i = std::min(idx[static_cast<std::size_t>(j)] + 2, nv - 1);
            p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += 3.0 * h;
        }
        run_case(GridMechanism(vs, ks, f2, p), false);
    }

    const double rate = static_cast<double>(agree) / total;
    c.note("agreement " + fmt(100.0 * rate) + "% over " + std::to_string(total) + " cases, " +
           std::to_string(disagreements) + " disagreements");
    if (rate < 0.99) c.fail("agreement below 99%");
    return c;
}

Check criterion7() {
    Check c;
    const std::vector<std::pair<std::string, std::pair<Distribution, Mechanism>>> cases = {
        {"uniform", {Distribution::uniform(), solve_condition_b(Distribution::uniform())}},
        {"example-1", {Distribution::example1(), solve_condition_b(Distribution::example1())}},
        {"example-2", {Distribution::example2(), solve_posted_price(Distribution::example2())}},
    };
    for (const auto& [name, dm] : cases) {
        const double rev = expected_revenue(dm.second, dm.first);
        const double surplus = virtual_surplus(dm.second, dm.first);
        const double gap = std::abs(rev - surplus);
        c.note(name + ": |gap| " + fmt(gap));
        if (gap > 1e-4) c.fail(name + ": revenue forms differ beyond 1e-4");
    }
    return c;
}

Check criterion8() {
    Check c;
    {
        const auto d = Distribution::uniform();
        const double rev = expected_revenue(solve_condition_b(d), d);
        const double bound = pointwise_bound(d);
        c.note("uniform: revenue " + fmt(rev) + ", bound " + fmt(bound));
        if (std::abs(rev - bound) > 1e-4) c.fail("uniform: gap beyond 1e-4");
        if (std::abs(rev - 0.25) > 1e-4 || std::abs(bound - 0.25) > 1e-4) {
            c.fail("uniform: expected both equal to 1/4");
        }
    }
    {
        const auto d = Distribution::example1();
        const double rev = expected_revenue(solve_condition_b(d), d);
        const double bound = pointwise_bound(d);
        c.note("example-1: revenue " + fmt(rev) + ", bound " + fmt(bound));
        if (std::abs(rev - bound) > 1e-4) c.fail("example-1: gap beyond 1e-4");
    }
    return c;
}

Check criterion9() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const auto d = Distribution::example2();
    const auto oracle = oracle_best_threshold(d, 5, 31);
    const double posted = posted_price_search(d).revenue;
    const double dt = seconds_since(t0);
    c.note("oracle " + fmt(oracle.revenue) + ", posted " + fmt(posted) + ", " + fmt(dt) + " s");
    if (oracle.revenue > posted + 5e-3) c.fail("oracle beats the posted price beyond tolerance");
    if (dt >= 60.0) c.fail("runtime above 60 s");
    return c;
}

Check criterion10() {
    Check c;
    const auto vs = quad::linspace(0.0, 1.0, 20);
    const auto ks = quad::linspace(0.05, 1.0, 8);
    std::mt19937_64 rng(77002);
    int preserved = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto idx = snapped_thresholds(rng, vs, ks, static_cast<int>(vs.size()) - 4);
        const auto base = step_from_indices(vs, ks, idx);
        RawGridMechanism raw;
        raw.v_grid = vs;
        raw.k_grid = ks;
        raw.f1.assign(vs.size(), std::vector<double>(ks.size(), 0.0));
        raw.f2.assign(vs.size(), std::vector<double>(ks.size(), 0.0));
        raw.p.assign(vs.size(), std::vector<double>(ks.size(), 0.0));
        std::uniform_real_distribution<double> waste(0.05, 0.4);
        for (std::size_t i = 0; i < vs.size(); ++i) {
            for (std::size_t j = 0; j < ks.size(); ++j) {
                raw.f1[i][j] = ks[j] * base.f2(i, j);
                raw.f2[i][j] = base.f2(i, j);
                raw.p[i][j] = base.payment(i, j);
                if (base.f2(i, j) > 0.5) {
                    raw.f1[i][j] += waste(rng);  // over-supply good 1; f2 binds
                } else {
                    raw.f2[i][j] = waste(rng);   // over-supply good 2; f1 = 0 binds
                }
            }
        }
        const auto reduced = non_wasteful_reduction(raw);
        bool same = true;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            for (std::size_t j = 0; j < ks.size(); ++j) {
                const TypePoint t{vs[i], ks[j]};
                const double u_raw = utility(t, Outcome{raw.f1[i][j], raw.f2[i][j], raw.p[i][j]});
                const double u_red = utility(t, reduced.outcome(i, j));
                if (u_raw != u_red) same = false;
                if (reduced.payment(i, j) != raw.p[i][j]) same = false;
            }
        }
        if (!same) {
            c.fail("trial " + std::to_string(trial) + ": utility or payment changed");
            continue;
        }
        const bool raw_ic = check_ic_direct(Mechanism{raw}, MeshSpec{}, 1e-9).pass;
        const bool red_ic = check_ic_direct(Mechanism{reduced}, MeshSpec{}, 1e-9).pass;
        if (raw_ic && !red_ic) {
            c.fail("trial " + std::to_string(trial) + ": reduction broke IC");
            continue;
        }
        ++preserved;
    }
    c.note(std::to_string(preserved) + "/100 variants preserved exactly");
    if (preserved != 100) c.fail("not every variant preserved");
    return c;
}

Check criterion11() {
    Check c;
    const auto vs = quad::linspace(0.0, 1.0, 41);
    const auto ks = quad::linspace(1e-3, 1.0, 9);
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int improved = 0, total = 0;
    for (const auto& d : {Distribution::uniform(), Distribution::example1()}) {
        for (int trial = 0; trial < 25; ++trial) {
            // separable f2 = base(v) * scale(k): nondecreasing in v gives C1,
            // nonincreasing scale gives C2
            std::vector<double> base(vs.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < vs.size(); ++i) {
                acc += u01(rng);
                base[i] = acc;
            }
            for (auto& b : base) b /= acc;
            std::vector<double> scale(ks.size());
            double s = 1.0;
            for (std::size_t j = 0; j < ks.size(); ++j) {
                scale[j] = s;
                s *= 0.6 + 0.4 * u01(rng);
            }
            std::vector<std::vector<double>> f2(vs.size(), std::vector<double>(ks.size()));
            for (std::size_t i = 0; i < vs.size(); ++i)
                for (std::size_t j = 0; j < ks.size(); ++j) f2[i][j] = base[i] * scale[j];

            ++total;
            const auto spec = threshold_improve(vs, ks, f2, d);
            if (!spec.rho.nondecreasing(1e-9)) {
                c.fail("output threshold not nondecreasing");
                continue;
            }
            bool dominated = true;
            for (std::size_t j = 0; j < ks.size(); ++j) {
                std::vector<double> col(vs.size());
                for (std::size_t i = 0; i < vs.size(); ++i) col[i] = f2[i][j];
                const double before = detail::column_surplus_pl(d, ks[j], vs, col);
                const double after = detail::column_surplus_above(d, ks[j], spec.rho(ks[j]));
                if (after < before - 1e-9) dominated = false;
            }
            if (!dominated) {
                c.fail("per-column surplus decreased");
                continue;
            }
            ++improved;
        }
    }
    c.note(std::to_string(improved) + "/" + std::to_string(total) + " transforms dominate");
    if (improved != total) c.fail("not every transform improved");
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"1 zero curve regression, example 1",
         [] {
             return zero_curve_regression(Distribution::example1(), [](double k) {
                 return std::pow(1.0 / (k + 2.0), 1.0 / (k + 1.0));
             });
         }},
        {"2 zero curve regression, example 2",
         [] {
             return zero_curve_regression(Distribution::example2(), [](double k) {
                 return (-4 * k + std::sqrt(16 * k * k + 12 * k + 3)) / 3.0;
             });
         }},
        {"3 optimal posted price, example 2", criterion3},
        {"4 condition classification", criterion4},
        {"5 IC/IR of constructed optima", criterion5},
        {"6 characterization equivalence", criterion6},
        {"7 revenue equivalence", criterion7},
        {"8 certification under condition B", criterion8},
        {"9 certification under condition B'", criterion9},
        {"10 non-wasteful reduction", criterion10},
        {"11 improvement transform", criterion11},
    };

    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        try {
            c = run();
        } catch (const std::exception& e) {
            c.fail(std::string("exception: ") + e.what());
        }
        if (!c.ok) ++failures;
        std::printf("criterion %s: %s%s%s\n", name.c_str(), c.ok ? "PASS" : "FAIL",
                    c.detail.empty() ? "" : " -- ", c.detail.c_str());
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
