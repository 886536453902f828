#include "ratiomech/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ratiomech/quadrature.hpp"

namespace ratiomech {

double utility(const TypePoint& type, const Outcome& o) {
    return type.v * std::min(o.a1 / type.k, o.a2) - o.t;
}

GridMechanism::GridMechanism(std::vector<double> v_grid, std::vector<double> k_grid,
                             std::vector<std::vector<double>> f2,
                             std::vector<std::vector<double>> p)
    : v_(std::move(v_grid)), k_(std::move(k_grid)), f2_(std::move(f2)), p_(std::move(p)) {
    if (v_.size() < 2 || k_.empty()) {
        throw std::invalid_argument("GridMechanism: mesh too small");
    }
    if (f2_.size() != v_.size() || p_.size() != v_.size()) {
        throw std::invalid_argument("GridMechanism: row count mismatch");
    }
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (f2_[i].size() != k_.size() || p_[i].size() != k_.size()) {
            throw std::invalid_argument("GridMechanism: column count mismatch");
        }
        for (double x : f2_[i]) {
            if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
                throw std::invalid_argument("GridMechanism: allocation out of [0,1]");
            }
        }
    }
    cum_.assign(v_.size(), std::vector<double>(k_.size(), 0.0));
    for (std::size_t j = 0; j < k_.size(); ++j) {
        for (std::size_t i = 1; i < v_.size(); ++i) {
            cum_[i][j] = cum_[i - 1][j] +
                         0.5 * (v_[i] - v_[i - 1]) * (f2_[i][j] + f2_[i - 1][j]);
        }
    }
}

Outcome GridMechanism::outcome(std::size_t iv, std::size_t ik) const {
    return Outcome{f1(iv, ik), f2_[iv][ik], p_[iv][ik]};
}

double GridMechanism::cum_at(double v, std::size_t ik) const {
    if (v <= v_.front()) return 0.0;
    if (v >= v_.back()) return cum_.back()[ik];
    auto it = std::upper_bound(v_.begin(), v_.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - v_.begin());
    const double t = (v - v_[i - 1]) / (v_[i] - v_[i - 1]);
    return cum_[i - 1][ik] + t * (cum_[i][ik] - cum_[i - 1][ik]);
}

double GridMechanism::max_abs_payment() const {
    double m = 0.0;
    for (const auto& row : p_)
        for (double x : row) m = std::max(m, std::abs(x));
    return m;
}

std::string mechanism_kind(const Mechanism& m) {
    struct V {
        std::string operator()(const PostedPrice&) const { return "posted_price"; }
        std::string operator()(const RatioDependent&) const { return "ratio_dependent"; }
        std::string operator()(const GridMechanism&) const { return "grid"; }
        std::string operator()(const RawGridMechanism&) const { return "raw_grid"; }
    };
    return std::visit(V{}, m);
}

namespace {

std::size_t find_node(const std::vector<double>& grid, double x, const char* axis) {
    auto it = std::lower_bound(grid.begin(), grid.end(), x - 1e-9);
    if (it == grid.end() || std::abs(*it - x) > 1e-9) {
        throw DomainError(std::string("report does not lie on the mechanism mesh (") + axis + ")");
    }
    return static_cast<std::size_t>(it - grid.begin());
}

}  // namespace

Outcome outcome_at(const Mechanism& m, const TypePoint& report) {
    struct V {
        const TypePoint& r;
        Outcome operator()(const PostedPrice& pp) const {
            if (r.v <= pp.rho) return Outcome{};
            return Outcome{r.k, 1.0, pp.rho};
        }
        Outcome operator()(const RatioDependent& rd) const {
            const double price = rd.psi(r.k);
            if (r.v <= price) return Outcome{};
            return Outcome{r.k, 1.0, price};
        }
        Outcome operator()(const GridMechanism& g) const {
            const std::size_t i = find_node(g.v_grid(), r.v, "v");
            const std::size_t j = find_node(g.k_grid(), r.k, "k");
            return g.outcome(i, j);
        }
        Outcome operator()(const RawGridMechanism& g) const {
            const std::size_t i = find_node(g.v_grid, r.v, "v");
            const std::size_t j = find_node(g.k_grid, r.k, "k");
            return Outcome{g.f1[i][j], g.f2[i][j], g.p[i][j]};
        }
    };
    return std::visit(V{report}, m);
}

Mechanism make_ratio_dependent(const ThresholdCurve& psi, double tol) {
    const auto& ks = psi.k_grid();
    const auto& vals = psi.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(vals[i] >= -tol && vals[i] <= 1.0 + tol)) {
            throw InvalidCurveError("psi(" + std::to_string(ks[i]) + ") out of [0,1]");
        }
    }
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] < vals[i - 1] - tol) {
            throw InvalidCurveError("psi not nondecreasing between k=" + std::to_string(ks[i - 1]) +
                                    " and k=" + std::to_string(ks[i]));
        }
        if (vals[i] / ks[i] > vals[i - 1] / ks[i - 1] + tol) {
            throw InvalidCurveError("(k/k') psi(k') <= psi(k) violated between k=" +
                                    std::to_string(ks[i - 1]) + " and k=" + std::to_string(ks[i]));
        }
    }
    if (psi.is_constant(tol)) {
        return PostedPrice{vals[0]};
    }
    return RatioDependent{psi};
}

std::vector<std::vector<double>> payment_from_allocation(
    const std::vector<double>& v_grid, const std::vector<double>& k_grid,
    const std::vector<std::vector<double>>& f2, double p00) {
    const std::size_t nv = v_grid.size(), nk = k_grid.size();
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t i = 1; i < nv; ++i) {
            if (f2[i][j] < f2[i - 1][j] - 1e-12) {
                throw PreconditionError("allocation not monotone in v at k=" +
                                        std::to_string(k_grid[j]));
            }
        }
    }
    std::vector<std::vector<double>> p(nv, std::vector<double>(nk, 0.0));
    for (std::size_t j = 0; j < nk; ++j) {
        double cum = 0.0;
        p[0][j] = p00 + v_grid[0] * f2[0][j];
        for (std::size_t i = 1; i < nv; ++i) {
            cum += 0.5 * (v_grid[i] - v_grid[i - 1]) * (f2[i][j] + f2[i - 1][j]);
            p[i][j] = p00 + v_grid[i] * f2[i][j] - cum;
        }
    }
    return p;
}

GridMechanism non_wasteful_reduction(const RawGridMechanism& m) {
    const std::size_t nv = m.v_grid.size(), nk = m.k_grid.size();
    std::vector<std::vector<double>> f2(nv, std::vector<double>(nk, 0.0));
    for (std::size_t j = 0; j < nk; ++j) {
        const double k = m.k_grid[j];
        for (std::size_t i = 0; i < nv; ++i) {
            // keep min(f1/k, f2): shrink whichever coordinate is slack
            if (m.f1[i][j] / k <= m.f2[i][j]) {
                f2[i][j] = m.f1[i][j] / k;
            } else {
                f2[i][j] = m.f2[i][j];
            }
        }
    }
    return GridMechanism(m.v_grid, m.k_grid, std::move(f2), m.p);
}

GridMechanism to_grid(const Mechanism& m, const std::vector<double>& v_grid,
                      const std::vector<double>& k_grid) {
    if (const auto* g = std::get_if<GridMechanism>(&m)) {
        if (g->v_grid() == v_grid && g->k_grid() == k_grid) return *g;
    }
    if (const auto* rg = std::get_if<RawGridMechanism>(&m)) {
        if (rg->v_grid == v_grid && rg->k_grid == k_grid) return non_wasteful_reduction(*rg);
    }
    const std::size_t nv = v_grid.size(), nk = k_grid.size();
    std::vector<std::vector<double>> f2(nv, std::vector<double>(nk, 0.0));
    std::vector<std::vector<double>> p(nv, std::vector<double>(nk, 0.0));
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = 0; j < nk; ++j) {
            const Outcome o = outcome_at(m, {v_grid[i], k_grid[j]});
            f2[i][j] = o.a2;
            p[i][j] = o.t;
        }
    }
    return GridMechanism(v_grid, k_grid, std::move(f2), std::move(p));
}

// ------------------------------------------------------------- serialization

namespace {
using nlohmann::json;

json curve_to_json(const ThresholdCurve& c) {
    return json{{"k", c.k_grid()}, {"psi", c.values()}};
}

ThresholdCurve curve_from_json(const json& j) {
    return ThresholdCurve(j.at("k").get<std::vector<double>>(),
                          j.at("psi").get<std::vector<double>>());
}
}  // namespace

std::string mechanism_to_json(const Mechanism& m) {
    json j;
    j["kind"] = mechanism_kind(m);
    if (const auto* pp = std::get_if<PostedPrice>(&m)) {
        j["rho"] = pp->rho;
    } else if (const auto* rd = std::get_if<RatioDependent>(&m)) {
        j["curve"] = curve_to_json(rd->psi);
    } else if (const auto* g = std::get_if<GridMechanism>(&m)) {
        std::vector<std::vector<double>> f2(g->nv(), std::vector<double>(g->nk()));
        std::vector<std::vector<double>> p(g->nv(), std::vector<double>(g->nk()));
        for (std::size_t i = 0; i < g->nv(); ++i)
            for (std::size_t jj = 0; jj < g->nk(); ++jj) {
                f2[i][jj] = g->f2(i, jj);
                p[i][jj] = g->payment(i, jj);
            }
        j["v"] = g->v_grid();
        j["k"] = g->k_grid();
        j["f2"] = f2;
        j["p"] = p;
    } else if (const auto* rg = std::get_if<RawGridMechanism>(&m)) {
        j["v"] = rg->v_grid;
        j["k"] = rg->k_grid;
        j["f1"] = rg->f1;
        j["f2"] = rg->f2;
        j["p"] = rg->p;
    }
    return j.dump(2);
}

Mechanism mechanism_from_json(const std::string& text) {
    const json j = json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "posted_price") {
        return PostedPrice{j.at("rho").get<double>()};
    }
    if (kind == "ratio_dependent") {
        return RatioDependent{curve_from_json(j.at("curve"))};
    }
    if (kind == "grid") {
        return GridMechanism(j.at("v").get<std::vector<double>>(),
                             j.at("k").get<std::vector<double>>(),
                             j.at("f2").get<std::vector<std::vector<double>>>(),
                             j.at("p").get<std::vector<std::vector<double>>>());
    }
    if (kind == "raw_grid") {
        return RawGridMechanism{j.at("v").get<std::vector<double>>(),
                                j.at("k").get<std::vector<double>>(),
                                j.at("f1").get<std::vector<std::vector<double>>>(),
                                j.at("f2").get<std::vector<std::vector<double>>>(),
                                j.at("p").get<std::vector<std::vector<double>>>()};
    }
    throw std::invalid_argument("unknown mechanism kind: " + kind);
}

void write_mechanism(const Mechanism& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << mechanism_to_json(m) << "\n";
}

Mechanism read_mechanism(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mechanism file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return mechanism_from_json(ss.str());
}

void write_grid_csv(const GridMechanism& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "v,k,f1,f2,p\n";
    char buf[160];
    for (std::size_t i = 0; i < m.nv(); ++i) {
        for (std::size_t j = 0; j < m.nk(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n", m.v_grid()[i],
                          m.k_grid()[j], m.f1(i, j), m.f2(i, j), m.payment(i, j));
            out << buf;
        }
    }
}

}  // namespace ratiomech
