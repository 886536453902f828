#include "ratiomech/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "ratiomech/quadrature.hpp"

namespace ratiomech {

namespace {
constexpr double kLn2 = std::numbers::ln2;

// (v - 1) / ln v, continuously extended to 1 at v = 1 and 0 at v = 0.
double example1_marginal_v(double v) {
    if (v <= 0.0) return 0.0;
    if (std::abs(v - 1.0) < 1e-12) return 1.0;
    return (v - 1.0) / std::log(v);
}
}  // namespace

// ---------------------------------------------------------------- Marginal1D

Marginal1D Marginal1D::uniform() { return Marginal1D{}; }

Marginal1D Marginal1D::tabulated(std::vector<double> nodes, std::vector<double> density) {
    if (nodes.size() != density.size() || nodes.size() < 2) {
        throw std::invalid_argument("Marginal1D: need matching node/value arrays, size >= 2");
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (nodes[i] <= nodes[i - 1]) {
            throw std::invalid_argument("Marginal1D: nodes must be strictly ascending");
        }
    }
    for (double d : density) {
        if (d <= 0.0) throw std::invalid_argument("Marginal1D: density must be positive");
    }
    Marginal1D m;
    m.uniform_ = false;
    m.nodes_ = std::move(nodes);
    m.values_ = std::move(density);
    const double mass = quad::trapezoid(m.nodes_, m.values_);
    for (double& d : m.values_) d /= mass;
    m.cum_ = quad::trapezoid_cumulative(m.nodes_, m.values_);
    return m;
}

double Marginal1D::density(double x) const {
    if (uniform_) return 1.0;
    return quad::interp_linear(nodes_, values_, x);
}

double Marginal1D::cdf(double x) const {
    if (uniform_) return std::clamp(x, 0.0, 1.0);
    if (x <= nodes_.front()) return 0.0;
    if (x >= nodes_.back()) return 1.0;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
    const double h = x - nodes_[i - 1];
    const double w0 = values_[i - 1];
    const double slope = (values_[i] - values_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
    // exact integral of the linear density over the partial cell
    return cum_[i - 1] + h * (w0 + 0.5 * slope * h);
}

// -------------------------------------------------------------- Distribution

std::string family_name(Family f) {
    switch (f) {
        case Family::Uniform: return "uniform";
        case Family::Example1: return "example1";
        case Family::Example2: return "example2";
        case Family::IndependentProduct: return "independent";
        case Family::Tabulated: return "tabulated";
    }
    return "?";
}

Distribution Distribution::uniform(NumericConfig cfg) {
    Distribution d;
    d.family_ = Family::Uniform;
    d.cfg_ = cfg;
    return d;
}

Distribution Distribution::example1(NumericConfig cfg) {
    Distribution d;
    d.family_ = Family::Example1;
    d.cfg_ = cfg;
    return d;
}

Distribution Distribution::example2(NumericConfig cfg) {
    Distribution d;
    d.family_ = Family::Example2;
    d.cfg_ = cfg;
    return d;
}

Distribution Distribution::independent_product(Marginal1D v_marginal, Marginal1D k_marginal,
                                               NumericConfig cfg) {
    Distribution d;
    d.family_ = Family::IndependentProduct;
    d.cfg_ = cfg;
    d.mv_ = std::make_shared<Marginal1D>(std::move(v_marginal));
    d.mk_ = std::make_shared<Marginal1D>(std::move(k_marginal));
    return d;
}

Distribution Distribution::tabulated(std::vector<double> v_nodes, std::vector<double> k_nodes,
                                     std::vector<std::vector<double>> values, NumericConfig cfg) {
    if (v_nodes.size() < 2 || k_nodes.size() < 2) {
        throw std::invalid_argument("tabulated: need at least a 2x2 mesh");
    }
    if (values.size() != v_nodes.size()) {
        throw std::invalid_argument("tabulated: value rows must match v nodes");
    }
    for (const auto& row : values) {
        if (row.size() != k_nodes.size()) {
            throw std::invalid_argument("tabulated: value columns must match k nodes");
        }
    }
    Distribution d;
    d.family_ = Family::Tabulated;
    d.cfg_ = cfg;
    d.v_nodes_ = std::move(v_nodes);
    d.k_nodes_ = std::move(k_nodes);
    d.values_ = std::move(values);

    // Renormalize once at load so the bilinear interpolant integrates to 1.
    const std::size_t nv = d.v_nodes_.size(), nk = d.k_nodes_.size();
    std::vector<double> col(nv);
    std::vector<double> col_mass(nk);
    for (std::size_t j = 0; j < nk; ++j) {
        for (std::size_t i = 0; i < nv; ++i) col[i] = d.values_[i][j];
        col_mass[j] = quad::trapezoid(d.v_nodes_, col);
    }
    const double total = quad::trapezoid(d.k_nodes_, col_mass);
    if (total <= 0.0) throw std::invalid_argument("tabulated: density mass must be positive");
    for (auto& row : d.values_)
        for (double& x : row) x /= total;
    for (double& m : col_mass) m /= total;
    d.col_mass_ = std::move(col_mass);

    d.gv_nodes_.resize(nv);
    std::vector<double> rowbuf(nk);
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = 0; j < nk; ++j) rowbuf[j] = d.values_[i][j];
        d.gv_nodes_[i] = quad::trapezoid(d.k_nodes_, rowbuf);
    }
    d.gv_cum_ = quad::trapezoid_cumulative(d.v_nodes_, d.gv_nodes_);
    return d;
}

Distribution Distribution::tabulated_from_csv(const std::string& path, NumericConfig cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open distribution file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty distribution file: " + path);
    std::map<double, std::map<double, double>> cells;  // v -> k -> density
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
            throw std::runtime_error(path + ": malformed line " + std::to_string(lineno));
        }
        cells[std::stod(a)][std::stod(b)] = std::stod(c);
    }
    std::vector<double> vs, ks;
    for (const auto& [v, row] : cells) vs.push_back(v);
    for (const auto& [k, x] : cells.begin()->second) ks.push_back(k);
    std::vector<std::vector<double>> vals(vs.size(), std::vector<double>(ks.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& row = cells[vs[i]];
        if (row.size() != ks.size()) {
            throw std::runtime_error(path + ": mesh is not rectangular");
        }
        std::size_t j = 0;
        for (const auto& [k, dens] : row) {
            if (k != ks[j]) throw std::runtime_error(path + ": mesh is not rectangular");
            vals[i][j++] = dens;
        }
    }
    return tabulated(std::move(vs), std::move(ks), std::move(vals), cfg);
}

double Distribution::k_quad_min() const {
    switch (family_) {
        case Family::Tabulated: return k_nodes_.front();
        default: return 0.0;
    }
}

void Distribution::check_domain(double v, double k) const {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError("value out of [0,1]: " + std::to_string(v));
    }
    if (!(k >= cfg_.k_floor && k <= 1.0)) {
        throw DomainError("ratio out of [k_floor,1]: " + std::to_string(k));
    }
}

double Distribution::bilinear(double v, double k) const {
    const double vc = std::clamp(v, v_nodes_.front(), v_nodes_.back());
    const double kc = std::clamp(k, k_nodes_.front(), k_nodes_.back());
    auto vi = std::upper_bound(v_nodes_.begin(), v_nodes_.end(), vc);
    auto ki = std::upper_bound(k_nodes_.begin(), k_nodes_.end(), kc);
    std::size_t i = std::min(v_nodes_.size() - 1,
                             static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, vi - v_nodes_.begin())));
    std::size_t j = std::min(k_nodes_.size() - 1,
                             static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, ki - k_nodes_.begin())));
    const double tv = (vc - v_nodes_[i - 1]) / (v_nodes_[i] - v_nodes_[i - 1]);
    const double tk = (kc - k_nodes_[j - 1]) / (k_nodes_[j] - k_nodes_[j - 1]);
    const double a = values_[i - 1][j - 1] * (1 - tv) + values_[i][j - 1] * tv;
    const double b = values_[i - 1][j] * (1 - tv) + values_[i][j] * tv;
    return a * (1 - tk) + b * tk;
}

double Distribution::density_extended(double v, double k) const {
    switch (family_) {
        case Family::Uniform:
            return 1.0;
        case Family::Example1:
            return std::pow(v, k) / kLn2;
        case Family::Example2:
            return (2.0 / 3.0) * (v + 2.0 * k);
        case Family::IndependentProduct:
            return mv_->density(v) * mk_->density(k);
        case Family::Tabulated:
            return bilinear(v, k);
    }
    return 0.0;
}

double Distribution::conditional_density_extended(double v, double k) const {
    switch (family_) {
        case Family::Uniform:
            return 1.0;
        case Family::Example1:
            return std::pow(v, k) * (k + 1.0);
        case Family::Example2:
            return (v + 2.0 * k) / (0.5 + 2.0 * k);
        case Family::IndependentProduct:
            return mv_->density(v);
        case Family::Tabulated: {
            const double mass = quad::interp_linear(k_nodes_, col_mass_, k);
            if (mass <= 0.0) throw DegenerateDensityError("zero conditional mass at k");
            return bilinear(v, k) / mass;
        }
    }
    return 0.0;
}

double Distribution::conditional_cdf_extended(double v, double k) const {
    switch (family_) {
        case Family::Uniform:
            return v;
        case Family::Example1:
            return std::pow(v, k + 1.0);
        case Family::Example2:
            return (0.5 * v * v + 2.0 * k * v) / (0.5 + 2.0 * k);
        case Family::IndependentProduct:
            return mv_->cdf(v);
        case Family::Tabulated: {
            // exact integral of the interpolant in v at fixed k
            const double mass = quad::interp_linear(k_nodes_, col_mass_, k);
            if (mass <= 0.0) throw DegenerateDensityError("zero conditional mass at k");
            const double vc = std::clamp(v, v_nodes_.front(), v_nodes_.back());
            double acc = 0.0;
            for (std::size_t i = 1; i < v_nodes_.size(); ++i) {
                const double v0 = v_nodes_[i - 1], v1 = v_nodes_[i];
                const double w0 = bilinear(v0, k), w1 = bilinear(v1, k);
                if (vc >= v1) {
                    acc += 0.5 * (v1 - v0) * (w0 + w1);
                } else {
                    const double h = vc - v0;
                    const double slope = (w1 - w0) / (v1 - v0);
                    acc += h * (w0 + 0.5 * slope * h);
                    break;
                }
            }
            return acc / mass;
        }
    }
    return 0.0;
}

double Distribution::marginal_k_density_extended(double k) const {
    switch (family_) {
        case Family::Uniform:
            return 1.0;
        case Family::Example1:
            return 1.0 / ((k + 1.0) * kLn2);
        case Family::Example2:
            return (1.0 + 4.0 * k) / 3.0;
        case Family::IndependentProduct:
            return mk_->density(k);
        case Family::Tabulated:
            return quad::interp_linear(k_nodes_, col_mass_, k);
    }
    return 0.0;
}

double Distribution::density(const TypePoint& t) const {
    check_domain(t.v, t.k);
    return density_extended(t.v, t.k);
}

double Distribution::conditional_density(double v, double k) const {
    check_domain(v, k);
    return conditional_density_extended(v, k);
}

double Distribution::conditional_cdf(double v, double k) const {
    check_domain(v, k);
    return conditional_cdf_extended(v, k);
}

double Distribution::marginal_v_cdf(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("value out of [0,1]: " + std::to_string(p));
    }
    switch (family_) {
        case Family::Uniform:
            return p;
        case Family::Example1:
            return quad::adaptive([](double v) { return example1_marginal_v(v) / kLn2; }, 0.0, p,
                                  1e-12);
        case Family::Example2:
            return p * p / 3.0 + 2.0 * p / 3.0;
        case Family::IndependentProduct:
            return mv_->cdf(p);
        case Family::Tabulated: {
            if (p <= v_nodes_.front()) return 0.0;
            auto it = std::upper_bound(v_nodes_.begin(), v_nodes_.end(), p);
            std::size_t i = std::min(v_nodes_.size() - 1,
                                     static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - v_nodes_.begin())));
            const double h = p - v_nodes_[i - 1];
            const double slope = (gv_nodes_[i] - gv_nodes_[i - 1]) / (v_nodes_[i] - v_nodes_[i - 1]);
            return gv_cum_[i - 1] + h * (gv_nodes_[i - 1] + 0.5 * slope * h);
        }
    }
    return 0.0;
}

double Distribution::marginal_k_density(double k) const {
    check_domain(0.0, k);
    return marginal_k_density_extended(k);
}

DistributionValidation Distribution::validate() const {
    DistributionValidation rep;
    const double kq = k_quad_min();

    // positivity scan; v = 0 is excluded since closed-form families may
    // vanish on that boundary without violating positivity on the interior
    if (family_ == Family::Tabulated) {
        for (std::size_t i = 0; i < v_nodes_.size(); ++i) {
            for (std::size_t j = 0; j < k_nodes_.size(); ++j) {
                if (!(values_[i][j] > 0.0)) {
                    rep.issues.push_back({"nonpositive density cell", v_nodes_[i], k_nodes_[j],
                                          values_[i][j]});
                }
            }
        }
        for (std::size_t i = 1; i < v_nodes_.size(); ++i) {
            if (v_nodes_[i] <= v_nodes_[i - 1]) {
                rep.issues.push_back({"v mesh not strictly ascending", v_nodes_[i], 0.0, 0.0});
            }
        }
        for (std::size_t j = 1; j < k_nodes_.size(); ++j) {
            if (k_nodes_[j] <= k_nodes_[j - 1]) {
                rep.issues.push_back({"k mesh not strictly ascending", 0.0, k_nodes_[j], 0.0});
            }
        }
    } else {
        for (double v : quad::linspace(0.01, 1.0, 100)) {
            for (double k : quad::linspace(std::max(kq, cfg_.k_floor), 1.0, 51)) {
                if (!(density_extended(v, k) > 0.0)) {
                    rep.issues.push_back({"nonpositive density", v, k, density_extended(v, k)});
                }
            }
        }
    }

    const double joint = quad::adaptive(
        [&](double k) {
            return quad::adaptive([&](double v) { return density_extended(v, k); }, 0.0, 1.0,
                                  1e-12);
        },
        kq, 1.0, 1e-12);
    rep.joint_normalization_error = std::abs(joint - 1.0);
    if (rep.joint_normalization_error > cfg_.integration_tol) {
        rep.issues.push_back({"joint density does not integrate to 1", 0.0, 0.0,
                              rep.joint_normalization_error});
    }

    for (double k : quad::linspace(std::max(kq, cfg_.k_floor), 1.0, cfg_.condition_k_nodes)) {
        const double cmass = quad::adaptive(
            [&](double v) { return conditional_density_extended(v, k); }, 0.0, 1.0, 1e-12);
        const double err = std::abs(cmass - 1.0);
        rep.max_conditional_error = std::max(rep.max_conditional_error, err);
        if (err > cfg_.integration_tol) {
            rep.issues.push_back({"conditional density does not integrate to 1", 0.0, k, err});
        }
    }

    rep.pass = rep.issues.empty();
    return rep;
}

}  // namespace ratiomech
