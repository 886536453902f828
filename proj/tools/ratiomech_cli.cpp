// Command-line front end: loads a JSON run configuration, dispatches into the
// library, prints human-readable tables and writes machine-readable CSV/JSON
// artifacts. Identical configuration yields byte-identical outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratiomech/distribution.hpp"
#include "ratiomech/mechanism.hpp"
#include "ratiomech/solve.hpp"
#include "ratiomech/verify.hpp"
#include "ratiomech/virtual_valuation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ratiomech;

namespace {

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

struct RunConfig {
    json distribution = {{"family", "uniform"}};
    NumericConfig numeric;
    int verify_nv = 50;
    int verify_nk = 50;
    int oracle_k_nodes = 5;
    int oracle_rho_nodes = 31;
    std::string out_dir = "out";
    std::string mechanism_path;
    unsigned long long seed = 0;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
    }
    if (j.contains("distribution")) cfg.distribution = j["distribution"];
    if (j.contains("k_floor")) cfg.numeric.k_floor = j["k_floor"].get<double>();
    if (j.contains("grids")) {
        const auto& g = j["grids"];
        if (g.contains("verify_v")) cfg.verify_nv = g["verify_v"].get<int>();
        if (g.contains("verify_k")) cfg.verify_nk = g["verify_k"].get<int>();
        if (g.contains("condition_k")) cfg.numeric.condition_k_nodes = g["condition_k"].get<int>();
        if (g.contains("condition_v")) cfg.numeric.condition_v_nodes = g["condition_v"].get<int>();
        if (g.contains("quad_1d")) cfg.numeric.quad_nodes_1d = g["quad_1d"].get<int>();
        if (g.contains("quad_2d")) cfg.numeric.quad_nodes_2d = g["quad_2d"].get<int>();
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("ic")) cfg.numeric.ic_tol = t["ic"].get<double>();
        if (t.contains("root")) cfg.numeric.root_tol = t["root"].get<double>();
        if (t.contains("strictness")) cfg.numeric.strictness_eps = t["strictness"].get<double>();
        if (t.contains("integration")) cfg.numeric.integration_tol = t["integration"].get<double>();
        if (t.contains("curve")) cfg.numeric.curve_tol = t["curve"].get<double>();
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        if (o.contains("k_nodes")) cfg.oracle_k_nodes = o["k_nodes"].get<int>();
        if (o.contains("rho_nodes")) cfg.oracle_rho_nodes = o["rho_nodes"].get<int>();
    }
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("mechanism")) cfg.mechanism_path = j["mechanism"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long long>();
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.numeric.k_floor > 0.0 && cfg.numeric.k_floor <= 0.5)) {
        throw ConfigError("config: k_floor must lie in (0, 0.5]");
    }
    if (cfg.verify_nv < 3 || cfg.verify_nk < 3 || cfg.numeric.condition_k_nodes < 3 ||
        cfg.numeric.condition_v_nodes < 3 || cfg.numeric.quad_nodes_1d < 3 ||
        cfg.numeric.quad_nodes_2d < 3) {
        throw ConfigError("config: grids.* resolutions must be >= 3");
    }
    if (cfg.numeric.ic_tol <= 0 || cfg.numeric.root_tol <= 0 || cfg.numeric.strictness_eps <= 0 ||
        cfg.numeric.integration_tol <= 0 || cfg.numeric.curve_tol <= 0) {
        throw ConfigError("config: tolerances.* must be positive");
    }
}

Marginal1D marginal_from_json(const json& j, const char* key) {
    if (!j.contains("kind")) throw ConfigError(std::string("config: distribution.") + key + ".kind missing");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "uniform") return Marginal1D::uniform();
    if (kind == "tabulated") {
        return Marginal1D::tabulated(j.at("nodes").get<std::vector<double>>(),
                                     j.at("density").get<std::vector<double>>());
    }
    throw ConfigError(std::string("config: distribution.") + key + ".kind unknown: " + kind);
}

Distribution make_distribution(const RunConfig& cfg) {
    const json& j = cfg.distribution;
    if (!j.contains("family")) throw ConfigError("config: distribution.family missing");
    const std::string fam = j["family"].get<std::string>();
    if (fam == "uniform") return Distribution::uniform(cfg.numeric);
    if (fam == "example1") return Distribution::example1(cfg.numeric);
    if (fam == "example2") return Distribution::example2(cfg.numeric);
    if (fam == "independent") {
        return Distribution::independent_product(marginal_from_json(j.at("v_marginal"), "v_marginal"),
                                                 marginal_from_json(j.at("k_marginal"), "k_marginal"),
                                                 cfg.numeric);
    }
    if (fam == "tabulated") {
        if (!j.contains("path")) throw ConfigError("config: distribution.path missing for tabulated");
        return Distribution::tabulated_from_csv(j["path"].get<std::string>(), cfg.numeric);
    }
    throw ConfigError("config: distribution.family unknown: " + fam);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (text.empty() || text.back() != '\n') out << "\n";
}

json verdict_json(const ConditionVerdict& v) {
    json w = json::array();
    for (const auto& x : v.witnesses) {
        w.push_back({{"v", x.v}, {"k", x.k}, {"magnitude", x.magnitude}});
        if (w.size() >= 10) break;  // cap artifact size
    }
    return json{{"condition", condition_name(v.condition)},
                {"holds", v.holds},
                {"margin", v.margin},
                {"witnesses", w}};
}

int cmd_validate(const Distribution& d, const fs::path& out) {
    const auto rep = d.validate();
    json j = {{"pass", rep.pass},
              {"joint_normalization_error", rep.joint_normalization_error},
              {"max_conditional_error", rep.max_conditional_error},
              {"issues", json::array()}};
    for (const auto& issue : rep.issues) {
        j["issues"].push_back(
            {{"what", issue.what}, {"v", issue.v}, {"k", issue.k}, {"magnitude", issue.magnitude}});
    }
    write_text(out / "validation.json", j.dump(2));
    std::cout << "validation: " << (rep.pass ? "PASS" : "FAIL") << "\n"
              << "joint_normalization_error," << fmt(rep.joint_normalization_error) << "\n"
              << "max_conditional_error," << fmt(rep.max_conditional_error) << "\n";
    for (const auto& issue : rep.issues) {
        std::cout << "issue," << issue.what << "," << fmt(issue.v) << "," << fmt(issue.k) << ","
                  << fmt(issue.magnitude) << "\n";
    }
    return rep.pass ? 0 : 1;
}

int cmd_conditions(const Distribution& d, const fs::path& out) {
    const auto a = check_condition_a(d);
    ConditionVerdict b, bp;
    if (a.holds) {
        b = check_condition_b(d);
        bp = check_condition_b_prime(d);
    }
    json j = {{"A", verdict_json(a)}};
    if (a.holds) {
        j["B"] = verdict_json(b);
        j["Bprime"] = verdict_json(bp);
    }
    write_text(out / "conditions.json", j.dump(2));
    std::cout << "condition,holds,margin\n";
    std::cout << "A," << (a.holds ? "yes" : "no") << "," << fmt(a.margin) << "\n";
    if (a.holds) {
        std::cout << "B," << (b.holds ? "yes" : "no") << "," << fmt(b.margin) << "\n";
        std::cout << "B'," << (bp.holds ? "yes" : "no") << "," << fmt(bp.margin) << "\n";
    }
    return a.holds ? 0 : 1;
}

Mechanism solve_by_verdicts(const Distribution& d, std::string* path_name = nullptr) {
    if (d.family() == Family::IndependentProduct) {
        if (path_name) *path_name = "independent-posted-price";
        return solve_posted_price(d);
    }
    const auto a = check_condition_a(d);
    if (!a.holds) throw PreconditionError("Condition A fails; no solver path applies");
    if (check_condition_b(d).holds) {
        if (path_name) *path_name = "ratio-dependent";
        return solve_condition_b(d);
    }
    if (check_condition_b_prime(d).holds) {
        if (path_name) *path_name = "posted-price";
        return solve_posted_price(d);
    }
    throw PreconditionError("neither Condition B nor Condition B' holds; no solver path applies");
}

int cmd_solve(const Distribution& d, const fs::path& out) {
    std::string path_name;
    Mechanism m;
    try {
        m = solve_by_verdicts(d, &path_name);
    } catch (const PreconditionError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    write_mechanism(m, (out / "mechanism.json").string());
    if (const auto* rd = std::get_if<RatioDependent>(&m)) {
        rd->psi.write_csv((out / "psi_curve.csv").string(), "psi");
    } else if (const auto* pp = std::get_if<PostedPrice>(&m)) {
        ThresholdCurve::constant(pp->rho, d.k_floor(), 1.0)
            .write_csv((out / "psi_curve.csv").string(), "psi");
    }
    const double rev = expected_revenue(m, d);
    std::cout << "solver_path," << path_name << "\n"
              << "kind," << mechanism_kind(m) << "\n";
    if (const auto* pp = std::get_if<PostedPrice>(&m)) std::cout << "rho_star," << fmt(pp->rho) << "\n";
    std::cout << "expected_revenue," << fmt(rev) << "\n";
    json j = {{"solver_path", path_name}, {"kind", mechanism_kind(m)}, {"expected_revenue", rev}};
    if (const auto* pp = std::get_if<PostedPrice>(&m)) j["rho_star"] = pp->rho;
    write_text(out / "solve.json", j.dump(2));
    return 0;
}

int cmd_verify(const Distribution& d, const RunConfig& cfg, const fs::path& out) {
    if (cfg.mechanism_path.empty()) throw ConfigError("config: mechanism path missing");
    const Mechanism m = read_mechanism(cfg.mechanism_path);
    const MeshSpec mesh{cfg.verify_nv, cfg.verify_nk, d.k_floor()};
    const auto ic = check_ic_direct(m, mesh, cfg.numeric.ic_tol);
    const auto ir = check_ir(m, mesh, cfg.numeric.ic_tol);
    const GridMechanism grid = to_grid(m, mesh.v_nodes(), mesh.k_nodes());
    const auto ch = check_characterization(grid, cfg.numeric.ic_tol);
    if (grid.max_abs_payment() > 1.0) {
        std::cout << "warning,payment magnitude exceeds the value bound ("
                  << fmt(grid.max_abs_payment()) << ")\n";
    }
    std::cout << ic.to_table() << ir.to_table() << ch.to_table();
    write_text(out / "verify_direct.json", ic.to_json());
    write_text(out / "verify_ir.json", ir.to_json());
    write_text(out / "verify_characterization.json", ch.to_json());
    write_grid_csv(grid, (out / "mechanism_grid.csv").string());
    return (ic.pass && ir.pass && ch.pass) ? 0 : 1;
}

int cmd_revenue(const Distribution& d, const RunConfig& cfg, const fs::path& out) {
    if (cfg.mechanism_path.empty()) throw ConfigError("config: mechanism path missing");
    const Mechanism m = read_mechanism(cfg.mechanism_path);
    const double rev = expected_revenue(m, d);
    const double vs = virtual_surplus(m, d);
    std::cout << "payment_integral," << fmt(rev) << "\n"
              << "virtual_surplus," << fmt(vs) << "\n"
              << "difference," << fmt(rev - vs) << "\n";
    write_text(out / "revenue.json",
               json{{"payment_integral", rev}, {"virtual_surplus", vs}, {"difference", rev - vs}}
                   .dump(2));
    return 0;
}

int cmd_certify(const Distribution& d, const RunConfig& cfg, const fs::path& out) {
    Mechanism m;
    std::string path_name;
    try {
        m = solve_by_verdicts(d, &path_name);
    } catch (const PreconditionError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    const auto cert = certify(d, m, cfg.oracle_k_nodes, cfg.oracle_rho_nodes);
    std::cout << "candidate_revenue," << fmt(cert.candidate_revenue) << "\n"
              << "pointwise_bound," << fmt(cert.pointwise_bound) << "\n"
              << "oracle_best," << fmt(cert.oracle_best) << "\n"
              << "bound_gap," << fmt(cert.bound_gap) << "\n"
              << "oracle_gap," << fmt(cert.oracle_gap) << "\n";
    write_text(out / "certificate.json", cert.to_json());
    const bool pass = cert.bound_gap >= -1e-6 && cert.oracle_gap >= -5e-3;
    std::cout << "certificate," << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

int cmd_sweep(const Distribution& d, const fs::path& out) {
    const auto a = check_condition_a(d);
    if (!a.holds) {
        std::cerr << "Condition A fails; zero curve is not well defined\n";
        return 1;
    }
    const auto z = zero_curve(d);
    z.write_csv((out / "zero_curve.csv").string(), "phi_inv_zero");
    std::cout << "zero_curve," << (out / "zero_curve.csv").string() << "\n";
    try {
        std::string path_name;
        const Mechanism m = solve_by_verdicts(d, &path_name);
        if (const auto* rd = std::get_if<RatioDependent>(&m)) {
            rd->psi.write_csv((out / "psi_curve.csv").string(), "psi");
        } else if (const auto* pp = std::get_if<PostedPrice>(&m)) {
            ThresholdCurve::constant(pp->rho, d.k_floor(), 1.0)
                .write_csv((out / "psi_curve.csv").string(), "psi");
        }
        std::cout << "psi_curve," << (out / "psi_curve.csv").string() << "\n";
    } catch (const PreconditionError&) {
        // no solver path: the zero curve alone is still useful plot data
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal selling mechanisms for a pair of complementary goods"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the global flags after the subcommand too

    std::string config_path, out_dir, mechanism_path;
    int grid = 0;
    double kfloor = -1.0, tol = -1.0;
    unsigned long long seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--grid", grid, "verification mesh side length (overrides config)");
    app.add_option("--kfloor", kfloor, "smallest representable ratio (overrides config)");
    app.add_option("--tol", tol, "IC tolerance (overrides config)");
    app.add_option("--seed", seed, "seed for randomized tooling (accepted for reproducibility)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--mechanism", mechanism_path, "mechanism JSON file (verify/revenue)");

    auto* sub_validate = app.add_subcommand("validate", "distribution checks");
    auto* sub_conditions = app.add_subcommand("conditions", "Condition A / B / B' verdicts");
    auto* sub_solve = app.add_subcommand("solve", "construct the optimal mechanism");
    auto* sub_verify = app.add_subcommand("verify", "IC/IR checks on a mechanism file");
    auto* sub_revenue = app.add_subcommand("revenue", "both revenue functionals");
    auto* sub_certify = app.add_subcommand("certify", "pointwise bound + oracle certificate");
    auto* sub_sweep = app.add_subcommand("sweep", "threshold curves to CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (grid > 0) cfg.verify_nv = cfg.verify_nk = grid;
        if (kfloor >= 0.0) cfg.numeric.k_floor = kfloor;
        if (tol >= 0.0) cfg.numeric.ic_tol = tol;
        if (seed_set) cfg.seed = seed;
        if (!mechanism_path.empty()) cfg.mechanism_path = mechanism_path;
        validate_config(cfg);

        const Distribution d = make_distribution(cfg);
        const fs::path out(cfg.out_dir);
        fs::create_directories(out);

        if (sub_validate->parsed()) return cmd_validate(d, out);
        if (sub_conditions->parsed()) return cmd_conditions(d, out);
        if (sub_solve->parsed()) return cmd_solve(d, out);
        if (sub_verify->parsed()) return cmd_verify(d, cfg, out);
        if (sub_revenue->parsed()) return cmd_revenue(d, cfg, out);
        if (sub_certify->parsed()) return cmd_certify(d, cfg, out);
        if (sub_sweep->parsed()) return cmd_sweep(d, out);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
