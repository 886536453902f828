#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ratiomech/distribution.hpp"
#include "ratiomech/mechanism.hpp"
#include "ratiomech/solve.hpp"
#include "ratiomech/verify.hpp"
#include "ratiomech/virtual_valuation.hpp"

namespace py = pybind11;
using namespace ratiomech;

PYBIND11_MODULE(_ratiomech, m) {
    m.doc() = "optimal selling mechanisms for a pair of divisible complementary goods";

    py::class_<NumericConfig>(m, "NumericConfig")
        .def(py::init<>())
        .def_readwrite("k_floor", &NumericConfig::k_floor)
        .def_readwrite("quad_nodes_1d", &NumericConfig::quad_nodes_1d)
        .def_readwrite("quad_nodes_2d", &NumericConfig::quad_nodes_2d)
        .def_readwrite("condition_k_nodes", &NumericConfig::condition_k_nodes)
        .def_readwrite("condition_v_nodes", &NumericConfig::condition_v_nodes)
        .def_readwrite("root_tol", &NumericConfig::root_tol)
        .def_readwrite("ic_tol", &NumericConfig::ic_tol)
        .def_readwrite("strictness_eps", &NumericConfig::strictness_eps);

    py::class_<TypePoint>(m, "TypePoint")
        .def(py::init<double, double>(), py::arg("v"), py::arg("k"))
        .def_readwrite("v", &TypePoint::v)
        .def_readwrite("k", &TypePoint::k);

    py::class_<Distribution>(m, "Distribution")
        .def_static("uniform", &Distribution::uniform, py::arg("cfg") = NumericConfig{})
        .def_static("example1", &Distribution::example1, py::arg("cfg") = NumericConfig{})
        .def_static("example2", &Distribution::example2, py::arg("cfg") = NumericConfig{})
        .def_static("tabulated_from_csv", &Distribution::tabulated_from_csv, py::arg("path"),
                    py::arg("cfg") = NumericConfig{})
        .def("density", [](const Distribution& d, double v, double k) {
            return d.density({v, k});
        })
        .def("conditional_cdf", &Distribution::conditional_cdf)
        .def("marginal_v_cdf", &Distribution::marginal_v_cdf)
        .def("marginal_k_density", &Distribution::marginal_k_density)
        .def("validate", [](const Distribution& d) {
            const auto rep = d.validate();
            py::dict out;
            out["pass"] = rep.pass;
            out["joint_normalization_error"] = rep.joint_normalization_error;
            out["max_conditional_error"] = rep.max_conditional_error;
            out["issue_count"] = rep.issues.size();
            return out;
        });

    py::class_<ThresholdCurve>(m, "ThresholdCurve")
        .def(py::init<std::vector<double>, std::vector<double>>())
        .def("__call__", &ThresholdCurve::operator())
        .def_property_readonly("k_grid", &ThresholdCurve::k_grid)
        .def_property_readonly("values", &ThresholdCurve::values);

    m.def("phi", [](const Distribution& d, double v, double k) { return phi(d, {v, k}); });
    m.def("phi_zero", &phi_zero, py::arg("d"), py::arg("k"), py::arg("check_unique") = false);
    m.def("zero_curve", &zero_curve, py::arg("d"), py::arg("n") = 0);

    auto verdict_dict = [](const ConditionVerdict& v) {
        py::dict out;
        out["condition"] = condition_name(v.condition);
        out["holds"] = v.holds;
        out["margin"] = v.margin;
        out["witness_count"] = v.witnesses.size();
        return out;
    };
    m.def("check_condition_a", [verdict_dict](const Distribution& d) {
        return verdict_dict(check_condition_a(d));
    });
    m.def("check_condition_b", [verdict_dict](const Distribution& d) {
        return verdict_dict(check_condition_b(d));
    });
    m.def("check_condition_b_prime", [verdict_dict](const Distribution& d) {
        return verdict_dict(check_condition_b_prime(d));
    });

    m.def("utility", [](double v, double k, double a1, double a2, double t) {
        return utility({v, k}, {a1, a2, t});
    });
    m.def("solve_condition_b", &solve_condition_b);
    m.def("solve_posted_price", &solve_posted_price);
    m.def("posted_price_rho", [](const Distribution& d) { return posted_price_search(d).rho_star; });
    m.def("pointwise_bound", &pointwise_bound);
    m.def("oracle_best_threshold", [](const Distribution& d, int kn, int rn) {
        const auto r = oracle_best_threshold(d, kn, rn);
        return py::make_tuple(r.revenue, r.rho);
    });

    m.def("expected_revenue", &expected_revenue);
    m.def("virtual_surplus", &virtual_surplus);
    m.def("mechanism_to_json", &mechanism_to_json);
    m.def("mechanism_from_json", &mechanism_from_json);
    m.def("check_ic_direct",
          [](const Mechanism& mech, int nv, int nk, double k_floor, double tol) {
              const auto rep = check_ic_direct(mech, MeshSpec{nv, nk, k_floor}, tol);
              py::dict out;
              out["pass"] = rep.pass;
              out["max_violation"] = rep.worst("pairwise-IC");
              return out;
          },
          py::arg("mechanism"), py::arg("nv") = 50, py::arg("nk") = 50, py::arg("k_floor") = 1e-3,
          py::arg("tol") = 1e-9);
    m.def("check_ir",
          [](const Mechanism& mech, int nv, int nk, double k_floor, double tol) {
              const auto rep = check_ir(mech, MeshSpec{nv, nk, k_floor}, tol);
              py::dict out;
              out["pass"] = rep.pass;
              out["max_violation"] = rep.worst("IR");
              return out;
          },
          py::arg("mechanism"), py::arg("nv") = 50, py::arg("nk") = 50, py::arg("k_floor") = 1e-3,
          py::arg("tol") = 1e-9);

    py::class_<PostedPrice>(m, "PostedPrice")
        .def(py::init<double>(), py::arg("rho"))
        .def_readwrite("rho", &PostedPrice::rho);
    py::class_<RatioDependent>(m, "RatioDependent")
        .def(py::init<ThresholdCurve>())
        .def_readonly("psi", &RatioDependent::psi);
    m.def("make_ratio_dependent", &make_ratio_dependent, py::arg("psi"), py::arg("tol") = 1e-12);
    py::class_<GridMechanism>(m, "GridMechanism")
        .def(py::init<std::vector<double>, std::vector<double>,
                      std::vector<std::vector<double>>, std::vector<std::vector<double>>>(),
             py::arg("v_grid"), py::arg("k_grid"), py::arg("f2"), py::arg("p"))
        .def_property_readonly("v_grid", &GridMechanism::v_grid)
        .def_property_readonly("k_grid", &GridMechanism::k_grid)
        .def("f2", &GridMechanism::f2)
        .def("payment", &GridMechanism::payment);
    py::class_<RawGridMechanism>(m, "RawGridMechanism")
        .def(py::init([](std::vector<double> v, std::vector<double> k,
                         std::vector<std::vector<double>> f1, std::vector<std::vector<double>> f2,
                         std::vector<std::vector<double>> p) {
                 return RawGridMechanism{std::move(v), std::move(k), std::move(f1), std::move(f2),
                                         std::move(p)};
             }),
             py::arg("v_grid"), py::arg("k_grid"), py::arg("f1"), py::arg("f2"), py::arg("p"));
    m.def("non_wasteful_reduction", &non_wasteful_reduction);
    m.def("payment_from_allocation", &payment_from_allocation, py::arg("v_grid"), py::arg("k_grid"),
          py::arg("f2"), py::arg("p00"));
}
