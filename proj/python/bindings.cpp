#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "folicurve/cli.hpp"
#include "folicurve/cmcgen.hpp"
#include "folicurve/error.hpp"
#include "folicurve/exprlang.hpp"
#include "folicurve/geometry.hpp"
#include "folicurve/identity.hpp"

namespace py = pybind11;
using namespace folicurve;

namespace {

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

Signature signature_arg(const std::string& text) {
    const auto sig = parse_signature(text);
    if (!sig) throw py::value_error("signature must be 'riemannian' or 'lorentzian', got '" + text + "'");
    return *sig;
}

// One row per stored leaf: t, r, r1, r2, k, k1, k2, K_check.
py::array_t<double> rows_array(const cmcgen::RotationalProfile& p) {
    py::array_t<double> out({static_cast<py::ssize_t>(p.rows.size()), py::ssize_t{8}});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        const auto& r = p.rows[i];
        const double values[8] = {r.t, r.r, r.r1, r.r2, r.k, r.k1, r.k2, r.K_check};
        for (py::ssize_t c = 0; c < 8; ++c) view(i, c) = values[c];
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_folicurve, m) {
    m.doc() = "Mean curvature of sphere-foliated hypersurfaces in H^n x R";

    static py::handle error_type =
        py::exception<Error>(m, "FolicurveError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = error_type(e.what());
            inst.attr("kind") = std::string(to_string(e.kind()));
            if (const auto* pe = dynamic_cast<const expr::ParseError*>(&e)) {
                inst.attr("offset") = pe->offset();
                inst.attr("expected") = pe->expected();
            }
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    py::class_<FoliationJet>(m, "FoliationJet")
        .def(py::init([](double t, double k, double k1, double k2, double r, double r1, double r2) {
                 return FoliationJet{t, k, k1, k2, r, r1, r2};
             }),
             py::arg("t") = 0.0, py::arg("k"), py::arg("k1") = 0.0, py::arg("k2") = 0.0, py::arg("r"),
             py::arg("r1") = 0.0, py::arg("r2") = 0.0)
        .def_readwrite("t", &FoliationJet::t)
        .def_readwrite("k", &FoliationJet::k)
        .def_readwrite("k1", &FoliationJet::k1)
        .def_readwrite("k2", &FoliationJet::k2)
        .def_readwrite("r", &FoliationJet::r)
        .def_readwrite("r1", &FoliationJet::r1)
        .def_readwrite("r2", &FoliationJet::r2)
        .def("center_drift", &FoliationJet::center_drift)
        .def("__repr__", [](const FoliationJet& j) {
            std::ostringstream s;
            s << "FoliationJet(t=" << j.t << ", k=" << j.k << ", k1=" << j.k1 << ", k2=" << j.k2
              << ", r=" << j.r << ", r1=" << j.r1 << ", r2=" << j.r2 << ")";
            return s.str();
        });

    // identity
    m.def(
        "verify_identity",
        [](const std::string& signature, const std::string& mutate) {
            auto mutation = identity::BracketMutation::None;
            if (mutate == "c3") mutation = identity::BracketMutation::C3;
            else if (mutate == "c2") mutation = identity::BracketMutation::C2;
            else if (mutate == "c1") mutation = identity::BracketMutation::C1;
            else if (!mutate.empty()) throw py::value_error("mutate must be c3, c2 or c1");
            return to_python(identity::verify_squared_identity(signature_arg(signature), mutation).to_json());
        },
        py::arg("signature") = "riemannian", py::arg("mutate") = "",
        "Exact check of the squared identity; returns the report as a dict.");
    m.def(
        "theorem_residuals",
        [](const FoliationJet& jet, double H, int n, const std::string& signature) {
            const auto r = identity::theorem_residuals(jet, H, n, signature_arg(signature));
            return py::make_tuple(r.deg0, r.c1_val);
        },
        py::arg("jet"), py::arg("H"), py::arg("n"), py::arg("signature") = "riemannian");

    // geometry
    m.def(
        "euclidean_to_hyperbolic",
        [](double k, double r) {
            const auto c = geometry::euclidean_to_hyperbolic(k, r);
            return py::make_tuple(c.K, c.R);
        },
        py::arg("k"), py::arg("r"), "(k, r) -> (K, R)");
    m.def(
        "hyperbolic_to_euclidean",
        [](double K, double R) {
            const auto s = geometry::hyperbolic_to_euclidean({K, R});
            return py::make_tuple(s.k, s.r);
        },
        py::arg("K"), py::arg("R"), "(K, R) -> (k, r)");
    m.def(
        "mean_curvature_at",
        [](std::vector<double> x, double t, const FoliationJet& jet, const std::string& signature) {
            const geometry::SurfacePoint p{std::move(x), t};
            return geometry::mean_curvature_at(p, jet, p.dimension(), signature_arg(signature));
        },
        py::arg("x"), py::arg("t"), py::arg("jet"), py::arg("signature") = "riemannian",
        "Mean curvature at the point (x_1, ..., x_n, t) of the leaf given by `jet`.");
    m.def(
        "leaf_points",
        [](const FoliationJet& jet, int n, int count) {
            std::vector<std::vector<double>> out;
            for (auto& p : geometry::leaf_points(jet, n, count)) out.push_back(std::move(p.x));
            return out;
        },
        py::arg("jet"), py::arg("n"), py::arg("count"));
    m.def(
        "scan",
        [](const std::string& k, const std::string& r, double t0, double t1, int n, int samples,
           const std::string& signature, int points_per_leaf) {
            const auto f = expr::ProfileFunctions::from_text(k, r);
            const auto report = geometry::constancy_scan(f.curves(), {t0, t1}, n, signature_arg(signature),
                                                         samples, {points_per_leaf});
            return to_python(report.to_json());
        },
        py::arg("k"), py::arg("r"), py::arg("t0") = 0.0, py::arg("t1") = 1.0, py::arg("n") = 3,
        py::arg("samples") = 11, py::arg("signature") = "riemannian", py::arg("points_per_leaf") = 8,
        "Curvature scan of the foliation with Euclidean center height k(t) and radius r(t).");

    // exprlang
    m.def(
        "differentiate",
        [](const std::string& text) { return expr::to_string(expr::differentiate(expr::parse(text))); },
        py::arg("text"), "Derivative in t of an expression, as text.");
    m.def(
        "evaluate", [](const std::string& text, double t) { return expr::eval(expr::parse(text), t); },
        py::arg("text"), py::arg("t"));

    // cmcgen
    py::class_<cmcgen::RotationalProfile>(m, "RotationalProfile")
        .def_readonly("K", &cmcgen::RotationalProfile::K)
        .def_readonly("H_target", &cmcgen::RotationalProfile::H_target)
        .def_readonly("n", &cmcgen::RotationalProfile::n)
        .def_readonly("sign_branch", &cmcgen::RotationalProfile::sign_branch)
        .def_readonly("step", &cmcgen::RotationalProfile::step)
        .def_readonly("halt_detail", &cmcgen::RotationalProfile::halt_detail)
        .def_property_readonly("signature",
                               [](const cmcgen::RotationalProfile& p) { return std::string(to_string(p.sig)); })
        .def_property_readonly("halt",
                               [](const cmcgen::RotationalProfile& p) { return std::string(to_string(p.halt)); })
        .def_property_readonly("rows", &rows_array, "Columns t, r, r1, r2, k, k1, k2, K_check")
        .def("oriented_H", &cmcgen::RotationalProfile::oriented_H)
        .def("to_csv", &cmcgen::RotationalProfile::to_csv)
        .def("to_json", [](const cmcgen::RotationalProfile& p) { return to_python(p.to_json()); })
        .def("to_off", &cmcgen::export_off, py::arg("segments") = 48)
        .def(
            "validate",
            [](const cmcgen::RotationalProfile& p, int samples, double tolerance) {
                cmcgen::ValidationOptions options;
                options.tolerance = tolerance;
                return to_python(cmcgen::validate_profile(p, samples, options).to_json());
            },
            py::arg("samples") = 20, py::arg("tolerance") = 1e-5)
        .def("__len__", [](const cmcgen::RotationalProfile& p) { return p.rows.size(); });

    m.def(
        "generate",
        [](double H, double K, double r0, double r1, double t0, double t1, double step, int n,
           const std::string& signature, int sign_branch) {
            return cmcgen::integrate_profile(r0, r1, {t0, t1}, step, K, H, n, signature_arg(signature),
                                             sign_branch);
        },
        py::arg("H") = 0.0, py::arg("K") = 1.0, py::arg("r0") = 1.0, py::arg("r1") = 0.0, py::arg("t0") = 0.0,
        py::arg("t1") = 1.0, py::arg("step") = 1e-3, py::arg("n") = 3, py::arg("signature") = "riemannian",
        py::arg("sign_branch") = 1, "Integrate a rotationally symmetric constant mean curvature profile.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
