#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlambda/parse.hpp"
#include "mlambda/verify.hpp"

namespace py = pybind11;
using namespace mlambda;

namespace {

EvalParams params(double tol, int order, int max_refine) {
    EvalParams p;
    p.abs_tol = tol;
    p.quad_order = order;
    p.max_refine = max_refine;
    return p;
}

std::shared_ptr<const LambdaExpression> expr(const std::string& thetas) {
    return cached_expression(parse_theta_tuple(thetas));
}

void check_arity(const LambdaExpression& e, const std::vector<Complex>& s) {
    if (s.size() != e.arity())
        throw InputError("point has " + std::to_string(s.size()) + " slots, tuple has " + std::to_string(e.arity()));
}

py::dict result_dict(const LambdaResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["err"] = r.err;
    d["warnings"] = r.warnings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multiple completed L-functions from iterated Mellin transforms of theta series";

    static py::exception<PoleError> pole_error(m, "PoleError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const PoleError& e) {
            std::string msg = std::string(e.what()) + " (distance " + std::to_string(e.distance) + ")";
            PyErr_SetString(pole_error.ptr(), msg.c_str());
        }
    });
    py::register_exception<IntersectionError>(m, "IntersectionError", PyExc_ArithmeticError);
    py::register_exception<MultiplicityError>(m, "MultiplicityError", PyExc_ArithmeticError);
    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);

    m.def(
        "evaluate",
        [](const std::string& thetas, std::vector<Complex> s, double tol, int order, int max_refine) {
            auto e = expr(thetas);
            check_arity(*e, s);
            py::gil_scoped_release nogil;
            auto r = lambda_eval(*e, s, params(tol, order, max_refine));
            py::gil_scoped_acquire gil;
            return result_dict(r);
        },
        py::arg("thetas"), py::arg("s"), py::arg("tol") = 1e-10, py::arg("order") = 32, py::arg("max_refine") = 8,
        "Lambda(thetas; s) with an error estimate.");

    m.def(
        "eval_many",
        [](const std::string& thetas, std::vector<std::vector<Complex>> points, double tol, unsigned threads) {
            auto e = expr(thetas);
            for (const auto& s : points) check_arity(*e, s);
            std::vector<PointResult> out;
            {
                py::gil_scoped_release nogil;
                EvalParams p;
                p.abs_tol = tol;
                out = lambda_eval_many(*e, points, p, threads);
            }
            py::list rows;
            for (const auto& r : out) {
                py::dict d = result_dict(r.result);
                d["pole"] = r.pole ? py::cast(r.pole->hyperplane_str()) : py::none();
                d["error"] = r.error;
                rows.append(d);
            }
            return rows;
        },
        py::arg("thetas"), py::arg("points"), py::arg("tol") = 1e-10, py::arg("threads") = 1);

    m.def(
        "lstar",
        [](const std::string& thetas, std::vector<Complex> s, double tol) {
            auto e = expr(thetas);
            check_arity(*e, s);
            EvalParams p;
            p.abs_tol = tol;
            return result_dict(lstar_eval(*e, s, p));
        },
        py::arg("thetas"), py::arg("s"), py::arg("tol") = 1e-10);

    m.def(
        "poles",
        [](const std::string& thetas) {
            std::vector<std::string> out;
            for (const auto& h : poles(*expr(thetas))) out.push_back(h.hyperplane_str());
            return out;
        },
        py::arg("thetas"), "Pole hyperplanes, e.g. 's1+s2 = 2'.");

    m.def(
        "residue",
        [](const std::string& thetas, const std::string& hyperplane, std::vector<Complex> s, double tol) {
            auto e = expr(thetas);
            check_arity(*e, s);
            AffineForm h = parse_hyperplane(hyperplane);
            if (h.slots() != e->arity()) throw InputError("hyperplane arity does not match the tuple");
            EvalParams p;
            p.abs_tol = tol;
            return result_dict(residue(*e, h, s, p));
        },
        py::arg("thetas"), py::arg("hyperplane"), py::arg("s"), py::arg("tol") = 1e-10,
        "Residue along c.s = b given as 'c1,..,cr:b', at a point of the hyperplane.");

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed, int trials) {
            VerifyOptions opt;
            opt.seed = seed;
            opt.trials = trials;
            std::vector<VerifyCase> cases;
            {
                py::gil_scoped_release nogil;
                cases = run_verify_suite(suite, opt);
            }
            py::list rows;
            for (const auto& c : cases) {
                py::dict d;
                d["suite"] = c.suite;
                d["name"] = c.name;
                d["defect"] = c.defect;
                d["tolerance"] = c.tolerance;
                d["pass"] = c.pass;
                rows.append(d);
            }
            return rows;
        },
        py::arg("suite") = "all", py::arg("seed") = 1, py::arg("trials") = 20);

    m.def("suites", &verify_suite_names);
    m.def("builtin_thetas", &builtin_names);
    m.def(
        "theta_info",
        [](const std::string& name) {
            ThetaPtr t = parse_theta_name(name);
            py::dict d;
            d["name"] = t->name;
            d["weight"] = to_double(t->weight);
            d["sign"] = t->sign;
            d["dual"] = t->dual().name;
            d["critical_values"] = critical_values(*t);
            return d;
        },
        py::arg("name"));
}
