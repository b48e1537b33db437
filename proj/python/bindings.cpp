#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include <json.hpp>

#include "heislab/beta.hpp"
#include "heislab/corona.hpp"
#include "heislab/errors.hpp"
#include "heislab/flags.hpp"
#include "heislab/heis.hpp"
#include "heislab/ilg.hpp"
#include "heislab/kernels.hpp"
#include "heislab/lab.hpp"
#include "heislab/sio.hpp"
#include "heislab/special.hpp"
#include "heislab/tame.hpp"

namespace py = pybind11;
using namespace heislab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const Array& a) {
    if (a.ndim() != 1) throw DomainError("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

Array to_array(std::span<const double> v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Array grid_nodes(const UniformGrid& g) {
    Array out(static_cast<py::ssize_t>(g.n));
    for (std::size_t i = 0; i < g.n; ++i) out.mutable_data()[i] = g.x(i);
    return out;
}

NormKind norm_kind(const std::string& s) {
    if (s == "max") return NormKind::MaxNorm;
    if (s == "koranyi") return NormKind::Koranyi;
    throw DomainError("norm must be 'max' or 'koranyi'");
}

QFn q_kind(const std::string& s) {
    if (s == "square") return QFn::Square;
    if (s == "signed_square") return QFn::SignedSquare;
    throw DomainError("q must be 'square' or 'signed_square'");
}

template <class F>
Array vectorized(const Array& z, F f) {
    Array out(z.size());
    for (py::ssize_t i = 0; i < z.size(); ++i) out.mutable_data()[i] = f(z.data()[i]);
    return out;
}

py::dict audit_dict(const CoronaAudit& a) {
    py::dict d;
    d["ok"] = a.ok();
    d["bad_carleson"] = a.bad_carleson;
    d["top_carleson"] = a.top_carleson;
    d["max_approx_ratio"] = a.max_approx_ratio;
    d["max_psi_constant"] = a.max_psi_constant;
    d["max_exactness_error"] = a.max_exactness_error;
    d["failure"] = a.failure;
    return d;
}

}  // namespace

PYBIND11_MODULE(_heislab, m) {
    m.doc() = "Heisenberg group geometry and singular integral experiments";

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<SingularityError>(m, "SingularityError", PyExc_ValueError);
    py::register_exception<DiscretizationError>(m, "DiscretizationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
    py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);
    py::register_exception<IterationError>(m, "IterationError", PyExc_RuntimeError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", domain.ptr());

    py::class_<HPoint>(m, "HPoint")
        .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("t") = 0.0)
        .def_readwrite("x", &HPoint::x)
        .def_readwrite("y", &HPoint::y)
        .def_readwrite("t", &HPoint::t)
        .def("__mul__", [](const HPoint& p, const HPoint& q) { return mul(p, q); })
        .def("__eq__", [](const HPoint& p, const HPoint& q) { return p == q; })
        .def("inverse", [](const HPoint& p) { return inverse(p); })
        .def("__iter__", [](const HPoint& p) { return py::iter(py::make_tuple(p.x, p.y, p.t)); })
        .def("__repr__", [](const HPoint& p) {
            std::ostringstream os;
            os << "HPoint" << p;
            return os.str();
        });

    m.def("norm", [](const HPoint& p, const std::string& kind) { return norm(p, norm_kind(kind)); }, py::arg("p"),
          py::arg("kind") = "max");
    m.def("dist", [](const HPoint& p, const HPoint& q, const std::string& kind) { return dist(p, q, norm_kind(kind)); },
          py::arg("p"), py::arg("q"), py::arg("kind") = "max");
    m.def("dilate", py::overload_cast<double, const HPoint&>(&dilate), py::arg("r"), py::arg("p"));
    m.def("rotate", &rotate, py::arg("theta"), py::arg("p"));
    m.def("group_audit", [](int samples, std::uint64_t seed) {
        const auto a = group_audit(samples, seed);
        py::dict d;
        d["associativity"] = a.associativity;
        d["inverse"] = a.inverse;
        d["dilation"] = a.dilation;
        d["left_invariance"] = a.left_invariance;
        d["koranyi_ratio_min"] = a.koranyi_ratio_min;
        d["koranyi_ratio_max"] = a.koranyi_ratio_max;
        return d;
    }, py::arg("samples") = 1000, py::arg("seed") = 1);

    m.def("eval_kernel", [](const std::string& name, const HPoint& p) { return eval_kernel(KernelSpec::parse(name), p); },
          py::arg("name"), py::arg("p"));

    py::class_<IlgFunction>(m, "IlgFunction")
        .def_property_readonly("v", [](const IlgFunction& f) { return grid_nodes(f.grid()); })
        .def_property_readonly("phi1", [](const IlgFunction& f) { return to_array(f.phi1.v); })
        .def_property_readonly("phi2", [](const IlgFunction& f) { return to_array(f.phi2.v); })
        .def_readonly("declared_L", &IlgFunction::declared_L)
        .def("__call__", [](const IlgFunction& f, double v) { return graph_map(f, v); });
    m.def("ilg_fixture", &ilg_fixture, py::arg("name"), py::arg("L") = 1.0, py::arg("a") = 0.0, py::arg("b") = 1.0,
          py::arg("n") = 1025);
    m.def("ilg_check", &ilg_check, py::arg("f"));
    m.def("h1_length", &h1_length, py::arg("f"), py::arg("a"), py::arg("b"), py::arg("n") = 0);

    m.def("tameness_constant", [](const Array& x, const Array& b1, const Array& b2) {
        return tameness_constant(std::span<const double>(to_vec(x)), to_vec(b1), to_vec(b2));
    }, py::arg("x"), py::arg("b1"), py::arg("b2"));
    m.def("extend_tame", [](const Array& points, const Array& phi1, const Array& phi2, double a, double b, std::size_t n) {
        const auto e = extend_tame({to_vec(points), to_vec(phi1), to_vec(phi2)}, UniformGrid::over(a, b, n));
        return py::make_tuple(grid_nodes(e.grid()), to_array(e.b1()), to_array(e.b2()));
    }, py::arg("points"), py::arg("phi1"), py::arg("phi2"), py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("n") = 257);

    m.def("corona", [](const IlgFunction& f, double eta, int depth, const std::string& mode) {
        if (mode != "lipschitz" && mode != "tame") throw DomainError("mode must be 'lipschitz' or 'tame'");
        CoronaDecomposition dec;
        CoronaAudit au;
        if (mode == "lipschitz") {
            dec = lipschitz_corona(f.phi1, eta, depth);
            au = audit_corona(dec, f.phi1);
        } else {
            const auto B = TameMapSampled::from_b1(f.grid(), f.phi1.v, 0.0);
            dec = tame_corona(B, eta, depth);
            au = audit_corona(dec, B);
        }
        auto d = audit_dict(au);
        d["decomposition"] = py::module_::import("json").attr("loads")(corona_to_json(dec));
        return d;
    }, py::arg("f"), py::arg("eta") = 0.5, py::arg("depth") = 8, py::arg("mode") = "lipschitz");

    m.def("hilbert_norm", [](double a, double b, std::size_t n, double eps, bool smooth) {
        const auto m = assemble_sio(hilbert_kernel(), LineSamples::midpoint(a, b, n), eps,
                                    smooth ? Truncation::Smooth : Truncation::Sharp);
        return op_norm(m);
    }, py::arg("a"), py::arg("b"), py::arg("n"), py::arg("eps"), py::arg("smooth") = false);
    m.def("curve_norm", [](const std::string& kernel, const IlgFunction& f, std::size_t n, double eps) {
        const auto c = curve_from_graph(f, f.grid().front(), f.grid().back(), n);
        return op_norm(assemble_sio(make_pair_kernel(KernelSpec::parse(kernel)), c, eps));
    }, py::arg("kernel"), py::arg("f"), py::arg("n"), py::arg("eps"));

    py::class_<PsiS>(m, "PsiS")
        .def(py::init([](double s, const std::string& q) { return PsiS(s, q_kind(q)); }), py::arg("s"),
             py::arg("q") = "square")
        .def_property_readonly("s", &PsiS::s)
        .def("__call__", [](const PsiS& p, double z) { return p(z); })
        .def("__call__", [](const PsiS& p, const Array& z) { return vectorized(z, [&](double v) { return p(v); }); })
        .def("hat", py::overload_cast<double>(&PsiS::hat, py::const_))
        .def("certify", [](const PsiS& p) {
            const auto c = certify(p);
            py::dict d;
            d["mean"] = c.mean;
            d["support_ok"] = c.support_ok;
            d["sup_constant"] = c.sup_constant;
            d["fourier_constant"] = c.fourier_constant;
            return d;
        });

    py::class_<Wp>(m, "Wp")
        .def(py::init<double>(), py::arg("eps"))
        .def_property_readonly("eps", &Wp::eps)
        .def("__call__", [](const Wp& w, double x) { return w(x); })
        .def("__call__", [](const Wp& w, const Array& x) { return vectorized(x, [&](double v) { return w(v); }); })
        .def("hat", &Wp::hat)
        .def("tail_constant", &Wp::tail_constant)
        .def("certify", [](const Wp& w) {
            const auto c = certify(w);
            py::dict d;
            d["integral"] = c.integral;
            d["envelope_constant"] = c.envelope_constant;
            d["bridge_min"] = c.bridge_min;
            return d;
        });

    m.def("beta_affine", [](const Array& values, double a, double b, double center, double s) {
        const auto v = to_vec(values);
        return beta_affine(SampledFn(UniformGrid::over(a, b, v.size()), v), center, s).value;
    }, py::arg("values"), py::arg("a"), py::arg("b"), py::arg("center"), py::arg("s"));
    m.def("jones_sum", [](const Array& values, double a, double b, int levels) {
        const auto v = to_vec(values);
        return jones_sum(SampledFn(UniformGrid::over(a, b, v.size()), v), a, b, levels);
    }, py::arg("values"), py::arg("a"), py::arg("b"), py::arg("levels"));
    m.def("line_distance", &line_distance, py::arg("q"), py::arg("base"), py::arg("theta"));

    m.def("k_tau", [](const std::string& kernel, double tau, const HPoint& p) {
        return k_tau_eval({flag_kernel(kernel), tau}, p);
    }, py::arg("kernel"), py::arg("tau"), py::arg("p"));
    m.def("flat_flag_norm", [](const std::string& kernel, double y_half, double t_half, std::size_t ny, std::size_t nt,
                               double eps) {
        return sio3_norm(FlagSpec::flat(-y_half, y_half, -t_half, t_half), flag_kernel(kernel), ny, nt, eps);
    }, py::arg("kernel"), py::arg("y_half"), py::arg("t_half"), py::arg("ny"), py::arg("nt"), py::arg("eps"));

    m.def("suite_names", &suite_names);
    m.def("_run", [](const std::string& config_json) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(e.what());
        }
        const auto cfg = ExperimentConfig::from_json(j);
        SuiteResult r;
        {
            py::gil_scoped_release release;
            r = run(cfg);
        }
        py::list files, checks;
        for (const auto& f : r.files) files.append(f.string());
        for (const auto& c : r.checks) {
            py::dict d;
            d["name"] = c.name;
            d["value"] = c.value;
            d["limit"] = c.limit;
            d["pass"] = c.pass;
            checks.append(d);
        }
        py::dict d;
        d["files"] = files;
        d["checks"] = checks;
        d["ok"] = r.ok();
        return d;
    });
}
