#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frns/cli.hpp"
#include "frns/config.hpp"
#include "frns/kernel_suite.hpp"
#include "frns/solver.hpp"

namespace py = pybind11;
using namespace frns;

namespace {

py::array_t<double> to_array(const Field& f)
{
    const Grid& g = f.grid;
    std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(g.points_per_dim())};
    if (g.n_dim() == 2)
        shape.push_back(static_cast<py::ssize_t>(g.points_per_dim()));
    py::array_t<double> out(shape);
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

Field from_array(const Grid& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& a)
{
    if (static_cast<std::size_t>(a.size()) != g.total_points())
        throw ParameterError("array size does not match the grid");
    return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict solve_config(const std::string& path, std::optional<std::uint64_t> seed)
{
    RunConfig cfg = load_config(path);
    if (seed)
        cfg.seed = *seed;
    validate(cfg.model);
    const Grid grid = cfg.grid();
    SolveResult r;
    {
        py::gil_scoped_release release;
        r = solve_model(cfg.model, grid, cfg.tol, cfg.seed, cfg.restarts);
    }
    py::dict d;
    d["field"] = to_array(r.field);
    d["energy"] = r.energy;
    d["c_star"] = mp_threshold(cfg.model);
    d["nehari_residual"] = r.nehari_residual;
    d["grad_residual"] = r.grad_residual;
    d["converged"] = r.converged;
    d["status"] = r.status;
    d["iterations"] = r.iterations;
    d["argmax"] = py::make_tuple(r.argmax_point[0], r.argmax_point[1]);
    d["spacing"] = grid.spacing();
    d["half_length"] = grid.half_length();
    return d;
}

} // namespace

PYBIND11_MODULE(_frns, m)
{
    m.doc() = "Ground states of fractional relativistic Schroedinger equations";
    m.attr("__version__") = FRNS_VERSION;

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ConfigParseError>(m, "ConfigParseError", PyExc_ValueError);

    py::class_<FracParams>(m, "FracParams")
        .def(py::init([](double s, double mass, int n_dim) { return FracParams{s, mass, n_dim}; }), py::arg("s"),
             py::arg("m") = 1.0, py::arg("n_dim") = 2)
        .def_readwrite("s", &FracParams::s)
        .def_readwrite("m", &FracParams::m)
        .def_readwrite("n_dim", &FracParams::n_dim)
        .def("critical_exponent", &FracParams::critical_exponent)
        .def("validate", &FracParams::validate);

    m.def("bessel_k", &bessel_k, py::arg("nu"), py::arg("x"));
    m.def("theta_profile", &theta_profile, py::arg("s"), py::arg("r"));
    m.def("sigma_s", &sigma_s, py::arg("s"));
    m.def("kappa_s", &kappa_s, py::arg("s"));
    m.def("sobolev_trace_constant", &sobolev_trace_constant, py::arg("n_dim"), py::arg("s"));
    m.def("bessel_kernel", &bessel_kernel, py::arg("params"), py::arg("r"));

    m.def(
        "apply_operator",
        [](const FracParams& p, double half_length, const py::array_t<double, py::array::c_style | py::array::forcecast>& u) {
            if (u.ndim() != p.n_dim)
                throw ParameterError("array rank must equal n_dim");
            const Grid g(p.n_dim, static_cast<std::size_t>(u.shape(0)), half_length);
            return to_array(apply_operator(from_array(g, u), build_symbol(g, p)));
        },
        py::arg("params"), py::arg("half_length"), py::arg("u"),
        "(-Delta + m^2)^s applied to samples of a periodic field on [-L, L)^N.");

    m.def(
        "kernel_suite",
        [](const FracParams& p) {
            py::list out;
            for (const auto& c : run_kernel_suite(p)) {
                py::dict d;
                d["name"] = c.name;
                d["computed"] = c.computed;
                d["expected"] = c.expected;
                d["tolerance"] = c.tolerance;
                d["error"] = c.error;
                d["passed"] = c.passed;
                out.append(d);
            }
            return out;
        },
        py::arg("params"));

    m.def("solve", &solve_config, py::arg("config_path"), py::arg("seed") = py::none(),
          "Solve the model in a config file; returns a dict with the field and diagnostics.");

    m.def(
        "main",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "frns");
            std::vector<char*> argv;
            for (auto& a : args)
                argv.push_back(a.data());
            return cli::run(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Run the command-line tool with the given arguments; returns the exit code.");
}
