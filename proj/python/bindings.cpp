#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "diskflow/analysis.hpp"
#include "diskflow/dynbc_heat.hpp"
#include "diskflow/elliptic.hpp"
#include "diskflow/error.hpp"
#include "diskflow/fields.hpp"
#include "diskflow/navier_stokes.hpp"
#include "diskflow/presets.hpp"
#include "diskflow/runner.hpp"
#include "diskflow/stokes.hpp"

namespace py = pybind11;
using namespace diskflow;

namespace {

// Python holds grids as shared_ptr<RadialGrid>; the library only reads them.
using PyGrid = std::shared_ptr<RadialGrid>;

PyGrid to_py(const GridPtr& g) { return std::const_pointer_cast<RadialGrid>(g); }

}  // namespace

PYBIND11_MODULE(_diskflow, m) {
    m.doc() = "Spectral simulator for a rigid disk in a 2D viscous fluid";

    // DiskflowError carries the library's short error kind as `.kind`.
    static py::handle error_type = py::exception<Error>(m, "DiskflowError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("kind") = e.kind();
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    py::class_<RadialGrid, PyGrid>(m, "RadialGrid")
        .def_readonly("n_points", &RadialGrid::n_points)
        .def_readonly("r_max", &RadialGrid::r_max)
        .def_readonly("stretch", &RadialGrid::stretch)
        .def_readonly("nodes", &RadialGrid::nodes)
        .def_readonly("quad_weights", &RadialGrid::quad_weights)
        .def("h_min", &RadialGrid::h_min);

    m.def("build_grid", [](int n, double r_max, double stretch) { return to_py(build_grid(n, r_max, stretch)); },
          py::arg("n_points"), py::arg("r_max"), py::arg("stretch") = 3.0);
    m.def("grid_from_nodes", [](std::vector<double> nodes) { return to_py(grid_from_nodes(std::move(nodes))); });
    m.def("lp_norm_radial",
          [](const PyGrid& g, const std::vector<double>& v, double p) { return lp_norm_radial(*g, v, p); });
    m.def("radial_derivative",
          [](const PyGrid& g, const std::vector<double>& v) { return radial_derivative(*g, v); });

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init(&PhysicalParams::make), py::arg("nu") = 1.0, py::arg("m") = 2.0 * kPi,
             py::arg("homogeneous") = true, py::arg("inertia") = 0.0)
        .def_readonly("nu", &PhysicalParams::nu)
        .def_readonly("m", &PhysicalParams::m)
        .def_readonly("inertia", &PhysicalParams::inertia)
        .def_readonly("homogeneous", &PhysicalParams::homogeneous)
        .def("alpha0", &PhysicalParams::alpha0)
        .def("alpha_w", &PhysicalParams::alpha_w);

    // dynamic boundary condition systems
    py::enum_<BCVariant>(m, "BCVariant").value("dynamic", BCVariant::dynamic).value("dirichlet", BCVariant::dirichlet);

    py::class_<DynBCParams>(m, "DynBCParams")
        .def(py::init([](int k, double alpha_tilde, double nu, BCVariant variant, double theta) {
                 DynBCParams p{k, alpha_tilde, nu, variant, theta};
                 p.validate();
                 return p;
             }),
             py::arg("k") = 0, py::arg("alpha_tilde") = 1.0, py::arg("nu") = 1.0,
             py::arg("variant") = BCVariant::dynamic, py::arg("theta") = 1.0)
        .def_readwrite("k", &DynBCParams::k)
        .def_readwrite("alpha_tilde", &DynBCParams::alpha_tilde)
        .def_readwrite("nu", &DynBCParams::nu)
        .def_readwrite("variant", &DynBCParams::variant)
        .def_readwrite("theta", &DynBCParams::theta)
        .def_static("z_system", &DynBCParams::z_system, py::arg("params"), py::arg("theta") = 1.0)
        .def_static("w_system", &DynBCParams::w_system, py::arg("params"), py::arg("theta") = 1.0);

    py::class_<ScalarModeState>(m, "ScalarModeState")
        .def(py::init([](std::vector<double> y, double ell, double t) { return ScalarModeState{std::move(y), ell, t}; }),
             py::arg("y"), py::arg("ell") = 0.0, py::arg("t") = 0.0)
        .def_readwrite("y", &ScalarModeState::y)
        .def_readwrite("ell", &ScalarModeState::ell)
        .def_readwrite("t", &ScalarModeState::t);

    m.def("dynbc_evolve",
          [](const PyGrid& g, const ScalarModeState& s, const DynBCParams& p, double t_end, double dt) {
              return evolve(g, s, p, t_end, dt);
          },
          py::arg("grid"), py::arg("state"), py::arg("params"), py::arg("t_end"), py::arg("dt"));
    m.def("dynbc_mass", [](const ScalarModeState& s, const DynBCParams& p, const PyGrid& g) { return mass(s, p, *g); });
    m.def("lyapunov_functional", [](const ScalarModeState& s, const DynBCParams& p, const PyGrid& g, double q) {
        return lyapunov_functional(s, p, *g, q);
    });

    // elliptic transforms
    py::class_<StreamPair>(m, "StreamPair")
        .def(py::init([](std::vector<double> psi, double ell) { return StreamPair{std::move(psi), ell}; }),
             py::arg("psi"), py::arg("ell"))
        .def_readwrite("psi", &StreamPair::psi)
        .def_readwrite("ell", &StreamPair::ell);
    m.def("z_transform", [](const StreamPair& p, const PyGrid& g, bool phi_sign) { return z_transform(p, *g, phi_sign); },
          py::arg("pair"), py::arg("grid"), py::arg("phi_sign") = false);
    m.def("invert_z", [](const ScalarModeState& z, const PyGrid& g) { return invert_z(z, *g); });

    // fields
    py::class_<RigidState>(m, "RigidState")
        .def_readwrite("ell", &RigidState::ell)
        .def_readwrite("omega", &RigidState::omega)
        .def_readwrite("h", &RigidState::h)
        .def_readwrite("theta", &RigidState::theta);

    py::class_<ModeDecomposition>(m, "ModeDecomposition")
        .def_static("zeros", [](const PyGrid& g, int k_max) { return ModeDecomposition::zeros(g, k_max); })
        .def_property_readonly("grid", [](const ModeDecomposition& d) { return to_py(d.grid); })
        .def_readonly("k_max", &ModeDecomposition::k_max)
        .def_readwrite("W", &ModeDecomposition::W)
        .def_readwrite("Psi", &ModeDecomposition::Psi)
        .def_readwrite("Phi", &ModeDecomposition::Phi)
        .def_readwrite("psi_k", &ModeDecomposition::psi_k)
        .def_readwrite("phi_k", &ModeDecomposition::phi_k)
        .def_readwrite("rigid", &ModeDecomposition::rigid)
        .def("sync_rigid", &ModeDecomposition::sync_rigid)
        .def("enforce_no_slip", &ModeDecomposition::enforce_no_slip)
        .def("axpby", &ModeDecomposition::axpby);

    m.def("inner_product", py::overload_cast<const ModeDecomposition&, const ModeDecomposition&, const PhysicalParams&>(
                               &inner_product));
    m.def("weighted_field_norm", [](const ModeDecomposition& d, double p, const PhysicalParams& params) {
        return weighted_field_norm(*d.grid, d, p, params);
    });
    m.def("fluid_lp_norm", &fluid_lp_norm);
    m.def("leray_project", [](const ModeDecomposition& d, const PhysicalParams& p, int n_theta) {
        return project_leray(reconstruct(d, n_theta), p, d.k_max);
    }, py::arg("decomposition"), py::arg("params"), py::arg("n_theta") = 0);
    m.def("kirchhoff_test_field", [](const PyGrid& g, int direction, int k_max) {
        return kirchhoff_test_field(g, direction, k_max);
    }, py::arg("grid"), py::arg("direction"), py::arg("k_max") = 1);
    m.def("added_mass_relative_error",
          [](const ModeDecomposition& d, int direction) { return added_mass_pairing(d, direction).relative_error; });

    // Stokes flow
    py::class_<StokesState>(m, "StokesState")
        .def_readonly("t", &StokesState::t)
        .def_readonly("k_max", &StokesState::k_max)
        .def_readonly("params", &StokesState::params)
        .def_readonly("decomp", &StokesState::decomp)
        .def_readonly("w", &StokesState::w)
        .def_readonly("z_psi", &StokesState::z_psi)
        .def_readonly("z_phi", &StokesState::z_phi);

    m.def("init_stokes", &init_stokes, py::arg("decomposition"), py::arg("params"), py::arg("theta") = 1.0);
    m.def("evolve_stokes",
          [](const StokesState& s, double t_end, double dt, const std::vector<double>& outs,
             const StokesObserver& observe) { return evolve_stokes(s, t_end, dt, outs, observe); },
          py::arg("state"), py::arg("t_end"), py::arg("dt"), py::arg("output_times") = std::vector<double>{},
          py::arg("observe") = StokesObserver{});
    m.def("lamb_oseen_profile",
          [](const PyGrid& g, double t, double nu, std::array<double, 2> M, int k_max, bool corrected) {
              return lamb_oseen_profile(g, t, nu, M, k_max, corrected);
          },
          py::arg("grid"), py::arg("t"), py::arg("nu"), py::arg("M"), py::arg("k_max") = 1,
          py::arg("disk_corrected") = false);

    // Navier-Stokes
    py::enum_<NonlinearMode>(m, "NonlinearMode").value("imex", NonlinearMode::imex).value("kato", NonlinearMode::kato);

    py::class_<NonlinearConfig>(m, "NonlinearConfig")
        .def(py::init<>())
        .def_readwrite("mode", &NonlinearConfig::mode)
        .def_readwrite("k_max", &NonlinearConfig::k_max)
        .def_readwrite("n_theta", &NonlinearConfig::n_theta)
        .def_readwrite("dealias", &NonlinearConfig::dealias)
        .def_readwrite("kato_max_iters", &NonlinearConfig::kato_max_iters)
        .def_readwrite("kato_tol", &NonlinearConfig::kato_tol)
        .def_readwrite("blowup_factor", &NonlinearConfig::blowup_factor)
        .def_readwrite("cfl", &NonlinearConfig::cfl)
        .def_readwrite("zero_nonlinearity", &NonlinearConfig::zero_nonlinearity)
        .def("validate", &NonlinearConfig::validate);

    m.def("nonlinear_term", &nonlinear_term);
    m.def("kinetic_energy", &kinetic_energy);
    m.def("set_num_threads", &set_num_threads);
    m.def("evolve_ns",
          [](const StokesState& s, const NonlinearConfig& c, double t_end, double dt) {
              py::gil_scoped_release release;
              return evolve_ns(s, c, t_end, dt);
          },
          py::arg("state"), py::arg("config"), py::arg("t_end"), py::arg("dt"));

    py::class_<KatoDiagnostics>(m, "KatoDiagnostics")
        .def_readonly("G_n", &KatoDiagnostics::G_n)
        .def_readonly("differences", &KatoDiagnostics::differences)
        .def_readonly("contraction_ratios", &KatoDiagnostics::contraction_ratios)
        .def_readonly("C0", &KatoDiagnostics::C0)
        .def_readonly("mu0_estimate", &KatoDiagnostics::mu0_estimate)
        .def_readonly("iterations", &KatoDiagnostics::iterations)
        .def_readonly("converged", &KatoDiagnostics::converged);
    py::class_<KatoResult>(m, "KatoResult")
        .def_readonly("times", &KatoResult::times)
        .def_readonly("series", &KatoResult::series)
        .def_readonly("diagnostics", &KatoResult::diagnostics);
    m.def("kato_solve", [](const StokesState& s, const NonlinearConfig& c, double t_end, double dt) {
        py::gil_scoped_release release;
        return kato_solve(s, c, t_end, dt);
    });

    // analysis
    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("exponent", &DecayFit::exponent)
        .def_readonly("log_correction", &DecayFit::log_correction)
        .def_readonly("residual", &DecayFit::residual)
        .def_readonly("samples", &DecayFit::samples);
    m.def("fit_decay", &fit_decay, py::arg("t"), py::arg("values"), py::arg("t_min"), py::arg("t_max"),
          py::arg("log_correction") = false);
    m.def("expected_exponent",
          [](const std::string& kind, double p, double q, bool short_time) {
              const auto e = expected_exponent(parse_rate_kind(kind), p, q,
                                               short_time ? Regime::short_time : Regime::long_time);
              return py::make_tuple(e.exponent, e.log_corrected);
          },
          py::arg("kind"), py::arg("p"), py::arg("q"), py::arg("short_time") = false);
    m.def("geometric_times", &geometric_times);
    m.def("profile_error",
          py::overload_cast<const ModeDecomposition&, const ModeDecomposition&, double>(&profile_error));

    // presets and experiment runner
    m.def("preset_names", [] {
        std::vector<std::string> names;
        for (const auto& p : preset_list()) names.push_back(p.name);
        return names;
    });
    m.def("preset_initial_data", [](const std::string& name, const PyGrid& g) {
        return preset_initial_data(name, g, preset_config(name));
    });
    m.def("run_config_file", [](const std::string& path) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = run_config_file(path, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    });
}
