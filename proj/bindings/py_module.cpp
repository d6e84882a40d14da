#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

#include "molcoh/config.hpp"
#include "molcoh/density.hpp"
#include "molcoh/oracle_suite.hpp"
#include "molcoh/runner.hpp"
#include "molcoh/wf_file.hpp"

namespace py = pybind11;
using namespace molcoh;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Few-body variational solver with nuclear density-matrix analysis";

    py::class_<Particle>(m, "Particle")
        .def(py::init<>())
        .def(py::init([](double mass, double charge, const std::string& label) {
                 return Particle{mass, charge, label};
             }),
             py::arg("mass"), py::arg("charge"), py::arg("label") = "")
        .def_readwrite("mass", &Particle::mass)
        .def_readwrite("charge", &Particle::charge)
        .def_readwrite("label", &Particle::label)
        .def("__repr__", [](const Particle& p) {
            std::ostringstream out;
            out << "Particle(mass=" << p.mass << ", charge=" << p.charge << ", label='"
                << p.label << "')";
            return out.str();
        });

    py::class_<SystemDefinition>(m, "SystemDefinition")
        .def_readonly("particles", &SystemDefinition::particles)
        .def_readonly("identical_groups", &SystemDefinition::identical_groups)
        .def_property_readonly("size", &SystemDefinition::size)
        .def("total_mass", &SystemDefinition::total_mass);

    m.def("build_system",
          [](const std::string& preset) {
              std::string warning;
              SystemDefinition sys = build_system(preset, &warning);
              return py::make_tuple(sys, warning);
          },
          py::arg("preset"), "Returns (system, warning) for a named preset");
    m.def("build_system_h2z",
          [](double z) {
              std::string warning;
              SystemDefinition sys = build_system_h2z(z, &warning);
              return py::make_tuple(sys, warning);
          },
          py::arg("z"));
    m.def("make_system", &make_system, py::arg("particles"), py::arg("identical_groups"));

    py::class_<CoordinateFrame>(m, "CoordinateFrame")
        .def_readonly("n_particles", &CoordinateFrame::n_particles)
        .def_readonly("reference_particle", &CoordinateFrame::reference_particle)
        .def_readonly("ti_block", &CoordinateFrame::ti_block)
        .def_readonly("mass_matrix", &CoordinateFrame::mass_matrix)
        .def_property_readonly("n_coords", &CoordinateFrame::n_coords)
        .def("pair_vector", &CoordinateFrame::pair_vector)
        .def("cm_vector", &CoordinateFrame::cm_vector);
    m.def("build_frame", &build_frame, py::arg("system"), py::arg("reference_particle"));

    py::class_<GrowthStep>(m, "GrowthStep")
        .def_readonly("basis_size", &GrowthStep::basis_size)
        .def_readonly("energy", &GrowthStep::energy)
        .def_readonly("accepted_candidate", &GrowthStep::accepted_candidate)
        .def_readonly("trials_used", &GrowthStep::trials_used);

    py::class_<Wavefunction>(m, "Wavefunction")
        .def_readonly("system", &Wavefunction::system)
        .def_readonly("coefficients", &Wavefunction::coefficients)
        .def_readonly("energy", &Wavefunction::energy)
        .def_readonly("seed", &Wavefunction::seed)
        .def_readonly("config_digest", &Wavefunction::config_digest)
        .def_readonly("history", &Wavefunction::history)
        .def_property_readonly("basis_size", &Wavefunction::basis_size);

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("basis_size", &ConvergenceReport::basis_size)
        .def_readonly("energy", &ConvergenceReport::energy)
        .def_readonly("delta_rel_doubling", &ConvergenceReport::delta_rel_doubling)
        .def_readonly("virial_ratio", &ConvergenceReport::virial_ratio)
        .def_readonly("overlap_condition", &ConvergenceReport::overlap_condition)
        .def_readonly("energy_converged", &ConvergenceReport::energy_converged)
        .def_readonly("virial_ok", &ConvergenceReport::virial_ok);
    m.def("converge_report", &converge_report, py::arg("wavefunction"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("preset", &RunConfig::preset)
        .def_readwrite("z", &RunConfig::z)
        .def_readwrite("particles", &RunConfig::particles)
        .def_readwrite("groups", &RunConfig::groups)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("basis_target", &RunConfig::basis_target)
        .def_readwrite("trials", &RunConfig::trials)
        .def_readwrite("refine_cycles", &RunConfig::refine_cycles)
        .def_readwrite("theta_step_deg", &RunConfig::theta_step_deg)
        .def_readwrite("radius", &RunConfig::radius)
        .def_readwrite("out_dir", &RunConfig::out_dir)
        .def("digest", &RunConfig::digest);
    m.def("parse_config", &parse_config, py::arg("text"));

    m.def("solve",
          [](const RunConfig& config, bool verbose) {
              return solve_config(config, verbose ? &std::cerr : nullptr);
          },
          py::arg("config"), py::arg("verbose") = false,
          py::call_guard<py::gil_scoped_release>(),
          "Grow and refine a wavefunction for the configured system");
    m.def("save_wavefunction", &save_wavefunction, py::arg("wavefunction"), py::arg("path"));
    m.def("load_wavefunction",
          [](const std::string& path) {
              std::string warning;
              Wavefunction wf = load_wavefunction(path, &warning);
              return py::make_tuple(wf, warning);
          },
          py::arg("path"), "Returns (wavefunction, warning)");

    m.def("density_diag", &density_diag, py::arg("wavefunction"), py::arg("particle"),
          py::arg("radius"));
    m.def("density_offdiag", &density_offdiag, py::arg("wavefunction"), py::arg("particle"),
          py::arg("r_bra"), py::arg("r_ket"));
    m.def("radial_argmax",
          py::overload_cast<const Wavefunction&, int, double, double>(&radial_argmax),
          py::arg("wavefunction"), py::arg("particle"), py::arg("r_max") = 10.0,
          py::arg("step") = 0.01);

    py::class_<DensityScan>(m, "DensityScan")
        .def_readonly("particle", &DensityScan::particle)
        .def_readonly("radius", &DensityScan::radius)
        .def_readonly("theta_deg", &DensityScan::theta_deg)
        .def_readonly("offdiag", &DensityScan::offdiag)
        .def_readonly("ratio", &DensityScan::ratio)
        .def_readonly("diag", &DensityScan::diag);
    m.def("suppression_scan",
          py::overload_cast<const Wavefunction&, int, double, double>(&suppression_scan),
          py::arg("wavefunction"), py::arg("particle"), py::arg("radius"),
          py::arg("theta_step_deg") = 1.0);

    py::class_<ScanExtremum>(m, "ScanExtremum")
        .def_readonly("theta_deg", &ScanExtremum::theta_deg)
        .def_readonly("ratio", &ScanExtremum::ratio);
    py::class_<ScanFeatures>(m, "ScanFeatures")
        .def_readonly("min_ratio", &ScanFeatures::min_ratio)
        .def_readonly("minima", &ScanFeatures::minima)
        .def_readonly("interior_maxima", &ScanFeatures::interior_maxima)
        .def_readonly("delta180", &ScanFeatures::delta180)
        .def_readonly("depth", &ScanFeatures::depth);
    m.def("extract_features", &extract_features, py::arg("scan"));

    py::class_<ScanSummary>(m, "ScanSummary")
        .def_readonly("particle", &ScanSummary::particle)
        .def_readonly("label", &ScanSummary::label)
        .def_readonly("radius", &ScanSummary::radius)
        .def_readonly("features", &ScanSummary::features)
        .def_readonly("csv_path", &ScanSummary::csv_path)
        .def_readonly("svg_path", &ScanSummary::svg_path);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("wf", &RunResult::wf)
        .def_readonly("report", &RunResult::report)
        .def_readonly("summaries", &RunResult::summaries)
        .def_readonly("wavefunction_path", &RunResult::wavefunction_path)
        .def_readonly("manifest_path", &RunResult::manifest_path)
        .def_readonly("manifest_digest", &RunResult::manifest_digest);
    m.def("run_preset",
          [](const RunConfig& config, bool verbose) {
              return run_preset(config, verbose ? &std::cerr : nullptr);
          },
          py::arg("config"), py::arg("verbose") = false,
          py::call_guard<py::gil_scoped_release>());
    m.def("scan_particles", &scan_particles, py::arg("system"));

    py::class_<OracleCheck>(m, "OracleCheck")
        .def_readonly("name", &OracleCheck::name)
        .def_readonly("analytic", &OracleCheck::analytic)
        .def_readonly("numeric", &OracleCheck::numeric)
        .def_readonly("error_bound", &OracleCheck::error_bound)
        .def_readonly("pass_", &OracleCheck::pass);
    m.def("run_oracle_suite", &run_oracle_suite, py::arg("seed") = 7,
          py::call_guard<py::gil_scoped_release>());
}
