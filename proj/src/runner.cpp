#include "molcoh/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "molcoh/scan_io.hpp"
#include "molcoh/textio.hpp"
#include "molcoh/wf_file.hpp"

namespace molcoh {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string run_name(const RunConfig& config) {
    if (config.preset.empty()) return "system";
    if (config.preset == "h2z") {
        std::string z = format_double(config.z, 6);
        for (auto& c : z)
            if (c == '.') c = 'p';
        return "h2z" + z;
    }
    return config.preset;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return hex16(fnv1a64(buffer.str()));
}

json features_json(const ScanSummary& summary) {
    json minima = json::array();
    for (const auto& m : summary.features.minima)
        minima.push_back({{"theta_deg", m.theta_deg}, {"ratio", m.ratio}});
    json maxima = json::array();
    for (const auto& m : summary.features.interior_maxima)
        maxima.push_back({{"theta_deg", m.theta_deg}, {"ratio", m.ratio}});
    return {
        {"particle", summary.particle},
        {"label", summary.label},
        {"radius_bohr", summary.radius},
        {"depth", summary.features.depth},
        {"min_ratio", summary.features.min_ratio},
        {"delta180", summary.features.delta180},
        {"minima", minima},
        {"interior_maxima", maxima},
        {"csv", summary.csv_path},
        {"svg", summary.svg_path},
        {"csv_digest", file_digest(summary.csv_path)},
        {"svg_digest", file_digest(summary.svg_path)},
    };
}

}  // namespace

Wavefunction solve_config(const RunConfig& config, std::ostream* log) {
    std::string warning;
    SystemDefinition system = config.build(&warning);
    if (!warning.empty() && log) (*log) << "warning: " << warning << '\n';

    CoordinateFrame frame = build_frame(system, 0);
    Wavefunction wf;
    wf.system = system;
    wf.frame = frame;
    wf.seed = config.seed;
    wf.config_digest = config.digest();

    GrowthOptions grow;
    grow.target_size = config.effective_basis_target();
    grow.trials = config.trials;
    grow.seed = config.seed;
    grow.scale_min = config.effective_scale_min();
    grow.scale_max = config.effective_scale_max();
    grow.log = log;

    RandomSource rng(config.seed);
    // Refinement checkpoints during growth keep the pool of perturbation
    // parents healthy and tighten the doubling-based convergence measure.
    for (double fraction : {0.25, 0.5, 0.75}) {
        const int checkpoint =
            std::max(1, static_cast<int>(grow.target_size * fraction));
        grow_basis(wf, rng, grow.trials, checkpoint, grow);
        if (config.refine_cycles > 0) {
            RefineOptions mid;
            mid.cycles = 1;
            mid.log = log;
            refine(wf, mid);
        }
    }
    grow_basis(wf, rng, grow.trials, grow.target_size, grow);
    if (config.refine_cycles > 0) {
        RefineOptions fin;
        fin.cycles = config.refine_cycles;
        fin.log = log;
        refine(wf, fin);
    }
    if (log)
        (*log) << run_name(config) << ": basis " << wf.basis_size() << ", E = "
               << format_double(wf.energy, 10) << " hartree\n";
    return wf;
}

std::vector<int> scan_particles(const SystemDefinition& system) {
    std::vector<int> out;
    std::vector<std::pair<double, double>> species;
    for (int i = 0; i < system.size(); ++i) {
        const auto& p = system.particles[static_cast<std::size_t>(i)];
        if (!(p.charge > 0.0)) continue;
        bool known = false;
        for (const auto& s : species)
            known = known || (s.first == p.mass && s.second == p.charge);
        if (!known) {
            species.emplace_back(p.mass, p.charge);
            out.push_back(i);
        }
    }
    return out;
}

double default_scan_radius(const DensityKernel& kernel) {
    const double r0 = radial_argmax(kernel);
    if (r0 > 0.05) return r0;
    return radial_argmax_weighted(kernel);
}

std::vector<ScanSummary> emit_density_bundle(const Wavefunction& wf, const RunConfig& config,
                                             const std::string& base_name,
                                             std::vector<DensityScan>* scans_out,
                                             std::ostream* log) {
    std::filesystem::create_directories(config.out_dir);
    std::vector<ScanSummary> summaries;
    for (int particle : scan_particles(wf.system)) {
        DensityKernel kernel(wf, particle);
        const double radius = config.radius ? *config.radius : default_scan_radius(kernel);
        DensityScan scan = suppression_scan(kernel, radius, config.theta_step_deg);

        ScanSummary summary;
        summary.particle = particle;
        summary.label = wf.system.particles[static_cast<std::size_t>(particle)].label;
        summary.radius = radius;
        summary.features = extract_features(scan);

        const std::string base = (std::filesystem::path(config.out_dir) /
                                  (base_name + "_" + summary.label + "_scan"))
                                     .string();
        const std::string title = base_name + " " + summary.label + "  |R| = " +
                                  format_double(radius, 4) + " bohr";
        ScanPaths paths = emit_scan(scan, base, title);
        summary.csv_path = paths.csv;
        summary.svg_path = paths.svg;
        if (log)
            (*log) << base_name << " " << summary.label << ": radius "
                   << format_double(radius, 5) << " bohr, depth "
                   << format_double(summary.features.depth, 4) << '\n';
        if (scans_out) scans_out->push_back(std::move(scan));
        summaries.push_back(std::move(summary));
    }
    return summaries;
}

RunResult run_preset(const RunConfig& config, std::ostream* log) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult result;
    result.wf = solve_config(config, log);
    const double solve_seconds = seconds_since(t0);

    result.report = converge_report(result.wf);
    const std::string name = run_name(config);
    std::filesystem::create_directories(config.out_dir);

    const auto t1 = std::chrono::steady_clock::now();
    result.summaries = emit_density_bundle(result.wf, config, name, &result.scans, log);
    const double density_seconds = seconds_since(t1);

    result.wavefunction_path =
        (std::filesystem::path(config.out_dir) / (name + ".wf")).string();
    save_wavefunction(result.wf, result.wavefunction_path);

    json manifest;
    manifest["program"] = "molcoh 1.0.0";
    manifest["system"] = name;
    manifest["seed"] = result.wf.seed;
    manifest["config_digest"] = result.wf.config_digest;
    manifest["energy_hartree"] = result.wf.energy;
    manifest["basis_size"] = result.wf.basis_size();
    manifest["convergence"] = {
        {"delta_rel_doubling", result.report.delta_rel_doubling},
        {"virial_ratio", result.report.virial_ratio},
        {"overlap_condition", result.report.overlap_condition},
        {"energy_converged", result.report.energy_converged},
        {"virial_ok", result.report.virial_ok},
    };
    manifest["converged"] = result.report.energy_converged && result.report.virial_ok;
    json scans = json::array();
    for (const auto& summary : result.summaries) scans.push_back(features_json(summary));
    manifest["scans"] = scans;
    manifest["wavefunction"] = result.wavefunction_path;
    manifest["wavefunction_digest"] = file_digest(result.wavefunction_path);

    // The digest covers only reproducible content; timings are attached after.
    result.manifest_digest = hex16(fnv1a64(manifest.dump()));
    manifest["manifest_digest"] = result.manifest_digest;
    manifest["timings_s"] = {{"solve", solve_seconds}, {"density", density_seconds}};

    result.manifest_path =
        (std::filesystem::path(config.out_dir) / (name + "_manifest.json")).string();
    std::ofstream out(result.manifest_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + result.manifest_path + "'");
    out << manifest.dump(2) << '\n';

    if (log && !manifest["converged"].get<bool>())
        (*log) << "warning: " << name << " did not meet the convergence targets\n";
    return result;
}

FamilyCompareResult family_compare(const RunConfig& base, std::ostream* log) {
    FamilyCompareResult result;
    result.names = {"mu2", "h2", "d2", "t2"};
    const double radius = base.radius ? *base.radius : 0.7;

    for (const auto& name : result.names) {
        RunConfig config = base;
        config.preset = name;
        config.radius = radius;
        Wavefunction wf = solve_config(config, log);
        DensityKernel kernel(wf, scan_particles(wf.system).at(0));
        result.scans.push_back(suppression_scan(kernel, radius, base.theta_step_deg));
    }

    const std::size_t grid = result.scans[0].ratio.size();
    for (std::size_t i = 0; i < grid; ++i)
        for (std::size_t a = 0; a < result.scans.size(); ++a)
            for (std::size_t b = a + 1; b < result.scans.size(); ++b)
                result.max_spread =
                    std::max(result.max_spread,
                             std::abs(result.scans[a].ratio[i] - result.scans[b].ratio[i]));

    std::filesystem::create_directories(base.out_dir);
    result.csv_path =
        (std::filesystem::path(base.out_dir) / "family_compare.csv").string();
    std::ofstream out(result.csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + result.csv_path + "'");
    out << "theta_deg";
    for (const auto& name : result.names) out << ",ratio_" << name;
    out << "\n";
    for (std::size_t i = 0; i < grid; ++i) {
        out << format_double(result.scans[0].theta_deg[i], 12);
        for (const auto& scan : result.scans) out << ',' << format_double(scan.ratio[i], 12, true);
        out << '\n';
    }
    if (log)
        (*log) << "family spread at " << format_double(radius, 4)
               << " bohr: " << format_double(result.max_spread, 6) << '\n';
    return result;
}

std::string manifest_summary(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest '" + manifest_path + "'");
    json manifest = json::parse(in);

    std::ostringstream out;
    out << "system:          " << manifest.value("system", std::string("?")) << '\n';
    out << "seed:            " << manifest.value("seed", 0ull) << '\n';
    out << "config digest:   " << manifest.value("config_digest", std::string("?")) << '\n';
    out << "energy:          " << format_double(manifest.value("energy_hartree", 0.0), 10)
        << " hartree\n";
    out << "basis size:      " << manifest.value("basis_size", 0) << '\n';
    if (manifest.contains("convergence")) {
        const auto& c = manifest["convergence"];
        out << "dE over doubling: " << format_double(c.value("delta_rel_doubling", 0.0), 4)
            << "  virial: " << format_double(c.value("virial_ratio", 0.0), 6)
            << "  overlap condition: " << format_double(c.value("overlap_condition", 0.0), 3)
            << '\n';
    }
    out << "converged:       " << (manifest.value("converged", false) ? "yes" : "NO") << '\n';
    for (const auto& scan : manifest.value("scans", json::array())) {
        out << "scan " << scan.value("label", std::string("?")) << ": radius "
            << format_double(scan.value("radius_bohr", 0.0), 5) << " bohr, depth "
            << format_double(scan.value("depth", 0.0), 4) << ", delta180 "
            << format_double(scan.value("delta180", 0.0), 4) << '\n';
    }
    if (manifest.contains("timings_s")) {
        const auto& t = manifest["timings_s"];
        out << "timings:         solve " << format_double(t.value("solve", 0.0), 3)
            << " s, density " << format_double(t.value("density", 0.0), 3) << " s\n";
    }
    out << "manifest digest: " << manifest.value("manifest_digest", std::string("?")) << '\n';
    return out.str();
}

}  // namespace molcoh
