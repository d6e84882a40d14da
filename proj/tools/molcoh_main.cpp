#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>

#include "molcoh/config.hpp"
#include "molcoh/oracle_suite.hpp"
#include "molcoh/runner.hpp"
#include "molcoh/scan_io.hpp"
#include "molcoh/textio.hpp"
#include "molcoh/wf_file.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<double> radius;
    std::optional<double> theta_step;
};

void add_overrides(CLI::App* cmd, CommonFlags& flags, bool with_config) {
    if (with_config)
        cmd->add_option("--config", flags.config_path, "config file (key = value lines)")
            ->required();
    cmd->add_option("--seed", flags.seed, "random seed override");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--radius", flags.radius, "scan radius in bohr");
    cmd->add_option("--theta-step", flags.theta_step, "scan grid step in degrees");
}

molcoh::RunConfig resolve(const CommonFlags& flags) {
    molcoh::RunConfig config = flags.config_path.empty()
                                   ? molcoh::RunConfig{}
                                   : molcoh::load_config_file(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.radius) config.radius = *flags.radius;
    if (flags.theta_step) config.theta_step_deg = *flags.theta_step;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"molcoh: few-body variational solver and orientational-coherence analyzer"};
    app.require_subcommand(1);

    CommonFlags solve_flags, run_flags, density_flags, family_flags;
    std::string wavefunction_path, manifest_path;
    std::optional<int> particle;
    std::uint64_t oracle_seed = 7;

    auto* solve_cmd =
        app.add_subcommand("solve", "solve a system and write the wavefunction file");
    add_overrides(solve_cmd, solve_flags, true);

    auto* run_cmd = app.add_subcommand(
        "run", "full bundle: solve, density scans, plots, wavefunction, manifest");
    add_overrides(run_cmd, run_flags, true);

    auto* density_cmd = app.add_subcommand(
        "density", "density scans and plots for a stored wavefunction");
    density_cmd
        ->add_option("--wavefunction", wavefunction_path, "wavefunction file from 'solve'")
        ->required();
    density_cmd->add_option("--particle", particle,
                            "particle index (default: every distinct positive species)");
    add_overrides(density_cmd, density_flags, false);

    auto* family_cmd = app.add_subcommand(
        "family-compare", "mass series mu2/h2/d2/t2 at a common radius; spread report");
    add_overrides(family_cmd, family_flags, false);

    auto* oracle_cmd =
        app.add_subcommand("oracle", "closed-form integrals against the quadrature oracle");
    oracle_cmd->add_option("--seed", oracle_seed, "seed for the random checks");

    auto* report_cmd = app.add_subcommand("report", "summarize a run manifest");
    report_cmd->add_option("--manifest", manifest_path, "manifest JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            molcoh::RunConfig config = resolve(solve_flags);
            molcoh::Wavefunction wf = molcoh::solve_config(config, &std::cerr);
            molcoh::ConvergenceReport report = molcoh::converge_report(wf);
            std::filesystem::create_directories(config.out_dir);
            const std::string path =
                (std::filesystem::path(config.out_dir) / "wavefunction.wf").string();
            molcoh::save_wavefunction(wf, path);
            std::cout << "energy " << molcoh::format_double(wf.energy, 12) << " hartree\n"
                      << "virial " << molcoh::format_double(report.virial_ratio, 8) << '\n'
                      << "wavefunction " << path << '\n';
            return report.energy_converged && report.virial_ok ? 0 : 3;
        }

        if (run_cmd->parsed()) {
            molcoh::RunConfig config = resolve(run_flags);
            molcoh::RunResult result = molcoh::run_preset(config, &std::cerr);
            std::cout << molcoh::manifest_summary(result.manifest_path);
            return 0;
        }

        if (density_cmd->parsed()) {
            molcoh::RunConfig config = resolve(density_flags);
            std::string warning;
            molcoh::Wavefunction wf = molcoh::load_wavefunction(wavefunction_path, &warning);
            if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
            const std::string name =
                std::filesystem::path(wavefunction_path).stem().string();
            if (particle) {
                molcoh::DensityKernel kernel(wf, *particle);
                const double radius =
                    config.radius ? *config.radius : molcoh::default_scan_radius(kernel);
                molcoh::DensityScan scan =
                    molcoh::suppression_scan(kernel, radius, config.theta_step_deg);
                std::filesystem::create_directories(config.out_dir);
                const std::string base =
                    (std::filesystem::path(config.out_dir) /
                     (name + "_p" + std::to_string(*particle) + "_scan"))
                        .string();
                molcoh::ScanPaths paths = molcoh::emit_scan(scan, base);
                molcoh::ScanFeatures features = molcoh::extract_features(scan);
                std::cout << "radius " << molcoh::format_double(radius, 6) << " bohr, depth "
                          << molcoh::format_double(features.depth, 6) << '\n'
                          << paths.csv << '\n'
                          << paths.svg << '\n';
            } else {
                auto summaries = molcoh::emit_density_bundle(wf, config, name, nullptr,
                                                             &std::cerr);
                for (const auto& s : summaries)
                    std::cout << s.label << ": radius " << molcoh::format_double(s.radius, 6)
                              << " bohr, depth "
                              << molcoh::format_double(s.features.depth, 6) << '\n'
                              << s.csv_path << '\n'
                              << s.svg_path << '\n';
            }
            return 0;
        }

        if (family_cmd->parsed()) {
            molcoh::RunConfig config = resolve(family_flags);
            molcoh::FamilyCompareResult result = molcoh::family_compare(config, &std::cerr);
            std::cout << "max pointwise ratio spread: "
                      << molcoh::format_double(result.max_spread, 6) << '\n'
                      << result.csv_path << '\n';
            return result.max_spread < 0.01 ? 0 : 3;
        }

        if (oracle_cmd->parsed()) {
            auto checks = molcoh::run_oracle_suite(oracle_seed);
            int failures = 0;
            for (const auto& check : checks) {
                std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name
                          << ": analytic " << molcoh::format_double(check.analytic, 10)
                          << ", oracle " << molcoh::format_double(check.numeric, 10)
                          << ", bound " << molcoh::format_double(check.error_bound, 3) << '\n';
                failures += check.pass ? 0 : 1;
            }
            std::cout << (failures == 0 ? "all checks passed" : "FAILURES PRESENT") << '\n';
            return failures == 0 ? 0 : 4;
        }

        if (report_cmd->parsed()) {
            std::cout << molcoh::manifest_summary(manifest_path);
            return 0;
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
