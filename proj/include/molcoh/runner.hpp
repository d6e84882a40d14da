#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "molcoh/config.hpp"
#include "molcoh/density.hpp"
#include "molcoh/solver.hpp"

namespace molcoh {

/// Growth plus refinement pipeline: grow to half the target, one refinement
/// cycle, grow to the target, then the configured refinement cycles.
Wavefunction solve_config(const RunConfig& config, std::ostream* log = nullptr);

/// One representative particle per distinct positive species (mass, charge);
/// these are the scanned "nuclei" of a run.
std::vector<int> scan_particles(const SystemDefinition& system);

/// Diagonal-maximum radius; falls back to the maximum of 4 pi R^2 rho(R,R)
/// when the density peaks at the origin (rotating the origin is undefined).
double default_scan_radius(const DensityKernel& kernel);

struct ScanSummary {
    int particle = 0;
    std::string label;
    double radius = 0.0;
    ScanFeatures features;
    std::string csv_path;
    std::string svg_path;
};

struct RunResult {
    Wavefunction wf;
    ConvergenceReport report;
    std::vector<DensityScan> scans;
    std::vector<ScanSummary> summaries;
    std::string wavefunction_path;
    std::string manifest_path;
    std::string manifest_digest;
};

/// Full bundle: solve, analyze every heavy particle, emit CSV/SVG scans, the
/// wavefunction file, and a run manifest. A convergence failure is recorded
/// in the manifest but still produces artifacts.
RunResult run_preset(const RunConfig& config, std::ostream* log = nullptr);

/// Density stage alone, for an already solved wavefunction.
std::vector<ScanSummary> emit_density_bundle(const Wavefunction& wf, const RunConfig& config,
                                             const std::string& base_name,
                                             std::vector<DensityScan>* scans_out = nullptr,
                                             std::ostream* log = nullptr);

struct FamilyCompareResult {
    std::vector<std::string> names;
    std::vector<DensityScan> scans;
    double max_spread = 0.0;  // max over grid of max pairwise ratio difference
    std::string csv_path;
};

/// Runs mu2, h2, d2, t2 at a common radius (0.7 bohr unless overridden) and
/// reports the largest pointwise spread between the normalized curves.
FamilyCompareResult family_compare(const RunConfig& base, std::ostream* log = nullptr);

/// Human-readable summary of a run manifest.
std::string manifest_summary(const std::string& manifest_path);

}  // namespace molcoh
