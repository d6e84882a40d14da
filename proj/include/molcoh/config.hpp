#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "molcoh/system.hpp"

namespace molcoh {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Run parameters parsed from plain "key = value" text ('#' comments).
/// Recognized keys: preset, z, seed, basis_target, trials, refine_cycles,
/// theta_step, radius, out, scale_min, scale_max, and (for explicit systems)
/// repeated "particle = mass charge label" and "group = i j ..." lines.
struct RunConfig {
    std::string preset;  // empty when an explicit particle list is given
    double z = 1.0;      // h2z nuclear charge
    std::vector<Particle> particles;
    std::vector<std::vector<int>> groups;

    std::uint64_t seed = 1;
    int basis_target = 0;  // 0: preset default (192 for hehp, else 128)
    int trials = 32;
    int refine_cycles = 2;
    double theta_step_deg = 1.0;
    std::optional<double> radius;  // bohr; default is the diagonal-maximum radius
    std::string out_dir = ".";
    double scale_min = 0.0;  // 0: preset default 0.05 bohr
    double scale_max = 0.0;  // 0: preset default 20 bohr (40 for ps2)

    SystemDefinition build(std::string* warning = nullptr) const;
    double effective_scale_min() const { return scale_min > 0.0 ? scale_min : 0.05; }
    double effective_scale_max() const {
        if (scale_max > 0.0) return scale_max;
        return preset == "ps2" ? 40.0 : 20.0;
    }
    int effective_basis_target() const {
        if (basis_target > 0) return basis_target;
        return preset == "hehp" ? 192 : 128;
    }

    /// Canonical serialization of the effective settings; identical configs
    /// digest identically.
    std::string canonical_text() const;
    std::string digest() const;
};

/// Throws ConfigError with a line-numbered message on unknown keys,
/// malformed numbers, or a missing system.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace molcoh
